use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::bounds::{format_exact, parse_rational, rat, to_f64, Rational};
use crate::error::{domain, Error, Result};
use crate::geometry::{BoundingBox, Point};
use crate::maximal::MidpointSet;
use crate::rng::stream;

/// Generators live in the reference cube `[-1/2, 1/2]^n`.
pub const REFERENCE_HALF_WIDTH: f64 = 0.5;

/// Largest point set a generator may produce.
pub const MAX_POINTS: usize = 1 << 22;

/// Recipe for a midpoint set `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FractalSpec {
    SinglePoint,
    /// The lattice `step·Z^n` inside the reference cube.
    Lattice { step: Rational },
    /// The middle-`(1 - 2r)` Cantor set on the first `axes` coordinates.
    CantorProduct { ratio: Rational, axes: usize },
    /// Attractor of `maps` similarities `x ↦ r x + t_i` with seeded
    /// translations keeping the reference cube invariant.
    RandomSelfSimilar { maps: usize, ratio: Rational, seed: u64 },
}

impl FractalSpec {
    /// The box dimension the generator targets in `R^n`: 0 for a point,
    /// `n` for the lattice (a discretised cube), `axes·log 2 / log(1/r)`
    /// for Cantor products and `min(n, log m / log(1/r))` for random
    /// self-similar sets (an upper bound; overlaps can lower it).
    pub fn target_dim(&self, n: usize) -> f64 {
        match self {
            Self::SinglePoint => 0.0,
            Self::Lattice { .. } => n as f64,
            Self::CantorProduct { ratio, axes } => *axes as f64 * 2f64.ln() / (1.0 / to_f64(ratio)).ln(),
            Self::RandomSelfSimilar { maps, ratio, .. } => {
                (n as f64).min((*maps as f64).ln() / (1.0 / to_f64(ratio)).ln())
            }
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let half = rat(1, 2);
        match self {
            Self::SinglePoint => Ok(()),
            Self::Lattice { step } => {
                if step.is_zero() || *step < Rational::zero() || *step > Rational::one() {
                    return domain(format!("lattice step {step} must lie in (0, 1]"));
                }
                Ok(())
            }
            Self::CantorProduct { ratio, axes } => {
                if *ratio <= Rational::zero() || *ratio > half {
                    return domain(format!("Cantor ratio {ratio} must lie in (0, 1/2]"));
                }
                if *axes == 0 || *axes > n {
                    return domain(format!("Cantor product needs 1 to {n} axes, got {axes}"));
                }
                Ok(())
            }
            Self::RandomSelfSimilar { maps, ratio, .. } => {
                if *maps == 0 {
                    return domain("a self-similar set needs at least one map".to_string());
                }
                if *ratio <= Rational::zero() || *ratio >= Rational::one() {
                    return domain(format!("contraction ratio {ratio} must lie in (0, 1)"));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FractalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SinglePoint => write!(f, "single_point"),
            Self::Lattice { step } => write!(f, "lattice:{}", format_exact(step)),
            Self::CantorProduct { ratio, axes } => write!(f, "cantor_product:{}:{axes}", format_exact(ratio)),
            Self::RandomSelfSimilar { maps, ratio, seed } => {
                write!(f, "random_self_similar:{maps}:{}:{seed}", format_exact(ratio))
            }
        }
    }
}

impl FromStr for FractalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let bad = || Error::Parse(format!("bad fractal spec `{s}`"));
        let int = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["single_point"] => Ok(Self::SinglePoint),
            ["lattice", step] => Ok(Self::Lattice { step: parse_rational(step)? }),
            ["cantor_product", ratio, axes] => {
                Ok(Self::CantorProduct { ratio: parse_rational(ratio)?, axes: int(axes)? as usize })
            }
            ["random_self_similar", maps, ratio, seed] => Ok(Self::RandomSelfSimilar {
                maps: int(maps)? as usize,
                ratio: parse_rational(ratio)?,
                seed: int(seed)?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Smallest `k ≥ 0` with `r^k ≤ δ`.
fn level_for(ratio: f64, delta: f64) -> usize {
    let mut k = 0;
    let mut scale = 1.0;
    while scale > delta * (1.0 + 1e-9) {
        scale *= ratio;
        k += 1;
    }
    k
}

fn check_size(count: f64) -> Result<()> {
    if count > MAX_POINTS as f64 {
        return domain(format!("generator would produce {count} points (limit {MAX_POINTS})"));
    }
    Ok(())
}

/// A `δ`-resolution finite approximation of the set described by `spec`.
///
/// Cantor products return the centres of the level-`k` intervals and
/// self-similar sets the level-`k` images of the cube centre, where `k` is
/// the first level whose pieces have size at most `δ`. Points outside
/// `bbox` are an error.
pub fn generate<const N: usize>(spec: &FractalSpec, delta: f64, bbox: &BoundingBox<N>) -> Result<MidpointSet<N>> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("δ = {delta} must lie in (0, 1)"));
    }
    spec.validate(N)?;
    let points: Vec<Point<N>> = match spec {
        FractalSpec::SinglePoint => vec![[0.0; N]],
        FractalSpec::Lattice { step } => {
            let per_axis = (Rational::one() / step).floor().to_usize().unwrap_or(usize::MAX).saturating_add(1);
            check_size((per_axis as f64).powi(N as i32))?;
            let st = to_f64(step);
            let total = per_axis.pow(N as u32);
            (0..total)
                .map(|mut k| {
                    let mut p = [0.0; N];
                    for i in (0..N).rev() {
                        p[i] = -REFERENCE_HALF_WIDTH + (k % per_axis) as f64 * st;
                        k /= per_axis;
                    }
                    p
                })
                .collect()
        }
        FractalSpec::CantorProduct { ratio, axes } => {
            let r = to_f64(ratio);
            let k = level_for(r, delta);
            check_size(2f64.powi((k * axes) as i32))?;
            let line = cantor_centres(r, k);
            let total = line.len().pow(*axes as u32);
            (0..total)
                .map(|mut j| {
                    let mut p = [0.0; N];
                    for slot in p.iter_mut().take(*axes).rev() {
                        *slot = line[j % line.len()];
                        j /= line.len();
                    }
                    p
                })
                .collect()
        }
        FractalSpec::RandomSelfSimilar { maps, ratio, seed } => {
            let r = to_f64(ratio);
            let k = level_for(r, delta);
            check_size((*maps as f64).powi(k as i32))?;
            let mut rng = stream(*seed);
            let reach = REFERENCE_HALF_WIDTH * (1.0 - r);
            let shifts: Vec<Point<N>> =
                (0..*maps).map(|_| std::array::from_fn(|_| rng.random_range(-reach..=reach))).collect();
            let mut pts = vec![[0.0; N]];
            for _ in 0..k {
                pts = pts
                    .iter()
                    .flat_map(|p| shifts.iter().map(move |t| std::array::from_fn(|i| r * p[i] + t[i])))
                    .collect();
            }
            pts
        }
    };
    let set = MidpointSet::new(points, crate::bounds::rational::from_f64_on_grid(spec.target_dim(N), 1 << 20))?;
    set.check_inside(bbox)?;
    Ok(set)
}

/// Centres of the `2^k` level-`k` intervals of the Cantor set with ratio
/// `r` in `[-1/2, 1/2]`, in increasing order.
pub fn cantor_centres(r: f64, k: usize) -> Vec<f64> {
    let mut left = vec![-REFERENCE_HALF_WIDTH];
    let mut len = 2.0 * REFERENCE_HALF_WIDTH;
    for _ in 0..k {
        let next = len * r;
        left = left.iter().flat_map(|&a| [a, a + len - next]).collect();
        len = next;
    }
    left.into_iter().map(|a| a + 0.5 * len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube<const N: usize>() -> BoundingBox<N> {
        BoundingBox::centered_cube(1.0)
    }

    #[test]
    fn single_point_and_lattice_counts() {
        assert_eq!(generate::<2>(&FractalSpec::SinglePoint, 0.1, &cube()).unwrap().len(), 1);
        let lat = FractalSpec::Lattice { step: rat(1, 16) };
        assert_eq!(generate::<2>(&lat, 0.1, &cube()).unwrap().len(), 17 * 17);
    }

    #[test]
    fn cantor_level_count() {
        let spec = FractalSpec::CantorProduct { ratio: rat(1, 3), axes: 1 };
        let a = generate::<1>(&spec, 3f64.powi(-5), &cube()).unwrap();
        assert_eq!(a.len(), 32);
        let b = generate::<2>(&spec, 3f64.powi(-5), &cube()).unwrap();
        assert!(b.points.iter().all(|p| p[1] == 0.0));
        let c = generate::<2>(&FractalSpec::CantorProduct { ratio: rat(1, 3), axes: 2 }, 1.0 / 9.0, &cube()).unwrap();
        assert_eq!(c.len(), 16);
    }

    #[test]
    fn cantor_centres_are_symmetric() {
        let c = cantor_centres(1.0 / 3.0, 3);
        assert_eq!(c.len(), 8);
        for (a, b) in c.iter().zip(c.iter().rev()) {
            assert!((a + b).abs() < 1e-15);
        }
        assert!((c[0] + 0.5 - 1.0 / 54.0).abs() < 1e-15);
    }

    #[test]
    fn self_similar_is_deterministic_and_contained() {
        let spec = FractalSpec::RandomSelfSimilar { maps: 3, ratio: rat(1, 4), seed: 9 };
        let a = generate::<2>(&spec, 0.01, &cube()).unwrap();
        let b = generate::<2>(&spec, 0.01, &cube()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3usize.pow(4));
        assert!(a.points.iter().all(|p| p.iter().all(|v| v.abs() <= 0.5)));
        assert!((spec.target_dim(2) - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            FractalSpec::Lattice { step: rat(0, 1) },
            FractalSpec::CantorProduct { ratio: rat(2, 3), axes: 1 },
            FractalSpec::CantorProduct { ratio: rat(1, 3), axes: 3 },
            FractalSpec::RandomSelfSimilar { maps: 0, ratio: rat(1, 2), seed: 0 },
        ];
        for s in bad {
            assert!(generate::<2>(&s, 0.1, &cube()).is_err(), "{s}");
        }
        let tiny = BoundingBox::<2>::centered_cube(0.1);
        assert!(generate::<2>(&FractalSpec::Lattice { step: rat(1, 2) }, 0.1, &tiny).is_err());
    }

    #[test]
    fn text_form_round_trips() {
        for s in [
            FractalSpec::SinglePoint,
            FractalSpec::Lattice { step: rat(1, 16) },
            FractalSpec::CantorProduct { ratio: rat(1, 3), axes: 2 },
            FractalSpec::RandomSelfSimilar { maps: 4, ratio: rat(3, 10), seed: 12 },
        ] {
            assert_eq!(s.to_string().parse::<FractalSpec>().unwrap(), s);
        }
        assert_eq!("lattice:0.25".parse::<FractalSpec>().unwrap(), FractalSpec::Lattice { step: rat(1, 4) });
        assert!("cantor:1/3".parse::<FractalSpec>().is_err());
    }
}
