use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{precondition, Error, Result};
use crate::geometry::vector::{lex_cmp, norm_sq};
use crate::geometry::{write_tubes_csv, BoundingBox, Point, SphericalNet, Tube, VoxelSet};
use crate::maximal::MidpointSet;
use crate::rng::stream;

/// How the midpoint `a(e) ∈ A` of each direction's segment is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssignmentRule {
    /// The point of `A` nearest the origin for every direction,
    /// lexicographically smallest on ties.
    Nearest,
    /// An independent uniform choice per direction from a seeded stream.
    Seeded,
    /// Greedy in net order: the candidate whose tube overlaps the union
    /// built so far the most, lowest index on ties.
    Adversarial,
}

/// The adversarial rule scores at most this many evenly strided
/// candidates from `A`.
pub const ADVERSARIAL_CANDIDATES: usize = 64;

impl fmt::Display for AssignmentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Nearest => "nearest",
            Self::Seeded => "seeded",
            Self::Adversarial => "adversarial",
        })
    }
}

impl FromStr for AssignmentRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nearest" => Ok(Self::Nearest),
            "seeded" => Ok(Self::Seeded),
            "adversarial" => Ok(Self::Adversarial),
            other => Err(Error::Parse(format!("unknown assignment rule `{other}`"))),
        }
    }
}

/// A voxelized A-restricted Kakeya union and the tubes it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedKakeya<const N: usize> {
    pub set: VoxelSet<N>,
    pub tubes: Vec<Tube<N>>,
    /// Index into `A.points` chosen for each net direction.
    pub assignment: Vec<usize>,
}

impl<const N: usize> RestrictedKakeya<N> {
    /// See [`write_tubes_csv`].
    pub fn write_tubes_csv(&self, out: &mut impl Write) -> Result<()> {
        write_tubes_csv(&self.tubes, out)
    }
}

/// `x1,...,xn` per point.
pub fn write_midpoints_csv<const N: usize>(a: &MidpointSet<N>, out: &mut impl Write) -> Result<()> {
    let header: Vec<String> = (1..=N).map(|i| format!("x{i}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for p in &a.points {
        let row: Vec<String> = p.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn nearest_to_origin<const N: usize>(points: &[Point<N>]) -> usize {
    let mut best = 0;
    for (i, p) in points.iter().enumerate().skip(1) {
        let (d, b) = (norm_sq(p), norm_sq(&points[best]));
        if d < b || (d == b && lex_cmp(p, &points[best]).is_lt()) {
            best = i;
        }
    }
    best
}

/// Rasterizes one tube `T^δ_e(a(e))` per net direction into a grid of cell
/// size `h` over `bbox`. Tubes leaving the box are clipped with a warning.
pub fn build_restricted_kakeya<const N: usize>(
    a: &MidpointSet<N>,
    net: &SphericalNet<N>,
    delta: f64,
    bbox: &BoundingBox<N>,
    h: f64,
    rule: AssignmentRule,
    seed: u64,
) -> Result<RestrictedKakeya<N>> {
    if a.is_empty() {
        return precondition("midpoint set is empty".to_string());
    }
    if !net.maximal {
        log::warn!("building a restricted Kakeya union over a net that is not maximal");
    }
    let mut set = VoxelSet::new(bbox, h)?;
    set.check_fidelity(delta)?;
    let tube = |e: usize, i: usize| Tube::new(net.dirs[e], a.points[i], delta);
    let assignment: Vec<usize> = match rule {
        AssignmentRule::Nearest => vec![nearest_to_origin(&a.points); net.len()],
        AssignmentRule::Seeded => {
            let mut rng = stream(seed);
            (0..net.len()).map(|_| rng.random_range(0..a.len())).collect()
        }
        AssignmentRule::Adversarial => {
            let stride = a.len().div_ceil(ADVERSARIAL_CANDIDATES).max(1);
            let candidates: Vec<usize> = (0..a.len()).step_by(stride).collect();
            let mut chosen = Vec::with_capacity(net.len());
            for e in 0..net.len() {
                let scores: Vec<usize> = candidates
                    .par_iter()
                    .map(|&i| tube(e, i).map(|t| set.count_in(&t)).unwrap_or(0))
                    .collect();
                let mut best = 0;
                for (k, &s) in scores.iter().enumerate() {
                    if s > scores[best] {
                        best = k;
                    }
                }
                let pick = candidates[best];
                set.rasterize(&tube(e, pick)?);
                chosen.push(pick);
            }
            chosen
        }
    };
    let tubes = (0..net.len()).map(|e| tube(e, assignment[e])).collect::<Result<Vec<_>>>()?;
    if rule != AssignmentRule::Adversarial {
        set.rasterize_tubes(&tubes)?;
    }
    Ok(RestrictedKakeya { set, tubes, assignment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::int;
    use crate::geometry::{greedy_net, tube_volume, Direction};

    fn bbox() -> BoundingBox<2> {
        BoundingBox::centered_cube(1.25)
    }

    #[test]
    fn one_direction_is_one_tube() {
        let delta = 2f64.powi(-5);
        let net = SphericalNet::from_dirs(vec![Direction::new([0.3, 0.7]).unwrap()], delta).unwrap();
        let k = build_restricted_kakeya(&MidpointSet::single([0.0, 0.0]), &net, delta, &bbox(), delta / 4.0, AssignmentRule::Nearest, 0)
            .unwrap();
        let ratio = k.set.measure() / tube_volume(2, delta);
        assert!((ratio - 1.0).abs() < 0.1);
    }

    #[test]
    fn nearest_rule_picks_the_central_point() {
        let pts = vec![[0.4, 0.0], [0.1, -0.1], [-0.1, 0.1], [0.3, 0.3]];
        assert_eq!(nearest_to_origin(&pts), 2);
    }

    #[test]
    fn rules_are_deterministic_and_contained() {
        let delta = 2f64.powi(-4);
        let net = greedy_net::<2>(delta, 3).unwrap();
        let a = MidpointSet::new(vec![[0.0, 0.0], [0.2, 0.1], [-0.3, 0.2], [0.1, -0.25]], int(0)).unwrap();
        for rule in [AssignmentRule::Nearest, AssignmentRule::Seeded, AssignmentRule::Adversarial] {
            let x = build_restricted_kakeya(&a, &net, delta, &bbox(), delta / 4.0, rule, 7).unwrap();
            let y = build_restricted_kakeya(&a, &net, delta, &bbox(), delta / 4.0, rule, 7).unwrap();
            assert_eq!(x, y, "{rule}");
            assert!(x.set.measure() <= bbox().volume());
            for t in &x.tubes {
                assert!(a.points.contains(&t.midpoint));
            }
            assert_eq!(rule.to_string().parse::<AssignmentRule>().unwrap(), rule);
        }
    }

    #[test]
    fn adversarial_is_no_larger_than_seeded_here() {
        let delta = 2f64.powi(-4);
        let net = greedy_net::<2>(delta, 3).unwrap();
        let pts: Vec<[f64; 2]> = (0..16).map(|k| [-0.3 + 0.2 * (k / 4) as f64, -0.3 + 0.2 * (k % 4) as f64]).collect();
        let a = MidpointSet::new(pts, int(0)).unwrap();
        let adv = build_restricted_kakeya(&a, &net, delta, &bbox(), delta / 4.0, AssignmentRule::Adversarial, 1).unwrap();
        let rnd = build_restricted_kakeya(&a, &net, delta, &bbox(), delta / 4.0, AssignmentRule::Seeded, 1).unwrap();
        assert!(adv.set.measure() <= rnd.set.measure());
    }
}
