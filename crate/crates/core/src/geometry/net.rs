use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::Rng;

use super::direction::Direction;
use super::tube::sphere_area;
use super::vector::{dist_sq, Point};
use crate::error::{domain, Error, Result};
use crate::rng::stream;

/// A δ-separated set of unit directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalNet<const N: usize> {
    pub dirs: Vec<Direction<N>>,
    pub separation: f64,
    pub maximal: bool,
    /// `|dirs|·δ^(n-1)`, recorded by the generator.
    pub density_constant: f64,
    /// The seed the net was generated from, if any.
    pub seed: Option<u64>,
}

impl<const N: usize> SphericalNet<N> {
    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Quadrature mass given to each direction.
    pub fn direction_weight(&self) -> f64 {
        sphere_area(N) / self.dirs.len() as f64
    }

    /// Minimum pairwise Euclidean distance (`∞` for fewer than two points).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.dirs.iter().enumerate() {
            for b in &self.dirs[i + 1..] {
                best = best.min(a.chord(b));
            }
        }
        best
    }

    /// A net built from explicit directions; separation is checked.
    pub fn from_dirs(dirs: Vec<Direction<N>>, separation: f64) -> Result<Self> {
        let net = Self {
            density_constant: dirs.len() as f64 * separation.powi(N as i32 - 1),
            dirs,
            separation,
            maximal: false,
            seed: None,
        };
        if net.dirs.len() > 1 && net.min_separation() <= separation {
            return Err(Error::Inconsistent(format!(
                "directions are not {separation}-separated"
            )));
        }
        Ok(net)
    }

    /// One `x1,...,xn` line per direction, 17 significant digits.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        let header: Vec<String> = (1..=N).map(|i| format!("x{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for d in &self.dirs {
            let row: Vec<String> = d.coords().iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Reads the format of [`SphericalNet::write_csv`]. The result carries
    /// the given separation, which is verified, and is not marked maximal.
    pub fn read_csv(input: impl BufRead, separation: f64) -> Result<Self> {
        let mut dirs = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if lineno == 0 || line.is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("net line {}: {e}", lineno + 1)))?;
            let v: Point<N> = vals.try_into().map_err(|v: Vec<f64>| {
                Error::Parse(format!("net line {}: expected {N} values, got {}", lineno + 1, v.len()))
            })?;
            dirs.push(Direction::from_unit(v)?);
        }
        Self::from_dirs(dirs, separation)
    }
}

/// Integer cell of a point in a grid of side `cell`.
fn cell_of<const N: usize>(x: &Point<N>, cell: f64) -> [i64; N] {
    std::array::from_fn(|i| (x[i] / cell).floor() as i64)
}

/// Greedy packing: a candidate is kept when it is more than `sep` from
/// every kept point. Kept points are bucketed in a spatial hash with cell
/// side `sep`, so only the 3^N neighbouring cells are examined. With
/// `fold`, `-x` is looked up as well so that antipodes count as close.
struct Packer<const N: usize> {
    grid: HashMap<[i64; N], Vec<usize>>,
    kept: Vec<Point<N>>,
    sep: f64,
    fold: bool,
    offsets: Vec<[i64; N]>,
}

impl<const N: usize> Packer<N> {
    fn new(sep: f64, fold: bool) -> Self {
        let offsets = (0..3usize.pow(N as u32))
            .map(|mut k| {
                std::array::from_fn(|_| {
                    let d = (k % 3) as i64 - 1;
                    k /= 3;
                    d
                })
            })
            .collect();
        Self { grid: HashMap::new(), kept: Vec::new(), sep, fold, offsets }
    }

    fn near(&self, x: &Point<N>) -> bool {
        let c = cell_of(x, self.sep);
        let sep_sq = self.sep * self.sep;
        self.offsets.iter().any(|off| {
            let key: [i64; N] = std::array::from_fn(|i| c[i] + off[i]);
            self.grid
                .get(&key)
                .is_some_and(|ids| ids.iter().any(|&j| dist_sq(&self.kept[j], x) <= sep_sq))
        })
    }

    fn offer(&mut self, x: Point<N>) {
        let neg: Point<N> = std::array::from_fn(|i| -x[i]);
        if self.near(&x) || (self.fold && self.near(&neg)) {
            return;
        }
        self.grid.entry(cell_of(&x, self.sep)).or_default().push(self.kept.len());
        self.kept.push(x);
    }
}

/// Radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// Quasi-uniform candidate directions on `S^(N-1)`, deterministic in `seed`.
///
/// The circle uses jittered equal angles at spacing `δ/8`. The 2-sphere
/// and 3-sphere use shifted Halton points pushed through an
/// area-preserving map.
fn candidate_stream<const N: usize>(delta: f64, seed: u64) -> Vec<Point<N>> {
    let mut rng = stream(seed);
    let tau = std::f64::consts::TAU;
    match N {
        2 => {
            let step = delta / 8.0;
            let count = (tau / step).ceil() as usize;
            let step = tau / count as f64;
            let offset: f64 = rng.random::<f64>() * step;
            (0..count)
                .map(|j| {
                    let jitter = (rng.random::<f64>() - 0.5) * 0.5 * step;
                    let phi = offset + j as f64 * step + jitter;
                    let mut p = [0.0; N];
                    p[0] = phi.cos();
                    p[1] = phi.sin();
                    p
                })
                .collect()
        }
        3 | 4 => {
            let expected = sphere_area(N) / delta.powi(N as i32 - 1);
            let count = (16.0 * expected).ceil().max(64.0) as u64;
            let shift: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>());
            let bases = [2u64, 3, 5];
            (1..=count)
                .map(|i| {
                    let u: [f64; 3] =
                        std::array::from_fn(|k| (radical_inverse(i, bases[k]) + shift[k]).fract());
                    let mut p = [0.0; N];
                    if N == 3 {
                        let z = 2.0 * u[0] - 1.0;
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        let phi = tau * u[1];
                        p[0] = r * phi.cos();
                        p[1] = r * phi.sin();
                        p[2] = z;
                    } else {
                        // Shoemake's uniform map to unit quaternions.
                        let (r1, r2) = ((1.0 - u[0]).sqrt(), u[0].sqrt());
                        let (t1, t2) = (tau * u[1], tau * u[2]);
                        p[0] = r1 * t1.sin();
                        p[1] = r1 * t1.cos();
                        p[2] = r2 * t2.sin();
                        p[3] = r2 * t2.cos();
                    }
                    p
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

fn build<const N: usize>(delta: f64, seed: u64, fold: bool) -> Result<SphericalNet<N>> {
    if !(2..=4).contains(&N) {
        return domain(format!("nets are implemented for n = 2, 3, 4, not {N}"));
    }
    if !(delta > 0.0) {
        return domain(format!("net separation {delta} must be positive"));
    }
    // Two antipodes are exactly 2 apart, so no pair exceeds separation 2.
    if delta >= 2.0 {
        return domain(format!("no pair of directions is more than {delta} apart"));
    }
    let mut packer = Packer::new(delta, fold);
    for x in candidate_stream::<N>(delta, seed) {
        packer.offer(x);
    }
    if !fold {
        // A finite stream rarely hits exact antipodes, which are the only
        // admissible partners when δ is close to 2.
        let first_pass = packer.kept.clone();
        for x in first_pass {
            packer.offer(std::array::from_fn(|i| -x[i]));
        }
    }
    let dirs: Vec<Direction<N>> = packer
        .kept
        .into_iter()
        .map(|p| Direction::new(p).expect("stream points are nonzero"))
        .collect();
    Ok(SphericalNet {
        density_constant: dirs.len() as f64 * delta.powi(N as i32 - 1),
        dirs,
        separation: delta,
        maximal: true,
        seed: Some(seed),
    })
}

/// Maximal δ-separated net on `S^(N-1)` by greedy insertion over a seeded
/// quasi-uniform candidate stream.
pub fn greedy_net<const N: usize>(delta: f64, seed: u64) -> Result<SphericalNet<N>> {
    build(delta, seed, false)
}

/// As [`greedy_net`] but separated in the folded metric
/// `min(|e - e'|, |e + e'|)`, so that at most one of `±e` is kept.
pub fn projective_net<const N: usize>(delta: f64, seed: u64) -> Result<SphericalNet<N>> {
    build(delta, seed, true)
}
