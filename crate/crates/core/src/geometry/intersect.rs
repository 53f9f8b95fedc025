use rand::Rng;

use super::direction::Direction;
use super::region::{intersect, quadratic_sublevel, ConvexRegion};
use super::tube::Tube;
use super::vector::{axpy, dist_sq, dot, norm_sq, sub, Point};
use crate::error::{domain, precondition, Result};
use crate::rng::stream;

pub const MIN_SAMPLES: usize = 1000;
pub const DEFAULT_SAMPLES: usize = 20_000;

/// Above this many hits the diameter is taken over extreme points only.
const EXACT_DIAMETER_HITS: usize = 1024;

/// Monte Carlo estimate for `T1 ∩ T2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionStats {
    pub measure: f64,
    pub stderr: f64,
    pub diameter: f64,
    /// Acute angle between the tube directions, in `[0, π/2]`.
    pub theta: f64,
    pub hits: usize,
    pub samples: usize,
}

impl IntersectionStats {
    /// `measure·(θ + δ)/δⁿ`, the constant in the measure estimate.
    pub fn measure_constant(&self, n: usize, delta: f64) -> f64 {
        self.measure * (self.theta + delta) / delta.powi(n as i32)
    }

    /// `diameter·(θ + δ)/δ`, the constant in the diameter estimate.
    pub fn diameter_constant(&self, delta: f64) -> f64 {
        self.diameter * (self.theta + delta) / delta
    }
}

/// Axis-parameter range of tube 1 whose axis point lies within `2δ` of the
/// line of tube 2; any point of the intersection projects into it.
fn candidate_range<const N: usize>(t1: &Tube<N>, t2: &Tube<N>) -> Option<(f64, f64)> {
    let (e1, e2) = (t1.dir.coords(), t2.dir.coords());
    let d = t1.radius;
    let w = sub(&t1.midpoint, &t2.midpoint);
    let c12 = dot(e1, e2);
    let we2 = dot(&w, e2);
    let band = quadratic_sublevel(
        1.0 - c12 * c12,
        2.0 * (dot(&w, e1) - we2 * c12),
        norm_sq(&w) - we2 * we2 - 4.0 * d * d,
    )?;
    intersect(band, (-0.5 - d, 0.5 + d))
}

/// Monte Carlo measure and diameter of `t1 ∩ t2`.
///
/// Points are drawn uniformly from the box `[t0, t1] × [-δ, δ]^(n-1)` in
/// the frame of `t1`, where `[t0, t1]` is cut down by
/// [`candidate_range`]. The diameter is the largest distance between hit
/// points.
pub fn intersection_stats<const N: usize>(
    t1: &Tube<N>,
    t2: &Tube<N>,
    samples: usize,
    seed: u64,
) -> Result<IntersectionStats> {
    if samples < MIN_SAMPLES {
        return domain(format!("{samples} samples is below the minimum of {MIN_SAMPLES}"));
    }
    if t1.radius != t2.radius {
        return precondition(format!("tube radii differ: {} vs {}", t1.radius, t2.radius));
    }
    let theta = t1.dir.acute_angle(&t2.dir);
    let empty = IntersectionStats { measure: 0.0, stderr: 0.0, diameter: 0.0, theta, hits: 0, samples };
    let Some((a, b)) = candidate_range(t1, t2) else {
        return Ok(empty);
    };
    let d = t1.radius;
    let e1 = *t1.dir.coords();
    let basis = t1.dir.complement_basis();
    let volume = (b - a) * (2.0 * d).powi(N as i32 - 1);
    let mut rng = stream(seed);
    let mut hits: Vec<Point<N>> = Vec::new();
    for _ in 0..samples {
        let mut x = axpy(&t1.midpoint, rng.random_range(a..=b), &e1);
        for v in &basis {
            x = axpy(&x, rng.random_range(-d..=d), v);
        }
        if t1.contains(&x) && t2.contains(&x) {
            hits.push(x);
        }
    }
    let frac = hits.len() as f64 / samples as f64;
    let diameter = diameter_of(&hits, &[e1, *t2.dir.coords()], seed);
    Ok(IntersectionStats {
        measure: volume * frac,
        stderr: volume * (frac * (1.0 - frac) / samples as f64).sqrt(),
        diameter,
        theta,
        hits: hits.len(),
        samples,
    })
}

fn pairwise_diameter<const N: usize>(pts: &[Point<N>]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max(dist_sq(p, q));
        }
    }
    best.sqrt()
}

/// Diameter of a point cloud. Large clouds are first reduced to their
/// extreme points along the tube axes, their sum and difference, the
/// coordinate axes and 32 seeded random directions.
fn diameter_of<const N: usize>(pts: &[Point<N>], axes: &[Point<N>; 2], seed: u64) -> f64 {
    if pts.len() <= EXACT_DIAMETER_HITS {
        return pairwise_diameter(pts);
    }
    let mut dirs: Vec<Point<N>> = vec![
        axes[0],
        axes[1],
        std::array::from_fn(|i| axes[0][i] + axes[1][i]),
        std::array::from_fn(|i| axes[0][i] - axes[1][i]),
    ];
    dirs.extend((0..N).map(|i| *Direction::<N>::axis(i).coords()));
    let mut rng = stream(seed ^ 0x5eed_d1a3);
    for _ in 0..32 {
        dirs.push(std::array::from_fn(|_| rng.random::<f64>() - 0.5));
    }
    let mut extremes: Vec<Point<N>> = Vec::new();
    for u in &dirs {
        let key = |p: &&Point<N>| dot(p, u);
        let lo = pts.iter().min_by(|p, q| key(p).total_cmp(&key(q))).copied();
        let hi = pts.iter().max_by(|p, q| key(p).total_cmp(&key(q))).copied();
        extremes.extend(lo);
        extremes.extend(hi);
    }
    pairwise_diameter(&extremes)
}

/// Two tubes of radius `delta` through a common point, at an acute angle
/// drawn log-uniformly from `[δ/4, π/2]`.
pub fn random_crossing_pair<const N: usize>(delta: f64, rng: &mut impl Rng) -> Result<(Tube<N>, Tube<N>)> {
    let gauss = |rng: &mut dyn rand::RngCore| -> Point<N> {
        std::array::from_fn(|_| {
            // Box-Muller; a zero first uniform is vanishingly unlikely but
            // is nudged away from the logarithm's pole anyway.
            let u: f64 = rng.random::<f64>().max(1e-300);
            let v: f64 = rng.random();
            (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
        })
    };
    let e1 = Direction::new(gauss(rng))?;
    let mut perp = gauss(rng);
    perp = axpy(&perp, -dot(&perp, e1.coords()), e1.coords());
    let perp = Direction::new(perp)?;
    let (lo, hi) = ((delta / 4.0).ln(), std::f64::consts::FRAC_PI_2.ln());
    let theta = rng.random_range(lo..=hi).exp();
    let e2 = Direction::new(std::array::from_fn(|i| {
        theta.cos() * e1.coords()[i] + theta.sin() * perp.coords()[i]
    }))?;
    let p: Point<N> = std::array::from_fn(|_| rng.random_range(-0.1..=0.1));
    let a1 = axpy(&p, -rng.random_range(-0.5..=0.5), e1.coords());
    let a2 = axpy(&p, -rng.random_range(-0.5..=0.5), e2.coords());
    Ok((Tube::new(e1, a1, delta)?, Tube::new(e2, a2, delta)?))
}

/// Area of a convex polygon (counter-clockwise or clockwise).
fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    0.5 * twice.abs()
}

/// Rectangle core of a planar tube, counter-clockwise.
fn core_rectangle(t: &Tube<2>) -> [[f64; 2]; 4] {
    let e = t.dir.coords();
    let nrm = [-e[1] * t.radius, e[0] * t.radius];
    let half = [0.5 * e[0], 0.5 * e[1]];
    let m = t.midpoint;
    [
        [m[0] - half[0] - nrm[0], m[1] - half[1] - nrm[1]],
        [m[0] + half[0] - nrm[0], m[1] + half[1] - nrm[1]],
        [m[0] + half[0] + nrm[0], m[1] + half[1] + nrm[1]],
        [m[0] - half[0] + nrm[0], m[1] - half[1] + nrm[1]],
    ]
}

/// Sutherland–Hodgman clip of `subject` by the convex counter-clockwise
/// polygon `clip`.
fn clip_polygon(subject: &[[f64; 2]], clip: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut out = subject.to_vec();
    for i in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
        let side = |p: &[f64; 2]| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (p, q) = (input[j], input[(j + 1) % input.len()]);
            let (sp, sq) = (side(&p), side(&q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    out
}

/// Area of the intersection of the rectangular cores of two planar tubes.
///
/// The half-disc caps are ignored. The true intersection contains the core
/// intersection, and the difference lies inside the four caps, so the
/// result underestimates `|T1 ∩ T2|` by at most `2πδ²`
/// ([`PLANAR_CAP_ERROR_FACTOR`]·δ²).
pub fn exact_planar_intersection(t1: &Tube<2>, t2: &Tube<2>) -> f64 {
    let clipped = clip_polygon(&core_rectangle(t1), &core_rectangle(t2));
    if clipped.len() < 3 {
        0.0
    } else {
        polygon_area(&clipped)
    }
}

pub const PLANAR_CAP_ERROR_FACTOR: f64 = 2.0 * std::f64::consts::PI;
