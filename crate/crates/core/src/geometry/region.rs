use super::vector::{norm_sq, sub, Point};
use crate::error::{domain, Result};

/// A closed convex subset of `R^N` that the voxel engine can scan row by
/// row.
///
/// Convexity guarantees that every axis-parallel line meets the region in
/// a single interval, so rasterization only needs the interval endpoints;
/// [`ConvexRegion::contains`] is the authoritative predicate and is used to
/// settle the cells at either end of each interval.
pub trait ConvexRegion<const N: usize>: Sync {
    fn contains(&self, x: &Point<N>) -> bool;

    /// Axis-aligned bounding box `(lo, hi)`.
    fn aabb(&self) -> (Point<N>, Point<N>);

    /// Parameter interval `[u0, u1]` of the line `base + u·e_axis` inside
    /// the region, accurate to rounding; `None` when the line misses it.
    fn line_interval(&self, base: &Point<N>, axis: usize) -> Option<(f64, f64)>;
}

/// Closed ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball<const N: usize> {
    pub center: Point<N>,
    pub radius: f64,
}

impl<const N: usize> Ball<N> {
    pub fn new(center: Point<N>, radius: f64) -> Self {
        Self { center, radius }
    }
}

impl<const N: usize> ConvexRegion<N> for Ball<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        norm_sq(&sub(x, &self.center)) <= self.radius * self.radius
    }

    fn aabb(&self) -> (Point<N>, Point<N>) {
        (
            std::array::from_fn(|i| self.center[i] - self.radius),
            std::array::from_fn(|i| self.center[i] + self.radius),
        )
    }

    fn line_interval(&self, base: &Point<N>, axis: usize) -> Option<(f64, f64)> {
        ball_line_interval(base, axis, &self.center, self.radius)
    }
}

/// `{u : |base + u·e_axis - center| ≤ r}`.
pub(crate) fn ball_line_interval<const N: usize>(
    base: &Point<N>,
    axis: usize,
    center: &Point<N>,
    r: f64,
) -> Option<(f64, f64)> {
    let w = sub(base, center);
    let half_b = w[axis];
    let c = norm_sq(&w) - r * r;
    let disc = half_b * half_b - c;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    Some((-half_b - root, -half_b + root))
}

/// Solves `a u² + b u + c ≤ 0` for `a ≥ 0`; `Some((-∞, ∞))` when the
/// inequality holds everywhere.
pub(crate) fn quadratic_sublevel(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if a <= 1e-14 {
        if b.abs() <= 1e-14 {
            return (c <= 0.0).then_some((f64::NEG_INFINITY, f64::INFINITY));
        }
        let root = -c / b;
        return Some(if b > 0.0 {
            (f64::NEG_INFINITY, root)
        } else {
            (root, f64::INFINITY)
        });
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    // Numerically stable pair of roots.
    let q = -0.5 * (b + b.signum() * root);
    let (r1, r2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / a, c / q)
    };
    Some((r1.min(r2), r1.max(r2)))
}

pub(crate) fn intersect(a: (f64, f64), b: (f64, f64)) -> Option<(f64, f64)> {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    (lo <= hi).then_some((lo, hi))
}

pub(crate) fn hull(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<(f64, f64)> {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Sublevel interval `{u ∈ [lo, hi] : f(u) ≤ 0}` of a convex function,
/// found by ternary search for the minimiser and bisection for the two
/// crossings.
pub(crate) fn convex_sublevel(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let umin = 0.5 * (a + b);
    if f(umin) > 0.0 {
        return None;
    }
    let bisect = |mut inside: f64, mut outside: f64| {
        for _ in 0..100 {
            let mid = 0.5 * (inside + outside);
            if f(mid) <= 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let left = if f(lo) <= 0.0 { lo } else { bisect(umin, lo) };
    let right = if f(hi) <= 0.0 { hi } else { bisect(umin, hi) };
    Some((left, right))
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox<const N: usize> {
    pub lo: Point<N>,
    pub hi: Point<N>,
}

impl<const N: usize> BoundingBox<N> {
    pub fn new(lo: Point<N>, hi: Point<N>) -> Result<Self> {
        if (0..N).any(|i| !(lo[i] < hi[i]) || !lo[i].is_finite() || !hi[i].is_finite()) {
            return domain(format!("degenerate box {lo:?}..{hi:?}"));
        }
        Ok(Self { lo, hi })
    }

    /// `[-half, half]^N`.
    pub fn centered_cube(half: f64) -> Self {
        Self { lo: [-half; N], hi: [half; N] }
    }

    pub fn contains(&self, x: &Point<N>) -> bool {
        (0..N).all(|i| self.lo[i] <= x[i] && x[i] <= self.hi[i])
    }

    pub fn contains_box(&self, lo: &Point<N>, hi: &Point<N>) -> bool {
        (0..N).all(|i| self.lo[i] <= lo[i] && hi[i] <= self.hi[i])
    }

    pub fn center(&self) -> Point<N> {
        std::array::from_fn(|i| 0.5 * (self.lo[i] + self.hi[i]))
    }

    pub fn volume(&self) -> f64 {
        (0..N).map(|i| self.hi[i] - self.lo[i]).product()
    }
}
