use std::f64::consts::PI;

use super::direction::Direction;
use super::region::{ball_line_interval, hull, intersect, quadratic_sublevel, ConvexRegion};
use super::vector::{axpy, dot, norm_sq, sub, Point};
use crate::error::{domain, Result};

/// Volume of the unit ball in `R^k` (`v_0 = 1`, `v_1 = 2`,
/// `v_k = v_{k-2}·2π/k`).
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * PI / k as f64,
    }
}

/// Surface measure of `S^{n-1}`, `n·v_n`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// The closed `radius`-neighbourhood of the unit segment
/// `{midpoint + t·dir : |t| ≤ 1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tube<const N: usize> {
    pub dir: Direction<N>,
    pub midpoint: Point<N>,
    pub radius: f64,
}

impl<const N: usize> Tube<N> {
    pub fn new(dir: Direction<N>, midpoint: Point<N>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return domain(format!("tube radius {radius} outside (0, 1)"));
        }
        Ok(Self { dir, midpoint, radius })
    }

    /// Endpoints `midpoint ± dir/2` of the core segment.
    pub fn endpoints(&self) -> (Point<N>, Point<N>) {
        let e = self.dir.coords();
        (axpy(&self.midpoint, -0.5, e), axpy(&self.midpoint, 0.5, e))
    }

    /// Squared distance from `x` to the core segment.
    pub fn distance_sq(&self, x: &Point<N>) -> f64 {
        let w = sub(x, &self.midpoint);
        let e = self.dir.coords();
        let t = dot(&w, e).clamp(-0.5, 0.5);
        norm_sq(&axpy(&w, -t, e))
    }

    pub fn distance(&self, x: &Point<N>) -> f64 {
        self.distance_sq(x).sqrt()
    }

    /// `v_{N-1} δ^{N-1} + v_N δ^N`: a unit-length cylinder plus two
    /// half-ball caps.
    pub fn volume(&self) -> f64 {
        tube_volume(N, self.radius)
    }
}

/// Analytic measure of a δ-tube in `R^n`.
pub fn tube_volume(n: usize, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    unit_ball_volume(n - 1) * delta.powi(n as i32 - 1) + unit_ball_volume(n) * delta.powi(n as i32)
}

impl<const N: usize> ConvexRegion<N> for Tube<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        self.distance_sq(x) <= self.radius * self.radius
    }

    fn aabb(&self) -> (Point<N>, Point<N>) {
        let (a, b) = self.endpoints();
        let r = self.radius;
        (
            std::array::from_fn(|i| a[i].min(b[i]) - r),
            std::array::from_fn(|i| a[i].max(b[i]) + r),
        )
    }

    fn line_interval(&self, base: &Point<N>, axis: usize) -> Option<(f64, f64)> {
        let e = self.dir.coords();
        let r = self.radius;
        let w = sub(base, &self.midpoint);
        let a = e[axis];
        let wd = dot(&w, e);
        // Perpendicular distance to the axis line along base + u·e_axis:
        // |w + u e_k|² - (wd + u a)².
        let cyl = quadratic_sublevel(
            1.0 - a * a,
            2.0 * (w[axis] - wd * a),
            norm_sq(&w) - wd * wd - r * r,
        );
        let slab = if a.abs() < 1e-15 {
            (wd.abs() <= 0.5).then_some((f64::NEG_INFINITY, f64::INFINITY))
        } else {
            let u0 = (-0.5 - wd) / a;
            let u1 = (0.5 - wd) / a;
            Some((u0.min(u1), u0.max(u1)))
        };
        let core = match (cyl, slab) {
            (Some(c), Some(s)) => intersect(c, s),
            _ => None,
        };
        let (p0, p1) = self.endpoints();
        let caps = hull(
            ball_line_interval(base, axis, &p0, r),
            ball_line_interval(base, axis, &p1, r),
        );
        hull(core, caps)
    }
}

/// Tube list export: `e1,...,en,a1,...,an,delta`.
pub fn write_tubes_csv<const N: usize>(tubes: &[Tube<N>], out: &mut impl std::io::Write) -> crate::error::Result<()> {
    let header: Vec<String> = (1..=N)
        .map(|i| format!("e{i}"))
        .chain((1..=N).map(|i| format!("a{i}")))
        .chain(["delta".to_string()])
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for t in tubes {
        let row: Vec<String> = t
            .dir
            .coords()
            .iter()
            .chain(t.midpoint.iter())
            .chain(std::iter::once(&t.radius))
            .map(|v| format!("{v:.16e}"))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
