use std::f64::consts::FRAC_PI_2;

use super::vector::{add, dot, norm, scale, sub, Point};
use crate::error::{domain, Result};

/// Tolerance on `|e| = 1`.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A unit vector in `R^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction<const N: usize>(Point<N>);

impl<const N: usize> Direction<N> {
    /// Normalises any nonzero vector.
    pub fn new(v: Point<N>) -> Result<Self> {
        let len = norm(&v);
        if !(len.is_finite() && len > 0.0) {
            return domain("direction from a zero or non-finite vector");
        }
        Ok(Self(scale(&v, 1.0 / len)))
    }

    /// Accepts `v` only if it is already unit length within
    /// [`UNIT_TOLERANCE`].
    pub fn from_unit(v: Point<N>) -> Result<Self> {
        if (norm(&v) - 1.0).abs() > UNIT_TOLERANCE {
            return domain(format!("vector {v:?} is not unit length"));
        }
        Ok(Self(v))
    }

    /// The `axis`-th standard basis vector.
    pub fn axis(axis: usize) -> Self {
        let mut v = [0.0; N];
        v[axis] = 1.0;
        Self(v)
    }

    pub fn coords(&self) -> &Point<N> {
        &self.0
    }

    pub fn neg(&self) -> Self {
        Self(scale(&self.0, -1.0))
    }

    /// Euclidean distance `|e - e'|` on the sphere.
    pub fn chord(&self, other: &Self) -> f64 {
        norm(&sub(&self.0, &other.0))
    }

    /// `min(|e - e'|, |e + e'|)`; the distance between the lines spanned by
    /// the two directions.
    pub fn folded_chord(&self, other: &Self) -> f64 {
        let minus = norm(&sub(&self.0, &other.0));
        let plus = norm(&add(&self.0, &other.0));
        minus.min(plus)
    }

    /// Acute angle in `[0, π/2]` between the lines spanned by `self` and
    /// `other`.
    pub fn acute_angle(&self, other: &Self) -> f64 {
        let c = dot(&self.0, &other.0).abs().min(1.0);
        // acos loses precision near 1; use the chord form there.
        let half = self.folded_chord(other) / 2.0;
        if c > 0.9 {
            2.0 * half.min(1.0).asin()
        } else {
            c.acos().min(FRAC_PI_2)
        }
    }

    /// Orthonormal basis of the complement of `self` (Gram–Schmidt against
    /// the coordinate axes).
    pub fn complement_basis(&self) -> Vec<Point<N>> {
        let mut basis: Vec<Point<N>> = vec![self.0];
        let mut axes: Vec<usize> = (0..N).collect();
        // Coordinate axes least aligned with self first, for stability.
        axes.sort_by(|&a, &b| self.0[a].abs().total_cmp(&self.0[b].abs()));
        for axis in axes {
            if basis.len() == N {
                break;
            }
            let mut v = [0.0; N];
            v[axis] = 1.0;
            for b in &basis {
                let k = dot(&v, b);
                for i in 0..N {
                    v[i] -= k * b[i];
                }
            }
            let len = norm(&v);
            if len > 1e-8 {
                basis.push(scale(&v, 1.0 / len));
            }
        }
        basis.remove(0);
        basis
    }
}
