use super::direction::Direction;
use super::region::{convex_sublevel, ConvexRegion};
use super::vector::{axpy, dot, norm_sq, sub, Point};
use crate::error::{domain, Result};

/// The `radius`-neighbourhood of the parallelogram spanned by the parallel
/// unit segments `I_dir(x1)` and `I_dir(x2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelogramSlab<const N: usize> {
    pub dir: Direction<N>,
    pub x1: Point<N>,
    pub x2: Point<N>,
    pub radius: f64,
}

impl<const N: usize> ParallelogramSlab<N> {
    pub fn new(dir: Direction<N>, x1: Point<N>, x2: Point<N>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return domain(format!("slab radius {radius} must be positive"));
        }
        Ok(Self { dir, x1, x2, radius })
    }

    /// Squared distance to `{x1 + t·dir + u·(x2 - x1) : |t| ≤ 1/2, 0 ≤ u ≤ 1}`.
    pub fn distance_sq(&self, x: &Point<N>) -> f64 {
        let e = self.dir.coords();
        let d = sub(&self.x2, &self.x1);
        let w = sub(x, &self.x1);
        let dd = norm_sq(&d);
        let ed = dot(e, &d);
        let we = dot(&w, e);
        let wd = dot(&w, &d);
        let residual = |t: f64, u: f64| norm_sq(&axpy(&axpy(&w, -t, e), -u, &d));

        let det = dd - ed * ed;
        if det > 1e-12 * dd.max(1.0) {
            let t = (we * dd - wd * ed) / det;
            let u = (wd - we * ed) / det;
            if (-0.5..=0.5).contains(&t) && (0.0..=1.0).contains(&u) {
                return residual(t, u);
            }
        }
        // The minimiser lies on an edge of the parameter rectangle.
        let best_u = |t: f64| {
            if dd > 0.0 {
                ((wd - t * ed) / dd).clamp(0.0, 1.0)
            } else {
                0.0
            }
        };
        let best_t = |u: f64| (we - u * ed).clamp(-0.5, 0.5);
        [
            (-0.5, best_u(-0.5)),
            (0.5, best_u(0.5)),
            (best_t(0.0), 0.0),
            (best_t(1.0), 1.0),
        ]
        .into_iter()
        .map(|(t, u)| residual(t, u))
        .fold(f64::INFINITY, f64::min)
    }
}

/// `true` iff `x` lies within `radius` of the parallelogram.
pub fn slab_membership<const N: usize>(slab: &ParallelogramSlab<N>, x: &Point<N>) -> bool {
    slab.contains(x)
}

impl<const N: usize> ConvexRegion<N> for ParallelogramSlab<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        self.distance_sq(x) <= self.radius * self.radius
    }

    fn aabb(&self) -> (Point<N>, Point<N>) {
        let e = self.dir.coords();
        let corners = [
            axpy(&self.x1, -0.5, e),
            axpy(&self.x1, 0.5, e),
            axpy(&self.x2, -0.5, e),
            axpy(&self.x2, 0.5, e),
        ];
        let r = self.radius;
        (
            std::array::from_fn(|i| corners.iter().map(|c| c[i]).fold(f64::INFINITY, f64::min) - r),
            std::array::from_fn(|i| corners.iter().map(|c| c[i]).fold(f64::NEG_INFINITY, f64::max) + r),
        )
    }

    fn line_interval(&self, base: &Point<N>, axis: usize) -> Option<(f64, f64)> {
        let (lo, hi) = self.aabb();
        let r = self.radius;
        convex_sublevel(
            |u| {
                let mut x = *base;
                x[axis] += u;
                self.distance_sq(&x).sqrt() - r
            },
            lo[axis] - base[axis],
            hi[axis] - base[axis],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tube::Tube;
    use crate::rng::stream;
    use rand::Rng;

    fn planar() -> ParallelogramSlab<3> {
        ParallelogramSlab::new(Direction::axis(0), [0.0, 0.0, 0.0], [0.0, 0.4, 0.0], 0.05).unwrap()
    }

    #[test]
    fn vertex_is_inside() {
        let s = planar();
        assert!(slab_membership(&s, &s.x1));
        assert!(slab_membership(&s, &s.x2));
    }

    #[test]
    fn normal_offset_of_two_radii_is_outside() {
        let s = planar();
        assert!(!slab_membership(&s, &[0.1, 0.2, 0.1]));
        assert!(slab_membership(&s, &[0.1, 0.2, 0.049]));
        assert!((s.distance_sq(&[0.1, 0.2, 0.1]) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn degenerate_slab_is_a_tube() {
        let mut rng = stream(3);
        for _ in 0..50 {
            let dir = Direction::new([rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5]).unwrap();
            let x1 = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
            let slab = ParallelogramSlab::new(dir, x1, x1, 0.05).unwrap();
            let tube = Tube::new(dir, x1, 0.05).unwrap();
            for _ in 0..200 {
                let x = [rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0];
                assert!((slab.distance_sq(&x) - tube.distance_sq(&x)).abs() < 1e-12);
                assert_eq!(slab.contains(&x), tube.contains(&x));
            }
        }
    }

    /// Brute-force minimisation over a fine parameter grid.
    #[test]
    fn distance_matches_parameter_grid() {
        let mut rng = stream(9);
        for _ in 0..40 {
            let dir = Direction::new([rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, 0.3]).unwrap();
            let x1 = [0.0, 0.0, 0.0];
            let x2 = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
            let s = ParallelogramSlab::new(dir, x1, x2, 0.1).unwrap();
            let x = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
            let d = sub(&x2, &x1);
            let mut best = f64::INFINITY;
            for i in 0..=200 {
                for j in 0..=200 {
                    let t = -0.5 + i as f64 / 200.0;
                    let u = j as f64 / 200.0;
                    let p = axpy(&axpy(&x1, t, dir.coords()), u, &d);
                    best = best.min(norm_sq(&sub(&x, &p)));
                }
            }
            let exact = s.distance_sq(&x);
            assert!(exact <= best + 1e-12);
            assert!(best.sqrt() - exact.sqrt() < 0.01);
        }
    }
}
