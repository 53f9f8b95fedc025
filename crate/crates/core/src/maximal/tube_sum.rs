use crate::bounds::{to_f64, Rational};
use crate::error::{domain, precondition, Result};
use crate::geometry::{CountField, Tube, VoxelGrid};

/// Fails unless all tubes share one radius `δ` and their directions are
/// pairwise more than `δ` apart.
pub fn check_separated<const N: usize>(tubes: &[Tube<N>]) -> Result<()> {
    let Some(first) = tubes.first() else {
        return Ok(());
    };
    let delta = first.radius;
    if tubes.iter().any(|t| t.radius != delta) {
        return precondition("tubes have different radii".to_string());
    }
    for (i, a) in tubes.iter().enumerate() {
        for (j, b) in tubes.iter().enumerate().skip(i + 1) {
            if a.dir.chord(&b.dir) <= delta {
                return precondition(format!("directions {i} and {j} are not {delta}-separated"));
            }
        }
    }
    Ok(())
}

/// The overlap count `Σ_k χ_{T_k}` on `grid`.
pub fn tube_sum_field<const N: usize>(tubes: &[Tube<N>], grid: &VoxelGrid<N>) -> CountField<N> {
    let mut field = CountField::new(*grid);
    field.add_all(tubes);
    field
}

/// `‖Σ_k χ_{T_k}‖_{L^{p'}}` by voxel quadrature.
pub fn tube_sum_norm<const N: usize>(tubes: &[Tube<N>], p_prime: &Rational, grid: &VoxelGrid<N>) -> Result<f64> {
    let p = to_f64(p_prime);
    if !(p >= 1.0) {
        return domain(format!("exponent {p_prime} must be at least 1"));
    }
    check_separated(tubes)?;
    Ok(tube_sum_field(tubes, grid).lp_norm(p))
}
