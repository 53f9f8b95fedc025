use super::region::{BoundingBox, ConvexRegion};
use super::tube::Tube;
use super::vector::{dist, Point};
use super::voxel::VoxelSet;
use crate::error::{domain, precondition, Result};

/// Shell `k` of a recentred bush: cells at distance `[2^k δ, 2^(k+1) δ)`
/// from the centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub k: u32,
    pub measure: f64,
    /// `measure / (2^k δ · |bush|)`.
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusReport {
    pub shells: Vec<Shell>,
    pub bush_measure: f64,
    /// Measure of the part of the bush within `δ` of the centre.
    pub core_measure: f64,
    pub cell_size: f64,
}

impl AnnulusReport {
    pub fn max_constant(&self) -> f64 {
        self.shells.iter().map(|s| s.constant).fold(0.0, f64::max)
    }

    pub fn shell_total(&self) -> f64 {
        self.shells.iter().map(|s| s.measure).sum()
    }
}

/// `⌈log₂(1/δ)⌉`.
pub fn shell_count(delta: f64) -> u32 {
    (1.0 / delta).log2().ceil().max(0.0) as u32
}

/// Voxelizes the bush at cell size `δ/4` and splits it into dyadic shells
/// about `x0` for `k = 0 … ⌈log₂(1/δ)⌉ + 1`.
pub fn annulus_slices<const N: usize>(tubes: &[Tube<N>], x0: &Point<N>, delta: f64) -> Result<AnnulusReport> {
    annulus_slices_with(tubes, x0, delta, delta / 4.0)
}

pub fn annulus_slices_with<const N: usize>(
    tubes: &[Tube<N>],
    x0: &Point<N>,
    delta: f64,
    h: f64,
) -> Result<AnnulusReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("δ = {delta} must lie in (0, 1)"));
    }
    for (i, t) in tubes.iter().enumerate() {
        if t.distance(x0) > delta * (1.0 + 1e-9) {
            return precondition(format!("tube {i} does not contain the bush centre"));
        }
    }
    let reach = 1.0 + 2.0 * delta;
    let bbox = BoundingBox {
        lo: std::array::from_fn(|i| x0[i] - reach),
        hi: std::array::from_fn(|i| x0[i] + reach),
    };
    let mut bush = VoxelSet::new(&bbox, h)?;
    bush.rasterize_tubes(tubes)?;
    let kmax = shell_count(delta) + 1;
    let mut counts = vec![0usize; kmax as usize + 1];
    let mut core = 0usize;
    let grid = *bush.grid();
    for idx in bush.occupied_indices() {
        let r = dist(&grid.center(&grid.unlinear(idx)), x0) / delta;
        if r < 1.0 {
            core += 1;
        } else {
            let k = r.log2().floor() as usize;
            if k < counts.len() {
                counts[k] += 1;
            } else {
                return precondition("bush extends past the last shell".to_string());
            }
        }
    }
    let cell = grid.cell_volume();
    let bush_measure = bush.measure();
    let shells = counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let measure = c as f64 * cell;
            Shell {
                k: k as u32,
                measure,
                constant: measure / (2f64.powi(k as i32) * delta * bush_measure),
            }
        })
        .collect();
    debug_assert!(tubes.iter().all(|t| t.contains(x0) || t.distance(x0) <= delta * (1.0 + 1e-9)));
    Ok(AnnulusReport { shells, bush_measure, core_measure: core as f64 * cell, cell_size: h })
}
