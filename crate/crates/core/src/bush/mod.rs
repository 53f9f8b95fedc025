//! Bush extraction and the iterative bush decomposition of a set `E`.
//!
//! A bush is a family of δ-tubes through a common point. Extraction scores
//! every net direction by the restricted maximal function, pigeonholes the
//! winning midpoints into a ball of radius `δ/3`, and prunes the family to
//! a maximal `10δ/λ`-separated set of directions. Decomposition repeats
//! this on the residual `E_{i+1} = E_i \ B_i` until the level set of the
//! residual at `λ/2` drops below a quarter of the initial one.

pub mod fixtures;
mod pigeonhole;

use std::io::Write;

use crate::bounds::{to_f64, Rational};
use crate::error::{domain, Error, Result};
use crate::geometry::vector::dist_sq;
use crate::geometry::{ConvexRegion, Direction, Point, SphericalNet, Tube, VoxelSet};
use crate::maximal::{level_set_measure, refresh_profile, AverageCache, restricted_maximal_profile, MaximalProfile, MidpointSet};

pub use pigeonhole::{cell_side, pigeonhole_ball, Pigeonhole};

/// Constants the argument leaves implicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BushParams {
    /// Diameter constant in `diam(T ∩ T') ≤ bδ/|e - e'|`.
    pub b: f64,
    /// Core radius factor: cores are `T \ B(anchor, cλ)`.
    pub c: f64,
    /// Direction separation is `separation_factor·δ/λ`.
    pub separation_factor: f64,
    /// Density pass threshold for `|E ∩ B| / (λ|B|)`.
    pub density_threshold: f64,
}

impl Default for BushParams {
    fn default() -> Self {
        Self { b: 4.0, c: 0.25, separation_factor: 10.0, density_threshold: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bush<const N: usize> {
    /// A point contained in every tube.
    pub anchor: Point<N>,
    pub tubes: Vec<Tube<N>>,
    pub dirs: Vec<Direction<N>>,
    /// Net indices of `dirs`.
    pub net_indices: Vec<usize>,
    pub lambda: f64,
    pub delta: f64,
    /// Directions in the winning ball before separation pruning.
    pub family_size: usize,
    /// Directions above the extraction threshold.
    pub candidates: usize,
    pub balls_hit: usize,
}

impl<const N: usize> Bush<N> {
    pub fn len(&self) -> usize {
        self.tubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tubes.is_empty()
    }

    /// The union of the tubes on the grid of `like`.
    pub fn voxels(&self, like: &VoxelSet<N>) -> VoxelSet<N> {
        let mut v = VoxelSet::empty(*like.grid());
        v.rasterize_all(&self.tubes);
        v
    }

    /// Smallest folded distance between two bush directions.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.dirs.iter().enumerate() {
            for b in &self.dirs[i + 1..] {
                best = best.min(a.folded_chord(b));
            }
        }
        best
    }

    pub fn write_tubes_csv(&self, out: &mut impl Write) -> Result<()> {
        crate::geometry::write_tubes_csv(&self.tubes, out)
    }
}

/// Greedy maximal `sep`-separated subset in the folded metric, visiting
/// candidates by decreasing score and then increasing net index.
fn prune_dirs<const N: usize>(members: &[(usize, f64)], net: &SphericalNet<N>, sep: f64) -> Vec<usize> {
    let mut order = members.to_vec();
    order.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    let mut kept: Vec<usize> = Vec::new();
    for (e, _) in order {
        if kept.iter().all(|&k| net.dirs[k].folded_chord(&net.dirs[e]) > sep) {
            kept.push(e);
        }
    }
    kept
}

/// Extraction from a precomputed profile of `E` (restricted to `A`), using
/// directions whose value exceeds `threshold`. The bush's `lambda` is
/// `lambda`, which also sets the separation scale.
pub fn extract_from_profile<const N: usize>(
    prof: &MaximalProfile<N>,
    a: &MidpointSet<N>,
    threshold: f64,
    lambda: f64,
    params: &BushParams,
) -> Result<Option<Bush<N>>> {
    let delta = prof.delta;
    let above: Vec<usize> = (0..prof.values.len()).filter(|&i| prof.values[i] > threshold).collect();
    if above.is_empty() {
        return Ok(None);
    }
    let mids: Vec<Point<N>> = above.iter().map(|&i| prof.witnesses[i]).collect();
    let ph = pigeonhole_ball(a, &mids, delta)?;
    let family: Vec<(usize, f64)> = ph.members.iter().map(|&k| (above[k], prof.values[above[k]])).collect();
    let sep = params.separation_factor * delta / lambda;
    let kept = prune_dirs(&family, &prof.net, sep);
    let tubes = kept
        .iter()
        .map(|&e| Tube::new(prof.net.dirs[e], prof.witnesses[e], delta))
        .collect::<Result<Vec<_>>>()?;
    if let Some(t) = tubes.iter().find(|t| !t.contains(&ph.center)) {
        return Err(Error::Inconsistent(format!("tube {:?} misses the bush anchor", t.midpoint)));
    }
    Ok(Some(Bush {
        anchor: ph.center,
        dirs: kept.iter().map(|&e| prof.net.dirs[e]).collect(),
        net_indices: kept,
        tubes,
        lambda,
        delta,
        family_size: family.len(),
        candidates: above.len(),
        balls_hit: ph.balls_hit,
    }))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return domain(format!("λ = {lambda} must lie in (0, 1)"));
    }
    Ok(())
}

/// One bush from `E` at level `λ`, or `None` if no direction exceeds it.
pub fn extract_bush<const N: usize>(
    e: &VoxelSet<N>,
    a: &MidpointSet<N>,
    net: &SphericalNet<N>,
    delta: f64,
    lambda: f64,
    params: &BushParams,
) -> Result<Option<Bush<N>>> {
    check_lambda(lambda)?;
    let prof = restricted_maximal_profile(e, a, delta, net)?;
    extract_from_profile(&prof, a, lambda, lambda, params)
}

/// A completed (or degenerate) decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct BushDecomposition<const N: usize> {
    pub bushes: Vec<Bush<N>>,
    pub residual: VoxelSet<N>,
    /// `|D_0|` at level `λ`, then `|D_1|, …, |D_m|` at level `λ/2`.
    pub level_measures: Vec<f64>,
    /// `|E_i ∩ B_i|` for each bush.
    pub captured: Vec<f64>,
    /// `|B_i|` on the voxel grid.
    pub bush_measures: Vec<f64>,
    pub epsilon0: f64,
    pub stopped: bool,
    pub delta: f64,
    pub lambda: f64,
    pub initial_measure: f64,
    /// Iteration cap that was in force.
    pub max_iter: usize,
    /// For `λ ≤ δ`: `|E| / (λ δ^(n-1))`, reported instead of iterating.
    pub trivial_bound_ratio: Option<f64>,
}

impl<const N: usize> BushDecomposition<N> {
    pub fn m(&self) -> usize {
        self.bushes.len()
    }

    /// `|E_i ∩ B_i| / (λ |B_i|)` per step.
    pub fn density_ratios(&self) -> Vec<f64> {
        self.captured
            .iter()
            .zip(&self.bush_measures)
            .map(|(c, b)| if *b > 0.0 { c / (self.lambda * b) } else { 0.0 })
            .collect()
    }

    /// `step,level_measure,bush_size,bush_measure,density_ratio`; the row
    /// for the final level set has empty bush columns.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "step,level_measure,bush_size,bush_measure,density_ratio")?;
        let dens = self.density_ratios();
        for (i, level) in self.level_measures.iter().enumerate() {
            if i < self.bushes.len() {
                writeln!(
                    out,
                    "{i},{level:.16e},{},{:.16e},{:.16e}",
                    self.bushes[i].len(),
                    self.bush_measures[i],
                    dens[i]
                )?;
            } else {
                writeln!(out, "{i},{level:.16e},,,")?;
            }
        }
        Ok(())
    }

    /// All bush tubes, tagged by step: `step,e1..,a1..,delta`.
    pub fn write_bushes_csv(&self, out: &mut impl Write) -> Result<()> {
        let header: Vec<String> = std::iter::once("step".to_string())
            .chain((1..=N).map(|i| format!("e{i}")))
            .chain((1..=N).map(|i| format!("a{i}")))
            .chain(["delta".to_string()])
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for (i, b) in self.bushes.iter().enumerate() {
            for t in &b.tubes {
                let vals: Vec<String> = t
                    .dir
                    .coords()
                    .iter()
                    .chain(&t.midpoint)
                    .chain(std::iter::once(&t.radius))
                    .map(|v| format!("{v:.16e}"))
                    .collect();
                writeln!(out, "{i},{}", vals.join(","))?;
            }
        }
        Ok(())
    }
}

/// Empirical box dimension of a finite set at scale `δ`:
/// `log N_δ / log(1/δ)` with `N_δ` the number of `δ/3`-balls covering it.
pub fn empirical_dimension<const N: usize>(a: &MidpointSet<N>, delta: f64) -> f64 {
    let side = cell_side(N, delta);
    let cells: std::collections::HashSet<[i64; N]> =
        a.points.iter().map(|p| std::array::from_fn(|i| (p[i] / side).floor() as i64)).collect();
    (cells.len() as f64).ln() / (1.0 / delta).ln()
}

/// `(1/ε₀)·|E|·δ^(-s)·λ^(-n)` with all implicit constants set to 1.
pub fn stopping_bound(epsilon0: f64, e_measure: f64, delta: f64, s: f64, lambda: f64, n: usize) -> f64 {
    e_measure * delta.powf(-s) * lambda.powi(-(n as i32)) / epsilon0
}

/// Runs the decomposition. The iteration cap is ten times the stopping
/// bound evaluated with the empirical dimension of `A` at scale `δ`, but
/// never less than the number of net directions: pruning to `10δ/λ`
/// separation leaves bushes far smaller than the direction set, a factor
/// the bound's unit constants do not see. Reaching the cap is an error.
pub fn decompose<const N: usize>(
    e: &VoxelSet<N>,
    a: &MidpointSet<N>,
    net: &SphericalNet<N>,
    delta: f64,
    lambda: f64,
    params: &BushParams,
) -> Result<BushDecomposition<N>> {
    check_lambda(lambda)?;
    let initial_measure = e.measure();
    let mut report = BushDecomposition {
        bushes: Vec::new(),
        residual: e.clone(),
        level_measures: Vec::new(),
        captured: Vec::new(),
        bush_measures: Vec::new(),
        epsilon0: 0.0,
        stopped: true,
        delta,
        lambda,
        initial_measure,
        max_iter: 0,
        trivial_bound_ratio: None,
    };
    if lambda <= delta {
        report.trivial_bound_ratio = Some(initial_measure / (lambda * delta.powi(N as i32 - 1)));
        return Ok(report);
    }
    let mut prof = restricted_maximal_profile(e, a, delta, net)?;
    let eps0 = level_set_measure(&prof, lambda).measure_estimate;
    report.epsilon0 = eps0;
    report.level_measures.push(eps0);
    if eps0 == 0.0 {
        return Ok(report);
    }
    let bound = stopping_bound(eps0, initial_measure, delta, empirical_dimension(a, delta), lambda, N);
    let max_iter = ((10.0 * bound).ceil() as usize).max(net.len()).max(1);
    report.max_iter = max_iter;
    let mut threshold = lambda;
    let mut cache = AverageCache::new(net.len());
    loop {
        let Some(bush) = extract_from_profile(&prof, a, threshold, lambda, params)? else {
            break;
        };
        let grid_bush = bush.voxels(&report.residual);
        report.captured.push(
            report.residual.intersection_count(&grid_bush)? as f64 * report.residual.grid().cell_volume(),
        );
        report.bush_measures.push(grid_bush.measure());
        report.residual.difference_with(&grid_bush)?;
        report.bushes.push(bush);
        if report.bushes.len() > max_iter {
            return Err(Error::Inconsistent(format!(
                "decomposition exceeded its iteration cap of {max_iter}"
            )));
        }
        threshold = lambda / 2.0;
        prof = refresh_profile(&prof, &report.residual, threshold, &mut cache)?;
        let level = level_set_measure(&prof, threshold).measure_estimate;
        report.level_measures.push(level);
        if level < eps0 / 4.0 {
            return Ok(report);
        }
    }
    report.stopped = false;
    Ok(report)
}

/// Result of checking `m ≤ C·bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingCheck {
    pub m: usize,
    pub bound: f64,
    pub constant: f64,
    pub pass: bool,
}

/// Compares the number of bushes with the stopping bound for declared
/// dimension `s` and suite constant `constant`.
pub fn verify_stopping_bound<const N: usize>(
    d: &BushDecomposition<N>,
    e_measure: f64,
    s: &Rational,
    constant: f64,
) -> Result<StoppingCheck> {
    if !d.stopped {
        return Err(Error::Precondition("decomposition did not stop".to_string()));
    }
    let m = d.m();
    if m == 0 {
        return Ok(StoppingCheck { m, bound: 0.0, constant, pass: true });
    }
    let bound = stopping_bound(d.epsilon0, e_measure, d.delta, to_f64(s), d.lambda, N);
    log::info!("stopping bound: m = {m}, bound = {bound:.4}, m/bound = {:.4}", m as f64 / bound);
    Ok(StoppingCheck { m, bound, constant, pass: m as f64 <= constant * bound })
}

/// `|E ∩ B| / (λ|B|)` and whether it clears the threshold.
pub fn check_bush_density<const N: usize>(b: &Bush<N>, e: &VoxelSet<N>, threshold: f64) -> Result<(f64, bool)> {
    let vox = b.voxels(e);
    let bush = vox.measure();
    if bush == 0.0 {
        return Ok((0.0, false));
    }
    let inter = e.intersection_count(&vox)? as f64 * e.grid().cell_volume();
    let ratio = inter / (b.lambda * bush);
    Ok((ratio, ratio >= threshold))
}

/// Whether the cores `E ∩ T_k \ B(anchor, cλ)` are pairwise disjoint at
/// the voxel level.
pub fn check_disjoint_cores<const N: usize>(b: &Bush<N>, e: &VoxelSet<N>, c: f64) -> bool {
    let r_sq = (c * b.lambda).powi(2);
    let grid = *e.grid();
    let mut cells: Vec<usize> = Vec::new();
    for t in &b.tubes {
        let (spans, _) = grid.spans(t);
        for span in spans {
            for k in span {
                if e.is_occupied(&grid.unlinear(k)) && dist_sq(&grid.center(&grid.unlinear(k)), &b.anchor) > r_sq {
                    cells.push(k);
                }
            }
        }
    }
    cells.sort_unstable();
    cells.windows(2).all(|w| w[0] != w[1])
}
