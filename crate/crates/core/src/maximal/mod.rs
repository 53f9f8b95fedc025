//! Restricted and unrestricted Kakeya maximal functions of voxelized sets,
//! their level sets and weak-type norms, and the discrete tube-sum norm.

mod tube_sum;

use std::io::Write;

use rayon::prelude::*;

use crate::bounds::{to_f64, Rational};
use crate::error::{domain, precondition, Result};
use crate::geometry::{sphere_area, BoundingBox, Point, SphericalNet, Tube, VoxelSet};

pub use tube_sum::{check_separated, tube_sum_norm, tube_sum_field};

/// A finite midpoint set `A` together with the box dimension it is meant
/// to model.
#[derive(Debug, Clone, PartialEq)]
pub struct MidpointSet<const N: usize> {
    pub points: Vec<Point<N>>,
    pub declared_dim: Rational,
}

impl<const N: usize> MidpointSet<N> {
    pub fn new(points: Vec<Point<N>>, declared_dim: Rational) -> Result<Self> {
        if points.is_empty() {
            return precondition("midpoint set is empty".to_string());
        }
        Ok(Self { points, declared_dim })
    }

    pub fn single(point: Point<N>) -> Self {
        Self { points: vec![point], declared_dim: Rational::from_integer(0.into()) }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn check_inside(&self, bbox: &BoundingBox<N>) -> Result<()> {
        match self.points.iter().position(|p| !bbox.contains(p)) {
            Some(i) => precondition(format!("midpoint {i} {:?} lies outside the box", self.points[i])),
            None => Ok(()),
        }
    }
}

/// Values of a maximal function on the directions of a net.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalProfile<const N: usize> {
    pub net: SphericalNet<N>,
    /// One value in `[0, 1]` per net direction.
    pub values: Vec<f64>,
    /// Midpoint achieving each value (first one on ties).
    pub witnesses: Vec<Point<N>>,
    pub delta: f64,
    pub restricted_to: Option<MidpointSet<N>>,
}

/// `|E ∩ T| / |T|` with both measured in cells of `e`'s lattice; the
/// denominator counts the whole tube, not just the part inside the box.
pub fn tube_average<const N: usize>(e: &VoxelSet<N>, tube: &Tube<N>) -> f64 {
    let (spans, clipped) = e.grid().spans(tube);
    let hit: usize = spans.iter().map(|r| e.count_range(r.clone())).sum();
    if hit == 0 {
        return 0.0;
    }
    // Unclipped, the spans are exactly the tube's lattice cells.
    let total = if clipped { e.grid().lattice_count(tube) } else { spans.iter().map(|r| r.len()).sum() };
    hit as f64 / total as f64
}

/// Whether a tube with this midpoint and radius can meet `occupied`.
fn may_meet<const N: usize>(a: &Point<N>, reach: f64, occupied: &(Point<N>, Point<N>)) -> bool {
    (0..N).all(|i| a[i] >= occupied.0[i] - reach && a[i] <= occupied.1[i] + reach)
}

fn check_grid<const N: usize>(e: &VoxelSet<N>, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("δ = {delta} must lie in (0, 1)"));
    }
    if e.h() > delta / 4.0 * (1.0 + 1e-12) {
        return precondition(format!("cell size {} exceeds δ/4 = {}", e.h(), delta / 4.0));
    }
    Ok(())
}

/// `max_a |E ∩ T_e(a)| / |T_e(a)|` over `candidates`, with its witness.
fn sup_over<const N: usize>(
    e: &VoxelSet<N>,
    dir: &crate::geometry::Direction<N>,
    candidates: &[Point<N>],
    delta: f64,
    occupied: Option<&(Point<N>, Point<N>)>,
) -> (f64, Point<N>) {
    let mut best = (0.0, candidates[0]);
    let Some(occ) = occupied else {
        return best;
    };
    let reach = 0.5 + 2.0 * delta;
    for a in candidates {
        if !may_meet(a, reach, occ) {
            continue;
        }
        let tube = Tube { dir: *dir, midpoint: *a, radius: delta };
        let v = tube_average(e, &tube);
        if v > best.0 {
            best = (v, *a);
            if v >= 1.0 {
                break;
            }
        }
    }
    best
}

fn profile_over<const N: usize>(
    e: &VoxelSet<N>,
    candidates: &[Point<N>],
    delta: f64,
    net: &SphericalNet<N>,
    restricted_to: Option<MidpointSet<N>>,
) -> MaximalProfile<N> {
    let occupied = e.occupied_aabb();
    let pairs: Vec<(f64, Point<N>)> = net
        .dirs
        .par_iter()
        .map(|d| sup_over(e, d, candidates, delta, occupied.as_ref()))
        .collect();
    let (values, witnesses) = pairs.into_iter().unzip();
    MaximalProfile { net: net.clone(), values, witnesses, delta, restricted_to }
}

/// The restricted maximal function `sup_{a ∈ A} |E ∩ T_e(a)| / |T_e(a)|`
/// on each net direction. The grid must satisfy `h ≤ δ/4`.
pub fn restricted_maximal_profile<const N: usize>(
    e: &VoxelSet<N>,
    a: &MidpointSet<N>,
    delta: f64,
    net: &SphericalNet<N>,
) -> Result<MaximalProfile<N>> {
    check_grid(e, delta)?;
    if a.is_empty() {
        return precondition("midpoint set is empty".to_string());
    }
    check_net(net, delta)?;
    Ok(profile_over(e, &a.points, delta, net, Some(a.clone())))
}

/// Tube averages `|E ∩ T_e(a)| / |T_e(a)|` for every candidate `a`, kept
/// per direction so that later profiles of subsets of `E` can be computed
/// by branch and bound: an average over a subset never exceeds the stored
/// one.
#[derive(Debug, Clone)]
pub struct AverageCache {
    rows: Vec<Option<Vec<f64>>>,
}

impl AverageCache {
    pub fn new(directions: usize) -> Self {
        Self { rows: vec![None; directions] }
    }
}

fn all_averages<const N: usize>(
    e: &VoxelSet<N>,
    dir: &crate::geometry::Direction<N>,
    candidates: &[Point<N>],
    delta: f64,
    occupied: Option<&(Point<N>, Point<N>)>,
) -> Vec<f64> {
    let reach = 0.5 + 2.0 * delta;
    candidates
        .iter()
        .map(|a| match occupied {
            Some(occ) if may_meet(a, reach, occ) => {
                tube_average(e, &Tube { dir: *dir, midpoint: *a, radius: delta })
            }
            _ => 0.0,
        })
        .collect()
}

/// Best value and lowest-index witness over `row`, refreshing entries on
/// `e` in decreasing order of their stored bound.
fn bounded_sup<const N: usize>(
    e: &VoxelSet<N>,
    dir: &crate::geometry::Direction<N>,
    candidates: &[Point<N>],
    delta: f64,
    row: &mut [f64],
) -> (f64, usize) {
    let mut order: Vec<usize> = (0..row.len()).filter(|&k| row[k] > 0.0).collect();
    order.sort_by(|&x, &y| row[y].total_cmp(&row[x]).then(x.cmp(&y)));
    let mut best = (0.0, 0usize);
    for k in order {
        if row[k] < best.0 || (row[k] == best.0 && k > best.1) {
            break;
        }
        let v = tube_average(e, &Tube { dir: *dir, midpoint: candidates[k], radius: delta });
        row[k] = v;
        if v > best.0 || (v == best.0 && v > 0.0 && k < best.1) {
            best = (v, k);
        }
    }
    best
}

/// Recomputes a restricted profile `prof` on a subset `e` of the set it
/// was computed on. Directions already at or below `threshold` keep their
/// old value, an upper bound, without being recomputed; the others are
/// exact. `cache` must have been used only with supersets of `e` and the
/// same net and midpoints.
pub fn refresh_profile<const N: usize>(
    prof: &MaximalProfile<N>,
    e: &VoxelSet<N>,
    threshold: f64,
    cache: &mut AverageCache,
) -> Result<MaximalProfile<N>> {
    let Some(a) = prof.restricted_to.as_ref() else {
        return precondition("refresh_profile needs a restricted profile".to_string());
    };
    check_grid(e, prof.delta)?;
    if cache.rows.len() != prof.net.len() {
        return precondition(format!("cache has {} rows for {} directions", cache.rows.len(), prof.net.len()));
    }
    let occupied = e.occupied_aabb();
    let delta = prof.delta;
    let results: Vec<(f64, Point<N>)> = prof
        .net
        .dirs
        .par_iter()
        .zip(cache.rows.par_iter_mut())
        .enumerate()
        .map(|(i, (d, row))| {
            if prof.values[i] <= threshold {
                return (prof.values[i], prof.witnesses[i]);
            }
            let row = row.get_or_insert_with(|| all_averages(e, d, &a.points, delta, occupied.as_ref()));
            let (v, k) = bounded_sup(e, d, &a.points, delta, row);
            (v, a.points[k])
        })
        .collect();
    let (values, witnesses) = results.into_iter().unzip();
    Ok(MaximalProfile { net: prof.net.clone(), values, witnesses, delta, restricted_to: prof.restricted_to.clone() })
}

fn check_net<const N: usize>(net: &SphericalNet<N>, delta: f64) -> Result<()> {
    if (net.separation - delta).abs() > 1e-12 * delta {
        return precondition(format!("net separation {} differs from δ = {delta}", net.separation));
    }
    Ok(())
}

/// Midpoints `lo + j·step` of the grid box, for every integer vector `j`.
pub fn midpoint_lattice<const N: usize>(bbox: &BoundingBox<N>, step: f64) -> Result<Vec<Point<N>>> {
    if !(step > 0.0) {
        return domain(format!("lattice step {step} must be positive"));
    }
    let counts: [usize; N] =
        std::array::from_fn(|i| ((bbox.hi[i] - bbox.lo[i]) / step * (1.0 + 1e-12)).floor() as usize + 1);
    let total: usize = counts.iter().product();
    if total > 50_000_000 {
        return domain(format!("lattice of {total} points is too large"));
    }
    let mut out = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut p = [0.0; N];
        for i in (0..N).rev() {
            p[i] = bbox.lo[i] + (k % counts[i]) as f64 * step;
            k /= counts[i];
        }
        out.push(p);
    }
    Ok(out)
}

/// The unrestricted maximal function, with the supremum over `a ∈ R^n`
/// replaced by a lattice of the given step over the grid box. Midpoints
/// whose tubes cannot reach the occupied cells are skipped.
pub fn unrestricted_maximal_profile<const N: usize>(
    e: &VoxelSet<N>,
    delta: f64,
    net: &SphericalNet<N>,
    lattice_step: f64,
) -> Result<MaximalProfile<N>> {
    check_grid(e, delta)?;
    check_net(net, delta)?;
    if lattice_step > delta / 2.0 * (1.0 + 1e-12) {
        return precondition(format!("lattice step {lattice_step} exceeds δ/2"));
    }
    let lattice = midpoint_lattice(&e.grid().bbox(), lattice_step)?;
    if lattice.is_empty() {
        return domain("midpoint lattice is empty".to_string());
    }
    let lattice = match e.occupied_aabb() {
        Some(occ) => {
            let near: Vec<Point<N>> =
                lattice.iter().copied().filter(|a| may_meet(a, 0.5 + 2.0 * delta, &occ)).collect();
            if near.is_empty() { lattice } else { near }
        }
        None => lattice,
    };
    Ok(profile_over(e, &lattice, delta, net, None))
}

/// Level set `{e : value(e) > λ}` of a profile, measured by equal-mass
/// quadrature on the net.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSetReport {
    pub lambda: f64,
    pub direction_count: usize,
    pub measure_estimate: f64,
}

pub fn level_set_measure<const N: usize>(prof: &MaximalProfile<N>, lambda: f64) -> LevelSetReport {
    let direction_count = prof.values.iter().filter(|&&v| v > lambda).count();
    LevelSetReport {
        lambda,
        direction_count,
        measure_estimate: direction_count as f64 * prof.net.direction_weight(),
    }
}

/// Weak `L^{q,∞}` norm and the level at which the supremum is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakNorm {
    pub norm: f64,
    pub lambda_star: f64,
}

pub const WEAK_NORM_LEVELS: usize = 64;

/// `sup_λ λ·|{value ≥ λ}|^{1/q}` over 64 geometric levels between the
/// smallest positive value and the largest value.
pub fn weak_norm<const N: usize>(prof: &MaximalProfile<N>, q: &Rational) -> Result<WeakNorm> {
    let qf = to_f64(q);
    if !(qf >= 1.0) {
        return domain(format!("weak norm exponent q = {q} must be at least 1"));
    }
    let positive = prof.values.iter().copied().filter(|&v| v > 0.0);
    let (lo, hi) = positive.fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(v), h.max(v)));
    if hi == 0.0 {
        return Ok(WeakNorm { norm: 0.0, lambda_star: 0.0 });
    }
    let mut sorted = prof.values.clone();
    sorted.sort_by(f64::total_cmp);
    let weight = prof.net.direction_weight();
    let mut best = WeakNorm { norm: 0.0, lambda_star: hi };
    for k in 0..WEAK_NORM_LEVELS {
        let lambda = if k + 1 == WEAK_NORM_LEVELS {
            hi
        } else {
            lo * (hi / lo).powf(k as f64 / (WEAK_NORM_LEVELS - 1) as f64)
        };
        let at_least = sorted.len() - sorted.partition_point(|&v| v < lambda);
        let norm = lambda * (at_least as f64 * weight).powf(1.0 / qf);
        if norm > best.norm {
            best = WeakNorm { norm, lambda_star: lambda };
        }
    }
    Ok(best)
}

/// One row of a weak-norm scaling report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakNormRow {
    pub delta: f64,
    pub norm: f64,
    pub lambda_star: f64,
}

pub fn write_weak_norm_csv(rows: &[WeakNormRow], out: &mut impl Write) -> Result<()> {
    writeln!(out, "delta,norm,lambda_star")?;
    for r in rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", r.delta, r.norm, r.lambda_star)?;
    }
    Ok(())
}

impl<const N: usize> MaximalProfile<N> {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `e1,...,en,value` per direction.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        let header: Vec<String> = (1..=N).map(|i| format!("e{i}")).chain(["value".into()]).collect();
        writeln!(out, "{}", header.join(","))?;
        for (d, v) in self.net.dirs.iter().zip(&self.values) {
            let mut row: Vec<String> = d.coords().iter().map(|c| format!("{c:.16e}")).collect();
            row.push(format!("{v:.16e}"));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Sphere measure used by the level-set quadrature.
pub fn total_sphere_measure(n: usize) -> f64 {
    sphere_area(n)
}
