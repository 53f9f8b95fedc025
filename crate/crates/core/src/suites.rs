//! Finite-δ verification experiments behind `kakeya verify`.
//!
//! Each suite returns its raw measurements together with a rendered
//! pass/fail report. All randomness is derived from the caller's seed
//! through named sub-seeds.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bounds::rational::from_f64_on_grid;
use crate::bounds::int;
use crate::bush::{
    check_bush_density, check_disjoint_cores, decompose, empirical_dimension, fixtures, verify_stopping_bound,
    BushParams, StoppingCheck,
};
use crate::error::{domain, Result};
use crate::fractals::{
    box_dimension_fit, build_restricted_kakeya, generate, geometric_scales, AssignmentRule, DimensionFit,
    FractalSpec,
};
use crate::geometry::{
    exact_planar_intersection, greedy_net, intersection_stats, projective_net, random_crossing_pair, tube_volume,
    BoundingBox, Direction, Point, Tube, VoxelGrid, VoxelSet, DEFAULT_SAMPLES,
};
use crate::maximal::{restricted_maximal_profile, tube_sum_field, weak_norm, MidpointSet, WeakNormRow};
use crate::rng::{named_stream, sub_seed};
use crate::stats::scaling_slope;

pub const SUITE_NAMES: [&str; 5] = ["tubes", "cordoba", "bush", "boxdim", "maximal"];

/// Half-width of the experiment box.
pub const BOX_HALF_WIDTH: f64 = 1.25;

/// Constant `C` in `m ≤ C·bound` for the stopping check.
pub const STOPPING_CONSTANT: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub table: Vec<String>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut s = format!("suite {}\n", self.name);
        for line in &self.table {
            let _ = writeln!(s, "  {line}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(s, "{} {}", if self.passed() { "PASS" } else { "FAIL" }, self.name);
        s
    }
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.to_string(), pass, detail }
}

fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    hi / lo
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "tubes" => Ok(tubes_suite(seed)?.report()),
        "cordoba" => Ok(cordoba_suite(seed)?.report()),
        "bush" => Ok(bush_suite(seed)?.report()),
        "boxdim" => Ok(boxdim_suite()?.report()),
        "maximal" => Ok(maximal_suite(seed)?.report()),
        other => domain(format!("unknown suite `{other}` (expected one of {})", SUITE_NAMES.join(", "))),
    }
}

// ---- tube intersections ----

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeConstants {
    pub n: usize,
    pub delta: f64,
    pub pairs: usize,
    /// `max measure·(θ + δ)/δⁿ` over the pairs.
    pub measure_constant: f64,
    /// `max diameter·(θ + δ)/δ` over the pairs.
    pub diameter_constant: f64,
}

/// Largest measure and diameter constants over `pairs` random crossing
/// pairs.
pub fn tube_constants<const N: usize>(delta: f64, pairs: usize, samples: usize, seed: u64) -> Result<TubeConstants> {
    let tag = format!("tubes/n{N}/delta{delta:e}");
    let mut rng = named_stream(seed, &tag);
    let list: Vec<(Tube<N>, Tube<N>)> =
        (0..pairs).map(|_| random_crossing_pair(delta, &mut rng)).collect::<Result<_>>()?;
    let stats = list
        .par_iter()
        .enumerate()
        .map(|(k, (a, b))| intersection_stats(a, b, samples, sub_seed(seed, &format!("{tag}/pair{k}"))))
        .collect::<Result<Vec<_>>>()?;
    let measure_constant = stats.iter().map(|s| s.measure_constant(N, delta)).fold(0.0, f64::max);
    let diameter_constant = stats.iter().map(|s| s.diameter_constant(delta)).fold(0.0, f64::max);
    Ok(TubeConstants { n: N, delta, pairs, measure_constant, diameter_constant })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeSuite {
    pub rows: Vec<TubeConstants>,
}

pub const TUBE_DELTAS: [f64; 2] = [1.0 / 32.0, 1.0 / 128.0];

pub fn tubes_suite(seed: u64) -> Result<TubeSuite> {
    let mut rows = Vec::new();
    for &d in &TUBE_DELTAS {
        rows.push(tube_constants::<2>(d, 200, DEFAULT_SAMPLES, seed)?);
    }
    for &d in &TUBE_DELTAS {
        rows.push(tube_constants::<3>(d, 200, DEFAULT_SAMPLES, seed)?);
    }
    Ok(TubeSuite { rows })
}

impl TubeSuite {
    /// Ratios `max/min` of the measure and diameter constants across δ.
    pub fn stability(&self, n: usize) -> (f64, f64) {
        let rows: Vec<&TubeConstants> = self.rows.iter().filter(|r| r.n == n).collect();
        let m: Vec<f64> = rows.iter().map(|r| r.measure_constant).collect();
        let d: Vec<f64> = rows.iter().map(|r| r.diameter_constant).collect();
        (spread(&m), spread(&d))
    }

    pub fn report(&self) -> SuiteReport {
        let mut table = vec!["n  delta       pairs  C_measure  C_diameter".to_string()];
        for r in &self.rows {
            table.push(format!(
                "{}  {:<10.3e}  {:<5}  {:<9.4}  {:.4}",
                r.n, r.delta, r.pairs, r.measure_constant, r.diameter_constant
            ));
        }
        let mut checks = Vec::new();
        for n in [2, 3] {
            let (m, d) = self.stability(n);
            checks.push(check(&format!("measure constant stable, n={n}"), m <= 2.0, format!("spread {m:.3} <= 2")));
            checks.push(check(&format!("diameter constant stable, n={n}"), d <= 2.0, format!("spread {d:.3} <= 2")));
        }
        SuiteReport { name: "tubes".into(), table, checks }
    }
}

// ---- Córdoba log factor ----

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CordobaRow {
    pub delta: f64,
    pub tubes: usize,
    /// `‖Σχ_T‖₂²` by voxel quadrature.
    pub l2_squared: f64,
    /// `Σ|T|` from the analytic volume.
    pub tube_mass: f64,
    /// `‖Σχ_T‖₂² / (log(1/δ)·Σ|T|)`.
    pub ratio: f64,
    /// `Σ_i Σ_j |T_i ∩ T_j|` from the exact planar clipper (caps ignored).
    pub pairwise_sum: f64,
}

/// The planar bush of a maximal δ-separated family of lines through the
/// origin.
pub fn cordoba_row(delta: f64, seed: u64) -> Result<CordobaRow> {
    let net = projective_net::<2>(delta, sub_seed(seed, &format!("cordoba/net/{delta:e}")))?;
    let tubes: Vec<Tube<2>> = net.dirs.iter().map(|d| Tube::new(*d, [0.0, 0.0], delta)).collect::<Result<_>>()?;
    crate::maximal::check_separated(&tubes)?;
    let half = 0.5 + 2.0 * delta;
    let grid = VoxelGrid::new(&BoundingBox::centered_cube(half), delta / 8.0)?;
    let field = tube_sum_field(&tubes, &grid);
    let l2_squared = field.lp_norm(2.0).powi(2);
    let tube_mass = tubes.len() as f64 * tube_volume(2, delta);
    let pairwise_sum: f64 = (0..tubes.len())
        .into_par_iter()
        .map(|i| tubes.iter().map(|t| exact_planar_intersection(&tubes[i], t)).sum::<f64>())
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(CordobaRow {
        delta,
        tubes: tubes.len(),
        l2_squared,
        tube_mass,
        ratio: l2_squared / ((1.0 / delta).ln() * tube_mass),
        pairwise_sum,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CordobaSuite {
    pub rows: Vec<CordobaRow>,
}

pub const CORDOBA_DELTAS: [f64; 4] = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0];

pub fn cordoba_suite(seed: u64) -> Result<CordobaSuite> {
    Ok(CordobaSuite { rows: CORDOBA_DELTAS.iter().map(|&d| cordoba_row(d, seed)).collect::<Result<_>>()? })
}

impl CordobaSuite {
    pub fn spread(&self) -> f64 {
        spread(&self.rows.iter().map(|r| r.ratio).collect::<Vec<_>>())
    }

    pub fn report(&self) -> SuiteReport {
        let mut table = vec!["delta       tubes  l2^2       pairwise   ratio".to_string()];
        for r in &self.rows {
            table.push(format!(
                "{:<10.3e}  {:<5}  {:<9.5}  {:<9.5}  {:.4}",
                r.delta, r.tubes, r.l2_squared, r.pairwise_sum, r.ratio
            ));
        }
        let s = self.spread();
        let worst = self
            .rows
            .iter()
            .map(|r| (r.l2_squared / r.pairwise_sum - 1.0).abs())
            .fold(0.0, f64::max);
        let checks = vec![
            check("log-factor ratio stable", s <= 4.0, format!("spread {s:.3} <= 4")),
            check(
                "voxel L2 agrees with pairwise clipper sum",
                worst <= 0.15,
                format!("worst relative gap {worst:.4} <= 0.15"),
            ),
        ];
        SuiteReport { name: "cordoba".into(), table, checks }
    }
}

// ---- bush decomposition ----

#[derive(Debug, Clone, PartialEq)]
pub struct BushFixtureResult {
    pub name: String,
    pub m: usize,
    pub expected_m: Option<usize>,
    pub anchors_ok: bool,
    pub min_density: f64,
    pub cores_disjoint: bool,
    pub separated: bool,
    pub telescoping: bool,
    pub empirical_s: f64,
    pub stopping: StoppingCheck,
}

impl BushFixtureResult {
    pub fn passed(&self) -> bool {
        self.expected_m.is_none_or(|m| m == self.m)
            && self.anchors_ok
            && self.min_density >= 0.25
            && self.cores_disjoint
            && self.separated
            && self.telescoping
            && self.stopping.pass
    }
}

pub const BUSH_DELTA: f64 = 1.0 / 64.0;
pub const BUSH_LAMBDA: f64 = 0.5;

fn run_bush_fixture(
    name: &str,
    e: &VoxelSet<2>,
    a: &MidpointSet<2>,
    net: &crate::geometry::SphericalNet<2>,
    anchors: Option<&[Point<2>]>,
    expected_m: Option<usize>,
) -> Result<BushFixtureResult> {
    let params = BushParams::default();
    let d = decompose(e, a, net, BUSH_DELTA, BUSH_LAMBDA, &params)?;
    let s = empirical_dimension(a, BUSH_DELTA);
    let stopping = verify_stopping_bound(&d, e.measure(), &from_f64_on_grid(s, 1 << 20), STOPPING_CONSTANT)?;
    let min_density = d.density_ratios().into_iter().fold(f64::INFINITY, f64::min);
    let anchors_ok = match anchors {
        Some(xs) => d.bushes.iter().all(|b| {
            xs.iter().any(|x| crate::geometry::vector::dist(x, &b.anchor) <= BUSH_DELTA)
        }),
        None => true,
    };
    // Cores and density are checked against the residual each bush was
    // extracted from.
    let mut residual = e.clone();
    let mut cores_disjoint = true;
    let mut separated = true;
    for b in &d.bushes {
        cores_disjoint &= check_disjoint_cores(b, &residual, params.c);
        separated &= b.len() < 2 || b.min_separation() > params.separation_factor * BUSH_DELTA / BUSH_LAMBDA;
        let (_, dense) = check_bush_density(b, &residual, params.density_threshold)?;
        separated &= dense;
        residual.difference_with(&b.voxels(&residual))?;
    }
    let telescoping = d.captured.iter().sum::<f64>() <= e.measure() * (1.0 + 1e-12);
    Ok(BushFixtureResult {
        name: name.to_string(),
        m: d.m(),
        expected_m,
        anchors_ok,
        min_density: if d.m() == 0 { 0.0 } else { min_density },
        cores_disjoint,
        separated,
        telescoping,
        empirical_s: s,
        stopping,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BushSuite {
    pub fixtures: Vec<BushFixtureResult>,
}

pub fn bush_suite(seed: u64) -> Result<BushSuite> {
    let delta = BUSH_DELTA;
    let net = greedy_net::<2>(delta, sub_seed(seed, "bush/net"))?;
    let bbox = BoundingBox::centered_cube(BOX_HALF_WIDTH);
    let h = delta / 4.0;
    let mut fixtures_out = Vec::new();

    let origin = [0.0, 0.0];
    let mut e = VoxelSet::new(&bbox, h)?;
    e.rasterize_tubes(&fixtures::separated_bush(&net, &origin, delta, BUSH_LAMBDA, 10.0)?)?;
    fixtures_out.push(run_bush_fixture("single bush", &e, &MidpointSet::single(origin), &net, Some(&[origin]), Some(1))?);

    let anchors = [[-0.6, 0.0], [0.6, 0.0]];
    let mut e = VoxelSet::new(&bbox, h)?;
    for x in &anchors {
        e.rasterize_tubes(&fixtures::separated_bush(&net, x, delta, BUSH_LAMBDA, 10.0)?)?;
    }
    let a = MidpointSet::new(anchors.to_vec(), int(0))?;
    fixtures_out.push(run_bush_fixture("two bushes", &e, &a, &net, Some(&anchors), Some(2))?);

    let lattice: Vec<Point<2>> = (0..16).map(|k| [-0.3 + 0.2 * (k / 4) as f64, -0.3 + 0.2 * (k % 4) as f64]).collect();
    let a = MidpointSet::new(lattice, int(0))?;
    let k = build_restricted_kakeya(&a, &net, delta, &bbox, h, AssignmentRule::Seeded, sub_seed(seed, "bush/lattice"))?;
    fixtures_out.push(run_bush_fixture("4x4 lattice", &k.set, &a, &net, None, None)?);
    Ok(BushSuite { fixtures: fixtures_out })
}

impl BushSuite {
    pub fn report(&self) -> SuiteReport {
        let mut table = vec!["fixture       m  s_delta  min_density  bound     m/bound".to_string()];
        let mut checks = Vec::new();
        for f in &self.fixtures {
            let ratio = if f.stopping.bound > 0.0 { f.m as f64 / f.stopping.bound } else { 0.0 };
            table.push(format!(
                "{:<12}  {}  {:<7.4}  {:<11.4}  {:<8.4}  {:.4}",
                f.name, f.m, f.empirical_s, f.min_density, f.stopping.bound, ratio
            ));
            let expect = f.expected_m.map_or("any".to_string(), |m| m.to_string());
            checks.push(check(
                &f.name,
                f.passed(),
                format!(
                    "m={} (expected {expect}), anchors {}, density {:.3} >= 0.25, cores {}, separation {}, \
                     m <= {}*bound {}",
                    f.m,
                    if f.anchors_ok { "ok" } else { "off" },
                    f.min_density,
                    if f.cores_disjoint { "disjoint" } else { "overlap" },
                    if f.separated { "ok" } else { "violated" },
                    f.stopping.constant,
                    if f.stopping.pass { "holds" } else { "fails" },
                ),
            ));
        }
        SuiteReport { name: "bush".into(), table, checks }
    }
}

// ---- box dimension ----

#[derive(Debug, Clone, PartialEq)]
pub struct BoxdimSuite {
    pub cantor: DimensionFit,
    pub segment: DimensionFit,
}

pub fn boxdim_suite() -> Result<BoxdimSuite> {
    let cube = BoundingBox::<1>::centered_cube(1.0);
    let spec = FractalSpec::CantorProduct { ratio: crate::bounds::rat(1, 3), axes: 1 };
    let cantor_set = generate::<1>(&spec, 3f64.powi(-10), &cube)?;
    let cantor = box_dimension_fit(&cantor_set.points, &geometric_scales(3f64.powi(-3), 1.0 / 3.0, 5))?;
    let segment_pts: Vec<Point<2>> = (0..=4096).map(|k| [-0.5 + k as f64 / 4096.0, 0.0]).collect();
    let segment = box_dimension_fit(&segment_pts, &geometric_scales(0.125, 0.5, 6))?;
    Ok(BoxdimSuite { cantor, segment })
}

impl BoxdimSuite {
    pub fn report(&self) -> SuiteReport {
        let target = 2f64.ln() / 3f64.ln();
        let mut table = Vec::new();
        for (name, fit) in [("cantor", &self.cantor), ("segment", &self.segment)] {
            let counts: Vec<String> = fit.counts.iter().map(|c| c.to_string()).collect();
            table.push(format!("{name}: counts [{}], slope {:.4}, r2 {:.4}", counts.join(", "), fit.slope, fit.r2));
        }
        let checks = vec![
            check(
                "Cantor slope",
                (self.cantor.slope - target).abs() <= 0.05,
                format!("{:.4} within 0.05 of {target:.4}", self.cantor.slope),
            ),
            check(
                "segment slope",
                (self.segment.slope - 1.0).abs() <= 0.05,
                format!("{:.4} within 0.05 of 1", self.segment.slope),
            ),
        ];
        SuiteReport { name: "boxdim".into(), table, checks }
    }
}

// ---- maximal function scaling ----

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub delta: f64,
    pub set_measure: f64,
    pub weak: WeakNormRow,
    /// `norm / |E|^(1/n)`.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalSuite {
    /// Box-counting fit of the point-restricted Kakeya set at the finest δ.
    pub kakeya_fit: DimensionFit,
    pub kakeya_rows: Vec<ScalingRow>,
    pub kakeya_slope: f64,
    pub tube_rows: Vec<ScalingRow>,
    pub tube_slope: f64,
}

pub const MAXIMAL_DELTAS: [f64; 4] = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0];

fn scaling_row(e: &VoxelSet<2>, a: &MidpointSet<2>, delta: f64, net: &crate::geometry::SphericalNet<2>) -> Result<ScalingRow> {
    let prof = restricted_maximal_profile(e, a, delta, net)?;
    let w = weak_norm(&prof, &int(2))?;
    let set_measure = e.measure();
    Ok(ScalingRow {
        delta,
        set_measure,
        weak: WeakNormRow { delta, norm: w.norm, lambda_star: w.lambda_star },
        normalized: w.norm / set_measure.sqrt(),
    })
}

/// Point-restricted Kakeya sets `K_{0}` in the plane: covering fit at the
/// finest δ and weak-norm scaling over δ; plus the same scaling for one
/// tube.
pub fn maximal_suite(seed: u64) -> Result<MaximalSuite> {
    let bbox = BoundingBox::centered_cube(BOX_HALF_WIDTH);
    let a = MidpointSet::single([0.0, 0.0]);
    let mut kakeya_rows = Vec::new();
    let mut tube_rows = Vec::new();
    let mut kakeya_fit = None;
    for &delta in &MAXIMAL_DELTAS {
        let net = greedy_net::<2>(delta, sub_seed(seed, &format!("maximal/net/{delta:e}")))?;
        let k = build_restricted_kakeya(&a, &net, delta, &bbox, delta / 4.0, AssignmentRule::Nearest, 0)?;
        kakeya_rows.push(scaling_row(&k.set, &a, delta, &net)?);
        if delta == MAXIMAL_DELTAS[MAXIMAL_DELTAS.len() - 1] {
            let pts = k.set.occupied_centers();
            kakeya_fit = Some(box_dimension_fit(&pts, &geometric_scales(16.0 * delta, 0.5, 5))?);
        }
        let mut single = VoxelSet::new(&bbox, delta / 4.0)?;
        let dir = Direction::new([1.0, 0.3])?;
        single.rasterize_tube(&Tube::new(dir, [0.0, 0.0], delta)?)?;
        tube_rows.push(scaling_row(&single, &a, delta, &net)?);
    }
    let slope = |rows: &[ScalingRow]| -> Result<f64> {
        let d: Vec<f64> = rows.iter().map(|r| r.delta).collect();
        let v: Vec<f64> = rows.iter().map(|r| r.normalized).collect();
        Ok(scaling_slope(&d, &v)?.slope)
    };
    Ok(MaximalSuite {
        kakeya_fit: kakeya_fit.expect("finest scale visited"),
        kakeya_slope: slope(&kakeya_rows)?,
        tube_slope: slope(&tube_rows)?,
        kakeya_rows,
        tube_rows,
    })
}

impl MaximalSuite {
    pub fn report(&self) -> SuiteReport {
        let mut table = vec!["set     delta       |E|        weak_norm  lambda*   normalized".to_string()];
        for (name, rows) in [("K_point", &self.kakeya_rows), ("tube", &self.tube_rows)] {
            for r in rows {
                table.push(format!(
                    "{name:<7} {:<10.3e}  {:<9.5}  {:<9.5}  {:<8.4}  {:.5}",
                    r.delta, r.set_measure, r.weak.norm, r.weak.lambda_star, r.normalized
                ));
            }
        }
        table.push(format!(
            "K_point box-counting slope {:.4} (r2 {:.4})",
            self.kakeya_fit.slope, self.kakeya_fit.r2
        ));
        let checks = vec![
            check(
                "K_point box dimension",
                self.kakeya_fit.slope >= 1.9,
                format!("{:.4} >= 1.9", self.kakeya_fit.slope),
            ),
            check(
                "K_point weak-norm slope",
                self.kakeya_slope.abs() <= 0.2,
                format!("{:.4} within 0.2 of 0", self.kakeya_slope),
            ),
            check(
                "single-tube weak-norm slope",
                self.tube_slope.abs() <= 0.15,
                format!("{:.4} within 0.15 of 0", self.tube_slope),
            ),
        ];
        SuiteReport { name: "maximal".into(), table, checks }
    }
}
