//! `kakeya experiment`: one A-restricted Kakeya set, end to end.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use kakeya_core::bounds::{best_lower_bound, format_exact, int, to_f64, BaseEstimateLibrary};
use kakeya_core::bounds::rational::from_f64_on_grid;
use kakeya_core::bush::{decompose, empirical_dimension, verify_stopping_bound, BushParams};
use kakeya_core::fractals::{box_dimension_fit, build_restricted_kakeya, generate, write_midpoints_csv};
use kakeya_core::geometry::{greedy_net, BoundingBox};
use kakeya_core::maximal::{restricted_maximal_profile, weak_norm, write_weak_norm_csv, WeakNormRow};
use kakeya_core::rng::sub_seed;

use crate::config::ExperimentConfig;
use crate::CliError;

/// Constant used when checking the decomposition length against the
/// stopping bound.
pub const STOPPING_CONSTANT: f64 = kakeya_core::suites::STOPPING_CONSTANT;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    Ok(BufWriter::new(file))
}

fn write_with(
    dir: &Path,
    name: &str,
    f: impl FnOnce(&mut BufWriter<File>) -> kakeya_core::error::Result<()>,
) -> Result<(), CliError> {
    let mut w = create(dir, name)?;
    f(&mut w)?;
    w.flush().map_err(|e| CliError::Io(format!("cannot write {name}: {e}")))?;
    Ok(())
}

/// Runs the experiment into `out` and returns the summary text.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<String, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
    match cfg.n {
        2 => run::<2>(cfg, out),
        3 => run::<3>(cfg, out),
        4 => run::<4>(cfg, out),
        n => Err(CliError::Usage(format!("n = {n} must be 2, 3 or 4"))),
    }
}

/// Weak-norm rows at δ, 2δ and 4δ (those not above 1/8), coarsest first.
fn weak_norm_ladder<const N: usize>(cfg: &ExperimentConfig, bbox: &BoundingBox<N>) -> Result<Vec<WeakNormRow>, CliError> {
    let q = int(N as i64);
    let mut rows = Vec::new();
    for j in (0..=2).rev() {
        let delta = cfg.delta * f64::from(1u32 << j);
        if delta > 0.125 {
            continue;
        }
        let a = generate::<N>(&cfg.spec, delta, bbox)?;
        let net = greedy_net::<N>(delta, sub_seed(cfg.seed, &format!("net/{j}")))?;
        let h = delta / cfg.grid as f64;
        let k = build_restricted_kakeya(&a, &net, delta, bbox, h, cfg.assignment, sub_seed(cfg.seed, &format!("assignment/{j}")))?;
        let prof = restricted_maximal_profile(&k.set, &a, delta, &net)?;
        let w = weak_norm(&prof, &q)?;
        rows.push(WeakNormRow { delta, norm: w.norm, lambda_star: w.lambda_star });
    }
    Ok(rows)
}

fn run<const N: usize>(cfg: &ExperimentConfig, out: &Path) -> Result<String, CliError> {
    let delta = cfg.delta;
    let bbox = BoundingBox::<N>::centered_cube(cfg.box_half_width);
    std::fs::write(out.join("config.txt"), cfg.without_output().to_string())
        .map_err(|e| CliError::Io(format!("cannot write config.txt: {e}")))?;

    let a = generate::<N>(&cfg.spec, delta, &bbox)?;
    write_with(out, "midpoints.csv", |w| write_midpoints_csv(&a, w))?;
    log::info!("generated {} midpoints", a.len());
    // The finest rung of the weak-norm ladder reuses these seeds.
    let net = greedy_net::<N>(delta, sub_seed(cfg.seed, "net/0"))?;
    write_with(out, "net.csv", |w| net.write_csv(w))?;
    let k = build_restricted_kakeya(&a, &net, delta, &bbox, cfg.cell_size(), cfg.assignment, sub_seed(cfg.seed, "assignment/0"))?;
    write_with(out, "kakeya.vox", |w| k.set.write_rle(w))?;
    log::info!("K_A over {} directions: {} voxels", net.len(), k.set.count());
    let prof = restricted_maximal_profile(&k.set, &a, delta, &net)?;
    write_with(out, "profile.csv", |w| prof.write_csv(w))?;

    let ladder = weak_norm_ladder::<N>(cfg, &bbox)?;
    write_with(out, "weak_norm.csv", |w| write_weak_norm_csv(&ladder, w))?;
    log::info!("weak-norm ladder done, decomposing at lambda = {}", cfg.lambda);

    let d = decompose(&k.set, &a, &net, delta, cfg.lambda, &BushParams::default())?;
    write_with(out, "decomposition.csv", |w| d.write_csv(w))?;
    write_with(out, "bushes.csv", |w| d.write_bushes_csv(w))?;

    let s_delta = empirical_dimension(&a, delta).clamp(0.0, N as f64);
    let s_exact = from_f64_on_grid(s_delta, 1 << 10);
    let stopping = if d.stopped && d.trivial_bound_ratio.is_none() {
        Some(verify_stopping_bound(&d, k.set.measure(), &s_exact, STOPPING_CONSTANT)?)
    } else {
        None
    };

    let scales: Vec<f64> = (0..=4).rev().map(|j| delta * f64::from(1u32 << j)).filter(|&s| s <= 0.5).collect();
    let fit = box_dimension_fit(&k.set.occupied_centers(), &scales)?;
    write_with(out, "dimension_fit.csv", |w| fit.write_csv(w))?;

    let lib = BaseEstimateLibrary::standard();
    let bound = best_lower_bound(N as u32, &s_exact, &lib)?;
    let declared = a.declared_dim.clone();
    let declared_bound = best_lower_bound(N as u32, &declared, &lib)?;

    let mut s = String::new();
    let _ = writeln!(s, "restricted Kakeya experiment");
    let _ = writeln!(s, "n = {N}, delta = {delta:?}, lambda = {:?}, cell = {:?}", cfg.lambda, cfg.cell_size());
    let _ = writeln!(s, "spec = {}, assignment = {}, seed = {}", cfg.spec, cfg.assignment, cfg.seed);
    let _ = writeln!(s, "midpoints: {} points, target dimension {:.6}, declared {}", a.len(), cfg.spec.target_dim(N), format_exact(&declared));
    let _ = writeln!(s, "empirical dimension s_delta = {s_delta:.6} (used as {})", format_exact(&s_exact));
    let _ = writeln!(s, "net: {} directions, separation {:?}", net.len(), net.separation);
    let _ = writeln!(s, "K_A: {} voxels, measure {:.6e}", k.set.count(), k.set.measure());
    let _ = writeln!(s, "maximal profile: max {:.6}", prof.max_value());
    for r in &ladder {
        let _ = writeln!(s, "weak norm q = {N} at delta {:?}: {:.6e} (lambda* {:.6})", r.delta, r.norm, r.lambda_star);
    }
    match (&d.trivial_bound_ratio, &stopping) {
        (Some(ratio), _) => {
            let _ = writeln!(s, "decomposition: lambda <= delta, trivial bound ratio {ratio:.6}");
        }
        (None, Some(st)) => {
            let _ = writeln!(
                s,
                "decomposition: m = {}, epsilon0 = {:.6e}, stopping bound {:.6e}, m/bound {:.6}, m <= {}*bound {}",
                st.m,
                d.epsilon0,
                st.bound,
                if st.bound > 0.0 { st.m as f64 / st.bound } else { 0.0 },
                st.constant,
                if st.pass { "holds" } else { "fails" }
            );
        }
        (None, None) => {
            let _ = writeln!(s, "decomposition: m = {}, did not stop", d.m());
        }
    }
    let _ = writeln!(s, "box-counting fit: slope {:.6}, r2 {:.6}, over {} scales", fit.slope, fit.r2, fit.scales.len());
    let _ = writeln!(s, "lower bound at s_delta: {} (= {:.6})", format_exact(&bound), to_f64(&bound));
    let _ = writeln!(s, "lower bound at declared dimension: {} (= {:.6})", format_exact(&declared_bound), to_f64(&declared_bound));
    let _ = writeln!(s, "fit minus bound at s_delta: {:+.6}", fit.slope - to_f64(&bound));
    std::fs::write(out.join("summary.txt"), &s).map_err(|e| CliError::Io(format!("cannot write summary.txt: {e}")))?;
    Ok(s)
}
