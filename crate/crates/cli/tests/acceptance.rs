//! Acceptance criteria 1 to 11. Each test prints one `PASS`/`FAIL` line
//! with its measurements and then asserts.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use kakeya_core::bounds::{
    best_lower_bound, dimension_bound_from_estimate, dual_exponent, int, piecewise_curve, rat,
    transfer_to_restricted, validate_necessary_condition, w_exponent, wolff, Affine, BaseEstimateLibrary, Rational,
};
use kakeya_core::suites::{bush_suite, boxdim_suite, cordoba_suite, maximal_suite, tubes_suite, STOPPING_CONSTANT};

const SEED: u64 = 7;

fn report(id: u32, pass: bool, elapsed: Duration, detail: &str) {
    println!("criterion {id:02} {} ({:.2} s): {detail}", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    assert!(pass, "criterion {id} failed: {detail}");
}

fn f(n: u32, s: Rational) -> Rational {
    best_lower_bound(n, &s, &BaseEstimateLibrary::standard()).unwrap()
}

#[test]
fn criterion_01_four_dimensional_curve() {
    let t = Instant::now();
    let curve = piecewise_curve(4, &BaseEstimateLibrary::standard()).unwrap();
    let values = [(int(0), int(4)), (rat(1, 2), rat(7, 2)), (int(2), rat(13, 5)), (int(3), int(2))];
    let mut ok = curve.breakpoints() == vec![rat(1, 2), int(3)];
    for (s, want) in &values {
        ok &= f(4, s.clone()) == *want && curve.evaluate(s).unwrap() == *want;
    }
    let el = t.elapsed();
    let bps: Vec<String> = curve.breakpoints().iter().map(|b| b.to_string()).collect();
    report(1, ok && el < Duration::from_secs(1), el, &format!("f(4,·) at 0, 1/2, 2, 3 exact; breakpoints {{{}}}", bps.join(", ")));
}

#[test]
fn criterion_02_ten_dimensional_curve() {
    let t = Instant::now();
    let curve = piecewise_curve(10, &BaseEstimateLibrary::standard()).unwrap();
    let mut ok = curve.breakpoints() == vec![int(3), int(9)];
    ok &= f(10, int(0)) == int(10) && f(10, int(3)) == int(7) && f(10, int(9)) == int(2);
    let interior = Affine::new(rat(19, 2), rat(-5, 6));
    ok &= curve.pieces().iter().any(|p| p.lo == int(3) && p.hi == int(9) && p.line == interior);
    let el = t.elapsed();
    let pieces: Vec<String> = curve.pieces().iter().map(|p| format!("[{}, {}]: {}", p.lo, p.hi, p.line)).collect();
    report(2, ok && el < Duration::from_secs(1), el, &pieces.join("; "));
}

/// Direct minimisation over integer fractions, compared by
/// cross-multiplication.
fn w_oracle(m: i128) -> (i128, i128) {
    let mut best: Option<(i128, i128)> = None;
    for t in 2..=m {
        let a = (2 * m, (m - 1) * m + (t - 1) * t);
        let b = (1, m + 1 - t);
        let hi = if a.0 * b.1 >= b.0 * a.1 { a } else { b };
        best = match best {
            Some(cur) if cur.0 * hi.1 <= hi.0 * cur.1 => Some(cur),
            _ => Some(hi),
        };
    }
    let (num, den) = best.unwrap();
    (num + den, den)
}

#[test]
fn criterion_03_w_exponent() {
    let t = Instant::now();
    let w9 = w_exponent(9).unwrap();
    let mut ok = w9 == rat(6, 5) && dual_exponent(&w9).unwrap() == int(6);
    let mut mismatches = Vec::new();
    for m in 2..=30u32 {
        let (num, den) = w_oracle(m as i128);
        if w_exponent(m).unwrap() != rat(num as i64, den as i64) {
            mismatches.push(m);
        }
    }
    ok &= mismatches.is_empty();
    let el = t.elapsed();
    report(3, ok && el < Duration::from_secs(1), el, &format!("w(9) = {w9}, dual {}; oracle mismatches {mismatches:?}", dual_exponent(&w9).unwrap()));
}

#[test]
fn criterion_04_transfer_identity() {
    let t = Instant::now();
    let mut ok = true;
    for k in 0..=32 {
        let s = rat(k, 8);
        let est = transfer_to_restricted(&wolff(), 4, &s).unwrap();
        ok &= est.p == rat(19, 5);
        ok &= *est.beta() == (int(1) + int(3) * &s) / int(19);
        ok &= dimension_bound_from_estimate(&est, 4) == rat(19, 5) - rat(3, 5) * &s;
    }
    report(4, ok, t.elapsed(), "p = 19/5, beta = (1+3s)/19, n - beta p = 19/5 - 3s/5 at s = k/8, k = 0..32");
}

#[test]
fn criterion_05_necessary_condition() {
    let t = Instant::now();
    let lib = BaseEstimateLibrary::standard();
    let failing: Vec<String> = lib.entries().iter().filter(|e| !validate_necessary_condition(e)).map(|e| e.source.clone()).collect();
    let w = wolff();
    let product = (int(1) + &w.h) * &w.p;
    let ok = failing.is_empty() && product == int(3);
    report(5, ok, t.elapsed(), &format!("{} catalog entries, failing {failing:?}; Wolff (1+h)p = {product}", lib.entries().len()));
}

#[test]
fn criterion_06_tube_intersection_constants() {
    let t = Instant::now();
    let suite = tubes_suite(SEED).unwrap();
    let el = t.elapsed();
    let mut ok = el < Duration::from_secs(120);
    let mut parts = Vec::new();
    for n in [2, 3] {
        let (m, d) = suite.stability(n);
        ok &= m <= 2.0 && d <= 2.0;
        let rows: Vec<String> = suite
            .rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| format!("δ={:.4}: C={:.3} C'={:.3}", r.delta, r.measure_constant, r.diameter_constant))
            .collect();
        parts.push(format!("n={n} [{}] spread {m:.3}/{d:.3}", rows.join(", ")));
    }
    report(6, ok, el, &parts.join("; "));
}

#[test]
fn criterion_07_cordoba_log_factor() {
    let t = Instant::now();
    let suite = cordoba_suite(SEED).unwrap();
    let el = t.elapsed();
    let spread = suite.spread();
    let ratios: Vec<String> = suite.rows.iter().map(|r| format!("{:.4}", r.ratio)).collect();
    report(7, spread <= 4.0 && el < Duration::from_secs(120), el, &format!("ratios [{}] over δ = 2^-5..2^-8, spread {spread:.3}", ratios.join(", ")));
}

#[test]
fn criterion_08_bush_decomposition() {
    let t = Instant::now();
    let suite = bush_suite(SEED).unwrap();
    let el = t.elapsed();
    let single = &suite.fixtures[0];
    let two = &suite.fixtures[1];
    let mut ok = single.m == 1 && single.min_density >= 0.25;
    ok &= two.m == 2 && two.anchors_ok;
    ok &= suite.fixtures.iter().all(|f| f.stopping.pass && f.stopping.constant == STOPPING_CONSTANT);
    ok &= el < Duration::from_secs(120);
    let logged: Vec<String> = suite
        .fixtures
        .iter()
        .map(|f| format!("{}: m={} bound={:.3} C=m/bound={:.3}", f.name, f.m, f.stopping.bound, f.m as f64 / f.stopping.bound))
        .collect();
    report(8, ok, el, &format!("single density {:.3}; {}; C pinned at {STOPPING_CONSTANT}", single.min_density, logged.join("; ")));
}

#[test]
fn criterion_09_box_dimension() {
    let t = Instant::now();
    let suite = boxdim_suite().unwrap();
    let el = t.elapsed();
    let target = 2f64.ln() / 3f64.ln();
    let ok = (suite.cantor.slope - target).abs() <= 0.05
        && (suite.segment.slope - 1.0).abs() <= 0.05
        && el < Duration::from_secs(30);
    report(9, ok, el, &format!("Cantor {:.4} (target {target:.4}), segment {:.4}", suite.cantor.slope, suite.segment.slope));
}

#[test]
fn criterion_10_point_restricted_kakeya() {
    let t = Instant::now();
    let suite = maximal_suite(SEED).unwrap();
    let el = t.elapsed();
    let ok = suite.kakeya_fit.slope >= 1.9 && suite.kakeya_slope.abs() <= 0.2 && el < Duration::from_secs(180);
    report(10, ok, el, &format!("box fit at δ=2^-8 {:.4}; weak-norm slope {:.4} (predicted 0)", suite.kakeya_fit.slope, suite.kakeya_slope));
}

fn run_experiment(config: &Path, out: &Path) {
    let status = Command::new(env!("CARGO_BIN_EXE_kakeya"))
        .args(["experiment", "--config"])
        .arg(config)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("spawn kakeya");
    assert!(status.status.success(), "experiment failed: {}", String::from_utf8_lossy(&status.stderr));
}

fn directory_listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_11_experiment_determinism() {
    let t = Instant::now();
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/cantor_plane.txt");
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("first"), tmp.path().join("second"));
    run_experiment(&config, &a);
    run_experiment(&config, &b);
    let (la, lb) = (directory_listing(&a), directory_listing(&b));
    let names: Vec<&str> = la.iter().map(|(n, _)| n.as_str()).collect();
    let differing: Vec<&str> = la.iter().zip(&lb).filter(|(x, y)| x != y).map(|(x, _)| x.0.as_str()).collect();
    let ok = la.len() == 10 && la.len() == lb.len() && differing.is_empty();
    report(11, ok, t.elapsed(), &format!("{} files [{}], differing {differing:?}", la.len(), names.join(", ")));
}
