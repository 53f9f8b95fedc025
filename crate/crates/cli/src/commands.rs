use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use kakeya_core::bounds::{
    best_lower_bound_detail, format_exact, parse_rational, piecewise_curve, terminating_decimal, to_f64,
    write_components_csv, BaseEstimateLibrary, Rational,
};
use kakeya_core::fractals::{box_dimension_fit, generate, geometric_scales, FractalSpec};
use kakeya_core::geometry::{greedy_net, projective_net, BoundingBox};
use kakeya_core::suites::{run_suite, SUITE_NAMES};

use crate::config::ExperimentConfig;
use crate::experiment::run_experiment;
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|_| usage(format!("--{name}: `{text}` is not a rational number")))
}

/// `13/5 (= 2.6)`, `1/3 (≈ 0.333333)`, or just `4`.
pub fn exact_and_decimal(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_string();
    }
    match terminating_decimal(value) {
        Some(dec) => format!("{value} (= {dec})"),
        None => format!("{value} (≈ {:.6})", to_f64(value)),
    }
}

/// The line printed by `kakeya bounds`.
pub fn bounds_line(n: u32, s: &Rational) -> Result<String, CliError> {
    if n < 2 {
        return Err(usage(format!("--n {n}: the dimension must be at least 2")));
    }
    let lib = BaseEstimateLibrary::standard();
    let lb = best_lower_bound_detail(n, s, &lib).map_err(|e| usage(e.to_string()))?;
    Ok(format!("{}, piece: {}", exact_and_decimal(&lb.value), lb.piece))
}

pub fn bounds(n: u32, s: &str) -> Result<(), CliError> {
    let s = rational_arg("s", s)?;
    println!("{}", bounds_line(n, &s)?);
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
}

fn finish(mut w: impl Write, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn curve(n: u32, step: &str, out_dir: &Path) -> Result<(), CliError> {
    let step = rational_arg("step", step)?;
    if step <= Rational::from_integer(0.into()) {
        return Err(usage("--step must be positive"));
    }
    let lib = BaseEstimateLibrary::standard();
    let curve = piecewise_curve(n, &lib).map_err(|e| usage(e.to_string()))?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let curve_path = out_dir.join(format!("curve_n{n}.csv"));
    let mut w = create(&curve_path)?;
    curve.write_csv(&mut w, &step)?;
    finish(w, &curve_path)?;
    let comp_path = out_dir.join(format!("components_n{n}.csv"));
    let mut w = create(&comp_path)?;
    write_components_csv(&mut w, &curve, &lib, &step)?;
    finish(w, &comp_path)?;
    let bps: Vec<String> = curve.breakpoints().iter().map(format_exact).collect();
    println!("n = {n}: breakpoints {{{}}}", bps.join(", "));
    for p in curve.pieces() {
        println!("  [{}, {}]: {}", format_exact(&p.lo), format_exact(&p.hi), p.line);
    }
    println!("wrote {} and {}", curve_path.display(), comp_path.display());
    Ok(())
}

pub fn verify(suite: &str, seed: u64) -> Result<(), CliError> {
    if !SUITE_NAMES.contains(&suite) {
        return Err(usage(format!("unknown suite `{suite}` (expected one of {})", SUITE_NAMES.join(", "))));
    }
    let report = run_suite(suite, seed)?;
    print!("{}", report.render());
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("suite {suite}")))
    }
}

pub fn experiment(config: &Path, out_dir: Option<&Path>) -> Result<(), CliError> {
    let cfg = ExperimentConfig::load(config)?;
    let out: PathBuf = match (out_dir, &cfg.output) {
        (Some(dir), _) => dir.to_path_buf(),
        (None, Some(dir)) => dir.clone(),
        (None, None) => return Err(usage("no output directory: set `output` in the config or pass --out-dir")),
    };
    let summary = run_experiment(&cfg, &out)?;
    print!("{summary}");
    Ok(())
}

pub fn net(n: usize, delta: f64, seed: u64, projective: bool, out: Option<&Path>) -> Result<(), CliError> {
    fn emit<const N: usize>(delta: f64, seed: u64, projective: bool, out: Option<&Path>) -> Result<(), CliError> {
        let net = if projective { projective_net::<N>(delta, seed) } else { greedy_net::<N>(delta, seed) }
            .map_err(|e| usage(e.to_string()))?;
        match out {
            Some(path) => {
                let mut w = create(path)?;
                net.write_csv(&mut w)?;
                finish(w, path)?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                net.write_csv(&mut w)?;
                finish(w, Path::new("<stdout>"))?;
            }
        }
        eprintln!("{} directions, minimum separation {:.6}", net.len(), net.min_separation());
        Ok(())
    }
    match n {
        2 => emit::<2>(delta, seed, projective, out),
        3 => emit::<3>(delta, seed, projective, out),
        4 => emit::<4>(delta, seed, projective, out),
        _ => Err(usage(format!("--n {n}: nets are available for n = 2, 3, 4"))),
    }
}

pub fn boxdim(
    spec: &str,
    n: usize,
    delta: f64,
    first: f64,
    ratio: f64,
    count: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    fn fit<const N: usize>(
        spec: &FractalSpec,
        delta: f64,
        scales: &[f64],
        out: Option<&Path>,
    ) -> Result<(), CliError> {
        let bbox = BoundingBox::<N>::centered_cube(1.0);
        let a = generate::<N>(spec, delta, &bbox).map_err(|e| usage(e.to_string()))?;
        let fit = box_dimension_fit(&a.points, scales).map_err(|e| usage(e.to_string()))?;
        println!("{} points; target dimension {:.6}", a.len(), spec.target_dim(N));
        println!("delta,count");
        for (d, c) in fit.scales.iter().zip(&fit.counts) {
            println!("{d:.6e},{c}");
        }
        println!("slope {:.6}, intercept {:.6}, r2 {:.6}", fit.slope, fit.intercept, fit.r2);
        if let Some(path) = out {
            let mut w = create(path)?;
            fit.write_csv(&mut w)?;
            finish(w, path)?;
        }
        Ok(())
    }
    let spec: FractalSpec = spec.parse().map_err(|e: kakeya_core::error::Error| usage(format!("--spec: {e}")))?;
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(usage(format!("--ratio {ratio} must lie in (0, 1)")));
    }
    let scales = geometric_scales(first, ratio, count);
    match n {
        1 => fit::<1>(&spec, delta, &scales, out),
        2 => fit::<2>(&spec, delta, &scales, out),
        3 => fit::<3>(&spec, delta, &scales, out),
        4 => fit::<4>(&spec, delta, &scales, out),
        _ => Err(usage(format!("--n {n}: supported dimensions are 1 to 4"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kakeya_core::bounds::{int, rat};

    #[test]
    fn bounds_lines() {
        assert_eq!(bounds_line(4, &int(2)).unwrap(), "13/5 (= 2.6), piece: 19/5 - 3/5 s");
        assert!(bounds_line(4, &int(0)).unwrap().starts_with("4, "));
        assert!(bounds_line(10, &int(9)).unwrap().starts_with("2, "));
        assert!(bounds_line(1, &int(0)).is_err());
        assert!(bounds_line(4, &int(5)).is_err());
    }

    #[test]
    fn decimal_forms() {
        assert_eq!(exact_and_decimal(&rat(7, 2)), "7/2 (= 3.5)");
        assert_eq!(exact_and_decimal(&rat(1, 3)), "1/3 (≈ 0.333333)");
        assert_eq!(exact_and_decimal(&int(2)), "2");
    }
}
