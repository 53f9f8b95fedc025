use std::process::{Command, Output};

fn kakeya(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kakeya")).args(args).output().expect("spawn kakeya")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bounds_prints_exact_values_and_pieces() {
    let o = kakeya(&["bounds", "--n", "4", "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "13/5 (= 2.6), piece: 19/5 - 3/5 s");
    assert!(stdout(&kakeya(&["bounds", "--n", "4", "--s", "0"])).starts_with("4, piece: 4 - s"));
    assert!(stdout(&kakeya(&["bounds", "--n", "10", "--s", "9"])).starts_with("2, piece: 2"));
    assert!(stdout(&kakeya(&["bounds", "--n", "4", "--s", "0.5"])).starts_with("7/2 (= 3.5)"));
}

#[test]
fn bad_bounds_arguments_are_usage_errors() {
    for args in [["bounds", "--n", "1", "--s", "0"], ["bounds", "--n", "4", "--s", "9/2"], ["bounds", "--n", "4", "--s", "x"]] {
        assert_eq!(kakeya(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(kakeya(&["bounds", "--n", "4"]).status.code(), Some(2));
    assert_eq!(kakeya(&["frobnicate"]).status.code(), Some(2));
}

fn curve_breakpoints(n: &str) -> Vec<String> {
    let dir = tempfile::tempdir().unwrap();
    let o = kakeya(&["curve", "--n", n, "--step", "1/4", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join(format!("curve_n{n}.csv"))).unwrap();
    let comp = std::fs::read_to_string(dir.path().join(format!("components_n{n}.csv"))).unwrap();
    assert!(comp.starts_with("s,n_minus_s,transferred,bound\n"));
    // A breakpoint is where the piece index changes between rows.
    let rows: Vec<(String, usize)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[2].parse().unwrap())
        })
        .collect();
    rows.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| w[1].0.clone()).collect()
}

#[test]
fn curve_csv_contains_the_breakpoints() {
    assert_eq!(curve_breakpoints("4"), ["0.5", "3"]);
    assert_eq!(curve_breakpoints("10"), ["3", "9"]);
    assert_eq!(curve_breakpoints("3"), ["2"]);
}

#[test]
fn curve_into_an_unwritable_location_fails() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = kakeya(&["curve", "--n", "4", "--out-dir", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_and_exits_cleanly() {
    let o = kakeya(&["verify", "boxdim"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS Cantor slope"));
    assert!(out.trim_end().ends_with("PASS boxdim"));
    let o = kakeya(&["verify", "cordoba", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ratio"));
    let o = kakeya(&["verify", "everything"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite"));
}

#[test]
fn malformed_configs_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.txt");
    std::fs::write(&cfg, "n = 2\n# fine\ndelta = 0.03125\nspec = koch\n").unwrap();
    let o = kakeya(&["experiment", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.txt:4:"), "{}", stderr(&o));
    let o = kakeya(&["experiment", "--config", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_experiment_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.txt");
    std::fs::write(&cfg, format!("n = 3\ndelta = 0.0625\nlambda = 0.75\nspec = single_point\noutput = {}\n", dir.path().join("out").display())).unwrap();
    let o = kakeya(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = std::fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
    assert!(summary.contains("lower bound at s_delta: 3"), "{summary}");
    let recorded = std::fs::read_to_string(dir.path().join("out/config.txt")).unwrap();
    assert!(recorded.starts_with("n = 3\ndelta = 0.0625\nlambda = 0.75\n") && !recorded.contains("output"));
}

#[test]
fn net_and_boxdim_commands() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.csv");
    let o = kakeya(&["net", "--n", "3", "--delta", "0.5", "--seed", "4", "--out", net.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&net).unwrap();
    assert!(text.starts_with("x1,x2,x3\n") && text.lines().count() > 5);
    assert_eq!(kakeya(&["net", "--n", "5", "--delta", "0.5"]).status.code(), Some(2));
    let o = kakeya(&["boxdim", "--spec", "cantor_product:1/3:1", "--n", "1", "--delta", "0.00001", "--first", "0.037037037037037035", "--ratio", "0.3333333333333333"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("slope 0.6"));
    assert_eq!(kakeya(&["boxdim", "--spec", "nope", "--n", "1", "--delta", "0.1", "--first", "0.1"]).status.code(), Some(2));
}

#[test]
fn version_names_a_build() {
    let o = kakeya(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("kakeya 0.1.0 ("));
}
