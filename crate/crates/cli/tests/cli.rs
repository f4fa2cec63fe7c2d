use std::path::Path;
use std::process::{Command, Output};

fn liqsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liqsim")).args(args).output().expect("run liqsim")
}

fn ok(args: &[&str]) -> String {
    let out = liqsim(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = liqsim(args);
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn gamma_at_the_reference_market() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let stdout = ok(&["gamma", "--out", out]);
    assert!(stdout.contains("0.496787722"), "{stdout}");
    assert_eq!(
        read(dir.path(), "gamma.csv"),
        "r,lambda,eta,k,b,phi,s0,gamma\n0.05,0.05,10,0.001,1e-05,0.0001,10,0.496787722\n"
    );
    let manifest = read(dir.path(), "manifest.toml");
    assert!(manifest.contains("command = \"gamma\""));
    assert!(manifest.contains("outputs = [\"gamma.csv\"]"));
}

#[test]
fn parameter_violations_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (c, err) = code(&["gamma", "--out", out, "--set", "k=0"]);
    assert_eq!(c, 2);
    assert!(err.contains("`k`"), "{err}");
    let (c, err) = code(&["gamma", "--out", out, "--set", "eta=0"]);
    assert_eq!(c, 2);
    assert!(err.contains("eta_mean"), "{err}");
    assert_eq!(code(&["gamma", "--out", out, "--set", "lambda_plus=0.1"]).0, 2);
    assert_eq!(code(&["simulate", "--out", out, "--paths", "0"]).0, 2);
    assert_eq!(code(&["simulate", "--bogus"]).0, 2);
}

#[test]
fn numeric_preconditions_exit_with_code_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let base = ["simulate", "--out", out, "--paths", "2", "--horizon", "50"];
    for strategy in ["discounted:100", "finite:10:0.01", "finite:100:0.0001"] {
        let mut args = base.to_vec();
        args.extend(["--strategy", strategy]);
        let (c, err) = code(&args);
        assert_eq!(c, 4, "{strategy}: {err}");
    }
}

#[test]
fn simulate_writes_paths_summary_and_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&[
        "simulate", "--out", out, "--paths", "6", "--horizon", "100", "--strategy", "finite:100:0.01",
        "--cash-mode", "full", "--timeseries", "100", "--timeseries-paths", "2",
    ]);
    let paths = read(dir.path(), "paths.csv");
    assert!(paths.starts_with("path_id,strategy,cash_mode,avg_pnl,terminal_q,terminal_x,penalty_integral\n"));
    assert_eq!(paths.lines().count(), 7);
    assert_eq!(column(&paths, "strategy")[0], "finite:100:0.01");
    let summary = read(dir.path(), "compare.csv");
    assert!(summary.starts_with("strategy,cash_mode,mean,std_err,ci_low,ci_high,var95,es95\n"));
    let series = read(dir.path(), "timeseries_finite-100-0.01_full.csv");
    assert!(series.starts_with("path_id,t,S,Q,X,running_avg_pnl\n"));
    // 1000 steps at stride 100 plus the terminal point, for two paths.
    assert_eq!(series.lines().count(), 1 + 2 * 11);
    assert!(!paths.contains('\r'));
}

#[test]
fn compare_defaults_cover_two_strategies_in_two_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let stdout = ok(&["compare", "--out", out, "--paths", "20", "--horizon", "200"]);
    let summary = read(dir.path(), "compare.csv");
    assert_eq!(column(&summary, "strategy"), ["ergodic", "ergodic", "half", "half"]);
    assert_eq!(column(&summary, "cash_mode"), ["full", "simplified", "full", "simplified"]);
    assert_eq!(read(dir.path(), "paths.csv").lines().count(), 1 + 4 * 20);
    assert!(stdout.contains("paired ergodic - half"), "{stdout}");
}

#[test]
fn sweep_schema_for_one_and_two_axes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    ok(&["sweep", "--out", out, "--axis", "r=0:0.1:3"]);
    let one = read(dir.path(), "sweep.csv");
    assert_eq!(one.lines().next().unwrap(), "axis1,value1,mode,gamma_or_mean,std_err,ci_low,ci_high,var95,es95");
    assert_eq!(one.lines().nth(1).unwrap().split(',').take(3).collect::<Vec<_>>(), ["r", "0", "closed_form"]);
    ok(&["sweep", "--out", out, "--axis", "r=0:0.1:3", "--axis", "k=0.0005:0.002:4"]);
    let two = read(dir.path(), "sweep.csv");
    assert!(two.starts_with("axis1,value1,axis2,value2,mode,"));
    assert_eq!(two.lines().count(), 13);
    assert_eq!(code(&["sweep", "--out", out]).0, 2);
}

#[test]
fn closed_form_and_monte_carlo_sweeps_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let gamma_out = ok(&["gamma", "--out", out, "--set", "r=0.03"]);
    let gamma: f64 = gamma_out.trim().trim_start_matches("gamma = ").parse().unwrap();
    ok(&["sweep", "--out", out, "--axis", "r=0.03:0.03:1", "--sweep-mode", "mc", "--paths", "300"]);
    let sweep = read(dir.path(), "sweep.csv");
    let lo: f64 = column(&sweep, "ci_low")[0].parse().unwrap();
    let hi: f64 = column(&sweep, "ci_high")[0].parse().unwrap();
    assert!(lo <= gamma && gamma <= hi, "gamma {gamma} outside [{lo}, {hi}]");
    assert_eq!(column(&sweep, "mode")[0], "monte_carlo");
}

#[test]
fn calibrate_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("liq.csv"), "time,size\n1,8\n2,12\n3,9\n4,11\n").unwrap();
    let mut book = String::from("snapshot_time,side,price,volume,mid\n");
    for l in 1..=10 {
        // Marginal price 0.005 + 0.02 (l - 0.5): per-unit deviation 0.005 + 0.01 Q.
        book += &format!("0,ask,{},1,10\n", 10.0 + 0.005 + 0.02 * (l as f64 - 0.5));
    }
    std::fs::write(d.join("book.csv"), book).unwrap();
    std::fs::write(d.join("flow.csv"), "net_flow,delta_mid\n1,0.01\n2,0.02\n").unwrap();
    let p = |n: &str| d.join(n).to_str().unwrap().to_string();
    let out = p("out");
    ok(&[
        "calibrate", "--out", &out, "--liquidations", &p("liq.csv"), "--book", &p("book.csv"), "--flow",
        &p("flow.csv"), "--max-trade-size", "10",
    ]);
    let est = read(&d.join("out"), "params_estimated.csv");
    assert!(est.starts_with("parameter,value,std_err,n,skipped,r_squared,residual_std\n"));
    assert_eq!(column(&est, "parameter"), ["lambda", "eta", "k", "b"]);
    assert_eq!(column(&est, "value")[..2], ["1", "10"]);
    let k: f64 = column(&est, "value")[2].parse().unwrap();
    assert!((k - 0.01).abs() < 1e-9);
    assert_eq!(column(&est, "value")[3], "0.01");

    ok(&["calibrate", "--out", &out, "--liquidations", &p("liq.csv"), "--lambda-window", "8"]);
    assert_eq!(column(&read(&d.join("out"), "params_estimated.csv"), "value")[0], "0.5");
}

#[test]
fn malformed_inputs_exit_with_data_code_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("liq.csv"), "time,size\n1,8\n2,oops\n").unwrap();
    let out = d.join("out");
    let (c, err) = code(&["calibrate", "--out", out.to_str().unwrap(), "--liquidations", d.join("liq.csv").to_str().unwrap()]);
    assert_eq!(c, 3);
    assert!(err.contains("line 3"), "{err}");
    let (c, _) = code(&["calibrate", "--out", out.to_str().unwrap(), "--flow", d.join("missing.csv").to_str().unwrap()]);
    assert_eq!(c, 3);
    assert_eq!(code(&["calibrate", "--out", out.to_str().unwrap()]).0, 2);
}

#[test]
fn manifests_reproduce_their_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    ok(&["sweep", "--out", a.to_str().unwrap(), "--axis", "sigma=0.2:0.6:3", "--sweep-mode", "mc", "--paths", "8", "--horizon", "100", "--seed", "9"]);
    let manifest = a.join("manifest.toml");
    let text = std::fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("seed = 9") && text.contains("sweep_mode = \"mc\""), "{text}");
    ok(&["sweep", "--config", manifest.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert_eq!(read(&a, "sweep.csv"), read(&b, "sweep.csv"));
    assert_eq!(text, read(&b, "manifest.toml"));
}
