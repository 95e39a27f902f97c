use std::path::Path;
use std::process::Command;

use qrs::cli::{execute, sig10, CliOutcome};
use qrs::game::{canonical_game, estimate_payoff, TallyTable};
use qrs::witness::CountRecord;
use qrs::RefereeEnsemble;
use serde_json::Value;

fn run(args: &[&str]) -> CliOutcome {
    execute(std::iter::once("qrs").chain(args.iter().copied()))
}

fn json(out: &CliOutcome) -> Value {
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn payoff_in_the_open_window() {
    let v = json(&run(&["payoff", "--W", "0.698", "--r", "1.081"]));
    let p = v["exact_payoff"].as_f64().unwrap();
    assert!((p - 0.2217).abs() < 1e-4);
    assert_eq!(format!("{p:.2}"), "0.22");
    assert_eq!(v["regime"], "steerable-open-Bell-window");
    assert_eq!(v["werner_reference"], v["exact_payoff"]);
}

#[test]
fn payoff_for_the_singlet() {
    let v = json(&run(&["payoff", "--W", "1", "--r", "1"]));
    assert!((v["exact_payoff"].as_f64().unwrap() - 1.26795).abs() < 1e-5);
}

#[test]
fn payoff_below_threshold_is_negative() {
    let v = json(&run(&["payoff", "--W", "0.5", "--r", "1"]));
    let p = v["exact_payoff"].as_f64().unwrap();
    assert!((p - (1.5 - 3f64.sqrt())).abs() < 1e-9);
    assert_eq!(v["regime"], "unsteerable-by-this-game");
}

#[test]
fn payoff_with_sampling_reports_stderr() {
    let v = json(&run(&["payoff", "--W", "1", "--r", "1", "--n", "20000", "--seed", "4"]));
    let est = v["estimate"].as_f64().unwrap();
    let se = v["stderr"].as_f64().unwrap();
    assert!(se > 0.0 && (est - v["exact_payoff"].as_f64().unwrap()).abs() < 5.0 * se);
}

#[test]
fn payoff_csv_format() {
    let out = run(&["payoff", "--W", "0.5", "--r", "1", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("quantity,value\n"));
    assert!(out.stdout.contains("regime,unsteerable-by-this-game"));
}

#[test]
fn payoff_auto_r_uses_calibration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    RefereeEnsemble::ideal().depolarize(0.8).unwrap().write_json(&path).unwrap();
    let v = json(&run(&["payoff", "--W", "0.7", "--r", "auto", "--ensemble", path_str(&path)]));
    assert_eq!(v["r"].as_f64().unwrap(), 1.0);
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["payoff"][..],
        &["payoff", "--W", "1.5"],
        &["payoff", "--W", "0.5", "--r", "-1"],
        &["payoff", "--W", "0.5", "--visibility", "2"],
        &["simulate", "--W", "0.5", "--n", "0"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn calibrate_ideal_and_depolarized_files() {
    let dir = tempfile::tempdir().unwrap();
    let ideal = dir.path().join("ideal.json");
    RefereeEnsemble::ideal().write_json(&ideal).unwrap();
    let v = json(&run(&["calibrate", "--ensemble", path_str(&ideal)]));
    assert!((v["r_star_oracle"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["r_star_printed"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["avg_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let noisy = dir.path().join("noisy.json");
    RefereeEnsemble::ideal().depolarize(0.8).unwrap().write_json(&noisy).unwrap();
    let v = json(&run(&["calibrate", "--ensemble", path_str(&noisy)]));
    assert!((v["r_star_oracle"].as_f64().unwrap() - 0.8).abs() < 1e-9);
    assert_eq!(v["r_star_legal"].as_f64().unwrap(), 1.0);
    assert!(v.get("bootstrap").is_none());
}

#[test]
fn calibrate_from_counts_bootstraps() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    CountRecord::from_ensemble(&RefereeEnsemble::ideal().depolarize(0.97).unwrap(), 20_000)
        .write_csv(&path)
        .unwrap();
    let v = json(&run(&["calibrate", "--counts", path_str(&path), "--trials", "200"]));
    assert!((v["r_star_oracle"].as_f64().unwrap() - 0.97).abs() < 1e-3);
    let b = &v["bootstrap"];
    assert!(b["std"].as_f64().unwrap() > 0.0);
    assert_eq!(b["failures"], 0);
}

#[test]
fn calibrate_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"vectors\": [").unwrap();
    assert_eq!(run(&["calibrate", "--ensemble", path_str(&path)]).code, 2);
    assert_eq!(run(&["calibrate", "--ensemble", "/nonexistent/e.json"]).code, 2);
    assert_eq!(run(&["calibrate"]).code, 2);
}

#[test]
fn sweep_grid_rows() {
    let out = run(&["sweep", "--grid", "0,0.5,1", "--r", "1"]);
    assert_eq!(out.code, 0);
    let rows: Vec<&str> = out.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "W,exact_payoff,regime");
    let s3 = 3f64.sqrt();
    for (row, want) in rows[1..].iter().zip([-s3, 1.5 - s3, 3.0 - s3]) {
        let p: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((p - want).abs() < 1e-9, "{row}");
    }
    for marker in ["0.5773502692", "0.6595", "0.7056", "0.7071067812"] {
        assert!(out.stdout.lines().any(|l| l.starts_with('#') && l.contains(marker)));
    }
}

#[test]
fn sweep_golden_row_and_empty_grid() {
    let out = run(&["sweep", "--grid", "0.698", "--r", "1.081"]);
    assert!(out.stdout.contains("0.698,0.221653077,steerable-open-Bell-window"));
    assert_eq!(run(&["sweep", "--grid", ""]).code, 2);
    assert_eq!(run(&["sweep", "--grid", "0.2,1.4"]).code, 2);
}

#[test]
fn simulate_high_fidelity_run() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("t.csv");
    let v = json(&run(&[
        "simulate", "--W", "0.98", "--r", "1.081", "--n", "1000000", "--out", path_str(&out_path),
    ]));
    let est = v["estimate"].as_f64().unwrap();
    let se = v["stderr"].as_f64().unwrap();
    let exact = 3.0 * 0.98 - 3f64.sqrt() * 1.081;
    assert!((exact - 1.0677).abs() < 1e-4);
    assert!((est - exact).abs() < 4.0 * se && se < 0.002);
}

#[test]
fn simulate_is_byte_identical_per_seed_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        run(&["simulate", "--W", "0.698", "--r", "1.081", "--n", "50000", "--seed", "9", "--out", path_str(p)])
    };
    let (oa, ob) = (args(&a), args(&b));
    assert_eq!(oa, ob);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let printed = json(&oa);
    let table = TallyTable::read_csv(&a).unwrap();
    let est = estimate_payoff(&canonical_game(1.081).unwrap(), &table).unwrap();
    assert_eq!(sig10(est.value), printed["estimate"].as_f64().unwrap());
    assert_eq!(sig10(est.stderr), printed["stderr"].as_f64().unwrap());
}

#[test]
fn simulate_with_reduced_visibility() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let v = json(&run(&[
        "simulate", "--W", "0.698", "--r", "1.081", "--visibility", "0.89", "--n", "200000",
        "--out", path_str(&path),
    ]));
    let exact = v["exact_payoff"].as_f64().unwrap();
    let engine = 3.0 * 0.89 * 0.698 - 3f64.sqrt() * 1.081 * (2.0 - 0.89);
    assert!((exact - engine).abs() < 1e-9);
    assert!(v["estimate"].as_f64().unwrap() < 0.2217);
}

#[test]
fn chsh_reports_no_violation_in_window() {
    let v = json(&run(&["chsh", "--W", "0.698"]));
    assert_eq!(format!("{:.4}", v["chsh"].as_f64().unwrap()), "1.9742");
    assert_eq!(v["violates"], false);
    let v = json(&run(&["chsh", "--W", "1"]));
    assert!((v["chsh"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn output_file_and_binary_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let out = run(&["payoff", "--W", "0.8", "--out", path_str(&path)]);
    assert_eq!(out.code, 0);
    let written = std::fs::read_to_string(&path).unwrap();

    let bin = Command::new(env!("CARGO_BIN_EXE_qrs"))
        .args(["payoff", "--W", "0.8"])
        .output()
        .unwrap();
    assert!(bin.status.success());
    assert_eq!(String::from_utf8(bin.stdout).unwrap(), written);

    let bad = Command::new(env!("CARGO_BIN_EXE_qrs")).args(["payoff"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
