use std::path::Path;
use std::process::Command;

use nslab_cli::report::Table;
use serde_json::Value;

fn nslab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nslab")).args(args).output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn odd_grid_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "grid.n = 7\ngrid.L = 1.0\nexperiment = grid-info\n").unwrap();
    let out = nslab(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n"));
}

#[test]
fn unknown_and_mistyped_keys_all_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "grid.n = 16\ngrid.L = 6.28\nexperiment = norms\nbogus = 1\ntime.T = soon\n").unwrap();
    let out = nslab(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus") && err.contains("time.T"), "{err}");
}

#[test]
fn gevrey_check_passes_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        nslab(&["gevrey-check", "--out", dir.path().to_str().unwrap(), "--set", "time.M=16", "--set", "grid.n=8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("gevrey.json"));
    assert_eq!(report["summary"]["report"]["pass"], Value::Bool(true));
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["status"], "ok");
    for f in manifest["files"].as_array().unwrap() {
        let bytes = std::fs::read(dir.path().join(f["name"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), nslab_cli::manifest::sha256_hex(&bytes));
    }
}

#[test]
fn cheap_evolve_csv_decays_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = nslab(&[
        "cheap-evolve",
        "--out",
        dir.path().to_str().unwrap(),
        "--format",
        "csv",
        "--set",
        "params.amplitude=0.01",
        "--set",
        "time.T=2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("cheap_evolve.csv")).unwrap();
    let table = Table::from_csv(&text).unwrap();
    assert_eq!(table.to_csv(), text);
    let col = table.header.iter().position(|h| h == "sup_spectrum").unwrap();
    let sup: Vec<f64> = table.rows.iter().map(|r| r[col]).collect();
    let tail = &sup[sup.len() / 2..];
    assert!(tail.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn failed_check_exits_3_and_keeps_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = nslab(&[
        "majorant",
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "params.amplitude=50",
        "--set",
        "grid.n=8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["status"], "failed");
    assert!(dir.path().join("majorant.json").exists());
}

#[test]
fn same_seed_same_digests() {
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out =
            nslab(&["splitting", "--out", dir.path().to_str().unwrap(), "--seed", seed, "--set", "params.samples=5"]);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|l| l.split_whitespace().next().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("1"));
    assert_ne!(run("1"), run("2"));
}
