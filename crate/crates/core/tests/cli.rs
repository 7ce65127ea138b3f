use std::path::Path;
use std::process::{Command, Output};

use lorenz_lab::cli::{execute, revalidate, RunConfig};

fn lab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorenz-lab"))
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lab(dir.path(), &["validate"]).status.code(), Some(0));
    assert_eq!(lab(dir.path(), &["periodic", "word=R"]).status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("periodic.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["error"].as_str().unwrap().contains('R'));
    assert_eq!(lab(dir.path(), &["periodic", "word=RX"]).status.code(), Some(2));
    assert_eq!(lab(dir.path(), &["validate", "no_such_key=1"]).status.code(), Some(2));
    assert_eq!(lab(dir.path(), &["validate", "mu=abc"]).status.code(), Some(2));
    assert_eq!(lab(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(lab(dir.path(), &["validate", "mu=1.2"]).status.code(), Some(1));
}

#[test]
fn config_file_and_seed_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# short orbit\nreturns = 2000\nseed = 3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lorenz-lab"))
        .args(["--quiet", "--seed", "9", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .args(["support", "measure=empirical"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("support.json")).unwrap()).unwrap();
    assert_eq!(v["config"]["seed"], "9");
    assert_eq!(v["config"]["returns"], "2000");

    std::fs::write(&cfg, "returns 2000\n").unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_lorenz-lab"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .arg("validate")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 1"));
}

#[test]
fn artifacts_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        assert_eq!(lab(dir, &["connect"]).status.code(), Some(0));
        assert_eq!(lab(dir, &["path", "steps=21", "block_depth=6"]).status.code(), Some(0));
        assert_eq!(lab(dir, &["plot", "kind=orbit-trace", "word=RLL"]).status.code(), Some(0));
    }
    for f in ["connect.json", "connect.csv", "path.json", "path.csv", "path.svg", "plot.svg"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
    let csv = std::fs::read_to_string(a.path().join("connect.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("k,gamma_k"));
    assert_eq!(csv.lines().count(), 13);
    let svg = std::fs::read_to_string(a.path().join("plot.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("version=\"1.1\""));
}

#[test]
fn reports_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["periodic", "word=RLRLL"][..], &["entropy", "measure=word", "word=RRL"], &["cone", "grid=20"]] {
        assert_eq!(lab(dir.path(), args).status.code(), Some(0));
        let text = std::fs::read_to_string(dir.path().join(format!("{}.json", args[0]))).unwrap();
        assert!(revalidate(&text).unwrap(), "{}", args[0]);
        let tampered = text.replacen("\"pass\": true", "\"pass\": false", 1);
        assert!(!revalidate(&tampered).unwrap());
    }
    assert!(revalidate("{}").is_err());
}

#[test]
fn connect_to_periodic_word() {
    let mut cfg = RunConfig::default();
    cfg.set("target", "RL").unwrap();
    let out = execute("connect", &cfg).unwrap();
    assert!(out.pass);
    assert_eq!(out.report["connection"]["n"], 9);
    cfg.set("side", "minus").unwrap();
    let minus = execute("connect", &cfg).unwrap();
    assert!(minus.pass);
    let s_plus = out.report["connection"]["s_star"].as_f64().unwrap();
    let s_minus = minus.report["connection"]["s_star"].as_f64().unwrap();
    assert!((s_plus - s_minus).abs() < 1e-12);
}

#[test]
fn keys_lists_every_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_lorenz-lab")).arg("keys").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let cfg = RunConfig::from_text(&text).unwrap();
    assert_eq!(cfg, RunConfig::default());
}
