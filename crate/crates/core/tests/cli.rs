//! The `hcorr` binary end to end.

use std::process::{Command, Output};

use serde_json::Value;

fn hcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcorr")).args(args).env_remove("HCORR_SEED").output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const PARTITION: &[&str] = &["partition", "--family", "o-even", "--m", "1", "--x-eigs", "1", "--y-eigs", "1", "--gamma", "0.3"];

#[test]
fn partition_matches_cosh_and_sampling() {
    let mut args = PARTITION.to_vec();
    args.extend(["--samples", "1000000"]);
    let out = hcorr(&args);
    assert!(out.status.success());
    let rec = &report(&out)["records"][0];
    let cf = rec["closed_form"][0].as_f64().unwrap();
    assert!((cf - 1.185465).abs() < 1e-6);
    assert!(rec["z_score"].as_f64().unwrap() < 3.0);
}

#[test]
fn reports_are_byte_identical() {
    let mut args = PARTITION.to_vec();
    args.extend(["--samples", "20000", "--seed", "5"]);
    let (a, b) = (hcorr(&args), hcorr(&args));
    assert_eq!(a.stdout, b.stdout);
    args.extend(["--shards", "1"]);
    let (c, d) = (hcorr(&args), hcorr(&args));
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn seed_comes_from_the_environment() {
    let mut args = PARTITION.to_vec();
    args.extend(["--samples", "1000"]);
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hcorr")).args(&args).env("HCORR_SEED", seed).output().unwrap();
        report(&out)
    };
    let (a, b) = (run("1"), run("2"));
    assert_eq!(a["config"]["seed"], 1);
    assert_ne!(a["records"][0]["mc_mean"], b["records"][0]["mc_mean"]);
}

#[test]
fn bijection_table() {
    let out = hcorr(&["bijection", "--r", "1"]);
    assert!(out.status.success());
    assert_eq!(report(&out)["table"].as_array().unwrap().len(), 2);
}

#[test]
fn crosscheck_exit_status() {
    let base = [
        "crosscheck", "--family", "o-odd", "--x-eigs", "0.8", "--y-eigs", "1.3", "--x-pts", "2", "--y-pts", "3-1i",
        "--samples", "50000",
    ];
    let out = hcorr(&base);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(report(&out)["passed"], true);
    // an impossible threshold turns sampling noise into a failure
    let mut strict = base.to_vec();
    strict.extend(["--z-threshold", "0"]);
    let out = hcorr(&strict);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn size_two_crosscheck_is_exact() {
    let out = hcorr(&[
        "crosscheck", "--family", "o-even", "--n", "2", "--x-eigs", "0.4", "--y-eigs", "1.2", "--x-pts", "2+1i",
        "--y-pts", "-3", "--samples", "1000",
    ]);
    assert!(out.status.success());
    let recs = report(&out)["records"].as_array().unwrap().clone();
    let exact: Vec<&Value> = recs.iter().filter(|r| r["quantity"].as_str().unwrap().contains("T=0")).collect();
    assert_eq!(exact.len(), 2);
    assert!(exact.iter().all(|r| r["abs_err"].as_f64().unwrap() < 1e-13));
}

#[test]
fn invalid_configs_fail_before_computing() {
    for args in [
        &["partition", "--family", "o-odd", "--x-eigs", "0", "--y-eigs", "1"][..],
        &["partition", "--family", "sp", "--x-eigs", "1,1", "--y-eigs", "1,2"],
        &["partition", "--x-eigs", "1", "--y-eigs", "1"],
        &["correlator", "--family", "o-even", "--x-eigs", "1", "--y-eigs", "1", "--x-pts", "2"],
        &["correlator", "--family", "o-even", "--x-eigs", "1", "--y-eigs", "1", "--x-pts", "1i", "--y-pts", "2"],
        &["partition", "--family", "o-even", "--x-eigs", "1", "--y-eigs", "1", "--gamma", "-1"],
    ] {
        let out = hcorr(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn report_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("hcorr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let mut args = PARTITION.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let out = hcorr(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "partition");
    std::fs::remove_dir_all(dir).unwrap();
}
