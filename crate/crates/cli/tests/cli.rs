use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use mirror_gw_core::algebra::rational::decode;
use mirror_gw_core::equivariant::AlphaSpec;
use mirror_gw_core::localization::{oracle_invariant, OracleGuard};
use mirror_gw_core::mirror::InvariantKey;
use serde_json::Value;
use tempfile::TempDir;

fn mirror_gw(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mirror-gw"))
        .env_remove("MIRROR_GW_CACHE")
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn invariants_row_for_the_septic() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["invariants", "--n", "7", "--d-max", "1", "--insertion", "0,2", "--insertion", "0,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["invariants"][0]["value"], "1707797/1");
}

#[test]
fn dimension_violations_are_structural_zeros() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["invariants", "--n", "7", "--d-max", "1", "--insertion", "0,2", "--insertion", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json(&out)["invariants"][0];
    assert_eq!(row["value"], "0/1");
    assert_eq!(row["reason"], "dimension");
}

#[test]
fn cubic_surface_invariants_match_localization() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["invariants", "--n", "4", "--a", "3", "--d-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let spec = AlphaSpec::generic(4, 1, 0).unwrap();
    let rows = json(&out)["invariants"].as_array().unwrap().clone();
    assert!(!rows.is_empty());
    for row in rows {
        let field = |k: &str| row[k].as_u64().unwrap() as usize;
        let key = InvariantKey::new(field("d"), (field("a1"), field("b1")), (field("a2"), field("b2")));
        let expected = oracle_invariant(&key, &spec, 3, OracleGuard::default()).unwrap();
        assert_eq!(decode(row["value"].as_str().unwrap()).unwrap(), expected, "{key:?}");
    }
}

#[test]
fn csv_ordering_and_header() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["--format", "csv", "invariants", "--n", "4", "--a", "3", "--d-max", "2"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,a,d,a1,b1,a2,b2,value"));
    let keys: Vec<Vec<usize>> = lines.map(|l| l.split(',').skip(2).take(5).map(|x| x.parse().unwrap()).collect()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn outputs_are_deterministic_and_cache_transparent() {
    let dir = TempDir::new().unwrap();
    let args = ["table", "--n", "6", "--d-max", "4", "--insertion", "0,1", "--insertion", "0,2"];
    let cold = mirror_gw(dir.path(), &args);
    let warm = mirror_gw(dir.path(), &args);
    let elsewhere = TempDir::new().unwrap();
    let fresh = mirror_gw(elsewhere.path(), &args);
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, fresh.stdout);
    let stat = json(&mirror_gw(dir.path(), &["cache", "stat"]));
    assert_eq!(stat["entries"], 1);
    assert_eq!(stat["invalid"], 0);
    let cleared = json(&mirror_gw(dir.path(), &["cache", "clear"]));
    assert_eq!(cleared["removed"], 1);
    assert_eq!(json(&mirror_gw(dir.path(), &["cache", "stat"]))["entries"], 0);
}

#[test]
fn environment_variable_selects_the_cache() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mirror-gw"))
        .env("MIRROR_GW_CACHE", dir.path())
        .args(["bps", "--n", "5", "--d-max", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"][1]["bps"], "2437000");
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}

#[test]
fn table_mismatch_in_dimension_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["table", "--n", "6", "--d-max", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["table", "--n", "7", "--a", "8", "--d-max", "1"][..],
        &["table", "--n", "7", "--d-max", "3", "--u-order", "2"],
        &["invariants", "--n", "5", "--d-max", "1", "--insertion", "0,7", "--insertion", "0,1"],
        &["verify", "--n", "3", "--d-max", "3", "--alpha", "1,2,3"],
        &["verify", "--n", "3", "--d-max", "1", "--alpha", "1,1,2"],
        &["no-such-command"],
    ] {
        assert_eq!(mirror_gw(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_and_reports_every_suite() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["verify", "--n", "3", "--d-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "PASS");
    let suites: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(suites, ["recursion", "mpc", "transforms", "identities", "reconstruction", "oracle", "psi"]);
}

#[test]
fn mutated_run_fails_with_location() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["verify", "--n", "3", "--d-max", "2", "--suite", "recursion", "--mutate"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["status"], "FAIL");
    let first = &v["reports"][0]["failures"][0];
    assert_eq!((first["i"].as_u64(), first["d"].as_u64()), (Some(0), Some(1)));
}

#[test]
fn psi_suite_alone_is_fast() {
    let dir = TempDir::new().unwrap();
    let start = Instant::now();
    let out = mirror_gw(dir.path(), &["verify", "--n", "3", "--d-max", "1", "--suite", "psi"]);
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sweep_flags_integrality() {
    let dir = TempDir::new().unwrap();
    let out = mirror_gw(dir.path(), &["sweep", "--n-max", "6", "--d-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "PASS");
    assert!(v["non_integral"].as_array().unwrap().is_empty());
}
