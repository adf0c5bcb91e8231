//! Prints one PASS/FAIL line per acceptance criterion and exits nonzero on any FAIL.

use std::process::{Command, ExitCode};
use std::time::Instant;

use mirror_gw::config::Suite;
use mirror_gw::invariants::dimension_keys;
use mirror_gw::verify::{psi_suite, VerifyContext};
use mirror_gw_core::equivariant::{AlphaSpec, Report};
use mirror_gw_core::localization::{oracle_invariant, OracleGuard};
use mirror_gw_core::mirror::{extract_gw, MirrorEngine};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEPTIC: [&str; 10] = [
    "1707797",
    "510787745643",
    "222548537108926490",
    "113635631482486991647224",
    "63340724462384110502639024265",
    "37325795060717360046547665187418254",
    "22857028298936684292245509537579343818647",
    "14395953469762596243721601709186933042635134584",
    "9263611884884554518268724722981763557936573405648178",
    "6062677702410680024315392235188823274104219383883410807999",
];

fn run_binary(args: &[&str]) -> Result<(i32, String), String> {
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_mirror-gw"))
        .arg("--cache-dir")
        .arg(cache.path())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), stdout))
}

fn table() -> Outcome {
    let (code, csv) = run_binary(&["--format", "csv", "table", "--n", "7", "--d-max", "10"])?;
    if code != 0 {
        return Err(format!("exit status {code}"));
    }
    let bps: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap_or("")).collect();
    if bps != SEPTIC {
        return Err(format!("got {bps:?}"));
    }
    Ok("ten BPS integers for n = 7 match exactly".into())
}

fn sweep() -> Outcome {
    let (code, json) = run_binary(&["sweep", "--n-min", "5", "--n-max", "9", "--d-max", "12"])?;
    let v: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let entries = v["entries"].as_array().ok_or("no entries")?;
    let mut values = 0;
    for e in entries {
        for row in e["rows"].as_array().ok_or("no rows")? {
            let bps = row["bps"].as_str().ok_or("bps is not a string")?;
            if !is_integer_literal(bps) {
                return Err(format!("n = {}, {}: d = {} gives {bps}", e["n"], e["insertions"], row["d"]));
            }
            values += 1;
        }
    }
    if code != 0 || v["status"] != "PASS" {
        return Err(format!("exit status {code}, status {}", v["status"]));
    }
    Ok(format!("{values} BPS values over {} insertion pairs are integers", entries.len()))
}

fn is_integer_literal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn suite_over(cases: &[(usize, usize, usize)], suite: Suite) -> Outcome {
    let mut lines = Vec::new();
    for &(n, a, d) in cases {
        let ctx = VerifyContext::build(n, a, d, None, false).map_err(|e| format!("n = {n}, a = {a}: {e}"))?;
        let report = ctx.run(suite);
        check(&report).map_err(|e| format!("n = {n}, a = {a}: {e}"))?;
        lines.push(format!("(n {n}, a {a}, d {d}, α {})", ctx.spec.describe()));
    }
    Ok(lines.join(" "))
}

fn check(report: &Report) -> Result<(), String> {
    match report.failures.first() {
        None => Ok(()),
        Some(f) => Err(format!("{}: {} ({} failures)", report.suite, f.detail, report.failures.len())),
    }
}

const SMALL: [(usize, usize, usize); 3] = [(2, 2, 3), (3, 3, 3), (4, 4, 3)];

fn oracle() -> Outcome {
    suite_over(&[(3, 3, 2), (4, 4, 2), (4, 3, 2)], Suite::Oracle)
}

fn recursion() -> Outcome {
    let clean = suite_over(&SMALL, Suite::Recursion)?;
    let ctx = VerifyContext::build(3, 3, 3, None, true).map_err(|e| e.to_string())?;
    let m = ctx.mutation.clone().ok_or("no mutation recorded")?;
    let report = ctx.run(Suite::Recursion);
    if report.passed() {
        return Err("the mutated series passed".into());
    }
    let located = report.failures.iter().any(|f| f.i == Some(m.i) && f.d == Some(m.d) && f.detail.contains(&m.pole));
    if !located {
        return Err(format!("pole {} at (i {}, d {}) not located", m.pole, m.i, m.d));
    }
    Ok(format!("{clean}; mutant pole {} located at (i {}, d {})", m.pole, m.i, m.d))
}

fn alpha_independence() -> Outcome {
    let guard = OracleGuard::default();
    let mut checked = 0;
    for n in 2..=4 {
        for a in 1..=n {
            let two_point = MirrorEngine::build(n, a, 2)
                .and_then(|e| e.two_point())
                .map_err(|e| e.to_string())?;
            let first = AlphaSpec::generic(n, 2, 0).map_err(|e| e.to_string())?;
            let second = AlphaSpec::generic(n, 2, 1).map_err(|e| e.to_string())?;
            if first == second {
                return Err(format!("n = {n}: only one weight choice"));
            }
            for d in 1..=2 {
                for key in dimension_keys(n, a, d) {
                    let eval = |s: &AlphaSpec| oracle_invariant(&key, s, a, guard).map_err(|e| e.to_string());
                    let (x, y) = (eval(&first)?, eval(&second)?);
                    let z = extract_gw(&two_point, &key).map_err(|e| e.to_string())?.value;
                    if x != y || x != z {
                        return Err(format!("n = {n}, a = {a}, {key:?}: {x}, {y}, mirror {z}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} invariants agree across two weight choices and the mirror side"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table reproduction", table),
        ("integrality sweep", sweep),
        ("oracle equivalence", oracle),
        ("mutual polynomiality", || suite_over(&SMALL, Suite::Mpc)),
        ("recursion", recursion),
        ("identities", || suite_over(&SMALL, Suite::Identities)),
        ("transforms", || suite_over(&SMALL, Suite::Transforms)),
        ("reconstruction", || suite_over(&SMALL, Suite::Reconstruction)),
        ("psi integrals", || check(&psi_suite()).map(|_| "k ≤ 8".into())),
        ("alpha independence", alpha_independence),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{secs:.1}s]", k + 1),
            Err(detail) => {
                all = false;
                println!("FAIL criterion {}: {name}: {detail} [{secs:.1}s]", k + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
