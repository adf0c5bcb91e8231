//! Subcommand implementations; each returns its rendered output and whether it passed.

use mirror_gw_core::mirror::{primary_pairs, InvariantKey};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::CacheAction;
use crate::cache::Cache;
use crate::config::{Format, InsertionPair, RunConfig, Suite};
use crate::error::{CliError, CliResult};
use crate::invariants::{dimension_keys, BpsRow, InvariantRow, InvariantStore};
use crate::reference::known_bps;
use crate::verify::VerifyContext;

/// Rendered output plus the pass/fail verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

fn json_text<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

const BPS_HEADER: [&str; 9] = ["n", "a", "d", "a1", "b1", "a2", "b2", "gw", "bps"];

fn bps_csv_rows(n: usize, a: usize, pair: [InsertionPair; 2], rows: &[BpsRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            [n, a, r.d, pair[0].0, pair[0].1, pair[1].0, pair[1].1]
                .iter()
                .map(usize::to_string)
                .chain([r.gw.clone(), r.bps.clone()])
                .collect()
        })
        .collect()
}

fn check_dimension(cfg: &RunConfig, pair: [InsertionPair; 2]) -> CliResult<()> {
    for d in 1..=cfg.d_max {
        let key = InvariantKey::new(d, pair[0], pair[1]);
        let expected = key.expected_dimension(cfg.n, cfg.a);
        if key.dimension() != expected {
            return Err(CliError::Config(format!(
                "insertions {pair:?} have total degree {} but degree {d} needs {expected}",
                key.dimension()
            )));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BpsReport {
    n: usize,
    a: usize,
    insertions: [InsertionPair; 2],
    rows: Vec<BpsRow>,
    non_integral: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<&'static str>,
    status: &'static str,
}

fn bps_report(cfg: &RunConfig, cache: &Cache, pair: [InsertionPair; 2], with_reference: bool) -> CliResult<Outcome> {
    check_dimension(cfg, pair)?;
    let store = InvariantStore::load(cfg.n, cfg.a, cfg.u_order, Some(cache))?;
    let rows = store.bps(pair, cfg.d_max)?;
    let non_integral: Vec<usize> = rows.iter().filter(|r| !r.integral).map(|r| r.d).collect();
    let reference = with_reference.then(|| known_bps(cfg.n, cfg.a, pair)).flatten().map(|known| {
        let agree = rows.iter().all(|r| known.get(r.d - 1).is_none_or(|k| *k == r.bps));
        if agree {
            "match"
        } else {
            "mismatch"
        }
    });
    let passed = non_integral.is_empty() && reference != Some("mismatch");
    let output = match cfg.format {
        Format::Json => json_text(&BpsReport {
            n: cfg.n,
            a: cfg.a,
            insertions: pair,
            rows,
            non_integral,
            reference,
            status: if passed { "PASS" } else { "FAIL" },
        })?,
        Format::Csv => csv_text(&BPS_HEADER, bps_csv_rows(cfg.n, cfg.a, pair, &rows))?,
    };
    Ok(Outcome { output, passed })
}

pub fn table(cfg: &RunConfig, cache: &Cache) -> CliResult<Outcome> {
    bps_report(cfg, cache, cfg.pair_or([(0, 2), (0, 2)]), true)
}

pub fn bps(cfg: &RunConfig, cache: &Cache) -> CliResult<Outcome> {
    let pair = match cfg.insertions.as_slice() {
        [x, y] => [*x, *y],
        _ => *primary_pairs(cfg.n)
            .first()
            .ok_or_else(|| CliError::Config(format!("no default insertion pair for n = {}; pass --insertion twice", cfg.n)))?,
    };
    bps_report(cfg, cache, pair, false)
}

#[derive(Serialize)]
struct SweepEntry {
    n: usize,
    a: usize,
    insertions: [InsertionPair; 2],
    rows: Vec<BpsRow>,
}

pub fn sweep(n_min: usize, n_max: usize, d_max: usize, format: Format, cache: &Cache) -> CliResult<Outcome> {
    if n_min < 5 || n_min > n_max {
        return Err(CliError::Config(format!("need 5 ≤ n-min ≤ n-max, got {n_min}..{n_max}")));
    }
    let stores = (n_min..=n_max)
        .into_par_iter()
        .map(|n| InvariantStore::load(n, n, d_max, Some(cache)))
        .collect::<CliResult<Vec<_>>>()?;
    let mut entries = Vec::new();
    for store in &stores {
        for pair in primary_pairs(store.n) {
            entries.push(SweepEntry {
                n: store.n,
                a: store.a,
                insertions: pair,
                rows: store.bps(pair, d_max)?,
            });
        }
    }
    let failures: Vec<_> = entries
        .iter()
        .flat_map(|e| e.rows.iter().filter(|r| !r.integral).map(move |r| json!({"n": e.n, "insertions": e.insertions, "d": r.d})))
        .collect();
    let passed = failures.is_empty();
    let output = match format {
        Format::Json => json_text(&json!({
            "n_range": [n_min, n_max],
            "d_max": d_max,
            "entries": entries,
            "non_integral": failures,
            "status": if passed { "PASS" } else { "FAIL" },
        }))?,
        Format::Csv => csv_text(
            &BPS_HEADER,
            entries.iter().flat_map(|e| bps_csv_rows(e.n, e.a, e.insertions, &e.rows)),
        )?,
    };
    Ok(Outcome { output, passed })
}

pub fn invariants(cfg: &RunConfig, cache: &Cache) -> CliResult<Outcome> {
    let keys: Vec<InvariantKey> = match cfg.insertions.as_slice() {
        [x, y] => (1..=cfg.d_max).map(|d| InvariantKey::new(d, *x, *y)).collect(),
        _ => (1..=cfg.d_max).flat_map(|d| dimension_keys(cfg.n, cfg.a, d)).collect(),
    };
    let store = InvariantStore::load(cfg.n, cfg.a, cfg.u_order, Some(cache))?;
    let mut rows: Vec<InvariantRow> = keys.iter().map(|k| store.row(k)).collect::<CliResult<_>>()?;
    rows.sort_by_key(|r| (r.d, r.a1, r.b1, r.a2, r.b2));
    let output = match cfg.format {
        Format::Json => json_text(&json!({"n": cfg.n, "a": cfg.a, "invariants": rows}))?,
        Format::Csv => csv_text(
            &["n", "a", "d", "a1", "b1", "a2", "b2", "value"],
            rows.iter().map(|r| {
                [r.n, r.a, r.d, r.a1, r.b1, r.a2, r.b2]
                    .iter()
                    .map(usize::to_string)
                    .chain([r.value.clone()])
                    .collect()
            }),
        )?,
    };
    Ok(Outcome { output, passed: true })
}

pub fn verify(cfg: &RunConfig, mutate: bool) -> CliResult<Outcome> {
    let suites = if cfg.suites.is_empty() { Suite::ALL.to_vec() } else { cfg.suites.clone() };
    let needs_family = suites.iter().any(|&s| s != Suite::Psi);
    let reports = if needs_family {
        let ctx = VerifyContext::build(cfg.n, cfg.a, cfg.d_max, cfg.alpha.clone(), mutate)?;
        let reports = ctx.run_all(&suites);
        (reports, Some(ctx.spec.describe()), ctx.mutation)
    } else {
        (vec![crate::verify::psi_suite()], None, None)
    };
    let (reports, alpha, mutation) = reports;
    let passed = reports.iter().all(|r| r.passed());
    let output = match cfg.format {
        Format::Json => json_text(&json!({
            "n": cfg.n,
            "a": cfg.a,
            "d_max": cfg.d_max,
            "alpha": alpha,
            "mutation": mutation,
            "reports": reports,
            "status": if passed { "PASS" } else { "FAIL" },
        }))?,
        Format::Csv => csv_text(
            &["suite", "status", "failures"],
            reports.iter().map(|r| {
                vec![
                    r.suite.clone(),
                    if r.passed() { "PASS" } else { "FAIL" }.to_string(),
                    r.failures.len().to_string(),
                ]
            }),
        )?,
    };
    Ok(Outcome { output, passed })
}

pub fn cache(action: CacheAction, cache: &Cache) -> CliResult<Outcome> {
    let value = match action {
        CacheAction::Clear => json!({"dir": cache.dir(), "removed": cache.clear()?}),
        CacheAction::Stat => serde_json::to_value(cache.stat()?)?,
    };
    Ok(Outcome {
        output: json_text(&value)?,
        passed: true,
    })
}
