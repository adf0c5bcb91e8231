//! Verification reports, serialized as {suite, params, status, failures:[{i, d, detail}]}.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// Fixed-point index (0-based), when the failure is local to one.
    pub i: Option<usize>,
    pub d: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub params: Value,
    pub status: Status,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new(suite: impl Into<String>, params: Value, failures: Vec<Failure>) -> Self {
        let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
        Self {
            suite: suite.into(),
            params,
            status,
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Combines several reports under one suite name.
    pub fn merge(suite: impl Into<String>, params: Value, parts: &[Report]) -> Self {
        let failures = parts
            .iter()
            .flat_map(|r| {
                r.failures.iter().map(|f| Failure {
                    i: f.i,
                    d: f.d,
                    detail: format!("{}: {}", r.suite, f.detail),
                })
            })
            .collect();
        Self::new(suite, params, failures)
    }
}

impl Failure {
    pub fn at(i: Option<usize>, d: Option<usize>, detail: impl Into<String>) -> Self {
        Self {
            i,
            d,
            detail: detail.into(),
        }
    }
}
