//! Validated run parameters.

use std::path::PathBuf;

use clap::ValueEnum;
use mirror_gw_core::algebra::rational::{decode, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Recursion,
    Mpc,
    Transforms,
    Identities,
    Reconstruction,
    Oracle,
    Psi,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Recursion,
        Suite::Mpc,
        Suite::Transforms,
        Suite::Identities,
        Suite::Reconstruction,
        Suite::Oracle,
        Suite::Psi,
    ];
}

/// An insertion τ_a H^b, written `a,b` on the command line.
pub type InsertionPair = (usize, usize);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub a: usize,
    pub u_order: usize,
    pub d_max: usize,
    pub insertions: Vec<InsertionPair>,
    #[serde(skip)]
    pub alpha: Option<Vec<Rational>>,
    pub suites: Vec<Suite>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.n < 2 {
            return Err(CliError::Config(format!("n = {} must be at least 2", self.n)));
        }
        if self.a == 0 || self.a > self.n {
            return Err(CliError::Config(format!("a = {} must satisfy 1 ≤ a ≤ n = {}", self.a, self.n)));
        }
        if self.d_max > self.u_order {
            return Err(CliError::Config(format!("d-max {} exceeds u-order {}", self.d_max, self.u_order)));
        }
        if !self.insertions.is_empty() && self.insertions.len() != 2 {
            return Err(CliError::Config(format!("--insertion must be given exactly twice, got {}", self.insertions.len())));
        }
        if let Some(&(_, b)) = self.insertions.iter().find(|&&(_, b)| b >= self.n) {
            return Err(CliError::Config(format!("hyperplane power {b} exceeds n − 1 = {}", self.n - 1)));
        }
        if let Some(alpha) = &self.alpha {
            if alpha.len() != self.n {
                return Err(CliError::Config(format!("--alpha has {} weights, n = {}", alpha.len(), self.n)));
            }
            for (i, w) in alpha.iter().enumerate() {
                if alpha[..i].contains(w) {
                    return Err(CliError::Config(format!("--alpha repeats the weight {w}")));
                }
            }
        }
        Ok(())
    }

    /// The insertion pair, or `default` when none was given.
    pub fn pair_or(&self, default: [InsertionPair; 2]) -> [InsertionPair; 2] {
        match self.insertions.as_slice() {
            [x, y] => [*x, *y],
            _ => default,
        }
    }
}

pub fn parse_insertion(s: &str) -> Result<InsertionPair, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad descendant power {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad hyperplane power {b:?}"))?;
    Ok((a, b))
}

pub fn parse_alpha(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(|w| decode(w.trim()).map_err(|e| e.to_string())).collect()
}
