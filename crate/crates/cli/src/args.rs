//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mirror_gw_core::algebra::rational::Rational;

use crate::config::{parse_alpha, parse_insertion, Format, InsertionPair, RunConfig, Suite};
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "mirror-gw", version, about = "Exact genus-zero invariants of projective hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Cache directory; MIRROR_GW_CACHE is used when absent.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct Target {
    /// Ambient ℙ^{n−1}.
    #[arg(long)]
    pub n: usize,
    /// Hypersurface degree; defaults to n.
    #[arg(long)]
    pub a: Option<usize>,
    /// Highest curve degree.
    #[arg(long)]
    pub d_max: usize,
    /// Series truncation; defaults to d-max.
    #[arg(long)]
    pub u_order: Option<usize>,
    /// `a,b` for τ_a H^b; give exactly twice.
    #[arg(long = "insertion", value_parser = parse_insertion)]
    pub insertions: Vec<InsertionPair>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// BPS numbers for one insertion pair, checked against known values when available.
    Table(Target),
    /// GW and BPS numbers for every degree-n Calabi–Yau hypersurface with n in range.
    Sweep {
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// Highest curve degree.
        #[arg(long)]
        d_max: usize,
    },
    /// Two-point invariants ⟨τ_{a1}H^{b1}, τ_{a2}H^{b2}⟩_d.
    Invariants(Target),
    /// GW and BPS numbers for one insertion pair.
    Bps(Target),
    /// Runs verification suites at specialized torus weights.
    Verify {
        #[command(flatten)]
        target: Target,
        /// Comma-separated weights α_1,…,α_n; generic weights are chosen when absent.
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<::std::vec::Vec<Rational>>,
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
        /// Injects a stray pole into 𝒴₋₁ before checking.
        #[arg(long)]
        mutate: bool,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand, Clone, Copy)]
pub enum CacheAction {
    Clear,
    Stat,
}

impl Cli {
    /// The validated configuration for a target-based command.
    pub fn config(&self, target: &Target, alpha: Option<Vec<Rational>>, suites: Vec<Suite>) -> CliResult<RunConfig> {
        let cfg = RunConfig {
            n: target.n,
            a: target.a.unwrap_or(target.n),
            u_order: target.u_order.unwrap_or(target.d_max),
            d_max: target.d_max,
            insertions: target.insertions.clone(),
            alpha,
            suites,
            format: self.format,
            cache_dir: self.cache_dir.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
