//! Batch front-end: tables, sweeps, invariant dumps, verification suites and the series cache.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod invariants;
pub mod reference;
pub mod verify;

use args::{Cli, Command};
use cache::Cache;
use commands::Outcome;
use error::{CliError, CliResult};

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let cache = Cache::resolve(cli.cache_dir.as_deref());
    match &cli.command {
        Command::Table(t) => commands::table(&cli.config(t, None, vec![])?, &cache),
        Command::Bps(t) => commands::bps(&cli.config(t, None, vec![])?, &cache),
        Command::Invariants(t) => commands::invariants(&cli.config(t, None, vec![])?, &cache),
        Command::Sweep { n_min, n_max, d_max } => commands::sweep(*n_min, *n_max, *d_max, cli.format, &cache),
        Command::Verify {
            target,
            alpha,
            suites,
            mutate,
        } => commands::verify(&cli.config(target, alpha.clone(), suites.clone())?, *mutate),
        Command::Cache { action } => commands::cache(*action, &cache),
    }
}
