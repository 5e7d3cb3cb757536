//! Command-line driver: `vortex solve | scan | validate | oracle`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 solver failure
//! or non-convergence, 3 scan with failed points, 4 failed check, 5 I/O.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use config::{Cli, CommandKind, RunConfig};
use error::{exit, CliError, Result};

/// Cap the global work pool at `VORTEX_THREADS` when set.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("VORTEX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "VORTEX_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

pub fn dispatch(cfg: &RunConfig) -> Result<i32> {
    match cfg.command {
        CommandKind::Solve => commands::run_solve(cfg),
        CommandKind::Scan => commands::run_scan(cfg),
        CommandKind::Validate => commands::run_validate(cfg),
        CommandKind::Oracle => commands::run_oracle(cfg),
    }
}

/// Parse `args`, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
        }
    };
    let result = configure_threads()
        .and_then(|()| RunConfig::from_cli(cli))
        .and_then(|cfg| dispatch(&cfg));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
