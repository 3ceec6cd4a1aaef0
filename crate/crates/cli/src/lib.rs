//! Command-line front end for `switchstab-core`.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;
pub mod svg;

use std::time::Instant;

pub use args::{Cli, Command};
pub use error::{CliError, Result};
pub use input::MatrixSetFile;
pub use report::{Report, Status, Valued};

/// Runs a parsed command line; `echo` is recorded verbatim in the report.
pub fn run(cli: &Cli, echo: &str) -> Result<Report> {
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Bounds(a) => commands::bounds(a)?,
        Command::Lyap(a) => commands::lyap(a)?,
        Command::Orbit(a) => commands::orbit(a)?,
        Command::CaseStanford(a) => commands::case_stanford(a)?,
        Command::Ct(a) => commands::ct(a)?,
        Command::Export(a) => commands::export(a)?,
    };
    Ok(Report {
        command: echo.to_string(),
        input_digest: outcome.digest,
        version: env!("CARGO_PKG_VERSION"),
        payload: outcome.payload,
        timing: report::Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Applies `SWITCHSTAB_THREADS` to the global worker pool.
pub fn configure_threads(value: Option<&str>) -> Result<()> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Input(format!(
            "SWITCHSTAB_THREADS: expected a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("SWITCHSTAB_THREADS: {e}")))
}
