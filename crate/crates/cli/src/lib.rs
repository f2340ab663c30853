//! Command-line front end: configuration, dispatch and provenance-tracked output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use config::RunConfig;
pub use error::CliError;
pub use manifest::{RunManifest, MANIFEST_FILE};

/// Runs a resolved configuration and writes its outputs and manifest.
pub fn execute(cfg: &RunConfig) -> Result<RunManifest, CliError> {
    let started = manifest::timestamp();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let out = pool.install(|| commands::run(cfg))?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    manifest::commit(cfg, started, &out)
}

/// Parses `args` (program name first) and runs; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.resolve().and_then(|cfg| execute(&cfg)) {
        Ok(m) => {
            println!("{}", m.config.output_dir.join(MANIFEST_FILE).display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
