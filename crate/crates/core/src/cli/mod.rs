//! Command-line front end.
//!
//! `pulsedistill <command> [--key value ...] [--config path]`
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical failure.

mod commands;
mod config;

use std::io::Write;
use std::path::Path;

use thiserror::Error;

pub use commands::{
    cmd_compare_rwa, cmd_distill, cmd_evolve, cmd_spectrum, cmd_sweep, execute, fmt_fixed,
    CompareSummary, Report,
};
pub use config::{
    parse_config, parse_config_text, parse_real, Command, Format, RunConfig, DEFAULT_PAIRS,
    DEFAULT_SEED, SEED_ENV,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {message}")]
    Config {
        key: Option<String>,
        line: Option<usize>,
        message: String,
    },

    #[error("{0}")]
    Clap(clap::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config {
                key: None,
                line: None,
                message: e.to_string(),
            }
        }
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Parses, dispatches and writes the artifact; returns the process exit code.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_config(args, env_seed).and_then(|cfg| {
        let report = execute(&cfg)?;
        write_output(cfg.output_path.as_deref(), &report.content)?;
        if let Some(line) = &report.summary {
            if cfg.output_path.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
        Err(e) => {
            eprintln!("pulsedistill: {e}");
            e.exit_code()
        }
    }
}
