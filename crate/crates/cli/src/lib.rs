//! Experiment harness for `krylov-echo`: configuration, CSV tables, the
//! `KRYV1` state format and the regimes/snapshots/bounds/toeplitz/evolve
//! commands.

pub mod config;
pub mod experiments;
pub mod measure;
pub mod state_file;
pub mod table;

use anyhow::Result;

pub use config::{ExperimentConfig, ModelKind, ModelSpec};
pub use table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Regimes,
    Snapshots,
    Bounds,
    Toeplitz,
    Evolve,
}

/// Runs `command` and writes its outputs.
pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<()> {
    let out = cfg.out.as_deref();
    match command {
        Command::Regimes => experiments::regimes(cfg)?.write(out),
        Command::Snapshots => experiments::snapshots(cfg)?.write(out),
        Command::Bounds => experiments::bounds(cfg)?.write(out),
        Command::Toeplitz => experiments::toeplitz(cfg)?.write(out),
        Command::Evolve => {
            let result = experiments::evolve(cfg)?;
            state_file::write_state(&experiments::state_path(cfg), &result.report.final_state)?;
            result.table.write(out)
        }
    }
}
