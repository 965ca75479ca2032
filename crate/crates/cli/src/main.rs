use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use krylov_echo_cli::{run, Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "krylov-echo", version, about = "Krylov evolution with Loschmidt-echo error estimates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Echo and true error of the Krylov approximation against the dense oracle.
    Regimes(Opts),
    /// Exact and approximate populations along the Lanczos chain.
    Snapshots(Opts),
    /// Cheap estimators next to the oracle error, with ratio columns.
    Bounds(Opts),
    /// Closed-form against numeric echo of two homogeneous chains.
    Toeplitz(Opts),
    /// Adaptive restarted evolution; writes the step log and the final state.
    Evolve(Opts),
}

#[derive(Args)]
struct Opts {
    /// key = value configuration file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// ising, goe, gue or toeplitz.
    #[arg(long)]
    model: Option<String>,
    /// Spins (ising), dimension (goe, gue) or sites (toeplitz).
    #[arg(long)]
    n: Option<usize>,
    /// Krylov subspace size.
    #[arg(short = 'N', long)]
    krylov_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Output CSV; standard output when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Estimator kinds, comma separated or repeated.
    #[arg(short, long, value_delimiter = ',')]
    estimator: Vec<String>,
    /// Any configuration key, applied after the file.
    #[arg(short, long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Opts {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        for assignment in &self.set {
            let (k, v) = assignment
                .split_once('=')
                .ok_or_else(|| anyhow!("--set expects KEY=VALUE, got {assignment:?}"))?;
            cfg.set(k.trim(), v.trim())?;
        }
        let flags = [
            ("model", self.model),
            ("n", self.n.map(|v| v.to_string())),
            ("krylov_size", self.krylov_size.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("tol", self.tol.map(|v| v.to_string())),
            ("out", self.out.map(|p| p.display().to_string())),
            ("estimators", (!self.estimator.is_empty()).then(|| self.estimator.join(","))),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        Ok(cfg)
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Regimes(o) => (Command::Regimes, o),
        Cmd::Snapshots(o) => (Command::Snapshots, o),
        Cmd::Bounds(o) => (Command::Bounds, o),
        Cmd::Toeplitz(o) => (Command::Toeplitz, o),
        Cmd::Evolve(o) => (Command::Evolve, o),
    };
    run(command, &opts.into_config()?)
}
