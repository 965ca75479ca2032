//! The five commands, each turning an [`ExperimentConfig`] into a [`Table`].

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Result};
use krylov_echo::{
    evolve_adaptive, inner, lanczos_iterate, project_profile, true_infidelity, AveragedBand, ChainEcho,
    ComplexState, DenseEvolver, ErrorEstimator, EstimatorKind, EvolutionReport, KrylovBasis,
    KrylovPropagator, Reorthogonalization, StepperConfig, SymmetricTridiagonal, ToeplitzEcho,
};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Model};
use crate::measure::{regime_times, RegimeTimes};
use crate::table::{Cell, Table};

fn preamble(command: &str, cfg: &ExperimentConfig) -> Vec<String> {
    let mut lines = vec![format!("krylov-echo {command}")];
    lines.extend(cfg.entries().into_iter().map(|(k, v)| format!("{k} = {v}")));
    lines
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v:.15e}"))
}

fn basis(model: &Model, n: usize) -> Result<KrylovBasis> {
    Ok(lanczos_iterate(&model.operator, &model.initial, n, Reorthogonalization::Full)?)
}

/// Echo and true error of the size-`N` approximation on the configured grid.
#[derive(Debug, Clone)]
pub struct RegimeCurve {
    pub times: Vec<f64>,
    pub echo: Vec<f64>,
    pub error: Vec<f64>,
}

impl RegimeCurve {
    pub fn times(&self) -> RegimeTimes {
        regime_times(&self.times, &self.echo, &self.error)
    }
}

pub fn regime_curve(cfg: &ExperimentConfig) -> Result<RegimeCurve> {
    cfg.validate_grid()?;
    cfg.validate_krylov_size()?;
    cfg.validate_oracle()?;
    let model = cfg.build_model()?;
    let basis = basis(&model, cfg.krylov_size)?;
    let oracle = DenseEvolver::new(&model.operator, cfg.oracle_cap)?;
    let prop = KrylovPropagator::new(&basis);
    let psi = model.initial.clone().normalized()?;
    let times = cfg.grid();
    let points: Vec<(f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let approx = prop.evolve(t).normalized()?;
            let exact = oracle.evolve(&psi, t)?;
            Ok((inner(&approx, &exact)?.norm_sqr(), true_infidelity(&approx, &exact)?))
        })
        .collect::<Result<_>>()?;
    let (echo, error) = points.into_iter().unzip();
    Ok(RegimeCurve { times, echo, error })
}

pub fn regimes(cfg: &ExperimentConfig) -> Result<Table> {
    let curve = regime_curve(cfg)?;
    let mut table = Table::new(["t", "echo", "error"]);
    table.preamble = preamble("regimes", cfg);
    for i in 0..curve.times.len() {
        table.push(vec![curve.times[i].into(), curve.echo[i].into(), curve.error[i].into()])?;
    }
    let marks = curve.times();
    table.summary.push(format!("t_exp = {}", fmt_opt(marks.t_exp)));
    table.summary.push(format!("t_col = {}", fmt_opt(marks.t_col)));
    Ok(table)
}

pub fn snapshots(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate_krylov_size()?;
    cfg.validate_oracle()?;
    ensure!(!cfg.times.is_empty(), "no snapshot times given");
    let model = cfg.build_model()?;
    let dim = model.operator.dim();
    let n = cfg.krylov_size;
    let m = cfg.extended_size.unwrap_or((2 * n).min(dim));
    ensure!(m >= n, "extended_size = {m} must be at least krylov_size = {n}");
    ensure!(m <= dim, "extended_size = {m} exceeds the model dimension {dim}");
    let long = basis(&model, m)?;
    ensure!(
        long.len() >= n,
        "the Krylov space is invariant after {} vectors, below krylov_size = {n}",
        long.len()
    );
    let short = KrylovPropagator::with_sites(&long, n)?;
    let oracle = DenseEvolver::new(&model.operator, cfg.oracle_cap)?;
    let psi = model.initial.clone().normalized()?;

    let mut table = Table::new(["t", "site", "exact_population", "krylov_population"]);
    table.preamble = preamble("snapshots", cfg);
    for &t in &cfg.times {
        let exact = project_profile(&long, &oracle.evolve(&psi, t)?, t)?;
        let coeffs = short.reduced_coefficients(t);
        let mut krylov = vec![0.0; exact.site_populations.len()];
        for (p, z) in krylov.iter_mut().zip(&coeffs) {
            *p = z.norm_sqr();
        }
        for (site, (&pe, &pk)) in exact.site_populations.iter().zip(&krylov).enumerate() {
            table.push(vec![t.into(), site.into(), pe.into(), pk.into()])?;
        }
        let krylov_profile = krylov_echo::WavepacketProfile { time: t, site_populations: krylov };
        table.summary.push(format!(
            "t = {t:.15e} center_of_mass exact = {:.15e} krylov = {:.15e}",
            exact.center_of_mass(),
            krylov_profile.center_of_mass()
        ));
    }
    Ok(table)
}

fn requested_estimators(cfg: &ExperimentConfig) -> Vec<EstimatorKind> {
    let mut kinds = Vec::new();
    for &k in &cfg.estimators {
        if k != EstimatorKind::Oracle && !kinds.contains(&k) {
            kinds.push(k);
        }
    }
    kinds
}

pub fn bounds(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate_grid()?;
    cfg.validate_krylov_size()?;
    cfg.validate_oracle()?;
    let model = cfg.build_model()?;
    let basis = basis(&model, cfg.krylov_size)?;
    let kinds = requested_estimators(cfg);
    let estimators: Vec<ErrorEstimator> = kinds
        .iter()
        .map(|&k| ErrorEstimator::prepare(k, &basis, &model.operator))
        .collect::<Result<_, _>>()?;
    let band = if cfg.band { Some(AveragedBand::new(&basis)?) } else { None };
    let oracle = DenseEvolver::new(&model.operator, cfg.oracle_cap)?;
    let prop = KrylovPropagator::new(&basis);
    let psi = model.initial.clone().normalized()?;

    let mut columns = vec!["t".to_string(), "oracle".to_string()];
    columns.extend(kinds.iter().map(|k| k.to_string()));
    columns.extend(kinds.iter().map(|k| format!("{k}/oracle")));
    if band.is_some() {
        columns.extend(["band_min".to_string(), "band_max".to_string()]);
    }
    let mut table = Table::new(columns);
    table.preamble = preamble("bounds", cfg);

    let rows: Vec<Vec<Cell>> = cfg
        .grid()
        .par_iter()
        .map(|&t| {
            let truth = true_infidelity(&prop.evolve(t), &oracle.evolve(&psi, t)?)?;
            let values: Vec<f64> = estimators.iter().map(|e| e.value(t)).collect();
            let mut row: Vec<Cell> = vec![t.into(), truth.into()];
            row.extend(values.iter().map(|&v| Cell::Num(v)));
            row.extend(values.iter().map(|&v| Cell::Num(v / truth)));
            if let Some(b) = &band {
                let (lo, hi) = b.envelope(t);
                row.extend([Cell::Num(lo), Cell::Num(hi)]);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for row in rows {
        table.push(row)?;
    }
    Ok(table)
}

pub fn toeplitz(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate_grid()?;
    let n = cfg.krylov_size;
    let n_prime = cfg.n_prime.unwrap_or(n + 1);
    ensure!(n >= 1 && n_prime >= 1, "chain lengths must be at least 1");
    let analytic = ToeplitzEcho::new(n, n_prime, cfg.alpha, cfg.beta)?;
    let numeric = ChainEcho::new(
        &SymmetricTridiagonal::homogeneous(n, cfg.alpha, cfg.beta)?,
        &SymmetricTridiagonal::homogeneous(n_prime, cfg.alpha, cfg.beta)?,
    );
    let mut table = Table::new(["t", "analytic", "numeric", "abs_diff"]);
    table.preamble = preamble("toeplitz", cfg);
    let mut worst: f64 = 0.0;
    for t in cfg.grid() {
        let a = analytic.amplitude(t).norm_sqr();
        let b = numeric.amplitude(t).norm_sqr();
        worst = worst.max((a - b).abs());
        table.push(vec![t.into(), a.into(), b.into(), (a - b).abs().into()])?;
    }
    table.summary.push(format!("max_abs_diff = {worst:.15e}"));
    Ok(table)
}

pub struct EvolveOutput {
    pub table: Table,
    pub report: EvolutionReport,
    /// Oracle infidelity of the final state, when the dimension allows it.
    pub true_infidelity: Option<f64>,
}

pub fn evolve(cfg: &ExperimentConfig) -> Result<EvolveOutput> {
    cfg.validate_krylov_size()?;
    let Some(&kind) = requested_estimators(cfg).first() else {
        bail!("evolve needs a cheap estimator; the oracle cannot drive the stepper");
    };
    let model = cfg.build_model()?;
    let mut stepper = StepperConfig::new(cfg.t_final, cfg.tol, cfg.krylov_size, kind);
    stepper.max_steps = cfg.max_steps;
    let report = evolve_adaptive(&model.operator, &model.initial, stepper)?;

    let true_infidelity = if model.operator.dim() <= cfg.oracle_cap {
        let oracle = DenseEvolver::new(&model.operator, cfg.oracle_cap)?;
        let psi: ComplexState = model.initial.clone().normalized()?;
        Some(krylov_echo::true_infidelity(&report.final_state, &oracle.evolve(&psi, cfg.t_final)?)?)
    } else {
        None
    };

    let mut table = Table::new([
        "step",
        "t_start",
        "dt",
        "basis_size",
        "estimated_error",
        "budget",
        "estimator",
        "wall_time",
    ]);
    table.preamble = preamble("evolve", cfg);
    for (i, s) in report.steps.iter().enumerate() {
        table.push(vec![
            i.into(),
            s.t_start.into(),
            s.dt.into(),
            s.basis_size.into(),
            s.estimated_error.into(),
            s.budget.into(),
            s.estimator_kind.name().into(),
            s.wall_time.into(),
        ])?;
    }
    table.summary.push(format!("steps = {}", report.steps.len()));
    table.summary.push(format!("total_estimated_error = {:.15e}", report.total_estimated_error));
    table.summary.push(format!("composed_error_bound = {:.15e}", report.composed_error_bound));
    if let Some(eps) = true_infidelity {
        table.summary.push(format!("true_final_infidelity = {eps:.15e}"));
    }
    Ok(EvolveOutput { table, report, true_infidelity })
}

/// Where `evolve` writes the final state: `state_out`, else the CSV path with
/// a `.kryv` extension, else `final_state.kryv`.
pub fn state_path(cfg: &ExperimentConfig) -> PathBuf {
    match (&cfg.state_out, &cfg.out) {
        (Some(p), _) => p.clone(),
        (None, Some(out)) => out.with_extension("kryv"),
        (None, None) => Path::new("final_state.kryv").to_path_buf(),
    }
}
