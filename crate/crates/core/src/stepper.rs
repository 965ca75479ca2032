//! Adaptive time stepping driven by the cheap error estimators.
//!
//! Each step builds a fresh Krylov basis at the current state, picks the
//! largest step whose estimated error fits the budget, evolves and restarts.
//!
//! Step errors are vectors that can add coherently, so the infidelity of the
//! final state is bounded by `(Σ_k √ε_k)²`, not by `Σ_k ε_k`. The budget is
//! therefore allocated in amplitude and in proportion to time: with `a` of the
//! amplitude budget `√tol` already used, a step of length `Δt` may spend
//! `ε ≤ ((√tol − a) Δt / t_remaining)²`. The report carries both the plain sum
//! of step estimates and the composed bound.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::estimators::{ErrorEstimator, EstimatorKind};
use crate::lanczos::{lanczos_iterate, KrylovBasis, Reorthogonalization};
use crate::operator::LinearOperator;
use crate::propagator::KrylovPropagator;
use crate::state::ComplexState;

/// Smallest trial step of the bracket search.
pub const DT_MIN: f64 = 1e-6;
/// Multiplier applied to the located crossing.
pub const SAFETY_FACTOR: f64 = 0.9;
/// Relative width at which bisection stops.
pub const BISECTION_RTOL: f64 = 1e-4;

/// Largest `t ≤ t_cap` before `estimate(t)` first exceeds `threshold(t)`, or
/// `None` when no sampled point exceeds it.
fn first_crossing(
    estimate: impl Fn(f64) -> f64,
    threshold: impl Fn(f64) -> f64,
    t_cap: f64,
) -> Result<Option<f64>> {
    let exceeds = |t: f64| estimate(t) > threshold(t);
    let mut lo = DT_MIN.min(t_cap);
    if exceeds(lo) {
        return Err(Error::BudgetUnreachable { budget: threshold(lo), dt_min: lo, estimate: estimate(lo) });
    }
    if lo >= t_cap {
        return Ok(None);
    }
    let mut hi = lo;
    loop {
        hi = (hi * 2.0).min(t_cap);
        if exceeds(hi) {
            break;
        }
        if hi >= t_cap {
            return Ok(None);
        }
        lo = hi;
    }
    while hi - lo > BISECTION_RTOL * lo {
        let mid = 0.5 * (lo + hi);
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(lo))
}

/// Largest step whose estimate stays within `budget`, times [`SAFETY_FACTOR`];
/// `t_cap` if the estimate never exceeds the budget.
pub fn max_step_for_tolerance(estimator: &ErrorEstimator, budget: f64, t_cap: f64) -> Result<f64> {
    if !(budget > 0.0 && budget <= 1.0) {
        return Err(Error::InvalidParameter(format!("budget {budget} outside (0, 1]")));
    }
    if t_cap.is_nan() || t_cap <= 0.0 {
        return Err(Error::InvalidParameter(format!("step cap {t_cap} must be positive")));
    }
    let crossing = first_crossing(|t| estimator.value(t), |_| budget, t_cap)?;
    Ok(crossing.map_or(t_cap, |t| t * SAFETY_FACTOR))
}

/// [`max_step_for_tolerance`] preparing the estimator from the basis alone. An
/// [`EstimatorKind::ExtraSiteExact`] basis is read as already extended.
pub fn max_step_for_basis(basis: &KrylovBasis, budget: f64, kind: EstimatorKind, t_cap: f64) -> Result<f64> {
    max_step_for_tolerance(&ErrorEstimator::from_basis(kind, basis)?, budget, t_cap)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub t_final: f64,
    pub tol: f64,
    pub krylov_size: usize,
    pub kind: EstimatorKind,
    pub reorthogonalization: Reorthogonalization,
    pub max_steps: usize,
}

impl StepperConfig {
    pub fn new(t_final: f64, tol: f64, krylov_size: usize, kind: EstimatorKind) -> Self {
        Self {
            t_final,
            tol,
            krylov_size,
            kind,
            reorthogonalization: Reorthogonalization::Full,
            max_steps: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t_start: f64,
    pub dt: f64,
    pub basis_size: usize,
    pub estimated_error: f64,
    pub budget: f64,
    pub estimator_kind: EstimatorKind,
    pub wall_time: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionReport {
    pub final_state: ComplexState,
    pub steps: Vec<StepRecord>,
    /// `Σ_k ε_k` over accepted steps.
    pub total_estimated_error: f64,
    /// `(Σ_k √ε_k)²`, the coherent composition of the step errors; `≤ tol`.
    pub composed_error_bound: f64,
    pub config: StepperConfig,
}

impl EvolutionReport {
    /// Equality of everything except wall-clock timings.
    pub fn same_trajectory(&self, other: &EvolutionReport) -> bool {
        self.final_state == other.final_state
            && self.total_estimated_error.to_bits() == other.total_estimated_error.to_bits()
            && self.composed_error_bound.to_bits() == other.composed_error_bound.to_bits()
            && self.config == other.config
            && self.steps.len() == other.steps.len()
            && self.steps.iter().zip(&other.steps).all(|(a, b)| {
                a.t_start.to_bits() == b.t_start.to_bits()
                    && a.dt.to_bits() == b.dt.to_bits()
                    && a.basis_size == b.basis_size
                    && a.estimated_error.to_bits() == b.estimated_error.to_bits()
                    && a.budget.to_bits() == b.budget.to_bits()
                    && a.estimator_kind == b.estimator_kind
            })
    }
}

/// Evolves `psi` to `config.t_final` with restarted Krylov steps.
pub fn evolve_adaptive<H: LinearOperator + ?Sized>(
    h: &H,
    psi: &ComplexState,
    config: StepperConfig,
) -> Result<EvolutionReport> {
    if !(config.tol > 0.0 && config.tol < 1.0) {
        return Err(Error::InvalidParameter(format!("tolerance {} outside (0, 1)", config.tol)));
    }
    if config.t_final.is_nan() || config.t_final <= 0.0 {
        return Err(Error::InvalidParameter(format!("final time {} must be positive", config.t_final)));
    }
    if config.kind == EstimatorKind::Oracle {
        return Err(Error::InvalidParameter("the oracle cannot drive the stepper".into()));
    }
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), actual: psi.dim() });
    }

    let mut state = psi.clone().normalized()?;
    let mut steps = Vec::new();
    let amplitude_budget = config.tol.sqrt();
    let mut spent_amplitude = 0.0;
    let mut t = 0.0;
    let end_slack = 1e-12 * config.t_final;

    while config.t_final - t > end_slack {
        if steps.len() >= config.max_steps {
            return Err(Error::InvalidParameter(format!(
                "step limit {} reached at t = {t}",
                config.max_steps
            )));
        }
        let clock = Instant::now();
        let remaining = config.t_final - t;
        let basis = lanczos_iterate(h, &state, config.krylov_size.min(h.dim()), config.reorthogonalization)?;

        let exact = basis.breakdown() || basis.len() == h.dim();
        let rate = (amplitude_budget - spent_amplitude).max(0.0) / remaining;
        let step_budget = |dt: f64| (rate * dt).powi(2);
        let (dt, estimated_error) = if exact {
            (remaining, 0.0)
        } else {
            let estimator = ErrorEstimator::prepare(config.kind, &basis, h)?;
            let crossing = first_crossing(|s| estimator.value(s), step_budget, remaining)?;
            let mut dt = crossing.map_or(remaining, |c| (c * SAFETY_FACTOR).min(remaining));
            let mut err = estimator.value(dt);
            // The bracket only samples the estimator; back off if the accepted
            // point itself overshoots.
            while err > step_budget(dt) {
                dt *= 0.5;
                err = estimator.value(dt);
                if dt < DT_MIN {
                    return Err(Error::BudgetUnreachable {
                        budget: step_budget(dt),
                        dt_min: dt,
                        estimate: err,
                    });
                }
            }
            (dt, err)
        };
        let budget = step_budget(dt);

        let propagator = KrylovPropagator::new(&basis);
        state = propagator.evolve(dt);
        state.normalize()?;
        spent_amplitude += estimated_error.sqrt();
        steps.push(StepRecord {
            t_start: t,
            dt,
            basis_size: basis.len(),
            estimated_error,
            budget,
            estimator_kind: config.kind,
            wall_time: clock.elapsed().as_secs_f64(),
        });
        t = if dt == remaining { config.t_final } else { t + dt };
    }

    let total_estimated_error = steps.iter().map(|s| s.estimated_error).sum();
    let composed_error_bound = steps.iter().map(|s| s.estimated_error.sqrt()).sum::<f64>().powi(2);
    Ok(EvolutionReport { final_state: state, steps, total_estimated_error, composed_error_bound, config })
}
