//! Loschmidt-echo estimates of the Krylov approximation error.
//!
//! The infidelity `ε_N(t) = 1 − |⟨ψ_N(t)|ψ(t)⟩|²` equals one minus the echo
//! between the size-`N` Lanczos chain (zero-padded) and the full chain. The
//! estimators here replace the full chain by something cheap:
//!
//! * **extra-site exact**: the `N+1` chain from one extra Lanczos step;
//! * **extra-site averaged**: the `N+1` chain with the unknown site filled in
//!   from averages of the known coefficients (no extra operator application);
//! * **Toeplitz analytic**: the closed-form echo of two homogeneous chains with
//!   the averaged coefficients;
//! * **Park–Light**: the population reaching the last site of the `N` chain.
//!
//! All values are `1 − |amplitude|²` clamped to `[0, 1]`, evaluated as the norm of
//! an orthogonal component so that tiny errors are resolved.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lanczos::KrylovBasis;
use crate::operator::LinearOperator;
use crate::state::{dot, orthogonal_infidelity};
use crate::toeplitz::ToeplitzEcho;
use crate::tridiagonal::{SymmetricTridiagonal, TridiagonalPropagator};

/// How the coupling to the virtual site is chosen in the averaged estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AveragingMode {
    /// Coupling `β̄` and onsite `ᾱ`, both history averages.
    Literal,
    /// Coupling is the exactly known residual `β_N`; onsite `ᾱ`.
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Oracle,
    ExtraSiteExact,
    ExtraSiteAveraged(AveragingMode),
    ToeplitzAnalytic,
    ParkLight,
}

impl EstimatorKind {
    pub const CHEAP: [EstimatorKind; 5] = [
        EstimatorKind::ExtraSiteExact,
        EstimatorKind::ExtraSiteAveraged(AveragingMode::Literal),
        EstimatorKind::ExtraSiteAveraged(AveragingMode::Hybrid),
        EstimatorKind::ToeplitzAnalytic,
        EstimatorKind::ParkLight,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Oracle => "oracle",
            EstimatorKind::ExtraSiteExact => "extra_site_exact",
            EstimatorKind::ExtraSiteAveraged(AveragingMode::Literal) => "extra_site_averaged",
            EstimatorKind::ExtraSiteAveraged(AveragingMode::Hybrid) => "extra_site_averaged_hybrid",
            EstimatorKind::ToeplitzAnalytic => "toeplitz_analytic",
            EstimatorKind::ParkLight => "park_light",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [EstimatorKind::Oracle].into_iter().chain(EstimatorKind::CHEAP);
        for kind in all {
            if kind.name() == s {
                return Ok(kind);
            }
        }
        match s {
            "extra_site_averaged_literal" => Ok(EstimatorKind::ExtraSiteAveraged(AveragingMode::Literal)),
            _ => Err(Error::InvalidParameter(format!("unknown estimator kind `{s}`"))),
        }
    }
}

/// A time-stamped error value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub value: f64,
    pub time: f64,
    pub kind: EstimatorKind,
}

/// History averages standing in for the coefficients of the next site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedCoefficients {
    pub alpha_bar: f64,
    pub beta_bar: f64,
}

/// `ᾱ` over `α_1..α_N` and `β̄` over the couplings `β_1..β_{N−1}` inside `T_N`.
/// A single-site basis has no internal coupling; `β̄` is then the residual `β_1`.
pub fn averaged_coefficients(basis: &KrylovBasis) -> AveragedCoefficients {
    coefficients_of(&basis.tridiagonal(), basis.residual_beta())
}

fn coefficients_of(t: &SymmetricTridiagonal, residual_beta: f64) -> AveragedCoefficients {
    let alpha_bar = t.diag().iter().sum::<f64>() / t.len() as f64;
    let beta_bar = if t.offdiag().is_empty() {
        residual_beta
    } else {
        t.offdiag().iter().sum::<f64>() / t.offdiag().len() as f64
    };
    AveragedCoefficients { alpha_bar, beta_bar }
}

/// A pair of chains evolved from their first site, compared by overlap.
#[derive(Debug, Clone)]
pub struct ChainEcho {
    a: TridiagonalPropagator,
    b: TridiagonalPropagator,
}

impl ChainEcho {
    pub fn new(a: &SymmetricTridiagonal, b: &SymmetricTridiagonal) -> Self {
        Self { a: TridiagonalPropagator::new(a), b: TridiagonalPropagator::new(b) }
    }

    /// `⟨0| e^{+iT_A t} e^{−iT_B t} |0⟩`, both chains zero-padded to the longer length.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let a = self.a.evolve_first(t);
        let b = self.b.evolve_first(t);
        let m = a.len().min(b.len());
        dot(&a[..m], &b[..m])
    }

    /// `1 − |amplitude|²`
    pub fn infidelity(&self, t: f64) -> f64 {
        orthogonal_infidelity(&self.a.evolve_first(t), &self.b.evolve_first(t))
    }
}

/// Echo amplitude between two tridiagonal chains, padded with zeros to a common size.
pub fn echo_general(a: &SymmetricTridiagonal, b: &SymmetricTridiagonal, t: f64) -> Complex64 {
    ChainEcho::new(a, b).amplitude(t)
}

#[derive(Debug, Clone)]
enum Engine {
    Echo(ChainEcho),
    Toeplitz(ToeplitzEcho),
    EndPopulation(TridiagonalPropagator),
    /// The basis spans an invariant subspace: the error is identically zero.
    Exact,
}

/// A cheap estimator prepared from one basis, evaluated at many times.
#[derive(Debug, Clone)]
pub struct ErrorEstimator {
    kind: EstimatorKind,
    order: usize,
    engine: Engine,
}

impl ErrorEstimator {
    /// Prepares `kind` for the size-`N` basis. The exact extra-site estimator
    /// performs one extra operator application through [`KrylovBasis::extend_one`];
    /// the others use only what the basis already holds.
    pub fn prepare<H: LinearOperator + ?Sized>(
        kind: EstimatorKind,
        basis: &KrylovBasis,
        h: &H,
    ) -> Result<Self> {
        match kind {
            EstimatorKind::ExtraSiteExact => {
                if basis.breakdown() {
                    return Ok(Self::exact(kind, basis.len()));
                }
                let extended = basis.clone().extend_one(h)?;
                Self::extra_site_exact(&extended)
            }
            _ => Self::from_basis(kind, basis),
        }
    }

    /// Prepares an estimator that needs no operator. For
    /// [`EstimatorKind::ExtraSiteExact`] the basis must already be extended:
    /// it is read as `N+1` sites estimating the error of the first `N`.
    pub fn from_basis(kind: EstimatorKind, basis: &KrylovBasis) -> Result<Self> {
        match kind {
            EstimatorKind::Oracle => Err(Error::InvalidParameter(
                "the oracle is not a basis estimator; use the dense evolver".into(),
            )),
            EstimatorKind::ExtraSiteExact => Self::extra_site_exact(basis),
            EstimatorKind::ExtraSiteAveraged(mode) => Self::extra_site_averaged(basis, mode),
            EstimatorKind::ToeplitzAnalytic => Self::toeplitz_analytic(basis),
            EstimatorKind::ParkLight => Self::park_light(basis),
        }
    }

    fn exact(kind: EstimatorKind, order: usize) -> Self {
        Self { kind, order, engine: Engine::Exact }
    }

    /// `ε_N^{N+1}` from an extended basis of `N+1` sites.
    pub fn extra_site_exact(extended: &KrylovBasis) -> Result<Self> {
        let m = extended.len();
        if m < 2 {
            return Err(Error::BasisTooSmall { required: 2, actual: m });
        }
        let long = extended.tridiagonal();
        let short = long.leading(m - 1)?;
        Ok(Self {
            kind: EstimatorKind::ExtraSiteExact,
            order: m - 1,
            engine: Engine::Echo(ChainEcho::new(&short, &long)),
        })
    }

    /// `ε̄_N^{N+1}` with the virtual site built from history averages.
    pub fn extra_site_averaged(basis: &KrylovBasis, mode: AveragingMode) -> Result<Self> {
        let kind = EstimatorKind::ExtraSiteAveraged(mode);
        let n = basis.len();
        if n < 2 {
            return Err(Error::BasisTooSmall { required: 2, actual: n });
        }
        if basis.breakdown() {
            return Ok(Self::exact(kind, n));
        }
        let avg = averaged_coefficients(basis);
        let coupling = match mode {
            AveragingMode::Literal => avg.beta_bar,
            AveragingMode::Hybrid => basis.residual_beta(),
        };
        Ok(Self::with_virtual_site(kind, &basis.tridiagonal(), avg.alpha_bar, coupling))
    }

    fn with_virtual_site(kind: EstimatorKind, t: &SymmetricTridiagonal, alpha: f64, beta: f64) -> Self {
        let long = t.extended(alpha, beta);
        Self { kind, order: t.len(), engine: Engine::Echo(ChainEcho::new(t, &long)) }
    }

    /// `ε̃_N^{N+1}`: closed-form homogeneous-chain echo with `ᾱ`, `β̄`.
    pub fn toeplitz_analytic(basis: &KrylovBasis) -> Result<Self> {
        let kind = EstimatorKind::ToeplitzAnalytic;
        let n = basis.len();
        if n < 2 {
            return Err(Error::BasisTooSmall { required: 2, actual: n });
        }
        if basis.breakdown() {
            return Ok(Self::exact(kind, n));
        }
        let avg = averaged_coefficients(basis);
        Ok(Self {
            kind,
            order: n,
            engine: Engine::Toeplitz(ToeplitzEcho::new(n, n + 1, avg.alpha_bar, avg.beta_bar)?),
        })
    }

    /// `|⟨e_N| e^{−iT_N t} |e_1⟩|²`, the population at the far end of the chain.
    pub fn park_light(basis: &KrylovBasis) -> Result<Self> {
        Ok(Self {
            kind: EstimatorKind::ParkLight,
            order: basis.len(),
            engine: Engine::EndPopulation(TridiagonalPropagator::new(&basis.tridiagonal())),
        })
    }

    pub fn kind(&self) -> EstimatorKind {
        self.kind
    }

    /// Size `N` of the approximation whose error is estimated.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.engine, Engine::Exact)
    }

    pub fn value(&self, t: f64) -> f64 {
        let v = match &self.engine {
            Engine::Echo(echo) => echo.infidelity(t),
            Engine::Toeplitz(echo) => echo.infidelity(t),
            Engine::EndPopulation(p) => p.evolve_first(t).last().map(|z| z.norm_sqr()).unwrap_or(0.0),
            Engine::Exact => 0.0,
        };
        v.clamp(0.0, 1.0)
    }

    pub fn estimate(&self, t: f64) -> ErrorEstimate {
        ErrorEstimate { value: self.value(t), time: t, kind: self.kind }
    }
}

pub fn estimate_extra_site_exact(extended: &KrylovBasis, t: f64) -> Result<ErrorEstimate> {
    Ok(ErrorEstimator::extra_site_exact(extended)?.estimate(t))
}

pub fn estimate_extra_site_averaged(
    basis: &KrylovBasis,
    t: f64,
    mode: AveragingMode,
) -> Result<ErrorEstimate> {
    Ok(ErrorEstimator::extra_site_averaged(basis, mode)?.estimate(t))
}

pub fn estimate_toeplitz_analytic(basis: &KrylovBasis, t: f64) -> Result<ErrorEstimate> {
    Ok(ErrorEstimator::toeplitz_analytic(basis)?.estimate(t))
}

pub fn estimate_park_light(basis: &KrylovBasis, t: f64) -> Result<ErrorEstimate> {
    Ok(ErrorEstimator::park_light(basis)?.estimate(t))
}

/// Envelope of the averaged estimator when the virtual site takes the extreme
/// observed coefficients: every combination of `min/max α` with `min/max β`.
#[derive(Debug, Clone)]
pub struct AveragedBand {
    corners: Vec<ErrorEstimator>,
}

impl AveragedBand {
    pub fn new(basis: &KrylovBasis) -> Result<Self> {
        let n = basis.len();
        if n < 2 {
            return Err(Error::BasisTooSmall { required: 2, actual: n });
        }
        let kind = EstimatorKind::ExtraSiteAveraged(AveragingMode::Literal);
        if basis.breakdown() {
            return Ok(Self { corners: vec![ErrorEstimator::exact(kind, n)] });
        }
        let t = basis.tridiagonal();
        let extremes = |xs: &[f64]| {
            let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            [lo, hi]
        };
        let mut corners = Vec::with_capacity(4);
        for alpha in extremes(t.diag()) {
            for beta in extremes(t.offdiag()) {
                corners.push(ErrorEstimator::with_virtual_site(kind, &t, alpha, beta));
            }
        }
        Ok(Self { corners })
    }

    /// `(min, max)` over the corner estimates.
    pub fn envelope(&self, t: f64) -> (f64, f64) {
        self.corners
            .iter()
            .map(|e| e.value(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}
