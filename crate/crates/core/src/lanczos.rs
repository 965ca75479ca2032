//! Lanczos tridiagonalization of a Hermitian operator.
//!
//! Starting from `|v_0⟩ = |ψ⟩/‖ψ‖` the recurrence
//!
//! ```text
//! β_j |v_j⟩ = H|v_{j-1}⟩ − α_j |v_{j-1}⟩ − β_{j-1} |v_{j-2}⟩
//! ```
//!
//! produces an orthonormal basis of the Krylov space in which `H` is the
//! tridiagonal matrix `T` with diagonal `α_1..α_M` and off-diagonal
//! `β_1..β_{M-1}`. The norm of the last residual, `β_M`, couples the chain to
//! the site that would come next; it is kept along with the residual itself so
//! that one more site can be added with a single operator application.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::state::{axpy, dot, norm_sqr, ComplexState};
use crate::tridiagonal::SymmetricTridiagonal;

/// Relative threshold below which a residual norm counts as breakdown.
pub const BREAKDOWN_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reorthogonalization {
    /// Re-project every new vector against all stored vectors, twice.
    #[default]
    Full,
    /// Plain three-term recurrence.
    None,
}

/// Orthonormal Lanczos vectors together with the reduced tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct KrylovBasis {
    vectors: Vec<Vec<Complex64>>,
    alphas: Vec<f64>,
    betas: Vec<f64>,
    residual: Vec<Complex64>,
    residual_beta: f64,
    breakdown: bool,
    scale: f64,
    input_norm: f64,
    reorth: Reorthogonalization,
}

impl KrylovBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn source_dim(&self) -> usize {
        self.residual.len()
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[Complex64]> {
        self.vectors.iter().map(Vec::as_slice)
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// `β_1..β_{M-1}`, the couplings inside the chain.
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// `β_M`, the coupling to the next (not stored) site.
    pub fn residual_beta(&self) -> f64 {
        self.residual_beta
    }

    /// True when the last residual vanished: the span is invariant under `H`
    /// and Krylov evolution in it is exact.
    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    /// Norm of the state the basis was started from.
    pub fn input_norm(&self) -> f64 {
        self.input_norm
    }

    pub fn reorthogonalization(&self) -> Reorthogonalization {
        self.reorth
    }

    pub fn tridiagonal(&self) -> SymmetricTridiagonal {
        SymmetricTridiagonal::new(self.alphas.clone(), self.betas.clone())
            .expect("basis holds at least one vector")
    }

    /// Size `M` reduced matrix of the first `m` sites.
    pub fn leading_tridiagonal(&self, m: usize) -> Result<SymmetricTridiagonal> {
        self.tridiagonal().leading(m)
    }

    /// Adds one site: one operator application yields `α_{M+1}` and `β_{M+1}`.
    pub fn extend_one<H: LinearOperator + ?Sized>(mut self, h: &H) -> Result<Self> {
        self.extend(h)?;
        Ok(self)
    }

    pub fn extend<H: LinearOperator + ?Sized>(&mut self, h: &H) -> Result<()> {
        if h.dim() != self.source_dim() {
            return Err(Error::DimensionMismatch { expected: self.source_dim(), actual: h.dim() });
        }
        if self.breakdown {
            return Err(Error::Breakdown { size: self.len() });
        }
        if self.len() >= self.source_dim() {
            return Err(Error::InvalidKrylovSize { requested: self.len() + 1, dim: self.source_dim() });
        }
        self.step(h);
        Ok(())
    }

    fn start<H: LinearOperator + ?Sized>(
        h: &H,
        psi: &ComplexState,
        reorth: Reorthogonalization,
    ) -> Result<Self> {
        let mut v0 = psi.clone();
        let input_norm = v0.normalize()?;
        let d = h.dim();
        let mut basis = Self {
            vectors: Vec::new(),
            alphas: Vec::new(),
            betas: Vec::new(),
            residual: v0.into_amplitudes(),
            residual_beta: 1.0,
            breakdown: false,
            scale: 0.0,
            input_norm,
            reorth,
        };
        debug_assert_eq!(basis.residual.len(), d);
        basis.step(h);
        Ok(basis)
    }

    /// Normalizes the pending residual into a new basis vector and computes the
    /// next coefficients.
    fn step<H: LinearOperator + ?Sized>(&mut self, h: &H) {
        let d = self.source_dim();
        let beta_prev = self.residual_beta;
        let inv = 1.0 / beta_prev;
        let v: Vec<Complex64> = self.residual.iter().map(|z| z * inv).collect();
        if !self.vectors.is_empty() {
            self.betas.push(beta_prev);
        }

        let mut w = vec![Complex64::new(0.0, 0.0); d];
        h.apply_into(&v, &mut w);
        let alpha = dot(&v, &w).re;
        axpy(Complex64::new(-alpha, 0.0), &v, &mut w);
        if let Some(prev) = self.vectors.last() {
            axpy(Complex64::new(-beta_prev, 0.0), prev, &mut w);
        }

        self.vectors.push(v);
        self.alphas.push(alpha);

        if self.reorth == Reorthogonalization::Full {
            for _ in 0..2 {
                for u in &self.vectors {
                    let c = dot(u, &w);
                    axpy(-c, u, &mut w);
                }
            }
        }

        let beta = norm_sqr(&w).sqrt();
        self.scale = self.scale.max(alpha.abs()).max(beta);
        if !self.betas.is_empty() {
            self.scale = self.scale.max(beta_prev);
        }
        self.residual = w;
        self.residual_beta = beta;
        self.breakdown = beta <= BREAKDOWN_RTOL * self.scale;
    }

    /// `max_{i,j} |⟨v_i|v_j⟩ − δ_ij|`
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, vi) in self.vectors.iter().enumerate() {
            for (j, vj) in self.vectors.iter().enumerate().skip(i) {
                let g = dot(vi, vj);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// Largest deviation of `⟨v_i|H|v_j⟩` from the emitted tridiagonal matrix,
    /// including entries with `|i−j| ≥ 2` that must vanish.
    pub fn reduction_defect<H: LinearOperator + ?Sized>(&self, h: &H) -> f64 {
        let m = self.len();
        let t = self.tridiagonal().to_dense();
        let mut hv = vec![Complex64::new(0.0, 0.0); self.source_dim()];
        let mut worst: f64 = 0.0;
        for j in 0..m {
            h.apply_into(&self.vectors[j], &mut hv);
            for i in 0..m {
                let entry = dot(&self.vectors[i], &hv);
                worst = worst.max((entry - t[i * m + j]).norm());
            }
        }
        worst
    }

    /// Largest `‖H v_j − β_j v_{j+1} − α_{j+1} v_j − β_{j−1} v_{j−1}‖` over stored vectors,
    /// using the residual for the last one.
    pub fn three_term_defect<H: LinearOperator + ?Sized>(&self, h: &H) -> f64 {
        let m = self.len();
        let mut worst: f64 = 0.0;
        let mut hv = vec![Complex64::new(0.0, 0.0); self.source_dim()];
        for j in 0..m {
            h.apply_into(&self.vectors[j], &mut hv);
            axpy(Complex64::new(-self.alphas[j], 0.0), &self.vectors[j], &mut hv);
            if j > 0 {
                axpy(Complex64::new(-self.betas[j - 1], 0.0), &self.vectors[j - 1], &mut hv);
            }
            if j + 1 < m {
                axpy(Complex64::new(-self.betas[j], 0.0), &self.vectors[j + 1], &mut hv);
            } else {
                axpy(Complex64::new(-1.0, 0.0), &self.residual, &mut hv);
            }
            worst = worst.max(norm_sqr(&hv).sqrt());
        }
        worst
    }
}

/// Builds a Krylov basis of size `min(n, breakdown point)`.
pub fn lanczos_iterate<H: LinearOperator + ?Sized>(
    h: &H,
    psi: &ComplexState,
    n: usize,
    reorth: Reorthogonalization,
) -> Result<KrylovBasis> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), actual: psi.dim() });
    }
    if n < 1 || n > h.dim() {
        return Err(Error::InvalidKrylovSize { requested: n, dim: h.dim() });
    }
    let mut basis = KrylovBasis::start(h, psi, reorth)?;
    while basis.len() < n && !basis.breakdown {
        basis.step(h);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::DenseOperator;

    #[test]
    fn two_level_system() {
        let h = DenseOperator::from_real_row_major(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let b = lanczos_iterate(&h, &ComplexState::basis(2, 0), 2, Reorthogonalization::Full).unwrap();
        assert_eq!(b.alphas(), &[0.0, 0.0]);
        assert_eq!(b.betas(), &[1.0]);
        assert!(b.residual_beta() < 1e-15);
        assert!(b.breakdown());
        assert!(matches!(b.extend_one(&h), Err(Error::Breakdown { size: 2 })));
    }

    #[test]
    fn eigenvector_start_breaks_down_immediately() {
        let h =
            DenseOperator::from_real_row_major(3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        let b = lanczos_iterate(&h, &ComplexState::basis(3, 0), 3, Reorthogonalization::Full).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.alphas(), &[1.0]);
        assert!(b.breakdown());
        assert_eq!(b.residual_beta(), 0.0);
    }

    #[test]
    fn v0_is_normalized_input() {
        let h = DenseOperator::from_real_row_major(2, &[1.0, 0.5, 0.5, -1.0]).unwrap();
        let psi = ComplexState::from_real(&[3.0, 4.0]).unwrap();
        let b = lanczos_iterate(&h, &psi, 1, Reorthogonalization::Full).unwrap();
        assert_eq!(b.input_norm(), 5.0);
        assert!((b.vector(0)[0].re - 0.6).abs() < 1e-15);
        assert!((b.vector(0)[1].re - 0.8).abs() < 1e-15);
        assert!(!b.breakdown());
    }

    #[test]
    fn argument_errors() {
        let h = DenseOperator::from_real_row_major(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e0 = ComplexState::basis(2, 0);
        assert_eq!(
            lanczos_iterate(&h, &ComplexState::zeros(2), 1, Reorthogonalization::Full).unwrap_err(),
            Error::ZeroState
        );
        assert!(matches!(
            lanczos_iterate(&h, &e0, 0, Reorthogonalization::Full),
            Err(Error::InvalidKrylovSize { .. })
        ));
        assert!(matches!(
            lanczos_iterate(&h, &e0, 3, Reorthogonalization::Full),
            Err(Error::InvalidKrylovSize { .. })
        ));
        assert!(matches!(
            lanczos_iterate(&h, &ComplexState::basis(3, 0), 1, Reorthogonalization::Full),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn extend_matches_longer_run() {
        let data: Vec<f64> = (0..25)
            .map(|k| {
                let (i, j) = (k / 5, k % 5);
                ((i + j) as f64).sin() + if i == j { i as f64 } else { 0.0 }
            })
            .collect();
        let h = DenseOperator::from_real_row_major(5, &data).unwrap();
        let psi = ComplexState::from_real(&[1.0, 0.2, -0.3, 0.5, 0.1]).unwrap();
        for reorth in [Reorthogonalization::Full, Reorthogonalization::None] {
            let short = lanczos_iterate(&h, &psi, 3, reorth).unwrap().extend_one(&h).unwrap();
            let long = lanczos_iterate(&h, &psi, 4, reorth).unwrap();
            assert_eq!(short.alphas(), long.alphas());
            assert_eq!(short.betas(), long.betas());
            assert_eq!(short.residual_beta(), long.residual_beta());
        }
    }
}
