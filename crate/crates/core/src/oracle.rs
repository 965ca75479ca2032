//! Exact evolution by full dense diagonalization.
//!
//! This is the verification oracle: it costs `O(D³)` once and `O(D²)` per
//! evolved state, and refuses dimensions above a configurable cap. Nothing on
//! the production path depends on it.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, LinearOperator};
use crate::state::ComplexState;

pub const DEFAULT_ORACLE_CAP: usize = 4096;

enum Eigenvectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Eigendecomposition of a dense Hermitian matrix, reusable across states and times.
pub struct DenseEvolver {
    eigenvalues: Vec<f64>,
    vectors: Eigenvectors,
}

impl DenseEvolver {
    pub fn new<H: LinearOperator + ?Sized>(op: &H, cap: usize) -> Result<Self> {
        if op.dim() > cap {
            return Err(Error::OracleCap { dim: op.dim(), cap });
        }
        Ok(Self::from_dense(&DenseOperator::from_operator(op)))
    }

    pub fn from_dense(h: &DenseOperator) -> Self {
        if h.is_real() {
            let eig = SymmetricEigen::new(h.to_nalgebra_real());
            Self {
                eigenvalues: eig.eigenvalues.iter().copied().collect(),
                vectors: Eigenvectors::Real(eig.eigenvectors),
            }
        } else {
            let eig = SymmetricEigen::new(h.to_nalgebra());
            Self {
                eigenvalues: eig.eigenvalues.iter().copied().collect(),
                vectors: Eigenvectors::Complex(eig.eigenvectors),
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Unsorted eigenvalues as returned by the dense solver.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `e^{-iHt} ψ`
    pub fn evolve(&self, psi: &ComplexState, time: f64) -> Result<ComplexState> {
        let d = self.dim();
        if psi.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: psi.dim() });
        }
        let x = psi.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        match &self.vectors {
            Eigenvectors::Real(q) => {
                for (k, &lambda) in self.eigenvalues.iter().enumerate() {
                    let col = q.column(k);
                    let proj: Complex64 = col.iter().zip(x).map(|(&qi, xi)| xi * qi).sum();
                    let w = proj * Complex64::from_polar(1.0, -lambda * time);
                    for (o, &qi) in out.iter_mut().zip(col.iter()) {
                        *o += w * qi;
                    }
                }
            }
            Eigenvectors::Complex(q) => {
                for (k, &lambda) in self.eigenvalues.iter().enumerate() {
                    let col = q.column(k);
                    let proj: Complex64 = col.iter().zip(x).map(|(qi, xi)| qi.conj() * xi).sum();
                    let w = proj * Complex64::from_polar(1.0, -lambda * time);
                    for (o, qi) in out.iter_mut().zip(col.iter()) {
                        *o += w * qi;
                    }
                }
            }
        }
        ComplexState::new(out)
    }
}

/// One-shot `e^{-iHt} ψ` through the dense oracle.
pub fn exact_evolve_dense<H: LinearOperator + ?Sized>(
    op: &H,
    psi: &ComplexState,
    time: f64,
    cap: usize,
) -> Result<ComplexState> {
    DenseEvolver::new(op, cap)?.evolve(psi, time)
}
