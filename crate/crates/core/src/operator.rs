//! Hermitian operators acting on [`ComplexState`]s.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::ComplexState;

/// A Hermitian operator of fixed dimension, applied matrix-free.
///
/// Implementations must be safe to apply concurrently on distinct vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// Writes `H x` into `y`. Both slices have length [`dim`](Self::dim).
    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]);

    fn apply(&self, x: &ComplexState) -> Result<ComplexState> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: x.dim() });
        }
        let mut y = ComplexState::zeros(self.dim());
        self.apply_into(x.amplitudes(), y.amplitudes_mut());
        Ok(y)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        (**self).apply_into(x, y)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        (**self).apply_into(x, y)
    }
}

/// Explicitly stored Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
    real: bool,
}

impl DenseOperator {
    /// Builds from row-major entries. Rejects non-square or non-Hermitian input
    /// (entries compared exactly after symmetrization is the caller's job).
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: data.len() });
        }
        for i in 0..dim {
            for j in i..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i].conj();
                let scale = a.norm().max(b.norm()).max(1.0);
                if (a - b).norm() > 1e-12 * scale {
                    return Err(Error::InvalidParameter(format!("matrix is not Hermitian at ({i}, {j})")));
                }
            }
        }
        let real = data.iter().all(|z| z.im == 0.0);
        Ok(Self { dim, data, real })
    }

    pub fn from_real_row_major(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Materializes any operator by applying it to every basis vector.
    pub fn from_operator<H: LinearOperator + ?Sized>(op: &H) -> Self {
        let dim = op.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            e[j] = Complex64::new(1.0, 0.0);
            op.apply_into(&e, &mut col);
            for i in 0..dim {
                data[i * dim + j] = col[i];
            }
            e[j] = Complex64::new(0.0, 0.0);
        }
        let real = data.iter().all(|z| z.im == 0.0);
        Self { dim, data, real }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// True when every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn to_nalgebra_real(&self) -> DMatrix<f64> {
        DMatrix::from_row_iterator(self.dim, self.dim, self.data.iter().map(|z| z.re))
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (row, yi) in self.data.chunks_exact(self.dim).zip(y.iter_mut()) {
            *yi = if self.real {
                let (mut re, mut im) = (0.0, 0.0);
                for (a, b) in row.iter().zip(x) {
                    re += a.re * b.re;
                    im += a.re * b.im;
                }
                Complex64::new(re, im)
            } else {
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            };
        }
    }
}

/// Largest relative violation of `⟨u, Hv⟩ = conj(⟨v, Hu⟩)` over the given probe pairs.
pub fn hermiticity_defect<H: LinearOperator + ?Sized>(
    op: &H,
    probes: &[(ComplexState, ComplexState)],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (u, v) in probes {
        let hv = op.apply(v)?;
        let hu = op.apply(u)?;
        let lhs = u.inner(&hv)?;
        let rhs = v.inner(&hu)?.conj();
        let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(worst)
}
