//! Complex amplitude vectors.

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// A length-`dim` vector of complex probability amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexState {
    amplitudes: Vec<Complex64>,
}

impl ComplexState {
    /// Wraps raw amplitudes. Fails on an empty vector.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("state dimension must be >= 1".into()));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "state dimension must be >= 1");
        Self { amplitudes: vec![Complex64::new(0.0, 0.0); dim] }
    }

    /// The site (computational basis) state `|index⟩`, zero-based.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut s = Self::zeros(dim);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm in place, returning the previous norm.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroState);
        }
        let inv = 1.0 / norm;
        for z in &mut self.amplitudes {
            *z *= inv;
        }
        Ok(norm)
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &ComplexState) -> Result<Complex64> {
        inner(self, other)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

impl Index<usize> for ComplexState {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.amplitudes[i]
    }
}

impl IndexMut<usize> for ComplexState {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.amplitudes[i]
    }
}

/// `Σ conj(u_i) v_i`
pub fn inner(u: &ComplexState, v: &ComplexState) -> Result<Complex64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), actual: v.dim() });
    }
    Ok(dot(u.amplitudes(), v.amplitudes()))
}

/// Conjugate-linear in the first argument. Slices must have equal length.
pub(crate) fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `y += a x`
pub(crate) fn axpy(a: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub(crate) fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

/// Infidelity `1 − |⟨a|b⟩|²` of two unit vectors, evaluated as the squared norm of
/// the component of `b` orthogonal to `a`. For vectors of different length the
/// shorter one is zero-padded. Small infidelities are resolved well below the
/// `1e-16` floor of the naive formula.
pub(crate) fn orthogonal_infidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    let common = a.len().min(b.len());
    let overlap = dot(&a[..common], &b[..common]);
    let na = norm_sqr(a);
    let mut perp = 0.0;
    for i in 0..b.len() {
        let ai = if i < a.len() { a[i] } else { Complex64::new(0.0, 0.0) };
        perp += (b[i] - overlap / na * ai).norm_sqr();
    }
    perp.clamp(0.0, 1.0)
}
