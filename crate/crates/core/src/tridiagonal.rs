//! Real symmetric tridiagonal matrices: spectral decomposition and the
//! propagator `e^{-iTt}`.
//!
//! The eigensolver is the implicit QL iteration with Wilkinson-style shifts
//! (the EISPACK `tql2` scheme), accumulating the plane rotations into the
//! eigenvector matrix. Eigenvectors are orthogonal to working precision by
//! construction, which makes every propagator built on them exactly unitary
//! up to round-off.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::ComplexState;

/// Diagonal `α_1..α_n` and off-diagonal `β_1..β_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymmetricTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter("tridiagonal matrix needs n >= 1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len() - 1, actual: offdiag.len() });
        }
        Ok(Self { diag, offdiag })
    }

    /// Homogeneous (Toeplitz) chain with onsite `alpha` and hopping `beta`.
    pub fn homogeneous(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(vec![alpha; n], vec![beta; n.saturating_sub(1)])
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Leading `m × m` block.
    pub fn leading(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.len() {
            return Err(Error::InvalidParameter(format!(
                "leading block of size {m} from a {}-site chain",
                self.len()
            )));
        }
        Self::new(self.diag[..m].to_vec(), self.offdiag[..m - 1].to_vec())
    }

    /// Appends a site with onsite energy `alpha` coupled by `beta` to the last one.
    pub fn extended(&self, alpha: f64, beta: f64) -> Self {
        let mut diag = self.diag.clone();
        let mut offdiag = self.offdiag.clone();
        diag.push(alpha);
        offdiag.push(beta);
        Self { diag, offdiag }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.diag.iter().chain(&self.offdiag).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Dense row-major embedding, mostly for checks.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.len();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = self.diag[i];
        }
        for (i, &b) in self.offdiag.iter().enumerate() {
            m[i * n + i + 1] = b;
            m[(i + 1) * n + i] = b;
        }
        m
    }

    /// `T x` for a real vector.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

/// Spectral decomposition `T = Q Λ Qᵀ` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalEigen {
    eigenvalues: Vec<f64>,
    // column-major: column k holds the k-th eigenvector
    vectors: Vec<f64>,
}

impl TridiagonalEigen {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        let n = self.len();
        &self.vectors[k * n..(k + 1) * n]
    }

    /// `Q[row, k]`
    pub fn component(&self, row: usize, k: usize) -> f64 {
        self.vectors[k * self.len() + row]
    }
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
pub fn eig_sym_tridiagonal(t: &SymmetricTridiagonal) -> TridiagonalEigen {
    let n = t.len();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > 60 {
                    // Never observed for finite input; bail out rather than spin.
                    break;
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_next = &mut right[..n];
                    for (zi, zn) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let hk = *zn;
                        *zn = s * *zi + c * hk;
                        *zi = c * *zi - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend_from_slice(&z[k * n..(k + 1) * n]);
    }
    TridiagonalEigen { eigenvalues, vectors }
}

/// Cached spectral propagator for one tridiagonal generator, reused across times.
#[derive(Debug, Clone)]
pub struct TridiagonalPropagator {
    eigen: TridiagonalEigen,
}

impl TridiagonalPropagator {
    pub fn new(t: &SymmetricTridiagonal) -> Self {
        Self { eigen: eig_sym_tridiagonal(t) }
    }

    pub fn len(&self) -> usize {
        self.eigen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigen.is_empty()
    }

    pub fn eigen(&self) -> &TridiagonalEigen {
        &self.eigen
    }

    /// `e^{-iTt} e_1`: the first column of the propagator.
    pub fn evolve_first(&self, time: f64) -> Vec<Complex64> {
        let n = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        if time == 0.0 {
            out[0] = Complex64::new(1.0, 0.0);
            return out;
        }
        for (k, &lambda) in self.eigen.eigenvalues.iter().enumerate() {
            let q = self.eigen.eigenvector(k);
            let w = Complex64::from_polar(q[0], -lambda * time);
            for (o, &qi) in out.iter_mut().zip(q) {
                *o += w * qi;
            }
        }
        out
    }

    /// `e^{-iTt} v` for a vector in the chain basis.
    pub fn evolve(&self, time: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.len();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: v.len() });
        }
        if time == 0.0 {
            return Ok(v.to_vec());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, &lambda) in self.eigen.eigenvalues.iter().enumerate() {
            let q = self.eigen.eigenvector(k);
            let proj: Complex64 = q.iter().zip(v).map(|(&qi, vi)| vi * qi).sum();
            let w = proj * Complex64::from_polar(1.0, -lambda * time);
            for (o, &qi) in out.iter_mut().zip(q) {
                *o += w * qi;
            }
        }
        Ok(out)
    }
}

/// `e^{-iTt} v` via the spectral decomposition of `T`.
pub fn expi_tridiagonal_apply(t: &SymmetricTridiagonal, time: f64, v: &ComplexState) -> Result<ComplexState> {
    if v.dim() != t.len() {
        return Err(Error::DimensionMismatch { expected: t.len(), actual: v.dim() });
    }
    let out = TridiagonalPropagator::new(t).evolve(time, v.amplitudes())?;
    ComplexState::new(out)
}
