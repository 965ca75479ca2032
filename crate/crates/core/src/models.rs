//! Test Hamiltonians and initial states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, LinearOperator};
use crate::state::ComplexState;
use crate::tridiagonal::SymmetricTridiagonal;

pub const DEFAULT_ISING_CAP: usize = 20;
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Open-boundary Ising chain
/// `H = Σ_k (h_x σ^x_k + h_z σ^z_k) − J Σ_k σ^z_k σ^z_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingParams {
    pub n_spins: usize,
    pub j: f64,
    pub h_x: f64,
    pub h_z: f64,
}

impl IsingParams {
    /// `J = 1`, `h_x = 1`, `h_z = 0.5`: a nonintegrable point.
    pub fn with_default_fields(n_spins: usize) -> Self {
        Self { n_spins, j: 1.0, h_x: 1.0, h_z: 0.5 }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }
}

/// Matrix-free Ising Hamiltonian.
///
/// Basis index `b` encodes the spins in its bits; bit `k` (spin `k+1`) equal to
/// 0 means `σ^z = +1`. `σ^x_k` flips bit `k`.
#[derive(Debug, Clone)]
pub struct IsingOperator {
    params: IsingParams,
    diagonal: Vec<f64>,
}

impl IsingOperator {
    pub fn new(params: IsingParams) -> Result<Self> {
        Self::with_cap(params, DEFAULT_ISING_CAP)
    }

    pub fn with_cap(params: IsingParams, cap: usize) -> Result<Self> {
        let n = params.n_spins;
        if n < 2 || n > cap {
            return Err(Error::IsingSize { n_spins: n, cap });
        }
        let diagonal = (0..params.dim())
            .map(|b| {
                let spin = |k: usize| if (b >> k) & 1 == 0 { 1.0 } else { -1.0 };
                let field: f64 = (0..n).map(|k| params.h_z * spin(k)).sum();
                let bond: f64 = (0..n - 1).map(|k| spin(k) * spin(k + 1)).sum();
                field - params.j * bond
            })
            .collect();
        Ok(Self { params, diagonal })
    }

    pub fn params(&self) -> IsingParams {
        self.params
    }
}

impl LinearOperator for IsingOperator {
    fn dim(&self) -> usize {
        self.diagonal.len()
    }

    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        let hx = self.params.h_x;
        for (b, yb) in y.iter_mut().enumerate() {
            let mut acc = x[b] * self.diagonal[b];
            for k in 0..self.params.n_spins {
                acc += x[b ^ (1 << k)] * hx;
            }
            *yb = acc;
        }
    }
}

pub fn ising_operator(params: IsingParams) -> Result<IsingOperator> {
    IsingOperator::new(params)
}

/// A tridiagonal matrix acting as an operator, e.g. a homogeneous tight-binding chain.
#[derive(Debug, Clone)]
pub struct ChainOperator {
    chain: SymmetricTridiagonal,
}

impl ChainOperator {
    pub fn new(chain: SymmetricTridiagonal) -> Self {
        Self { chain }
    }

    pub fn homogeneous(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::new(SymmetricTridiagonal::homogeneous(n, alpha, beta)?))
    }

    pub fn chain(&self) -> &SymmetricTridiagonal {
        &self.chain
    }
}

impl LinearOperator for ChainOperator {
    fn dim(&self) -> usize {
        self.chain.len()
    }

    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        let d = self.chain.diag();
        let o = self.chain.offdiag();
        let n = d.len();
        for i in 0..n {
            let mut acc = x[i] * d[i];
            if i > 0 {
                acc += x[i - 1] * o[i - 1];
            }
            if i + 1 < n {
                acc += x[i + 1] * o[i];
            }
            y[i] = acc;
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex normal with `E|z|² = 1`.
fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn check_ensemble_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("ensemble dimension {dim} < 2")));
    }
    if dim > DEFAULT_DENSE_CAP {
        return Err(Error::OracleCap { dim, cap: DEFAULT_DENSE_CAP });
    }
    Ok(())
}

/// `(G + Gᵀ)/2` with independent standard normal `G` (ChaCha8 stream).
pub fn goe_sample(dim: usize, seed: u64) -> Result<DenseOperator> {
    check_ensemble_dim(dim)?;
    let mut rng = rng(seed);
    let g: Vec<f64> = (0..dim * dim).map(|_| rng.sample(StandardNormal)).collect();
    let data: Vec<Complex64> = (0..dim * dim)
        .map(|idx| {
            let (i, j) = (idx / dim, idx % dim);
            Complex64::new((g[i * dim + j] + g[j * dim + i]) / 2.0, 0.0)
        })
        .collect();
    DenseOperator::from_row_major(dim, data)
}

/// `(G + G†)/2` with independent complex normal `G`, `E|G_ij|² = 1`.
pub fn gue_sample(dim: usize, seed: u64) -> Result<DenseOperator> {
    check_ensemble_dim(dim)?;
    let mut rng = rng(seed);
    let g: Vec<Complex64> = (0..dim * dim).map(|_| complex_normal(&mut rng)).collect();
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let a = (g[i * dim + j] + g[j * dim + i].conj()) / 2.0;
            data[i * dim + j] = a;
            data[j * dim + i] = a.conj();
        }
    }
    DenseOperator::from_row_major(dim, data)
}

/// Normalized state with independent complex normal amplitudes.
pub fn random_state(dim: usize, seed: u64) -> Result<ComplexState> {
    if dim == 0 {
        return Err(Error::InvalidParameter("state dimension must be >= 1".into()));
    }
    let mut rng = rng(seed);
    ComplexState::new((0..dim).map(|_| complex_normal(&mut rng)).collect())?.normalized()
}
