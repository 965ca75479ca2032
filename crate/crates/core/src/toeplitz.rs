//! Closed-form dynamics of homogeneous tridiagonal (Toeplitz) chains.
//!
//! For `T_N = α Σ|n⟩⟨n| + β Σ(|n⟩⟨n+1| + h.c.)` the eigenpairs are
//!
//! ```text
//! E_k = α + 2β cos(kπ/(N+1)),   ⟨n|E_k⟩ = √(2/(N+1)) sin(nkπ/(N+1))
//! ```
//!
//! and the transition matrix `S^N(t) = e^{+itT_N}` in the site basis is
//! `S_{n,n'}(t) = 2/(N+1) Σ_k sin(nkπ/(N+1)) sin(n'kπ/(N+1)) e^{itE_k}`.
//! The onsite energy only contributes a global phase, so echoes between two
//! chains with the same `α` do not depend on it, and `β` rescales time.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::orthogonal_infidelity;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToeplitzChain {
    pub n_sites: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl ToeplitzChain {
    pub fn new(n_sites: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidParameter("Toeplitz chain needs at least one site".into()));
        }
        Ok(Self { n_sites, alpha, beta })
    }

    fn check(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.n_sites {
            return Err(Error::IndexOutOfRange { index, n: self.n_sites });
        }
        Ok(())
    }

    fn angle(&self) -> f64 {
        PI / (self.n_sites as f64 + 1.0)
    }

    /// `E_k`, one-based `k`.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        self.check(k)?;
        Ok(self.alpha + 2.0 * self.beta * (k as f64 * self.angle()).cos())
    }

    /// `⟨n|E_k⟩`, one-based indices.
    pub fn eigenvector_component(&self, n: usize, k: usize) -> Result<f64> {
        self.check(n)?;
        self.check(k)?;
        let norm = (2.0 / (self.n_sites as f64 + 1.0)).sqrt();
        Ok(norm * ((n * k) as f64 * self.angle()).sin())
    }

    /// `S^N_{n,n'}(t)`, one-based indices.
    pub fn transition(&self, n: usize, n_prime: usize, t: f64) -> Result<Complex64> {
        self.check(n)?;
        self.check(n_prime)?;
        Ok(ToeplitzEigenbasis::new(*self).transition(n - 1, n_prime - 1, t))
    }
}

/// Sine table and spectrum of one chain, reused across times.
#[derive(Debug, Clone)]
pub struct ToeplitzEigenbasis {
    chain: ToeplitzChain,
    energies: Vec<f64>,
    // sines[n * N + k] = sin((n+1)(k+1)π/(N+1))
    sines: Vec<f64>,
}

impl ToeplitzEigenbasis {
    pub fn new(chain: ToeplitzChain) -> Self {
        let n = chain.n_sites;
        let angle = chain.angle();
        let energies = (1..=n).map(|k| chain.alpha + 2.0 * chain.beta * (k as f64 * angle).cos()).collect();
        let mut sines = Vec::with_capacity(n * n);
        for site in 1..=n {
            for k in 1..=n {
                // reduce the argument modulo 2(N+1) before scaling for accuracy
                let m = (site * k) % (2 * (n + 1));
                sines.push((m as f64 * angle).sin());
            }
        }
        Self { chain, energies, sines }
    }

    pub fn chain(&self) -> ToeplitzChain {
        self.chain
    }

    fn prefactor(&self) -> f64 {
        2.0 / (self.chain.n_sites as f64 + 1.0)
    }

    /// Zero-based `S_{n,n'}(t)`.
    pub fn transition(&self, n: usize, n_prime: usize, t: f64) -> Complex64 {
        let size = self.chain.n_sites;
        let row = &self.sines[n * size..(n + 1) * size];
        let col = &self.sines[n_prime * size..(n_prime + 1) * size];
        let sum: Complex64 = self
            .energies
            .iter()
            .zip(row.iter().zip(col))
            .map(|(&e, (&a, &b))| Complex64::from_polar(a * b, t * e))
            .sum();
        sum * self.prefactor()
    }

    /// Column `S_{·,n'}(t)`, zero-based `n'`. Equals `e^{+itT} e_{n'}`.
    pub fn column(&self, n_prime: usize, t: f64) -> Vec<Complex64> {
        let size = self.chain.n_sites;
        let col = &self.sines[n_prime * size..(n_prime + 1) * size];
        let weights: Vec<Complex64> = self
            .energies
            .iter()
            .zip(col)
            .map(|(&e, &b)| Complex64::from_polar(b * self.prefactor(), t * e))
            .collect();
        (0..size)
            .map(|n| {
                let row = &self.sines[n * size..(n + 1) * size];
                row.iter().zip(&weights).map(|(&a, w)| w * a).sum()
            })
            .collect()
    }

    /// Full matrix `S(t)`, row-major.
    pub fn matrix(&self, t: f64) -> Vec<Complex64> {
        let size = self.chain.n_sites;
        let mut out = Vec::with_capacity(size * size);
        for n in 0..size {
            for m in 0..size {
                out.push(self.transition(n, m, t));
            }
        }
        out
    }
}

/// Echo between two homogeneous chains of lengths `N` and `N'` sharing `α, β`.
#[derive(Debug, Clone)]
pub struct ToeplitzEcho {
    short: ToeplitzEigenbasis,
    long: ToeplitzEigenbasis,
}

impl ToeplitzEcho {
    pub fn new(n: usize, n_prime: usize, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            short: ToeplitzEigenbasis::new(ToeplitzChain::new(n, alpha, beta)?),
            long: ToeplitzEigenbasis::new(ToeplitzChain::new(n_prime, alpha, beta)?),
        })
    }

    /// `⟨0| e^{-itT_{N'}} e^{+itT_N} |0⟩ = Σ_n S^N_{n,1}(t) S^{N'}_{1,n}(−t)`
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let a = self.short.column(0, t);
        let b = self.long.column(0, t);
        // S^{N'}(−t) = conj(S^{N'}(t)) and S is symmetric.
        a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum()
    }

    /// `1 − |amplitude|²`, evaluated without cancellation.
    pub fn infidelity(&self, t: f64) -> f64 {
        let a = self.short.column(0, t);
        let b = self.long.column(0, t);
        orthogonal_infidelity(&a, &b)
    }
}

/// Closed-form echo amplitude.
pub fn toeplitz_echo(n: usize, n_prime: usize, alpha: f64, beta: f64, t: f64) -> Result<Complex64> {
    Ok(ToeplitzEcho::new(n, n_prime, alpha, beta)?.amplitude(t))
}

/// `(|echo(t; α, β)|, |echo(βt; 0, 1)|)`: the two must agree.
pub fn rescaling_check(n: usize, n_prime: usize, alpha: f64, beta: f64, t: f64) -> Result<(f64, f64)> {
    let direct = toeplitz_echo(n, n_prime, alpha, beta, t)?.norm();
    let rescaled = toeplitz_echo(n, n_prime, 0.0, 1.0, beta * t)?.norm();
    Ok((direct, rescaled))
}
