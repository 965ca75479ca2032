#![allow(dead_code)]

use krylov_echo::{Complex64, ComplexState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_complex_state(rng: &mut ChaCha8Rng, n: usize) -> ComplexState {
    let v = (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    ComplexState::new(v).unwrap().normalized().unwrap()
}

pub fn zeros(n: usize) -> CMat {
    vec![vec![c(0.0, 0.0); n]; n]
}

pub fn identity(n: usize) -> CMat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn from_real(n: usize, data: &[f64]) -> CMat {
    (0..n).map(|i| (0..n).map(|j| c(data[i * n + j], 0.0)).collect()).collect()
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (na, nb) = (a.len(), b.len());
    let mut out = zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn add_scaled(a: &mut CMat, s: f64, b: &CMat) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y * s;
        }
    }
}

/// `e^{-iAt}` by scaling and squaring with a Taylor series; independent of any
/// eigendecomposition.
pub fn expm_minus_i(a: &CMat, t: f64) -> CMat {
    let n = a.len();
    let norm: f64 = a.iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max) * t.abs();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let mut gen = zeros(n);
    for i in 0..n {
        for j in 0..n {
            gen[i][j] = a[i][j] * c(0.0, -t * scale);
        }
    }
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..40 {
        term = matmul(&term, &gen);
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z /= k as f64;
            }
        }
        add_scaled(&mut result, 1.0, &term);
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
