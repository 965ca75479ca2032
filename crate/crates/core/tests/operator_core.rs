mod common;

use common::*;
use krylov_echo::*;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn random_tridiagonal(seed: u64, n: usize) -> SymmetricTridiagonal {
    let mut r = rng(seed);
    SymmetricTridiagonal::new(uniform_vec(&mut r, n, -2.0, 2.0), uniform_vec(&mut r, n - 1, 0.1, 2.0))
        .unwrap()
}

fn orthogonality_and_residual(t: &SymmetricTridiagonal) -> (f64, f64, f64) {
    let e = eig_sym_tridiagonal(t);
    let n = t.len();
    let mut ortho: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let dotp: f64 = e.eigenvector(a).iter().zip(e.eigenvector(b)).map(|(x, y)| x * y).sum();
            ortho = ortho.max((dotp - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    let mut resid: f64 = 0.0;
    for k in 0..n {
        let tq = t.mul_vec(e.eigenvector(k));
        for (x, q) in tq.iter().zip(e.eigenvector(k)) {
            resid = resid.max((x - e.eigenvalues()[k] * q).abs());
        }
    }
    let scale = e.eigenvalues().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (ortho, resid, scale)
}

#[test]
fn tridiagonal_eigen_matches_dense_solver() {
    for seed in 0..5 {
        let t = random_tridiagonal(seed, 50);
        let ours = eig_sym_tridiagonal(&t);
        let dense = SymmetricEigen::new(DMatrix::from_row_slice(50, 50, &t.to_dense()));
        let mut theirs: Vec<f64> = dense.eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.eigenvalues().iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(ours.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn tridiagonal_eigen_invariants() {
    for (seed, n) in [(1, 1), (2, 2), (3, 17), (4, 100), (5, 200)] {
        let t = random_tridiagonal(seed, n);
        let (ortho, resid, scale) = orthogonality_and_residual(&t);
        assert!(ortho <= 1e-12, "n={n} ortho {ortho}");
        assert!(resid <= 1e-10 * scale, "n={n} resid {resid}");
    }
}

#[test]
fn spectral_reconstruction() {
    for n in [5, 60, 200] {
        let t = random_tridiagonal(n as u64, n);
        let e = eig_sym_tridiagonal(&t);
        let dense = t.to_dense();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n).map(|k| e.component(i, k) * e.eigenvalues()[k] * e.component(j, k)).sum();
                worst = worst.max((r - dense[i * n + j]).abs());
            }
        }
        assert!(worst <= 1e-10, "n={n}: {worst}");
    }
}

#[test]
fn graded_and_clustered_matrices() {
    // widely varying scales and a nearly degenerate pair
    let t = SymmetricTridiagonal::new(vec![1e6, 1.0, 1e-6, 1.0 + 1e-13, 3.0], vec![1e3, 1e-3, 1e-9, 1e-14])
        .unwrap();
    let (ortho, resid, scale) = orthogonality_and_residual(&t);
    assert!(ortho <= 1e-12);
    assert!(resid <= 1e-10 * scale);
}

#[test]
fn expi_matches_taylor_expm() {
    let t = random_tridiagonal(42, 8);
    let mut r = rng(7);
    let v = random_complex_state(&mut r, 8);
    let ours = expi_tridiagonal_apply(&t, 3.7, &v).unwrap();
    let u = expm_minus_i(&from_real(8, &t.to_dense()), 3.7);
    let theirs = matvec(&u, v.amplitudes());
    assert!(max_abs_diff(ours.amplitudes(), &theirs) < 1e-10);
    assert!((ours.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn pauli_x_oracle_and_krylov_agree_on_small_ising() {
    let h = ising_operator(IsingParams::with_default_fields(4)).unwrap();
    let psi = random_state(16, 11).unwrap();
    let oracle = DenseEvolver::new(&h, DEFAULT_ORACLE_CAP).unwrap();
    let basis = lanczos_iterate(&h, &psi, 16, Reorthogonalization::Full).unwrap();
    let exact = oracle.evolve(&psi, 5.0).unwrap();
    let approx = krylov_evolve(&basis, 5.0);
    assert!(max_abs_diff(exact.amplitudes(), approx.amplitudes()) < 1e-10);
    assert!((exact.norm() - 1.0).abs() < 1e-11);

    let one_shot = exact_evolve_dense(&h, &psi, 5.0, DEFAULT_ORACLE_CAP).unwrap();
    assert_eq!(one_shot, exact);
}

#[test]
fn dense_oracle_matches_taylor_expm_for_gue() {
    let h = gue_sample(6, 3).unwrap();
    let m: CMat = (0..6).map(|i| (0..6).map(|j| h.entry(i, j)).collect()).collect();
    let psi = random_state(6, 4).unwrap();
    let ours = exact_evolve_dense(&h, &psi, 2.3, 64).unwrap();
    let theirs = matvec(&expm_minus_i(&m, 2.3), psi.amplitudes());
    assert!(max_abs_diff(ours.amplitudes(), &theirs) < 1e-11);
}

#[test]
fn linearity_and_hermiticity_of_operators() {
    let mut r = rng(99);
    let ising = ising_operator(IsingParams::with_default_fields(6)).unwrap();
    let gue = gue_sample(64, 5).unwrap();
    let ops: [&dyn LinearOperator; 2] = [&ising, &gue];
    for op in ops {
        let d = op.dim();
        let probes: Vec<_> =
            (0..4).map(|_| (random_complex_state(&mut r, d), random_complex_state(&mut r, d))).collect();
        assert!(operator::hermiticity_defect(op, &probes).unwrap() <= 1e-12);

        let (u, v) = (&probes[0].0, &probes[0].1);
        let (a, b) = (c(0.3, -1.2), c(-0.7, 0.4));
        let combo = ComplexState::new(
            u.amplitudes().iter().zip(v.amplitudes()).map(|(x, y)| a * x + b * y).collect(),
        )
        .unwrap();
        let lhs = op.apply(&combo).unwrap();
        let (hu, hv) = (op.apply(u).unwrap(), op.apply(v).unwrap());
        let rhs: Vec<Complex64> =
            hu.amplitudes().iter().zip(hv.amplitudes()).map(|(x, y)| a * x + b * y).collect();
        let scale = lhs.norm();
        assert!(max_abs_diff(lhs.amplitudes(), &rhs) <= 1e-12 * scale);
    }
}

#[test]
fn operators_apply_concurrently() {
    let h = ising_operator(IsingParams::with_default_fields(8)).unwrap();
    let states: Vec<_> = (0..4).map(|s| random_state(256, s).unwrap()).collect();
    let serial: Vec<_> = states.iter().map(|s| h.apply(s).unwrap()).collect();
    let parallel: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = states.iter().map(|s| scope.spawn(|| h.apply(s).unwrap())).collect();
        handles.into_iter().map(|j| j.join().unwrap()).collect()
    });
    assert_eq!(serial, parallel);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagator_preserves_norm_and_composes(
        seed in 0u64..10_000,
        n in 1usize..40,
        t1 in -20.0f64..20.0,
        t2 in -20.0f64..20.0,
    ) {
        let t = random_tridiagonal(seed, n);
        let mut r = rng(seed ^ 0xabcdef);
        let v = random_complex_state(&mut r, n);
        let p = TridiagonalPropagator::new(&t);
        let once = p.evolve(t1 + t2, v.amplitudes()).unwrap();
        let twice = p.evolve(t2, &p.evolve(t1, v.amplitudes()).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&once, &twice) <= 1e-10);
        let norm: f64 = once.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn eigen_is_deterministic(seed in 0u64..1000, n in 1usize..30) {
        let t = random_tridiagonal(seed, n);
        prop_assert_eq!(eig_sym_tridiagonal(&t), eig_sym_tridiagonal(&t));
    }
}
