use krylov_echo::*;

const LITERAL: EstimatorKind = EstimatorKind::ExtraSiteAveraged(AveragingMode::Literal);
const HYBRID: EstimatorKind = EstimatorKind::ExtraSiteAveraged(AveragingMode::Hybrid);

struct Sweep {
    truth: Vec<f64>,
    estimate: Vec<f64>,
}

impl Sweep {
    fn window(&self) -> Vec<(f64, f64)> {
        self.truth
            .iter()
            .zip(&self.estimate)
            .filter(|(t, _)| (1e-12..=1e-3).contains(*t))
            .map(|(&t, &e)| (t.log10(), e.max(1e-300).log10()))
            .collect()
    }
}

/// Oracle and estimator on a time grid fine relative to the chain hopping,
/// stopping once the true error is well past the window.
fn sweep<H: LinearOperator>(h: &H, psi: &ComplexState, n: usize, kind: EstimatorKind) -> Sweep {
    let basis = lanczos_iterate(h, psi, n, Reorthogonalization::Full).unwrap();
    let est = ErrorEstimator::prepare(kind, &basis, h).unwrap();
    let oracle = DenseEvolver::new(h, DEFAULT_ORACLE_CAP).unwrap();
    let prop = KrylovPropagator::new(&basis);
    let beta = basis.tridiagonal().offdiag().iter().sum::<f64>() / (n - 1) as f64;
    let dt = 0.01 / beta;
    let mut out = Sweep { truth: vec![], estimate: vec![] };
    for i in 0..20_000 {
        let t = dt * i as f64;
        let eps = true_infidelity(&prop.evolve(t), &oracle.evolve(psi, t).unwrap()).unwrap();
        out.truth.push(eps);
        out.estimate.push(est.value(t));
        if eps > 1e-2 {
            break;
        }
    }
    out
}

fn max_log_deviation(w: &[(f64, f64)]) -> f64 {
    w.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn pearson(w: &[(f64, f64)]) -> f64 {
    let n = w.len() as f64;
    let mx = w.iter().map(|p| p.0).sum::<f64>() / n;
    let my = w.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in w {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

fn toeplitz_basis(d: usize, n: usize, alpha: f64, beta: f64) -> (ChainOperator, KrylovBasis) {
    let chain = ChainOperator::homogeneous(d, alpha, beta).unwrap();
    let basis = lanczos_iterate(&chain, &ComplexState::basis(d, 0), n, Reorthogonalization::Full).unwrap();
    (chain, basis)
}

#[test]
fn every_estimator_vanishes_at_time_zero() {
    let h = ising_operator(IsingParams::with_default_fields(6)).unwrap();
    let basis = lanczos_iterate(&h, &random_state(64, 2).unwrap(), 12, Reorthogonalization::Full).unwrap();
    for kind in EstimatorKind::CHEAP {
        let e = ErrorEstimator::prepare(kind, &basis, &h).unwrap().estimate(0.0);
        assert!(e.value <= 1e-12, "{kind}");
        assert_eq!(e.kind, kind);
        assert_eq!(e.time, 0.0);
    }
    let (lo, hi) = AveragedBand::new(&basis).unwrap().envelope(0.0);
    assert!(lo <= 1e-12 && hi <= 1e-12);
}

#[test]
fn extra_site_estimate_matches_full_space_overlap() {
    // 1 − |echo(T_N, T_{N+1})|² against 1 − |⟨ψ_N(t)|ψ_{N+1}(t)⟩|² built in the
    // full Hilbert space from the Lanczos vectors.
    let cases: Vec<(Box<dyn LinearOperator>, ComplexState, usize)> = vec![
        (
            Box::new(ising_operator(IsingParams::with_default_fields(10)).unwrap()),
            random_state(1024, 7).unwrap(),
            30,
        ),
        (Box::new(goe_sample(200, 3).unwrap()), random_state(200, 3).unwrap(), 15),
        (Box::new(gue_sample(150, 4).unwrap()), random_state(150, 4).unwrap(), 12),
    ];
    for (h, psi, n) in cases {
        let extended = lanczos_iterate(&h, &psi, n + 1, Reorthogonalization::Full).unwrap();
        let short = lanczos_iterate(&h, &psi, n, Reorthogonalization::Full).unwrap();
        let est = ErrorEstimator::extra_site_exact(&extended).unwrap();
        for i in 0..40 {
            let t = 0.03 * i as f64;
            let full = true_infidelity(&krylov_evolve(&short, t), &krylov_evolve(&extended, t)).unwrap();
            assert!((est.value(t) - full).abs() <= 1e-10, "t={t}");
        }
    }
}

#[test]
fn prepare_and_explicit_extension_agree() {
    let h = goe_sample(96, 9).unwrap();
    let psi = random_state(96, 9).unwrap();
    let basis = lanczos_iterate(&h, &psi, 14, Reorthogonalization::Full).unwrap();
    let prepared = ErrorEstimator::prepare(EstimatorKind::ExtraSiteExact, &basis, &h).unwrap();
    let extended = basis.extend_one(&h).unwrap();
    for &t in &[0.1, 0.4, 0.9] {
        assert_eq!(prepared.value(t), estimate_extra_site_exact(&extended, t).unwrap().value);
    }
}

#[test]
fn last_site_estimate_equals_true_error() {
    // With N+1 = D the extra-site estimate is the oracle error itself.
    let h = ising_operator(IsingParams::with_default_fields(4)).unwrap();
    let psi = random_state(16, 5).unwrap();
    let basis = lanczos_iterate(&h, &psi, 15, Reorthogonalization::Full).unwrap();
    let est = ErrorEstimator::prepare(EstimatorKind::ExtraSiteExact, &basis, &h).unwrap();
    let oracle = DenseEvolver::new(&h, 64).unwrap();
    for i in 0..50 {
        let t = 0.2 * i as f64;
        let truth = true_infidelity(&krylov_evolve(&basis, t), &oracle.evolve(&psi, t).unwrap()).unwrap();
        assert!((est.value(t) - truth).abs() <= 1e-10);
    }
}

#[test]
fn homogeneous_chain_collapses_all_estimators() {
    let (chain, basis) = toeplitz_basis(60, 30, 0.0, 1.0);
    let kinds = [EstimatorKind::ExtraSiteExact, LITERAL, HYBRID, EstimatorKind::ToeplitzAnalytic];
    let ests: Vec<_> = kinds.iter().map(|&k| ErrorEstimator::prepare(k, &basis, &chain).unwrap()).collect();
    for i in 0..=200 {
        let t = 0.5 * i as f64;
        let exact = ests[0].value(t);
        for e in &ests[1..] {
            assert!((e.value(t) - exact).abs() <= 1e-8, "{} at t={t}", e.kind());
        }
        // averaging is exact here
        assert!((ests[1].value(t) - exact).abs() <= 1e-12);
    }
}

#[test]
fn shifted_and_scaled_homogeneous_chain_collapses() {
    let (chain, basis) = toeplitz_basis(40, 20, -1.3, 0.7);
    let c = averaged_coefficients(&basis);
    assert!((c.alpha_bar + 1.3).abs() < 1e-12 && (c.beta_bar - 0.7).abs() < 1e-12);
    let exact = ErrorEstimator::prepare(EstimatorKind::ExtraSiteExact, &basis, &chain).unwrap();
    let analytic = ErrorEstimator::toeplitz_analytic(&basis).unwrap();
    for i in 0..100 {
        let t = 0.37 * i as f64;
        assert!((exact.value(t) - analytic.value(t)).abs() <= 1e-8);
    }
}

#[test]
fn park_light_is_end_of_chain_population() {
    let (_, basis) = toeplitz_basis(30, 30, 0.0, 1.0);
    let toe = ToeplitzChain::new(30, 0.0, 1.0).unwrap();
    for i in 0..100 {
        let t = 0.4 * i as f64;
        let p = estimate_park_light(&basis, t).unwrap();
        assert_eq!(p.kind, EstimatorKind::ParkLight);
        assert!((p.value - toe.transition(30, 1, t).unwrap().norm_sqr()).abs() <= 1e-10);
    }
    let single = lanczos_iterate(
        &goe_sample(8, 1).unwrap(),
        &random_state(8, 1).unwrap(),
        1,
        Reorthogonalization::Full,
    )
    .unwrap();
    for &t in &[0.0, 1.0, 10.0] {
        assert_eq!(estimate_park_light(&single, t).unwrap().value, 1.0);
    }
}

#[test]
fn decoupled_chain_never_leaks() {
    let basis = lanczos_iterate(
        &ChainOperator::homogeneous(10, 2.0, 0.0).unwrap(),
        &ComplexState::basis(10, 0),
        1,
        Reorthogonalization::Full,
    )
    .unwrap();
    assert!(basis.breakdown());
    let t = SymmetricTridiagonal::homogeneous(5, 2.0, 0.0).unwrap();
    for &time in &[0.0, 3.0, 50.0] {
        assert!(ToeplitzEcho::new(5, 6, 2.0, 0.0).unwrap().infidelity(time) < 1e-28);
        assert!((echo_general(&t, &t.extended(2.0, 0.0), time).norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn averages_match_independent_summation() {
    let h = ising_operator(IsingParams::with_default_fields(10)).unwrap();
    let basis = lanczos_iterate(&h, &random_state(1024, 1).unwrap(), 30, Reorthogonalization::Full).unwrap();
    let t = basis.tridiagonal();
    let mut a = 0.0;
    for i in 0..30 {
        a += t.diag()[i];
    }
    let mut b = 0.0;
    for i in 0..29 {
        b += t.offdiag()[i];
    }
    let c = averaged_coefficients(&basis);
    assert!((c.alpha_bar - a / 30.0).abs() <= 1e-12 * a.abs().max(1.0));
    assert!((c.beta_bar - b / 29.0).abs() <= 1e-12 * b);
}

#[test]
fn small_bases_are_rejected() {
    let h = goe_sample(8, 1).unwrap();
    let b = lanczos_iterate(&h, &random_state(8, 1).unwrap(), 1, Reorthogonalization::Full).unwrap();
    for kind in [LITERAL, HYBRID, EstimatorKind::ToeplitzAnalytic] {
        assert!(matches!(ErrorEstimator::from_basis(kind, &b), Err(Error::BasisTooSmall { .. })));
    }
    assert!(AveragedBand::new(&b).is_err());
    assert!(ErrorEstimator::from_basis(EstimatorKind::Oracle, &b).is_err());
}

#[test]
fn breakdown_gives_exact_zero() {
    let h = ising_operator(IsingParams::with_default_fields(3)).unwrap();
    let basis = lanczos_iterate(&h, &random_state(8, 2).unwrap(), 8, Reorthogonalization::Full).unwrap();
    for kind in [EstimatorKind::ExtraSiteExact, LITERAL, HYBRID, EstimatorKind::ToeplitzAnalytic] {
        let e = ErrorEstimator::prepare(kind, &basis, &h).unwrap();
        assert!(e.is_exact());
        assert_eq!(e.value(17.0), 0.0);
    }
}

#[test]
fn goe_log_log_correlation() {
    let h = goe_sample(64, 11).unwrap();
    let s = sweep(&h, &random_state(64, 11).unwrap(), 12, EstimatorKind::ExtraSiteExact);
    let w = s.window();
    assert!(w.len() >= 20, "window has {} points", w.len());
    let r = pearson(&w);
    assert!(r >= 0.99, "correlation {r}");
}

#[test]
fn band_brackets_its_corners() {
    let h = ising_operator(IsingParams::with_default_fields(8)).unwrap();
    let basis = lanczos_iterate(&h, &random_state(256, 3).unwrap(), 20, Reorthogonalization::Full).unwrap();
    let band = AveragedBand::new(&basis).unwrap();
    for i in 0..50 {
        let (lo, hi) = band.envelope(0.05 * i as f64);
        assert!(0.0 <= lo && lo <= hi && hi <= 1.0);
    }
}

fn assert_window_fidelity<H: LinearOperator>(label: &str, h: &H, n: usize, seed: u64) {
    let s = sweep(h, &random_state(h.dim(), seed).unwrap(), n, EstimatorKind::ExtraSiteExact);
    let w = s.window();
    assert!(w.len() >= 10, "{label} seed {seed}: window has {} points", w.len());
    let dev = max_log_deviation(&w);
    assert!(dev <= 1.0, "{label} seed {seed}: max deviation {dev} decades");
}

#[test]
fn window_fidelity_ising() {
    for n_spins in 8..=10 {
        let h = ising_operator(IsingParams::with_default_fields(n_spins)).unwrap();
        for seed in 1..=5 {
            assert_window_fidelity(&format!("ising n={n_spins}"), &h, 30, seed);
        }
    }
}

#[test]
fn window_fidelity_random_matrices() {
    for d in [128, 256] {
        for seed in 1..=5 {
            assert_window_fidelity(&format!("goe D={d}"), &goe_sample(d, seed).unwrap(), 20, seed);
            assert_window_fidelity(&format!("gue D={d}"), &gue_sample(d, seed).unwrap(), 20, seed);
        }
    }
}
