use polariton_core::lindblad::{build_liouvillian, steady_state, LindbladParams, POSITIVITY_FLOOR};
use polariton_core::model::{HilbertSpace, SystemParams};
use polariton_core::numerics::{
    hermitian_eigendecompose, inner, singular_values, solve_linear, ComplexMatrix, C64,
};
use polariton_core::polariton::polariton_basis_exact;
use polariton_core::spectroscopy::{
    classify_regime, pole_decomposition, pole_discriminant, susceptibility, Regime, ThreeLevelRates,
};
use polariton_core::transitions::{exact_table, TransitionTable};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn hermitian(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(complex(), n * n).prop_map(move |raw| {
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = C64::new(raw[i * n + i].re, 0.0);
                for j in i + 1..n {
                    m[(i, j)] = raw[i * n + j];
                    m[(j, i)] = raw[i * n + j].conj();
                }
            }
            m
        })
    })
}

fn square(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), n * n)
        .prop_map(move |raw| ComplexMatrix::from_row_major(n, n, raw).unwrap())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

proptest! {
    #[test]
    fn eigensystem_reconstructs(m in hermitian(16)) {
        let e = hermitian_eigendecompose(&m).unwrap();
        let scale = m.max_abs().max(1.0);
        prop_assert!((&e.reconstruct() - &m).max_abs() <= 1e-9 * scale);
        let n = e.len();
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((inner(&e.vector(a), &e.vector(b)) - want).norm() <= 1e-9);
            }
        }
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn linear_solve_round_trip(a in square(9), x in prop::collection::vec(complex(), 9)) {
        let b = a.mul_vec(&x);
        // Random complex matrices are almost surely well conditioned enough.
        if let Ok(sol) = solve_linear(&a, &b) {
            let residual = a.mul_vec(&sol).iter().zip(&b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            prop_assert!(residual <= 1e-9 * (1.0 + a.max_abs() * 5.0));
        }
    }

    #[test]
    fn singular_values_square_to_gram_spectrum(a in square(6)) {
        let s = singular_values(&a).unwrap();
        let gram = hermitian_eigendecompose(&(&a.adjoint() * &a)).unwrap();
        let scale = gram.values.last().copied().unwrap_or(1.0).max(1.0);
        for (sigma, lambda) in s.iter().zip(&gram.values) {
            prop_assert!((sigma * sigma - lambda).abs() <= 1e-10 * scale);
        }
    }
}

fn rates() -> impl Strategy<Value = ThreeLevelRates> {
    (0.1..50.0f64, 0.0..5.0f64, 0.0..60.0f64)
        .prop_map(|(big, small, omega_c)| ThreeLevelRates::new(big, small, omega_c, 0.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decomposition_identity(r in rates()) {
        let d = pole_decomposition(&r).unwrap();
        prop_assume!(!d.is_double_pole());
        prop_assert!(d.poles.0.im > 0.0 && d.poles.1.im > 0.0);
        let span = 3.0 * (r.gamma_31_total + r.omega_c);
        let mut worst: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for delta in linspace(-span, span, 2001) {
            let want = susceptibility(&r, delta).unwrap();
            worst = worst.max((d.evaluate(delta).unwrap() - want).norm());
            peak = peak.max(want.norm());
        }
        prop_assert!(worst <= 1e-10 * peak);
    }

    #[test]
    fn ats_poles_have_equal_widths(r in rates()) {
        let d = pole_decomposition(&r).unwrap();
        if d.regime == Regime::Ats {
            prop_assert_eq!(d.poles.0.im, d.poles.1.im);
        }
    }

    #[test]
    fn transparency_dip_without_raman_decay(big in 0.5..50.0f64, omega_c in 0.1..60.0f64) {
        let r = ThreeLevelRates::new(big, 0.0, omega_c, 0.0).unwrap();
        prop_assert_eq!(susceptibility(&r, 0.0).unwrap().im, 0.0);
        for delta in linspace(-3.0 * (big + omega_c), 3.0 * (big + omega_c), 401) {
            let im = susceptibility(&r, delta).unwrap().im;
            prop_assert!(im >= 0.0);
            if delta != 0.0 {
                prop_assert!(im > 0.0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn regime_follows_discriminant_sign(big in 0.0..50.0f64, small in 0.0..50.0f64, omega_c in 0.0..40.0f64) {
        let disc = pole_discriminant(omega_c, big, small);
        let want = if disc > 0.0 { Regime::Ats } else { Regime::Eit };
        prop_assume!(disc.abs().sqrt() > 1e-9);
        prop_assert_eq!(classify_regime(omega_c, big, small), want);
    }

    #[test]
    fn steady_state_is_physical(
        g31 in 0.1..30.0f64,
        g32 in 0.1..30.0f64,
        g21 in 0.01..5.0f64,
        omega_c in 0.0..40.0f64,
        omega_p in 0.0..10.0f64,
        d1 in -50.0..50.0f64,
        d2 in -50.0..50.0f64,
    ) {
        let p = LindbladParams::new(g31, g32, g21, omega_c, d1, d2).with_probe(omega_p);
        let l = build_liouvillian(&p).unwrap();
        prop_assert!(l.trace_residual() <= 1e-10);
        let rho = steady_state(&l).unwrap();
        prop_assert!(rho.as_matrix().is_hermitian(1e-10));
        prop_assert!((rho.as_matrix().trace() - C64::new(1.0, 0.0)).norm() <= 1e-10);
        prop_assert!(rho.min_eigenvalue() >= POSITIVITY_FLOOR);
        prop_assert!(l.apply(rho.as_matrix()).max_abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polariton_states_orthonormal(omega_d in 4800.0..5000.0f64, drive in 0.0..40.0f64) {
        let p = SystemParams::default().with_drive_frequency(omega_d).with_drive(drive);
        let h = HilbertSpace::default();
        let b = polariton_basis_exact(&p, &h).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((inner(b.state(i), b.state(j)) - want).norm() <= 1e-9);
            }
        }
        prop_assert!(b.energies().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn table_bounds(omega_d in 4800.0..5000.0f64, drive in 0.0..40.0f64) {
        let p = SystemParams::default().with_drive_frequency(omega_d).with_drive(drive);
        let h = HilbertSpace::default();
        let t = exact_table(&p, &h).unwrap();
        for (i, j) in TransitionTable::pairs() {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&t.q(i, j)));
            prop_assert!(t.c(i, j) >= 0.0 && t.c(i, j) <= (h.n_max() as f64).sqrt());
            let g = t.gamma(i, j).unwrap();
            prop_assert!(g >= 0.0);
            prop_assert!((g - (20.0 * t.c(i, j).powi(2) + t.q(i, j).powi(2))).abs() <= 1e-12);
        }
        prop_assert!(t.q(3, 1) <= 0.12 && t.q(3, 2) <= 0.12 && t.c(2, 1) <= 0.12);
    }
}

#[test]
fn linewidth_tracks_cavity_rate_in_nesting_window() {
    let h = HilbertSpace::default();
    for omega_d in linspace(4851.0, 4949.0, 50) {
        for drive in linspace(0.0, 40.0, 9) {
            let p = SystemParams::default()
                .with_drive_frequency(omega_d)
                .with_drive(drive);
            let total = exact_table(&p, &h).unwrap().gamma_31_total().unwrap();
            assert!(
                (total - p.gamma_c).abs() <= 0.1 * p.gamma_c,
                "{omega_d} {drive}: {total}"
            );
        }
    }
}

#[test]
fn cavity_legs_monotone_in_drive() {
    let h = HilbertSpace::default();
    let tables: Vec<_> = linspace(0.0, 40.0, 81)
        .into_iter()
        .map(|drive| exact_table(&SystemParams::default().with_drive(drive), &h).unwrap())
        .collect();
    for w in tables.windows(2) {
        assert!(w[1].c(3, 1) > w[0].c(3, 1));
        assert!(w[1].c(3, 2) < w[0].c(3, 2));
    }
}
