//! Transition matrix elements, decay rates and three-level configuration.
//!
//! For a pair i > j (|i> the upper level) the elements are taken in the
//! emission direction: Q_ij = |<j|sigma_-|i>| and C_ij = |<j|a|i>|, so the
//! rate into the flat qubit and cavity baths is
//! gamma_ij = gamma_c C_ij^2 + gamma_q Q_ij^2.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{HilbertSpace, SystemParams};
use crate::numerics::inner;
use crate::polariton::{
    polariton_basis_analytic, polariton_basis_exact, MixingAngles, PolaritonBasis, LEVELS,
};

/// Default cut separating genuine transition legs from g/Delta leakage.
pub const DEFAULT_TYPE_THRESHOLD: f64 = 0.15;

/// Bisection tolerance on the drive strength (MHz).
pub const IMPEDANCE_TOL: f64 = 1e-3;

type PairTable = [[f64; LEVELS]; LEVELS];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionTable {
    qubit: PairTable,
    cavity: PairTable,
    frequency: PairTable,
    rate: Option<PairTable>,
}

fn check_pair(i: usize, j: usize) {
    assert!(
        (1..=LEVELS).contains(&j) && j < i && i <= LEVELS,
        "transition ({i},{j}) must satisfy 1 <= j < i <= {LEVELS}"
    );
}

impl TransitionTable {
    /// Q_ij, qubit-port matrix element.
    pub fn q(&self, i: usize, j: usize) -> f64 {
        check_pair(i, j);
        self.qubit[i - 1][j - 1]
    }

    /// C_ij, cavity-port matrix element.
    pub fn c(&self, i: usize, j: usize) -> f64 {
        check_pair(i, j);
        self.cavity[i - 1][j - 1]
    }

    /// omega_ij in MHz.
    pub fn omega(&self, i: usize, j: usize) -> f64 {
        check_pair(i, j);
        self.frequency[i - 1][j - 1]
    }

    /// gamma_ij in MHz, once [`decay_rates`] has filled the table.
    pub fn gamma(&self, i: usize, j: usize) -> Option<f64> {
        check_pair(i, j);
        self.rate.map(|r| r[i - 1][j - 1])
    }

    /// Gamma_31 = gamma_31 + gamma_32, total decay of |3>.
    pub fn gamma_31_total(&self) -> Option<f64> {
        Some(self.gamma(3, 1)? + self.gamma(3, 2)?)
    }

    /// All pairs (i, j) with i > j, in the order (2,1), (3,1), (3,2), (4,1), ...
    pub fn pairs() -> impl Iterator<Item = (usize, usize)> {
        (2..=LEVELS).flat_map(|i| (1..i).map(move |j| (i, j)))
    }
}

/// Q, C and omega for the exact polariton states.
pub fn matrix_elements_exact(b: &PolaritonBasis, h: &HilbertSpace) -> Result<TransitionTable> {
    if b.space() != h {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: b.space().dim(),
        });
    }
    let sigma = h.qubit_lowering();
    let a = h.cavity_annihilation();
    let mut table = TransitionTable {
        qubit: [[0.0; LEVELS]; LEVELS],
        cavity: [[0.0; LEVELS]; LEVELS],
        frequency: [[0.0; LEVELS]; LEVELS],
        rate: None,
    };
    for (i, j) in TransitionTable::pairs() {
        let upper = b.state(i);
        let lower = b.state(j);
        table.qubit[i - 1][j - 1] = inner(lower, &sigma.mul_vec(upper)).norm();
        table.cavity[i - 1][j - 1] = inner(lower, &a.mul_vec(upper)).norm();
        table.frequency[i - 1][j - 1] = b.energy(i) - b.energy(j);
    }
    Ok(table)
}

/// Leading-order matrix elements of the three lowest polariton states.
///
/// Q_31, Q_32 and C_21 vanish at this order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticElements {
    pub c_32: f64,
    pub c_31: f64,
    pub q_21: f64,
}

impl AnalyticElements {
    pub fn q_31(&self) -> f64 {
        0.0
    }

    pub fn q_32(&self) -> f64 {
        0.0
    }

    pub fn c_21(&self) -> f64 {
        0.0
    }

    /// (gamma_31, gamma_32, gamma_21) = (gamma_c C_31^2, gamma_c C_32^2, gamma_q Q_21^2).
    pub fn decay_rates(&self, gamma_c: f64, gamma_q: f64) -> (f64, f64, f64) {
        (
            gamma_c * self.c_31 * self.c_31,
            gamma_c * self.c_32 * self.c_32,
            gamma_q * self.q_21 * self.q_21,
        )
    }
}

pub fn matrix_elements_analytic(angles: &MixingAngles) -> AnalyticElements {
    let half_sum = 0.5 * (angles.theta_u + angles.theta_l);
    let c = (0.5 * angles.theta_l).cos();
    AnalyticElements {
        c_32: half_sum.cos().abs(),
        c_31: half_sum.sin().abs(),
        q_21: c * c,
    }
}

/// Fills gamma_ij = gamma_c C_ij^2 + gamma_q Q_ij^2.
pub fn decay_rates(t: &TransitionTable, gamma_c: f64, gamma_q: f64) -> TransitionTable {
    let mut rate = [[0.0; LEVELS]; LEVELS];
    for (i, j) in TransitionTable::pairs() {
        let c = t.cavity[i - 1][j - 1];
        let q = t.qubit[i - 1][j - 1];
        rate[i - 1][j - 1] = gamma_c * c * c + gamma_q * q * q;
    }
    TransitionTable {
        rate: Some(rate),
        ..t.clone()
    }
}

/// Exact basis, matrix elements and decay rates at one parameter point.
pub fn exact_table(p: &SystemParams, h: &HilbertSpace) -> Result<TransitionTable> {
    let b = polariton_basis_exact(p, h)?;
    Ok(decay_rates(
        &matrix_elements_exact(&b, h)?,
        p.gamma_c,
        p.gamma_q,
    ))
}

/// How gamma_31 and gamma_32 are evaluated when searching for impedance matching.
#[derive(Debug, Clone, Copy)]
pub enum RateModel {
    Exact(HilbertSpace),
    Analytic,
}

fn rate_imbalance(p: &SystemParams, model: RateModel) -> Result<f64> {
    match model {
        RateModel::Exact(h) => {
            let t = exact_table(p, &h)?;
            Ok(t.gamma(3, 1).unwrap_or(0.0) - t.gamma(3, 2).unwrap_or(0.0))
        }
        RateModel::Analytic => {
            let (_, angles) = polariton_basis_analytic(p)?;
            let (g31, g32, _) = matrix_elements_analytic(&angles).decay_rates(p.gamma_c, p.gamma_q);
            Ok(g31 - g32)
        }
    }
}

/// Drive strength Omega* in [lo, hi] where gamma_31 = gamma_32, by bisection.
pub fn impedance_match_drive(p: &SystemParams, lo: f64, hi: f64, model: RateModel) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = rate_imbalance(&p.with_drive(a), model)?;
    let fb = rate_imbalance(&p.with_drive(b), model)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    while b - a > IMPEDANCE_TOL {
        let mid = 0.5 * (a + b);
        let fm = rate_imbalance(&p.with_drive(mid), model)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TransitionType {
    /// Ladder: 1-2 via the qubit, 2-3 via the cavity.
    Xi,
    /// Both legs into |3> via the cavity.
    Lambda,
    /// From |1> to |2> via the qubit and to |3> via the cavity.
    V,
    /// Cyclic: all three legs driven.
    Delta,
}

impl fmt::Display for TransitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransitionType::Xi => "Ξ",
            TransitionType::Lambda => "Λ",
            TransitionType::V => "V",
            TransitionType::Delta => "Δ",
        })
    }
}

/// Configurations available to the three lowest levels.
///
/// All three legs significant admits both Lambda (cavity-only drive) and
/// Delta (with an extra qubit drive).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TransitionTypes(Vec<TransitionType>);

impl TransitionTypes {
    pub fn contains(&self, t: TransitionType) -> bool {
        self.0.contains(&t)
    }

    pub fn as_slice(&self) -> &[TransitionType] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TransitionTypes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("none");
        }
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

pub fn classify_transition_type(t: &TransitionTable, threshold: f64) -> TransitionTypes {
    let c31 = t.c(3, 1) > threshold;
    let c32 = t.c(3, 2) > threshold;
    let q21 = t.q(2, 1) > threshold;
    let types = match (c31, c32, q21) {
        (true, true, true) => vec![TransitionType::Lambda, TransitionType::Delta],
        (true, true, false) => vec![TransitionType::Lambda],
        (false, true, true) => vec![TransitionType::Xi],
        (true, false, true) => vec![TransitionType::V],
        _ => Vec::new(),
    };
    TransitionTypes(types)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Qubit;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn point(omega_d: f64, drive: f64) -> SystemParams {
        SystemParams::default()
            .with_drive_frequency(omega_d)
            .with_drive(drive)
    }

    fn table(omega_d: f64, drive: f64) -> TransitionTable {
        exact_table(&point(omega_d, drive), &HilbertSpace::default()).unwrap()
    }

    #[test]
    fn reference_matrix_elements() {
        // Frozen from an independent numpy diagonalization (n_max = 4).
        let t = table(4900.0, 20.0);
        assert_abs_diff_eq!(t.c(3, 1), 0.6280, epsilon = 5e-4);
        assert_abs_diff_eq!(t.c(3, 2), 0.7829, epsilon = 5e-4);
        assert_abs_diff_eq!(t.q(2, 1), 0.8884, epsilon = 5e-4);
        assert_abs_diff_eq!(t.q(3, 1), 0.0020, epsilon = 5e-4);
        assert_abs_diff_eq!(t.q(3, 2), 0.0981, epsilon = 5e-4);
        assert_abs_diff_eq!(t.c(2, 1), 0.0880, epsilon = 5e-4);
    }

    #[test]
    fn outside_nesting_is_v_like() {
        let t = table(4800.0, 0.0);
        assert!(t.c(3, 2) < 0.01);
        assert!(t.c(3, 1) > 0.99);
        assert!(t.q(2, 1) > 0.99);
    }

    #[test]
    fn bare_selection_rules() {
        let p = SystemParams {
            g: 0.0,
            ..point(4800.0, 0.0)
        };
        let h = HilbertSpace::default();
        let b = polariton_basis_exact(&p, &h).unwrap();
        let t = matrix_elements_exact(&b, &h).unwrap();
        // |1>=|g,0>, |2>=|e,0>, |3>=|g,1>, |4>=|e,1>.
        assert_eq!(b.bare_overlap(3, Qubit::Ground, 1), 1.0);
        for (i, j) in TransitionTable::pairs() {
            let photon_step = matches!((i, j), (3, 1) | (4, 2));
            let qubit_flip = matches!((i, j), (2, 1) | (4, 3));
            assert_eq!(t.c(i, j) > 0.5, photon_step, "C_{i}{j}");
            assert_eq!(t.q(i, j) > 0.5, qubit_flip, "Q_{i}{j}");
            assert!(t.c(i, j) < 1e-12 || photon_step);
            assert!(t.q(i, j) < 1e-12 || qubit_flip);
        }
    }

    #[test]
    fn analytic_elements() {
        let e = matrix_elements_analytic(&MixingAngles {
            theta_l: 0.0,
            theta_u: 0.0,
        });
        assert_eq!((e.c_32, e.c_31, e.q_21), (1.0, 0.0, 1.0));

        let e = matrix_elements_analytic(&MixingAngles {
            theta_l: FRAC_PI_4,
            theta_u: FRAC_PI_4,
        });
        assert_abs_diff_eq!(e.c_32, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(e.c_31, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_eq!((e.q_31(), e.q_32(), e.c_21()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn analytic_elements_track_exact() {
        for drive in [10.0, 20.0, 30.0, 40.0] {
            let p = point(4900.0, drive);
            let (_, angles) = polariton_basis_analytic(&p).unwrap();
            let e = matrix_elements_analytic(&angles);
            let t = table(4900.0, drive);
            assert!((e.c_32 - t.c(3, 2)).abs() < 0.05);
            assert!((e.c_31 - t.c(3, 1)).abs() < 0.05);
            assert!((e.q_21 - t.q(2, 1)).abs() < 0.05);
            assert_abs_diff_eq!(e.c_31.powi(2) + e.c_32.powi(2), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rates_follow_squared_elements() {
        let t = decay_rates(&table(4900.0, 20.0), 20.0, 1.0);
        for (i, j) in TransitionTable::pairs() {
            let want = 20.0 * t.c(i, j).powi(2) + t.q(i, j).powi(2);
            assert_abs_diff_eq!(t.gamma(i, j).unwrap(), want, epsilon = 1e-12);
        }
        let total = t.gamma_31_total().unwrap();
        assert!((total - 20.0).abs() < 2.0);

        let silent = decay_rates(&t, 0.0, 0.0);
        assert!(TransitionTable::pairs().all(|(i, j)| silent.gamma(i, j) == Some(0.0)));
    }

    #[test]
    fn rates_from_rounded_table_values() {
        // gamma_31 = 20 * 0.62^2, gamma_32 = 20 * 0.77^2 from the published rounding.
        let (g31, g32) = (20.0 * 0.62f64.powi(2), 20.0 * 0.77f64.powi(2));
        assert_abs_diff_eq!(g31, 7.688, epsilon = 1e-9);
        assert_abs_diff_eq!(g32, 11.858, epsilon = 1e-9);
        assert!((g31 + g32 - 20.0).abs() < 0.5);
    }

    #[test]
    fn analytic_qubit_rate_without_drive() {
        let (_, angles) = polariton_basis_analytic(&point(4900.0, 0.0)).unwrap();
        let (_, _, g21) = matrix_elements_analytic(&angles).decay_rates(20.0, 1.0);
        assert_eq!(g21, 1.0);
    }

    #[test]
    fn impedance_match_analytic_mid_window() {
        let p = point(4900.0, 0.0);
        let omega = impedance_match_drive(&p, 1.0, 40.0, RateModel::Analytic).unwrap();
        assert_abs_diff_eq!(omega, 25.0, epsilon = IMPEDANCE_TOL);
        // gamma_q does not enter gamma_31 - gamma_32 at this order.
        let p = SystemParams { gamma_q: 7.0, ..p };
        let again = impedance_match_drive(&p, 1.0, 40.0, RateModel::Analytic).unwrap();
        assert_abs_diff_eq!(again, omega, epsilon = 1e-12);
    }

    #[test]
    fn impedance_match_exact() {
        let p = point(4900.0, 0.0);
        let omega = impedance_match_drive(&p, 1.0, 40.0, RateModel::Exact(HilbertSpace::default()))
            .unwrap();
        // numpy + brentq on the same model: 24.9343.
        assert_abs_diff_eq!(omega, 24.9343, epsilon = 2e-3);
    }

    #[test]
    fn impedance_match_without_sign_change() {
        let p = point(4900.0, 0.0);
        match impedance_match_drive(&p, 30.0, 40.0, RateModel::Analytic) {
            Err(Error::NoSignChange { lo, hi, f_lo, f_hi }) => {
                assert_eq!((lo, hi), (30.0, 40.0));
                assert!(f_lo > 0.0 && f_hi > 0.0);
            }
            other => panic!("expected NoSignChange, got {other:?}"),
        }
    }

    #[test]
    fn classification() {
        use TransitionType::*;
        assert_eq!(
            classify_transition_type(&table(4900.0, 0.0), DEFAULT_TYPE_THRESHOLD).as_slice(),
            &[Xi]
        );
        let t = classify_transition_type(&table(4900.0, 20.0), DEFAULT_TYPE_THRESHOLD);
        assert_eq!(t.as_slice(), &[Lambda, Delta]);
        assert_eq!(t.to_string(), "Λ,Δ");
        assert_eq!(
            classify_transition_type(&table(4800.0, 0.0), DEFAULT_TYPE_THRESHOLD).as_slice(),
            &[V]
        );
        // Raising the cut above every leg leaves nothing.
        assert!(classify_transition_type(&table(4900.0, 20.0), 1.1).is_empty());
    }

    #[test]
    fn large_detuning_rate_symmetry() {
        for drive in [10.0, 20.0, 30.0, 40.0] {
            let t = table(4900.0, drive);
            let (g31, g42) = (t.gamma(3, 1).unwrap(), t.gamma(4, 2).unwrap());
            let (g32, g41) = (t.gamma(3, 2).unwrap(), t.gamma(4, 1).unwrap());
            assert!((g31 - g42).abs() <= 0.05 * g31.max(g42));
            assert!((g32 - g41).abs() <= 0.05 * g32.max(g41));
        }
    }

    #[test]
    #[should_panic]
    fn pair_must_be_ordered() {
        table(4900.0, 0.0).c(1, 3);
    }
}
