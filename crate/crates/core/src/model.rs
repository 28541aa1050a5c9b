//! Driven qubit-cavity system in the frame rotating at the drive frequency.
//!
//! All frequencies and rates are ordinary frequencies (omega / 2 pi) in MHz.
//! The lab-frame Hamiltonian is time dependent; after the unitary
//! `exp[-i omega_d (sigma_z / 2 + a^dagger a) t]` it becomes the static
//!
//! ```text
//! H = (w~_q / 2) sigma_z + w~_r (a^dagger a + 1/2) + g (a^dagger sigma_- + a sigma_+) + Omega (sigma_- + sigma_+)
//! ```
//!
//! with `w~_q = omega_q - omega_d` and `w~_r = omega_r - omega_d`. Only this
//! operator is ever built numerically.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigendecompose, ComplexMatrix, C64};

/// Above this |g / Delta| the first-order dispersive levels are unreliable.
pub const DISPERSIVE_LIMIT: f64 = 0.3;

/// Physical parameters of the driven circuit-QED system (MHz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Qubit transition frequency.
    pub omega_q: f64,
    /// Cavity frequency.
    pub omega_r: f64,
    /// Qubit-cavity coupling.
    pub g: f64,
    /// Frequency of the classical drive on the qubit.
    pub omega_d: f64,
    /// Drive strength (Rabi frequency) on the qubit, real and non-negative.
    #[serde(rename = "Omega")]
    pub drive: f64,
    /// Qubit energy relaxation rate.
    pub gamma_q: f64,
    /// Cavity decay rate.
    pub gamma_c: f64,
}

impl Default for SystemParams {
    /// The reference device: a 5 GHz qubit dispersively coupled to a 10 GHz
    /// cavity (g = 500 MHz, chi = 50 MHz), driven at 4.9 GHz.
    fn default() -> Self {
        Self {
            omega_q: 5000.0,
            omega_r: 10000.0,
            g: 500.0,
            omega_d: 4900.0,
            drive: 0.0,
            gamma_q: 1.0,
            gamma_c: 20.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_q", self.omega_q),
            ("omega_r", self.omega_r),
            ("g", self.g),
            ("omega_d", self.omega_d),
            ("Omega", self.drive),
            ("gamma_q", self.gamma_q),
            ("gamma_c", self.gamma_c),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        for (name, value) in [
            ("g", self.g),
            ("Omega", self.drive),
            ("gamma_q", self.gamma_q),
            ("gamma_c", self.gamma_c),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be non-negative",
                });
            }
        }
        Ok(())
    }

    pub fn with_drive(mut self, drive: f64) -> Self {
        self.drive = drive;
        self
    }

    pub fn with_drive_frequency(mut self, omega_d: f64) -> Self {
        self.omega_d = omega_d;
        self
    }

    /// Qubit detuning from the drive, w~_q.
    pub fn qubit_detuning(&self) -> f64 {
        self.omega_q - self.omega_d
    }

    /// Cavity detuning from the drive, w~_r.
    pub fn cavity_detuning(&self) -> f64 {
        self.omega_r - self.omega_d
    }

    /// Delta = w~_r - w~_q = omega_r - omega_q; independent of the drive.
    pub fn delta(&self) -> f64 {
        self.cavity_detuning() - self.qubit_detuning()
    }

    /// Dispersive shift chi = g^2 / Delta.
    pub fn chi(&self) -> Result<f64> {
        let delta = self.delta();
        if delta == 0.0 {
            return Err(Error::ZeroDetuning);
        }
        Ok(self.g * self.g / delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    Ground,
    Excited,
}

/// Truncated product space qubit (x) Fock(0..=n_max), ordered
/// |g,0>, |e,0>, |g,1>, |e,1>, ..., |g,n_max>, |e,n_max>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    n_max: usize,
}

impl HilbertSpace {
    pub const DEFAULT_N_MAX: usize = 4;

    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(Error::TruncationTooSmall(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    /// Index of |qubit, n>. Panics if `n > n_max`.
    pub fn index(&self, qubit: Qubit, n: usize) -> usize {
        assert!(
            n <= self.n_max,
            "photon number {n} outside truncation {}",
            self.n_max
        );
        2 * n
            + match qubit {
                Qubit::Ground => 0,
                Qubit::Excited => 1,
            }
    }

    pub fn state(&self, index: usize) -> (Qubit, usize) {
        assert!(index < self.dim());
        let qubit = if index.is_multiple_of(2) {
            Qubit::Ground
        } else {
            Qubit::Excited
        };
        (qubit, index / 2)
    }

    /// The bare product state |qubit, n> as an amplitude vector.
    pub fn basis_vector(&self, qubit: Qubit, n: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        v[self.index(qubit, n)] = C64::new(1.0, 0.0);
        v
    }

    /// Qubit lowering operator sigma_- = |g><e| (x) 1.
    pub fn qubit_lowering(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for n in 0..=self.n_max {
            m[(self.index(Qubit::Ground, n), self.index(Qubit::Excited, n))] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Cavity annihilation operator 1 (x) a.
    pub fn cavity_annihilation(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for n in 1..=self.n_max {
            let amp = C64::new((n as f64).sqrt(), 0.0);
            for q in [Qubit::Ground, Qubit::Excited] {
                m[(self.index(q, n - 1), self.index(q, n))] = amp;
            }
        }
        m
    }

    /// Total excitation number a^dagger a + sigma_+ sigma_- (diagonal).
    pub fn excitation_number(&self) -> ComplexMatrix {
        let diag: Vec<f64> = (0..self.dim())
            .map(|k| {
                let (q, n) = self.state(k);
                n as f64 + if q == Qubit::Excited { 1.0 } else { 0.0 }
            })
            .collect();
        ComplexMatrix::from_real_diagonal(&diag)
    }
}

impl Default for HilbertSpace {
    fn default() -> Self {
        Self {
            n_max: Self::DEFAULT_N_MAX,
        }
    }
}

/// Rotating-frame Hamiltonian in MHz. Couplings leaving the truncated space are dropped.
pub fn build_rotating_hamiltonian(p: &SystemParams, h: &HilbertSpace) -> ComplexMatrix {
    let wq = p.qubit_detuning();
    let wr = p.cavity_detuning();
    let mut m = ComplexMatrix::zeros(h.dim(), h.dim());
    for n in 0..=h.n_max() {
        let ig = h.index(Qubit::Ground, n);
        let ie = h.index(Qubit::Excited, n);
        let photon = wr * (n as f64 + 0.5);
        m[(ig, ig)] = C64::new(-0.5 * wq + photon, 0.0);
        m[(ie, ie)] = C64::new(0.5 * wq + photon, 0.0);

        let drive = C64::new(p.drive, 0.0);
        m[(ig, ie)] = drive;
        m[(ie, ig)] = drive;

        if n < h.n_max() {
            let jc = C64::new(p.g * ((n + 1) as f64).sqrt(), 0.0);
            let up = h.index(Qubit::Ground, n + 1);
            m[(ie, up)] = jc;
            m[(up, ie)] = jc;
        }
    }
    m
}

/// Largest change (MHz) of the four lowest eigenvalues when the truncation
/// grows from `n_max` to `n_max + 2`.
pub fn truncation_error(p: &SystemParams, h: &HilbertSpace) -> Result<f64> {
    let small = hermitian_eigendecompose(&build_rotating_hamiltonian(p, h))?;
    let larger = HilbertSpace::new(h.n_max() + 2)?;
    let large = hermitian_eigendecompose(&build_rotating_hamiltonian(p, &larger))?;
    Ok(small
        .values
        .iter()
        .zip(&large.values)
        .take(4)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// Eigenstate |+-,n> of the undriven Jaynes-Cummings block {|e,n>, |g,n+1>}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedState {
    pub branch: Branch,
    pub n: usize,
    /// Mixing angle in [0, pi] with tan(theta) = -2 g sqrt(n+1) / Delta.
    pub theta: f64,
    /// E_{+-,n} in MHz.
    pub energy: f64,
    /// Amplitude on |e,n>.
    pub excited_amplitude: f64,
    /// Amplitude on |g,n+1>.
    pub ground_amplitude: f64,
}

impl DressedState {
    pub fn to_vector(&self, h: &HilbertSpace) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); h.dim()];
        v[h.index(Qubit::Excited, self.n)] = C64::new(self.excited_amplitude, 0.0);
        v[h.index(Qubit::Ground, self.n + 1)] = C64::new(self.ground_amplitude, 0.0);
        v
    }
}

/// Mixing angle of the n-th Jaynes-Cummings doublet.
///
/// The branch is chosen so that |+,n> is always the upper eigenstate; at
/// Delta = 0 this gives theta = pi/2.
pub fn mixing_angle(p: &SystemParams, n: usize) -> f64 {
    let coupling = 2.0 * p.g * ((n + 1) as f64).sqrt();
    let delta = p.delta();
    if delta == 0.0 && coupling == 0.0 {
        return FRAC_PI_2;
    }
    coupling.atan2(-delta)
}

/// Closed-form dressed states (+, -) of the undriven system.
///
/// E_{+-,n} = w~_r (n + 1) +- (1/2) sqrt(Delta^2 + 4 g^2 (n+1)): the centre
/// of the {|e,n>, |g,n+1>} block is w~_r (n + 1) for the Hamiltonian above.
pub fn dressed_states_analytic(p: &SystemParams, n: usize) -> (DressedState, DressedState) {
    let theta = mixing_angle(p, n);
    let delta = p.delta();
    let half_split = 0.5 * (delta * delta + 4.0 * p.g * p.g * (n + 1) as f64).sqrt();
    let centre = p.cavity_detuning() * (n + 1) as f64;
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let plus = DressedState {
        branch: Branch::Plus,
        n,
        theta,
        energy: centre + half_split,
        excited_amplitude: c,
        ground_amplitude: s,
    };
    let minus = DressedState {
        branch: Branch::Minus,
        n,
        theta,
        energy: centre - half_split,
        excited_amplitude: -s,
        ground_amplitude: c,
    };
    (plus, minus)
}

/// Energy of the uncoupled ground state |g,0>, which is Delta / 2.
pub fn ground_energy(p: &SystemParams) -> f64 {
    0.5 * (p.cavity_detuning() - p.qubit_detuning())
}

/// First-order dispersive frequencies of |g,n> and |e,n> (MHz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveLevels {
    pub ground: f64,
    pub excited: f64,
    /// |g / Delta|; the approximation degrades as this approaches 1.
    pub coupling_ratio: f64,
}

impl DispersiveLevels {
    pub fn is_reliable(&self) -> bool {
        self.coupling_ratio < DISPERSIVE_LIMIT
    }
}

pub fn dispersive_frequencies(p: &SystemParams, n: usize) -> Result<DispersiveLevels> {
    let chi = p.chi()?;
    let delta = p.delta();
    let wr = p.cavity_detuning();
    let n = n as f64;
    let coupling_ratio = (p.g / delta).abs();
    if coupling_ratio >= DISPERSIVE_LIMIT {
        log::warn!("|g/Delta| = {coupling_ratio:.3}: dispersive levels are a poor approximation");
    }
    Ok(DispersiveLevels {
        ground: n * (wr + chi) + 0.5 * delta,
        excited: p.qubit_detuning() - chi + n * (wr - chi) + 0.5 * delta,
        coupling_ratio,
    })
}

/// Drive-frequency window omega_q - 3 chi < omega_d < omega_q - chi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestingWindow {
    pub low: f64,
    pub high: f64,
}

impl NestingWindow {
    pub fn contains(&self, omega_d: f64) -> bool {
        omega_d > self.low.min(self.high) && omega_d < self.low.max(self.high)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }
}

pub fn nesting_boundaries(p: &SystemParams) -> Result<NestingWindow> {
    let chi = p.chi()?;
    Ok(NestingWindow {
        low: p.omega_q - 3.0 * chi,
        high: p.omega_q - chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn space(n_max: usize) -> HilbertSpace {
        HilbertSpace::new(n_max).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let p = SystemParams::default();
        assert_eq!(p.qubit_detuning(), 100.0);
        assert_eq!(p.cavity_detuning(), 5100.0);
        assert_eq!(p.delta(), 5000.0);
        assert_eq!(p.chi().unwrap(), 50.0);
        // chi does not depend on the drive frequency.
        assert_eq!(p.with_drive_frequency(4800.0).chi().unwrap(), 50.0);
    }

    #[test]
    fn validation() {
        assert!(SystemParams::default().validate().is_ok());
        let bad = SystemParams {
            g: -1.0,
            ..Default::default()
        };
        assert!(matches!(
            bad.validate(),
            Err(Error::InvalidParameter { name: "g", .. })
        ));
        let nan = SystemParams {
            omega_d: f64::NAN,
            ..Default::default()
        };
        assert!(nan.validate().is_err());
        assert!(matches!(
            HilbertSpace::new(1),
            Err(Error::TruncationTooSmall(1))
        ));
    }

    #[test]
    fn basis_index_is_bijective() {
        let h = space(5);
        for k in 0..h.dim() {
            let (q, n) = h.state(k);
            assert_eq!(h.index(q, n), k);
        }
        assert_eq!(h.index(Qubit::Excited, 1), 3);
    }

    #[test]
    fn uncoupled_hamiltonian_is_diagonal_dispersive_levels() {
        let p = SystemParams {
            g: 0.0,
            ..Default::default()
        };
        let h = space(3);
        let m = build_rotating_hamiltonian(&p, &h);
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                if i != j {
                    assert_eq!(m[(i, j)].norm(), 0.0);
                }
            }
        }
        // chi = 0: w_|g,n> = n w~_r + Delta/2, w_|e,n> = w~_q + n w~_r + Delta/2.
        let (wq, wr, d) = (p.qubit_detuning(), p.cavity_detuning(), p.delta());
        for n in 0..=3 {
            let nf = n as f64;
            assert_abs_diff_eq!(
                m[(h.index(Qubit::Ground, n), h.index(Qubit::Ground, n))].re,
                nf * wr + d / 2.0,
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                m[(h.index(Qubit::Excited, n), h.index(Qubit::Excited, n))].re,
                wq + nf * wr + d / 2.0,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let p = SystemParams::default().with_drive(23.0);
        let m = build_rotating_hamiltonian(&p, &space(6));
        assert!(m.is_hermitian(1e-12));
    }

    #[test]
    fn undriven_spectrum_matches_closed_form() {
        // Hand evaluation at the reference point (n_max = 2, 6x6):
        // E_g0 = 2500; R_0 = sqrt(5000^2 + 1e6)/2 = 2549.5097567963924;
        // R_1 = sqrt(5000^2 + 2e6)/2 = 2598.0762113533160.
        let p = SystemParams::default();
        let h = space(2);
        let es = hermitian_eigendecompose(&build_rotating_hamiltonian(&p, &h)).unwrap();
        let r0 = 2549.5097567963924;
        let r1 = 2598.0762113533160;
        let expect = [2500.0, 5100.0 - r0, 10200.0 - r1, 5100.0 + r0];
        for (got, want) in es.values.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
        for n in 0..2 {
            let (plus, minus) = dressed_states_analytic(&p, n);
            assert!(es.values.iter().any(|e| (e - plus.energy).abs() < 1e-9));
            assert!(es.values.iter().any(|e| (e - minus.energy).abs() < 1e-9));
        }
    }

    #[test]
    fn undriven_blocks_match_closed_form_for_all_n() {
        let p = SystemParams::default().with_drive_frequency(4873.0);
        let h = space(6);
        let es = hermitian_eigendecompose(&build_rotating_hamiltonian(&p, &h)).unwrap();
        for n in 0..h.n_max() {
            let (plus, minus) = dressed_states_analytic(&p, n);
            for e in [plus.energy, minus.energy] {
                let nearest = es
                    .values
                    .iter()
                    .map(|v| (v - e).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(nearest < 1e-9, "n = {n}: {e} off by {nearest}");
            }
        }
    }

    #[test]
    fn reference_point_is_nested() {
        let p = SystemParams::default();
        let h = space(4);
        let es = hermitian_eigendecompose(&build_rotating_hamiltonian(&p, &h)).unwrap();
        let e_g0 = ground_energy(&p);
        let (p0, m0) = dressed_states_analytic(&p, 0);
        let (_, m1) = dressed_states_analytic(&p, 1);
        assert!(e_g0 < m0.energy && m0.energy < m1.energy && m1.energy < p0.energy);
        for (got, want) in es
            .values
            .iter()
            .zip([e_g0, m0.energy, m1.energy, p0.energy])
        {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
    }

    #[test]
    fn truncation_converges() {
        for drive in [0.0, 20.0, 40.0] {
            let p = SystemParams::default().with_drive(drive);
            assert!(truncation_error(&p, &space(4)).unwrap() < 1e-6);
        }
    }

    #[test]
    fn dressed_states_are_orthonormal_eigenvectors() {
        let p = SystemParams::default().with_drive_frequency(4950.0);
        let h = space(3);
        let ham = build_rotating_hamiltonian(&p, &h);
        for n in 0..3 {
            let (plus, minus) = dressed_states_analytic(&p, n);
            let tan = -2.0 * p.g * ((n + 1) as f64).sqrt() / p.delta();
            assert_abs_diff_eq!(plus.theta.tan(), tan, epsilon = 1e-12);
            let overlap = plus.excited_amplitude * minus.excited_amplitude
                + plus.ground_amplitude * minus.ground_amplitude;
            assert_eq!(overlap, 0.0);
            for s in [plus, minus] {
                let v = s.to_vector(&h);
                let hv = ham.mul_vec(&v);
                for (a, b) in hv.iter().zip(&v) {
                    assert!((a - b * s.energy).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn uncoupled_dressed_states() {
        let p = SystemParams {
            g: 0.0,
            omega_r: 4000.0,
            ..Default::default()
        };
        assert!(p.delta() < 0.0);
        let (plus, minus) = dressed_states_analytic(&p, 0);
        assert_eq!(plus.theta, 0.0);
        assert_abs_diff_eq!(plus.energy - minus.energy, p.delta().abs(), epsilon = 1e-9);

        // With Delta > 0 the upper branch is the photon state, theta = pi.
        let p = SystemParams {
            g: 0.0,
            ..Default::default()
        };
        let (plus, minus) = dressed_states_analytic(&p, 0);
        assert_abs_diff_eq!(plus.theta, std::f64::consts::PI, epsilon = 1e-15);
        assert_abs_diff_eq!(plus.energy - minus.energy, 5000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(plus.ground_amplitude, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn resonant_mixing_angle() {
        let p = SystemParams {
            omega_r: 5000.0,
            ..Default::default()
        };
        let (plus, _) = dressed_states_analytic(&p, 0);
        assert_abs_diff_eq!(plus.theta, FRAC_PI_2, epsilon = 1e-15);
        let p = SystemParams {
            omega_r: 5000.0,
            g: 0.0,
            ..Default::default()
        };
        assert_eq!(mixing_angle(&p, 0), FRAC_PI_2);
    }

    #[test]
    fn reference_splitting() {
        let (plus, minus) = dressed_states_analytic(&SystemParams::default(), 0);
        assert_abs_diff_eq!(
            plus.energy - minus.energy,
            5099.019513592785,
            epsilon = 1e-9
        );
    }

    #[test]
    fn large_detuning_amplitudes() {
        // |+,0> ~ |g,1> - (g/Delta)|e,0>, |-,0> ~ |e,0> + (g/Delta)|g,1>, g/Delta = 0.1.
        let p = SystemParams::default();
        let (plus, minus) = dressed_states_analytic(&p, 0);
        let ratio = p.g / p.delta();
        assert!((plus.ground_amplitude.abs() - 1.0).abs() < 0.005);
        assert!((plus.excited_amplitude.abs() - ratio).abs() < 0.005);
        assert!((minus.excited_amplitude.abs() - 1.0).abs() < 0.005);
        assert!((minus.ground_amplitude.abs() - ratio).abs() < 0.005);
    }

    #[test]
    fn dispersive_levels() {
        let p = SystemParams::default();
        let l0 = dispersive_frequencies(&p, 0).unwrap();
        assert_eq!(l0.ground, p.delta() / 2.0);
        assert_abs_diff_eq!(l0.excited - l0.ground, 50.0, epsilon = 1e-12);
        assert!(l0.is_reliable());

        // |e,0> and |g,0> cross at w~_q = chi.
        let p = SystemParams::default().with_drive_frequency(4950.0);
        let l0 = dispersive_frequencies(&p, 0).unwrap();
        assert_abs_diff_eq!(l0.excited, l0.ground, epsilon = 1e-12);
        // |e,1> and |g,1> cross at w~_q = 3 chi.
        let p = SystemParams::default().with_drive_frequency(4850.0);
        let l1 = dispersive_frequencies(&p, 1).unwrap();
        assert_abs_diff_eq!(l1.excited, l1.ground, epsilon = 1e-9);

        let resonant = SystemParams {
            omega_r: 5000.0,
            ..Default::default()
        };
        assert_eq!(
            dispersive_frequencies(&resonant, 0),
            Err(Error::ZeroDetuning)
        );
    }

    #[test]
    fn nesting_window() {
        let w = nesting_boundaries(&SystemParams::default()).unwrap();
        assert_abs_diff_eq!(w.low, 4850.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.high, 4950.0, epsilon = 1e-12);
        assert!(w.contains(4900.0));
        assert!(!w.contains(4800.0));
        assert!(!w.contains(4950.0));

        let weak = SystemParams {
            g: 1e-6,
            ..Default::default()
        };
        let w = nesting_boundaries(&weak).unwrap();
        assert_abs_diff_eq!(w.low, 5000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(w.high, 5000.0, epsilon = 1e-9);

        let resonant = SystemParams {
            omega_r: 5000.0,
            ..Default::default()
        };
        assert_eq!(nesting_boundaries(&resonant), Err(Error::ZeroDetuning));
    }

    #[test]
    fn ladder_operators() {
        let h = space(2);
        let a = h.cavity_annihilation();
        let sm = h.qubit_lowering();
        let v = a.mul_vec(&h.basis_vector(Qubit::Excited, 2));
        assert_abs_diff_eq!(
            v[h.index(Qubit::Excited, 1)].re,
            2f64.sqrt(),
            epsilon = 1e-15
        );
        let v = sm.mul_vec(&h.basis_vector(Qubit::Excited, 1));
        assert_eq!(v, h.basis_vector(Qubit::Ground, 1));
        let v = sm.mul_vec(&h.basis_vector(Qubit::Ground, 1));
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }
}
