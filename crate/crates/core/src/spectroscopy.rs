//! Linear probe susceptibility of a Lambda system and its EIT/ATS analysis.
//!
//! Levels |1>, |2> are the lower pair and |3> the excited state. The control
//! field couples |2>-|3> with Rabi frequency Omega_c and detuning
//! Delta_2 = omega_32 - omega_c; the probe addresses |1>-|3> with detuning
//! Delta_1, and delta = Delta_1 - Delta_2 is the two-photon detuning. With
//! rho_11 = 1 the probe coherence gives, up to a dropped constant factor,
//!
//! ```text
//! chi(delta) = (delta - i gamma_21/2) / ((delta + Delta_2 - i Gamma_31/2)(delta - i gamma_21/2) - Omega_c^2/4)
//! ```
//!
//! The one-photon detuning Delta_1 = delta + Delta_2 goes with the decay of
//! rho_31; [`susceptibility_as_printed`] keeps the variant that attaches
//! Delta_2 to the Raman factor instead. Both agree when Delta_2 = 0.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{HilbertSpace, SystemParams};
use crate::numerics::{C64, I};
use crate::polariton::polariton_basis_exact;
use crate::transitions::{
    classify_transition_type, decay_rates, matrix_elements_exact, TransitionTable, TransitionType,
    TransitionTypes,
};

/// Below this |Delta_2| (MHz) the control counts as resonant.
pub const RESONANCE_TOL: f64 = 1e-6;

/// Pole separations below this (MHz) are treated as a double pole.
pub const DOUBLE_POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeLevelRates {
    /// Gamma_31, total decoherence rate of the probe coherence.
    pub gamma_31_total: f64,
    /// gamma_21, decoherence of the Raman coherence.
    pub gamma_21: f64,
    pub omega_c: f64,
    /// omega_32 - omega_c.
    pub delta_2: f64,
}

impl ThreeLevelRates {
    pub fn new(gamma_31_total: f64, gamma_21: f64, omega_c: f64, delta_2: f64) -> Result<Self> {
        let r = Self {
            gamma_31_total,
            gamma_21,
            omega_c,
            delta_2,
        };
        r.validate()?;
        Ok(r)
    }

    /// Dephasing-dominated rates: Gamma_31 = gamma_31 + gamma_32 + gamma_3deph
    /// and gamma_21 = gamma_2deph.
    pub fn with_dephasing(
        gamma_31: f64,
        gamma_32: f64,
        gamma_3deph: f64,
        gamma_2deph: f64,
        omega_c: f64,
        delta_2: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("gamma_31", gamma_31),
            ("gamma_32", gamma_32),
            ("gamma_3deph", gamma_3deph),
            ("gamma_2deph", gamma_2deph),
        ] {
            check_rate(name, value)?;
        }
        Self::new(
            gamma_31 + gamma_32 + gamma_3deph,
            gamma_2deph,
            omega_c,
            delta_2,
        )
    }

    pub fn validate(&self) -> Result<()> {
        check_rate("Gamma_31", self.gamma_31_total)?;
        check_rate("gamma_21", self.gamma_21)?;
        for (name, value) in [("Omega_c", self.omega_c), ("Delta_2", self.delta_2)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }

    pub fn is_resonant(&self) -> bool {
        self.delta_2.abs() < RESONANCE_TOL
    }
}

fn check_rate(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "rates must be finite and non-negative",
        });
    }
    Ok(())
}

fn ratio(num: C64, den: C64, delta: f64) -> Result<C64> {
    if den == C64::new(0.0, 0.0) {
        return Err(Error::SingularSusceptibility { delta });
    }
    Ok(num / den)
}

pub fn susceptibility(r: &ThreeLevelRates, delta: f64) -> Result<C64> {
    let raman = C64::new(delta, -0.5 * r.gamma_21);
    let probe = C64::new(delta + r.delta_2, -0.5 * r.gamma_31_total);
    if r.omega_c == 0.0 {
        // The Raman factor cancels, including at its own zero.
        return ratio(C64::new(1.0, 0.0), probe, delta);
    }
    ratio(raman, probe * raman - 0.25 * r.omega_c * r.omega_c, delta)
}

/// The variant with Delta_2 attached to the Raman factor of the denominator.
pub fn susceptibility_as_printed(r: &ThreeLevelRates, delta: f64) -> Result<C64> {
    let raman = C64::new(delta, -0.5 * r.gamma_21);
    let probe = C64::new(delta, -0.5 * r.gamma_31_total);
    let shifted = C64::new(delta + r.delta_2, -0.5 * r.gamma_21);
    ratio(raman, probe * shifted - 0.25 * r.omega_c * r.omega_c, delta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SusceptibilitySpectrum {
    pub delta: Vec<f64>,
    pub chi: Vec<C64>,
}

pub fn spectrum(r: &ThreeLevelRates, grid: &[f64]) -> Result<SusceptibilitySpectrum> {
    let chi = grid
        .iter()
        .map(|&d| susceptibility(r, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(SusceptibilitySpectrum {
        delta: grid.to_vec(),
        chi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    #[serde(rename = "EIT")]
    Eit,
    #[serde(rename = "ATS")]
    Ats,
    #[serde(rename = "AT_THRESHOLD")]
    AtThreshold,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Eit => "EIT",
            Regime::Ats => "ATS",
            Regime::AtThreshold => "AT_THRESHOLD",
        })
    }
}

/// Omega_c^2 - (Gamma_31 - gamma_21)^2 / 4.
pub fn pole_discriminant(omega_c: f64, gamma_31_total: f64, gamma_21: f64) -> f64 {
    let half = 0.5 * (gamma_31_total - gamma_21);
    omega_c * omega_c - half * half
}

/// Real control strength above which the line splits into two resonances.
pub fn eit_ats_threshold(gamma_31_total: f64, gamma_21: f64) -> f64 {
    0.5 * (gamma_31_total - gamma_21).abs()
}

pub fn classify_regime(omega_c: f64, gamma_31_total: f64, gamma_21: f64) -> Regime {
    let disc = pole_discriminant(omega_c, gamma_31_total, gamma_21);
    if disc.abs().sqrt() < DOUBLE_POLE_TOL {
        Regime::AtThreshold
    } else if disc > 0.0 {
        Regime::Ats
    } else {
        Regime::Eit
    }
}

/// chi(delta) = chi_+ / (delta - delta_+) + chi_- / (delta - delta_-) for a resonant control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzianDecomposition {
    pub poles: (C64, C64),
    /// None at the double pole.
    pub residues: Option<(C64, C64)>,
    pub regime: Regime,
}

impl LorentzianDecomposition {
    pub fn is_double_pole(&self) -> bool {
        self.residues.is_none()
    }

    /// The two pole terms at delta.
    pub fn branches(&self, delta: f64) -> Option<(C64, C64)> {
        let (cp, cm) = self.residues?;
        let d = C64::new(delta, 0.0);
        Some((cp / (d - self.poles.0), cm / (d - self.poles.1)))
    }

    pub fn evaluate(&self, delta: f64) -> Option<C64> {
        self.branches(delta).map(|(a, b)| a + b)
    }
}

pub fn pole_decomposition(r: &ThreeLevelRates) -> Result<LorentzianDecomposition> {
    r.validate()?;
    if !r.is_resonant() {
        return Err(Error::ControlNotResonant(r.delta_2));
    }
    let (big, small) = (r.gamma_31_total, r.gamma_21);
    let disc = pole_discriminant(r.omega_c, big, small);
    let root = if disc >= 0.0 {
        C64::new(disc.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-disc).sqrt())
    };
    let centre = C64::new(0.0, 0.25 * (big + small));
    let plus = centre + 0.5 * root;
    let minus = centre - 0.5 * root;
    let regime = classify_regime(r.omega_c, big, small);
    let residues = if regime == Regime::AtThreshold {
        None
    } else {
        let gap = plus - minus;
        let half_gamma = 0.5 * small * I;
        Some(((plus - half_gamma) / gap, -(minus - half_gamma) / gap))
    };
    Ok(LorentzianDecomposition {
        poles: (plus, minus),
        residues,
        regime,
    })
}

/// (Omega_c, Omega_p) = (A_c C_32, A_p C_31).
pub fn effective_rabi(a_c: f64, a_p: f64, t: &TransitionTable) -> (f64, f64) {
    (a_c * t.c(3, 2), a_p * t.c(3, 1))
}

/// |Omega_c| < gamma_c / 2, the threshold with Gamma_31 ~ gamma_c and gamma_21 ~ 0.
pub fn eit_condition_check(omega_c: f64, gamma_c: f64) -> bool {
    omega_c.abs() < 0.5 * gamma_c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResult {
    pub spectrum: SusceptibilitySpectrum,
    pub decomposition: Option<LorentzianDecomposition>,
    pub regime: Regime,
    pub threshold: f64,
    pub rates: ThreeLevelRates,
    pub omega_p: f64,
    /// Control frequency actually used, rotating frame (MHz).
    pub control_frequency: f64,
    pub table: TransitionTable,
    pub types: TransitionTypes,
}

/// Polariton levels |1>, |2>, |3> probed as a Lambda system.
///
/// `omega_c` is the control frequency in the drive's rotating frame; `None`
/// puts it on resonance with omega_32. `type_threshold` is the cut passed to
/// [`classify_transition_type`].
pub fn absorption_spectrum_pipeline(
    p: &SystemParams,
    space: &HilbertSpace,
    a_c: f64,
    a_p: f64,
    omega_c: Option<f64>,
    grid: &[f64],
    type_threshold: f64,
) -> Result<PipelineResult> {
    for (name, value) in [("A_c", a_c), ("A_p", a_p)] {
        check_rate(name, value)?;
    }
    let basis = polariton_basis_exact(p, space)?;
    let table = decay_rates(&matrix_elements_exact(&basis, space)?, p.gamma_c, p.gamma_q);
    let types = classify_transition_type(&table, type_threshold);
    if !types.contains(TransitionType::Lambda) {
        return Err(Error::NotLambda {
            types: types.to_string(),
        });
    }
    if a_p > a_c {
        log::warn!("probe amplitude {a_p} exceeds control amplitude {a_c}; linear response assumes A_p << A_c");
    }
    let omega_32 = table.omega(3, 2);
    let control_frequency = omega_c.unwrap_or(omega_32);
    let (rabi_c, omega_p) = effective_rabi(a_c, a_p, &table);
    let gamma_21 = table.gamma(2, 1).expect("decay rates filled");
    let gamma_31_total = table.gamma_31_total().expect("decay rates filled");
    let rates = ThreeLevelRates::new(
        gamma_31_total,
        gamma_21,
        rabi_c,
        omega_32 - control_frequency,
    )?;
    let decomposition = if rates.is_resonant() {
        Some(pole_decomposition(&rates)?)
    } else {
        None
    };
    Ok(PipelineResult {
        spectrum: spectrum(&rates, grid)?,
        decomposition,
        regime: classify_regime(rabi_c, gamma_31_total, gamma_21),
        threshold: eit_ats_threshold(gamma_31_total, gamma_21),
        rates,
        omega_p,
        control_frequency,
        table,
        types,
    })
}
