//! Three-level Lindblad model used as an independent check of the analytic
//! susceptibility.
//!
//! In the frame rotating at the probe frequency on |1>-|3> and at the control
//! frequency on |2>-|3> both fields are static:
//!
//! ```text
//! H = Delta_1 |3><3| + (Delta_1 - Delta_2) |2><2|
//!     - (Omega_p / 2)(|3><1| + |1><3|) - (Omega_c / 2)(|3><2| + |2><3|)
//! ```
//!
//! with jump operators sqrt(gamma_31)|1><3|, sqrt(gamma_32)|2><3|,
//! sqrt(gamma_21)|1><2| and optional dephasing sqrt(gamma_k)|k><k|.
//! Density matrices are stacked column by column, so
//! vec(A X B) = (B^T (x) A) vec(X).
//!
//! Because nothing is time dependent in this frame, the probe response is
//! the derivative of the full steady-state rho_31 with respect to Omega_p,
//! taken by a central difference. Normalized as chi = 2 rho_31 / Omega_p it
//! is directly comparable with [`crate::spectroscopy::susceptibility`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    self, hermitian_eigendecompose, kronecker, solve_linear, unvectorize, vectorize, ComplexMatrix,
    C64, I, ONE, ZERO,
};

pub const LEVELS: usize = 3;
const DIM: usize = LEVELS * LEVELS;

/// Density-matrix validation tolerances.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_FLOOR: f64 = -1e-9;

/// Minimum ratio of the two smallest singular values for a unique steady state.
pub const KERNEL_GAP: f64 = 1e6;

/// Largest probe, relative to max(Gamma_31, Omega_c), still treated as linear.
pub const MAX_PROBE_RATIO: f64 = 1e-3;

/// Allowed relative change of chi when the probe is halved.
pub const LINEARITY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LindbladParams {
    pub gamma_31: f64,
    pub gamma_32: f64,
    pub gamma_21: f64,
    pub omega_c: f64,
    pub omega_p: f64,
    pub delta_1: f64,
    pub delta_2: f64,
    pub gamma_3deph: f64,
    pub gamma_2deph: f64,
}

impl LindbladParams {
    /// Control field only.
    pub fn new(
        gamma_31: f64,
        gamma_32: f64,
        gamma_21: f64,
        omega_c: f64,
        delta_1: f64,
        delta_2: f64,
    ) -> Self {
        Self {
            gamma_31,
            gamma_32,
            gamma_21,
            omega_c,
            delta_1,
            delta_2,
            ..Self::default()
        }
    }

    pub fn with_probe(self, omega_p: f64) -> Self {
        Self { omega_p, ..self }
    }

    pub fn with_dephasing(self, gamma_3deph: f64, gamma_2deph: f64) -> Self {
        Self {
            gamma_3deph,
            gamma_2deph,
            ..self
        }
    }

    /// Decoherence rate of rho_31.
    pub fn gamma_31_total(&self) -> f64 {
        self.gamma_31 + self.gamma_32 + self.gamma_3deph
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("gamma_31", self.gamma_31),
            ("gamma_32", self.gamma_32),
            ("gamma_21", self.gamma_21),
            ("gamma_3deph", self.gamma_3deph),
            ("gamma_2deph", self.gamma_2deph),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "rates must be finite and non-negative",
                });
            }
        }
        for (name, value) in [
            ("Omega_c", self.omega_c),
            ("Omega_p", self.omega_p),
            ("Delta_1", self.delta_1),
            ("Delta_2", self.delta_2),
        ] {
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

    pub fn hamiltonian(&self) -> ComplexMatrix {
        let (hp, hc) = (-0.5 * self.omega_p, -0.5 * self.omega_c);
        ComplexMatrix::from_real_rows(&[
            vec![0.0, 0.0, hp],
            vec![0.0, self.delta_1 - self.delta_2, hc],
            vec![hp, hc, self.delta_1],
        ])
    }

    /// (rate, operator) pairs; zero rates are skipped.
    pub fn jump_operators(&self) -> Vec<(f64, ComplexMatrix)> {
        [
            (self.gamma_31, 0, 2),
            (self.gamma_32, 1, 2),
            (self.gamma_21, 0, 1),
            (self.gamma_3deph, 2, 2),
            (self.gamma_2deph, 1, 1),
        ]
        .into_iter()
        .filter(|&(rate, _, _)| rate > 0.0)
        .map(|(rate, to, from)| (rate, transition(to, from)))
        .collect()
    }
}

fn transition(to: usize, from: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(LEVELS, LEVELS);
    m[(to, from)] = ONE;
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() != LEVELS || m.cols() != LEVELS {
            return Err(Error::DimensionMismatch {
                expected: LEVELS,
                found: m.rows().max(m.cols()),
            });
        }
        m.check_hermitian(HERMITIAN_TOL)?;
        let trace_error = (m.trace() - ONE).norm();
        if trace_error > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix {
                reason: "trace differs from 1",
                value: trace_error,
            });
        }
        let min = hermitian_eigendecompose(&hermitian_part(&m))?.values[0];
        if min < POSITIVITY_FLOOR {
            return Err(Error::InvalidDensityMatrix {
                reason: "negative eigenvalue",
                value: min,
            });
        }
        Ok(Self(m))
    }

    /// |k><k| for 1-based level k.
    pub fn pure_level(k: usize) -> Self {
        Self(transition(k - 1, k - 1))
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// rho_ij with 1-based levels.
    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.0[(i - 1, j - 1)]
    }

    pub fn population(&self, k: usize) -> f64 {
        self.element(k, k).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigendecompose(&self.0)
            .map(|e| e.values[0])
            .unwrap_or(f64::NAN)
    }
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale(C64::new(0.5, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian(ComplexMatrix);

impl Liouvillian {
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        unvectorize(&self.0.mul_vec(&vectorize(rho)), LEVELS, LEVELS)
    }

    /// Largest |Tr(L(X))| over basis matrices X; zero for a trace-preserving generator.
    pub fn trace_residual(&self) -> f64 {
        (0..DIM)
            .map(|col| {
                (0..LEVELS)
                    .map(|k| self.0[(k * LEVELS + k, col)])
                    .sum::<C64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn build_liouvillian(params: &LindbladParams) -> Result<Liouvillian> {
    params.validate()?;
    let id = ComplexMatrix::identity(LEVELS);
    let h = params.hamiltonian();
    let mut l = (&kronecker(&id, &h) - &kronecker(&h.transpose(), &id)).scale(-I);
    for (rate, op) in params.jump_operators() {
        let number = &op.adjoint() * &op;
        let gain = kronecker(&op.conj(), &op);
        let loss = &kronecker(&id, &number) + &kronecker(&number.transpose(), &id);
        let dissipator = &gain - &loss.scale(C64::new(0.5, 0.0));
        l = &l + &dissipator.scale(C64::new(rate, 0.0));
    }
    Ok(Liouvillian(l))
}

/// Singular values of L in ascending order.
pub fn singular_values(l: &Liouvillian) -> Result<Vec<f64>> {
    numerics::singular_values(l.as_matrix())
}

fn check_kernel(l: &Liouvillian) -> Result<()> {
    let s = singular_values(l)?;
    if !(s[1] > KERNEL_GAP * s[0]) {
        return Err(Error::DegenerateKernel {
            smallest: s[0],
            second: s[1],
        });
    }
    Ok(())
}

fn normalize(rho: ComplexMatrix) -> Result<DensityMatrix> {
    let rho = hermitian_part(&rho);
    let trace = rho.trace();
    DensityMatrix::new(rho.scale(ONE / trace))
}

/// Unique steady state, solved with the first equation replaced by Tr(rho) = 1.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    check_kernel(l)?;
    solve_steady_state(l)
}

fn solve_steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let mut a = l.as_matrix().clone();
    let mut trace_row = vec![ZERO; DIM];
    for k in 0..LEVELS {
        trace_row[k * LEVELS + k] = ONE;
    }
    a.set_row(0, &trace_row);
    let mut rhs = vec![ZERO; DIM];
    rhs[0] = ONE;
    let v = solve_linear(&a, &rhs)?;
    normalize(unvectorize(&v, LEVELS, LEVELS))
}

/// Steady state from the eigenvector of L^dagger L with the smallest eigenvalue.
pub fn steady_state_from_kernel_vector(l: &Liouvillian) -> Result<DensityMatrix> {
    check_kernel(l)?;
    let m = l.as_matrix();
    let eig = hermitian_eigendecompose(&(&m.adjoint() * m))?;
    normalize(unvectorize(&eig.vector(0), LEVELS, LEVELS))
}

/// Probe-free steady state; rho_11 should be close to 1.
pub fn control_only_steady_state(params: &LindbladParams) -> Result<DensityMatrix> {
    steady_state(&build_liouvillian(&params.with_probe(0.0))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeResponse {
    /// 2 d(rho_31)/d(Omega_p) at the requested probe amplitude.
    pub chi: C64,
    /// Same with the probe halved.
    pub chi_half: C64,
    /// |chi - chi_half| relative to the response scale.
    pub halving_change: f64,
}

/// 1e-4 max(Gamma_31, Omega_c), a decade inside the linear limit.
pub fn default_probe_epsilon(params: &LindbladParams) -> f64 {
    1e-4 * params.gamma_31_total().max(params.omega_c.abs())
}

// The kernel is checked once per parameter point by the caller.
fn central_difference(params: &LindbladParams, epsilon: f64) -> Result<C64> {
    let rho_31 = |omega_p: f64| -> Result<C64> {
        Ok(solve_steady_state(&build_liouvillian(&params.with_probe(omega_p))?)?.element(3, 1))
    };
    Ok((rho_31(epsilon)? - rho_31(-epsilon)?) / epsilon)
}

/// Numerical probe susceptibility at two-photon detuning delta.
///
/// Uses `params` for rates, Omega_c and Delta_2; Delta_1 is set to
/// delta + Delta_2 and Omega_p to the probe amplitude.
pub fn linear_response_chi(
    params: &LindbladParams,
    delta: f64,
    epsilon: f64,
) -> Result<ProbeResponse> {
    let scale = params.gamma_31_total().max(params.omega_c.abs());
    let limit = MAX_PROBE_RATIO * scale;
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "probe_epsilon",
            value: epsilon,
            reason: "must be positive",
        });
    }
    if epsilon > limit {
        return Err(Error::ProbeTooStrong { epsilon, limit });
    }
    let at = LindbladParams {
        delta_1: delta + params.delta_2,
        ..*params
    };
    check_kernel(&build_liouvillian(&at.with_probe(epsilon))?)?;
    let chi = central_difference(&at, epsilon)?;
    let chi_half = central_difference(&at, 0.5 * epsilon)?;
    // Near exact transparency chi itself vanishes; compare against a fraction
    // of the bare line height 2 / scale instead.
    let reference = chi.norm().max(chi_half.norm()).max(2e-3 / scale);
    let halving_change = (chi - chi_half).norm() / reference;
    if halving_change > LINEARITY_TOL {
        return Err(Error::Nonlinear {
            relative: halving_change,
        });
    }
    Ok(ProbeResponse {
        chi,
        chi_half,
        halving_change,
    })
}
