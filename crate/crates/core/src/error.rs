use thiserror::Error;

/// Failures raised anywhere in the simulation core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "matrix is not Hermitian: |M[{row}][{col}] - conj(M[{col}][{row}])| = {deviation:e} exceeds {tolerance:e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error(
        "matrix is singular or near-singular: pivot {pivot:e} in column {column} (scale {scale:e})"
    )]
    Singular {
        column: usize,
        pivot: f64,
        scale: f64,
    },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("qubit-cavity detuning is zero; dispersive shift chi = g^2/Delta is undefined")]
    ZeroDetuning,

    #[error("truncation n_max = {0} is too small; at least 2 photons are required")]
    TruncationTooSmall(usize),

    #[error(
        "no sign change of gamma_31 - gamma_32 on [{lo}, {hi}] MHz (values {f_lo:e}, {f_hi:e})"
    )]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("susceptibility denominator vanishes at delta = {delta}")]
    SingularSusceptibility { delta: f64 },

    #[error("pole decomposition requires a resonant control field, got Delta_2 = {0} MHz")]
    ControlNotResonant(f64),

    #[error(
        "selected levels do not form a Lambda system (types: {types}); change omega_d or Omega"
    )]
    NotLambda { types: String },

    #[error("not a valid density matrix: {reason} (value {value:e})")]
    InvalidDensityMatrix { reason: &'static str, value: f64 },

    #[error("steady state is not unique: smallest singular values {smallest:e} and {second:e}")]
    DegenerateKernel { smallest: f64, second: f64 },

    #[error("probe amplitude {epsilon:e} is outside the linear regime (limit {limit:e})")]
    ProbeTooStrong { epsilon: f64, limit: f64 },

    #[error("linear response is not linear: results at eps and eps/2 differ by {relative:e} (relative); use a smaller probe")]
    Nonlinear { relative: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
