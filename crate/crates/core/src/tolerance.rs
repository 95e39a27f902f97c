//! Global numeric policy. Every module reads its thresholds from here.

/// Max `|m − m†|` entry for a matrix to count as Hermitian.
pub const HERMITIAN: f64 = 1e-9;

/// Smallest eigenvalue still accepted as positive semidefinite is `-PSD`.
pub const PSD: f64 = 1e-9;

/// Allowed deviation of a density matrix trace from 1.
pub const TRACE: f64 = 1e-9;

/// Allowed excess of a Bloch vector norm over 1.
pub const BLOCH_NORM: f64 = 1e-9;

/// Orthogonality / determinant slack for 3×3 rotations.
pub const ROTATION: f64 = 1e-9;

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI: f64 = 1e-12;

/// Absolute tolerance of the `r*` bisection.
pub const BISECTION: f64 = 1e-10;

/// Kraus completeness slack.
pub const KRAUS: f64 = 1e-9;
