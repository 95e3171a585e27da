//! Error type shared across the library.

use num_complex::Complex64;

/// Errors raised by construction and verification routines.
///
/// Domain errors (`ExcludedSpectralParameter`, `OmegaBranchViolation`,
/// `PrefactorPole`, `DuplicateSpectralParameter`, `PoleCollision`) indicate
/// parameter choices outside the regime where the construction is defined;
/// the remaining variants indicate numerical breakdown or invalid input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A vacuum Lax solution was requested with both constants zero.
    #[error("degenerate vacuum vector: constants (u0, v0) = (0, 0)")]
    DegenerateVacuumVector,

    /// A spectral parameter that must be non-real was real (or nearly so).
    #[error("spectral parameter {0} must not be real")]
    RealSpectralParameter(Complex64),

    /// Two chain entries (or a requested pole) coincide.
    #[error("duplicate spectral parameter {0}")]
    DuplicateSpectralParameter(Complex64),

    /// A transformed kernel vector collapsed below the representable floor,
    /// so the next projector cannot be formed.
    #[error("projector breakdown: transformed kernel vector has norm {norm:e} at stage {stage}")]
    ProjectorBreakdown { stage: usize, norm: f64 },

    /// `beta^2 - |u|^2` dropped below the accepted tolerance, so the real
    /// branch of Omega = sqrt(beta^2 - |u|^2) is lost.
    #[error("Omega branch violation: beta^2 - |u|^2 = {0:e} is negative")]
    OmegaBranchViolation(f64),

    /// The boundary-matrix prefactor vanishes at the requested lambda.
    #[error("prefactor pole: boundary matrix is singular at lambda = {0}")]
    PrefactorPole(Complex64),

    /// A soliton spectral parameter lies in the excluded set of the mirror
    /// construction (real or imaginary axis, or +/-lambda0, +/-conj(lambda0)).
    #[error("excluded spectral parameter {0}: {1}")]
    ExcludedSpectralParameter(Complex64, &'static str),

    /// A pole was inserted on top of an existing one.
    #[error("pole collision: {0} already present in scattering data")]
    PoleCollision(Complex64),

    /// Pure-soliton scattering data requires all poles in the open upper
    /// half-plane.
    #[error("pole not in upper half-plane: {0}")]
    PoleNotUpperHalfPlane(Complex64),

    /// A norming weight was zero (or a weight conversion got eta <= 0).
    #[error("invalid weight: {0}")]
    InvalidWeight(&'static str),

    /// The linear system behind the determinant-quotient evaluation is
    /// singular.
    #[error("singular denominator determinant in quotient evaluation")]
    SingularDeterminant,

    /// A dressing matrix could not be inverted at a sample point.
    #[error("singular dressing matrix at lambda = {0}")]
    SingularDressingMatrix(Complex64),

    /// Grid or step size falls outside the guarded evaluation region.
    #[error("evaluation guard: {0}")]
    EvaluationGuard(String),

    /// Any other invalid argument.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
