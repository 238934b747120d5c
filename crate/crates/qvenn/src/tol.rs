//! Centralized numeric tolerances.
//!
//! Every threshold used by constructors, diagnostics, and verdicts lives
//! here so the whole crate can be retuned from one place.

/// Max absolute elementwise deviation from the conjugate transpose allowed
/// when accepting a matrix as Hermitian.
pub const HERMITICITY: f64 = 1e-10;

/// Allowed deviation of a density operator's trace from 1.
pub const TRACE: f64 = 1e-10;

/// Eigenvalues in `[-CLAMP, 0)` are clamped to 0 when constructing a
/// density operator; anything below `-CLAMP` is rejected.
pub const CLAMP: f64 = 1e-10;

/// Frobenius-relative error allowed when reconstructing an operator from
/// its spectral decomposition.
pub const EIGEN_RECONSTRUCTION: f64 = 1e-9;

/// Eigenvalues above this bound count as a support direction; quotients of
/// singular operators are taken on the support only.
pub const SUPPORT: f64 = 1e-10;

/// An eigenvalue of a conditional amplitude operator is "non-classical"
/// when it exceeds this threshold; the margin separates genuine violations
/// from roundoff.
pub const CLASSICALITY_THRESHOLD: f64 = 1.0 + 1e-9;

/// Default regularization added to singular operators before taking logs.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Secondary regularization used by the two-epsilon stability check.
pub const STABILITY_EPSILON: f64 = 1e-10;

/// Max disagreement between spectra computed at [`DEFAULT_EPSILON`] and
/// [`STABILITY_EPSILON`] before a reported spectrum is considered unstable.
pub const STABILITY: f64 = 1e-6;

/// A partial-transpose eigenvalue below this bound is a PPT violation.
pub const PPT_NEGATIVITY: f64 = -1e-9;

/// Bisection tolerance for locating thresholds along the Werner family.
pub const THRESHOLD_BISECTION: f64 = 1e-6;
