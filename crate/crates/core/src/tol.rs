//! Numerical tolerances shared by every module.

/// Equality of channel coefficients, trace preservation, Hermiticity.
pub const EQ: f64 = 1e-12;
/// Smallest eigenvalue accepted for positive semidefinite matrices.
pub const PSD: f64 = 1e-10;
/// Residual accepted for the equality rows of the decomposition LP.
pub const LP_FEAS: f64 = 1e-10;
/// Relative slack when accepting a smaller-support optimum.
pub const LP_SUPPORT_SLACK: f64 = 1e-9;
/// Coefficients below this magnitude are zeroed before support counting.
pub const ZERO_COEFF: f64 = 1e-12;
/// Largest fit residual tolerated for the dephasing + rotation form.
pub const FIT_RESIDUAL: f64 = 1e-10;
