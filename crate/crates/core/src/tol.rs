//! Numerical thresholds shared across modules.

/// Absolute tolerance for algebraic identities on unit-scale inputs. Checks
/// on larger matrices multiply it by the relevant `max(1, ‖·‖)` scale.
pub const ALGEBRAIC: f64 = 1e-9;

/// Eigenvalues within `SIGNATURE_REL · ‖S‖` of zero make a signature
/// indeterminate.
pub const SIGNATURE_REL: f64 = 1e-7;

/// Relative pivot size below which a form is treated as degenerate.
pub const DEGENERACY_REL: f64 = 1e-10;

/// Symmetry tolerance for Siegel-domain membership.
pub const DOMAIN_SYMMETRY: f64 = 1e-9;

/// `Im z` must have smallest eigenvalue above `DOMAIN_PD_REL · ‖Im z‖`.
pub const DOMAIN_PD_REL: f64 = 1e-10;

/// Relative singular-value cut for inverting blocks and denominators.
pub const SINGULAR_REL: f64 = 1e-12;

/// Relative singular-value cut for plane ranks.
pub const PLANE_RANK_REL: f64 = 1e-8;

/// Imaginary parts of reconstructed real structures below this are dropped.
pub const REALITY: f64 = 1e-10;

/// Relative singular-value cut for kernel dimensions.
pub const KERNEL_RANK_REL: f64 = 1e-8;

/// Required ratio between the smallest retained and the largest discarded
/// singular value.
pub const SPECTRAL_GAP: f64 = 1e3;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Acceptance threshold for finite-difference residuals at unit scale.
pub const FD_RESIDUAL: f64 = 1e-6;

/// Fibre points with `|w| ≥ 1 − DISK_MARGIN` are rejected.
pub const DISK_MARGIN: f64 = 1e-12;
