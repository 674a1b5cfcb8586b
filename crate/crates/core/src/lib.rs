//! Compatible complex structures on symplectic vector spaces, the Siegel
//! upper half space, real-Lagrangian planes, twistor integrability residuals
//! and the twistor space of a Riemann surface, as numerical routines.
//!
//! Sampling loops run through [`exec::Exec`], which uses rayon when the
//! `parallel` feature (on by default) is enabled.

pub mod error;
pub mod exec;
pub mod integrability;
pub mod lagrangian;
pub mod linalg;
pub mod riemann;
pub mod sampling;
pub mod serial;
pub mod siegel;
pub mod symplectic;
pub mod tol;

pub use error::{Error, Result};
pub use exec::Exec;
pub use symplectic::{CompatibleStructure, ComplexStructure, SymplecticForm};

/// Version of this library, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
