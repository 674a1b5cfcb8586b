use thiserror::Error;

/// Errors raised by the geometric constructions in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("index l = {l} out of range 0..={n}")]
    InvalidIndex { l: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not antisymmetric (deviation {0:e})")]
    NotAntisymmetric(f64),

    #[error("symplectic form is numerically degenerate at pivot step {step} (pivot {pivot:e})")]
    Degenerate { step: usize, pivot: f64 },

    #[error("matrix is not a complex structure: ‖J² + I‖ = {0:e}")]
    NotComplexStructure(f64),

    #[error("complex structure is not compatible with the form: {0}")]
    NotCompatible(String),

    #[error("signature is indeterminate: eigenvalue {eigenvalue:e} within band {band:e} of zero")]
    IndeterminateSignature { eigenvalue: f64, band: f64 },

    #[error("operation requires the standard symplectic form")]
    NonStandardForm,

    #[error("matrix is not in the symplectic group (deviation {0:e})")]
    NotSymplectic(f64),

    #[error("point is not in the Siegel domain: {0}")]
    NotInDomain(String),

    #[error("denominator cz + d is numerically singular")]
    SingularDenominator,

    #[error("block {0} is numerically singular")]
    SingularBlock(&'static str),

    #[error("invalid finite-difference step {0:e}")]
    InvalidStep(f64),

    #[error("finite-difference stencil leaves the domain: {0}")]
    StepLeavesDomain(String),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),

    #[error("plane has numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("plane is not real-Lagrangian: {0}")]
    NotRealLagrangian(String),

    #[error("reconstructed structure has imaginary residue {0:e}")]
    RealityFailure(f64),

    #[error("rank decision is indeterminate; singular values near the cut: {0:?}")]
    IndeterminateRank(Vec<f64>),

    #[error("metric density must be positive, got {0}")]
    NonPositiveMetric(f64),

    #[error("fibre coordinate outside the disk: |w| = {0}")]
    OutsideDisk(f64),

    #[error("chart derivative vanishes")]
    ZeroDerivative,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tabulated field: {0}")]
    Grid(String),

    #[error("unknown field name {0:?}")]
    UnknownField(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
