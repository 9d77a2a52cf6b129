use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least {min}, got {got}")]
    Dimension { min: usize, got: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("vector is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("probabilities must be non-negative and sum to one (sum = {sum}, min = {min})")]
    NotProbability { sum: f64, min: f64 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("matrix is not antisymmetric (max |S + Sᵀ| = {defect})")]
    NotAntisymmetric { defect: f64 },

    #[error("matrix is not special unitary (unitarity defect {unitarity}, |det - 1| = {det})")]
    NotSpecialUnitary { unitarity: f64, det: f64 },

    #[error("matrix is not orthogonal (defect {defect})")]
    NotOrthogonal { defect: f64 },

    #[error("point lies on the boundary of probability space")]
    BoundaryPoint,

    #[error("non-finite log-density {value} encountered; prior violates positivity")]
    NonFiniteLogDensity { value: f64 },

    #[error("effective sample size {ess:.1} below {min}")]
    LowEffectiveSampleSize { ess: f64, min: f64 },

    #[error("inner likelihood average underflowed for every draw; prior too concentrated")]
    InnerUnderflow,

    #[error("quadrature failed to converge after {panels} panels (last change {change:e})")]
    QuadratureNonConvergence { panels: usize, change: f64 },

    #[error("no exact entropy available for prior `{0}`")]
    EntropyUnavailable(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("too few samples: need at least {min}, got {got}")]
    TooFewSamples { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
