use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: axis {axis} has {points} points, stencil needs {needed}")]
    GridTooCoarse { axis: usize, points: usize, needed: usize },

    #[error("point is off the unit sphere (|ω| = {norm})")]
    OffSphere { norm: f64 },

    #[error("point lies below the equator (ω₃ = {0})")]
    OutsideHemisphere(f64),

    #[error("quadrature too coarse for the basis: Gram deviation {deviation:e}")]
    InsufficientQuadrature { deviation: f64 },

    #[error("basis lacks the kernel mode (l = {l}, m = {m})")]
    MissingKernelMode { l: u32, m: i32 },

    #[error("fields live on different bases")]
    BasisMismatch,

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("compatibility condition violated: mean coefficient {0:e} is not zero")]
    NonzeroMean(f64),

    #[error("containment margin {margin} admits no covering radius")]
    MarginTooSmall { margin: f64 },

    #[error("step {eps} is not a multiple of the spacing {spacing} on axis {axis}")]
    MisalignedStep { eps: f64, spacing: f64, axis: usize },

    #[error("boundary condition B{which} violated: max residual {residual:e} exceeds {tolerance:e}")]
    BoundaryConditionViolated { which: u8, residual: f64, tolerance: f64 },

    #[error("coefficient matrix is not symmetric positive definite: {0}")]
    NotElliptic(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse descriptor `{input}`: {reason}")]
    Descriptor { input: String, reason: String },
}
