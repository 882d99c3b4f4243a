use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid size {0} is odd")]
    OddGridSize(usize),
    #[error("grid size {0} outside [8, 256]")]
    GridSizeOutOfRange(usize),
    #[error("period length {0} must be positive")]
    NonPositiveLength(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("time grid mismatch: {0}")]
    TimeGridMismatch(String),
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Riesz potential order {0} outside (0, 3)")]
    RieszOrderOutOfRange(f64),
    #[error("Lebesgue/sequence exponent {0} outside [1, inf]")]
    ExponentOutOfRange(f64),
    #[error("field is not divergence free (max |xi.U| = {residual:e}, scale {scale:e})")]
    NotDivergenceFree { residual: f64, scale: f64 },
    #[error("field is not Hermitian (max defect {0:e})")]
    NotHermitian(f64),
    #[error("negative majorant entry {value:e} below clamp floor {floor:e}")]
    NegativeMajorant { value: f64, floor: f64 },
    #[error("majorant monotonicity violated at iterate {iterate}: defect {defect:e}")]
    MonotonicityViolation { iterate: usize, defect: f64 },
    #[error("initial data not dominated: max(|U0| - W0) = {0:e}")]
    InitialDominationViolated(f64),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("inner Picard iteration diverged at step {step} (increment {increment:e}); reduce the step or the data")]
    InnerIterationDiverged { step: usize, increment: f64 },
    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("band violation: {0}")]
    BandViolation(String),
    #[error("radius {radius} exceeds half period {half}")]
    RadiusTooLarge { radius: f64, half: f64 },
    #[error("exponents p = {p} > q = {q}")]
    ExponentOrder { p: f64, q: f64 },
    #[error("snapshot format: {0}")]
    Snapshot(String),
}
