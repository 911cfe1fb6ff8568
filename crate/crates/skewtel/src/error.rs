use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability `{name}` = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("{constraint} violated: sum = {sum}")]
    ProbabilitySum { constraint: &'static str, sum: f64 },

    #[error("grid mismatch: ({0} cells, half-width {1}) vs ({2} cells, half-width {3})")]
    GridMismatch(usize, f64, usize, f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("negative flip duration s = {0}")]
    NegativeFlipDuration(f64),

    #[error("time must be positive, got t = {0}")]
    NonPositiveTime(f64),

    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("CFL violated: dt/(eps*dx) = {0} > 1")]
    CflViolated(f64),

    #[error("p + q must be positive")]
    DegenerateSkewWeights,

    #[error("kernel argument x = {x} is not on the required side ({side})")]
    WrongSide { x: f64, side: &'static str },

    #[error("shift t = {t} is not commensurate with the grid (dx = {dx})")]
    NonCommensurateShift { t: f64, dx: f64 },

    #[error("dead particle cannot be stepped")]
    DeadParticle,

    #[error("ensemble size must be at least 1")]
    EmptyEnsemble,

    #[error("initial point mass exactly at x = 0 is ambiguous; pass a side (x = ±eps)")]
    PointMassAtInterface,

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
