use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time shift {0} is not a multiple of the grid spacing")]
    OffGridShift(f64),
    #[error("signals live on different grids")]
    GridMismatch,
    #[error("window is identically zero")]
    ZeroWindow,
    #[error("insufficient dynamic range: {0}")]
    InsufficientDynamicRange(String),
    #[error("not a frame: lower bound {lower:e} vs upper bound {upper:e}")]
    NotAFrame { lower: f64, upper: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("dual window has not been computed")]
    MissingDual,
    #[error("midpoint of lattice points is off the symbol grid")]
    OffGridMidpoint,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("radius too small: tail bound {0:e}")]
    RadiusTooSmall(f64),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::BadParams(_) | Error::Json(_) => 2,
            Error::NotAFrame { .. } | Error::NoConvergence { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
