use core::fmt;

/// Errors raised by the core operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A grid dimension was odd or below the minimum of 8.
    InvalidGrid { n1: usize, n2: usize },
    /// Two fields (or a field and a context) live on different grids.
    GridMismatch,
    /// A coefficient vector had the wrong length for its grid.
    CoefficientLength { expected: usize, found: usize },
    /// A parameter was outside its admissible range.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// The Riesz multiplier is singular at k = 0.
    NonzeroMean { mean: f64 },
    /// Negative evolution time.
    NegativeTime(f64),
    /// Time grids of two trajectories differ or are not uniform.
    TimeGridMismatch,
    /// A Picard horizon exceeded the guaranteed existence time.
    OutsideGuaranteedBall { horizon: f64, existence_time: f64 },
    /// The requested diagnostic time sits on the edge of the trajectory.
    BoundaryTime { t0: f64 },
    /// A checkpoint does not match the run it is supposed to continue.
    CheckpointMismatch { field: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid { n1, n2 } => {
                write!(
                    f,
                    "invalid grid {n1}x{n2}: both sizes must be even and at least 8"
                )
            }
            Error::GridMismatch => write!(f, "grid mismatch"),
            Error::CoefficientLength { expected, found } => {
                write!(f, "expected {expected} coefficients, found {found}")
            }
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => {
                write!(f, "invalid {name} = {value}: {reason}")
            }
            Error::NonzeroMean { mean } => {
                write!(
                    f,
                    "field has nonzero mean {mean:e}; the Riesz multiplier is singular at k = 0"
                )
            }
            Error::NegativeTime(t) => write!(f, "negative time {t}"),
            Error::TimeGridMismatch => write!(f, "time grids differ or are not uniform"),
            Error::OutsideGuaranteedBall {
                horizon,
                existence_time,
            } => write!(
                f,
                "horizon {horizon} exceeds the guaranteed existence time {existence_time}"
            ),
            Error::BoundaryTime { t0 } => {
                write!(f, "t0 = {t0} is not an interior node of the trajectory")
            }
            Error::CheckpointMismatch { field } => write!(f, "checkpoint mismatch in {field}"),
        }
    }
}
