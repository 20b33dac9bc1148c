use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("expected {expected} joint angles, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("joint {joint} angle {value}° is outside [{min}°, {max}°]")]
    OutOfLimits {
        joint: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("unreachable target: {0}")]
    Unreachable(String),

    #[error("lateral angle indeterminate: target lies on the lateral joint axis (x = y = 0)")]
    LateralIndeterminate,

    #[error("invalid tendon geometry at {theta}°: {reason}")]
    InvalidGeometry { theta: f64, reason: String },

    #[error("tendon tension must be non-negative, got {0} N")]
    NegativeTension(f64),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("unknown finger `{0}`")]
    UnknownFinger(String),

    #[error("unknown tendon route `{0}`")]
    UnknownRoute(String),

    #[error("unknown joint `{0}`")]
    UnknownJoint(String),

    #[error("reel-in {requested} mm exceeds the route's available excursion {available} mm")]
    ExcursionExceeded { requested: f64, available: f64 },

    #[error("heating power {power} W never reaches the transition temperature (steady-state loss {loss} W)")]
    InsufficientPower { power: f64, loss: f64 },

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("grasp infeasible: {0}")]
    GraspInfeasible(String),

    #[error("script line {line}: {message}")]
    Script { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
