use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A potential produced a non-finite value. `coordinate` is the point that
    /// was being evaluated.
    #[error("potential evaluation failed at {coordinate:?}: {reason}")]
    Evaluation { coordinate: Vec<f64>, reason: String },

    /// The Maupertuis metric is not positive at the requested point.
    /// `energy_minus_potential` is E - V(x) (or the conformal factor itself
    /// for non-potential metrics, negated).
    #[error(
        "forbidden region at {coordinate:?}: E - V = {energy_minus_potential:e}, \
         conformal factor below admissible threshold"
    )]
    ForbiddenRegion {
        coordinate: Vec<f64>,
        energy_minus_potential: f64,
    },

    /// A trajectory sample lies where the metric is not positive.
    #[error("trajectory sample {index} at {coordinate:?} lies outside the positive-metric region")]
    ForbiddenSample { index: usize, coordinate: Vec<f64> },

    /// The density pipeline was asked for a point on the wrong side of the
    /// turning surface.
    #[error("{0}")]
    WrongSide(String),

    #[error("Gamma function pole at argument {argument}")]
    GammaPole { argument: f64 },

    #[error("integration failed at parameter {parameter}: {reason}")]
    Integration {
        parameter: f64,
        state: Vec<f64>,
        reason: String,
    },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("boundary-value solve did not converge: {0}")]
    BoundaryValue(String),

    #[error("eigenfunction {state} leaks into the box walls (relative amplitude {leakage:e}); enlarge the box")]
    WallLeakage { state: usize, leakage: f64 },

    #[error("energy {energy} outside the converged part of the spectrum (max usable {max_usable})")]
    OutOfRange { energy: f64, max_usable: f64 },

    #[error("configuration error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Io(err.to_string())
    }
}
