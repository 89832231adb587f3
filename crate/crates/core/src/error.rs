use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("payoff entries must be finite")]
    NonFinitePayoff,

    #[error("empathy weights must be finite")]
    NonFiniteEmpathy,

    #[error("constraint requires c1 ≠ c2 (got c1 = c2 = {0})")]
    EqualConstraintCoefficients(f64),

    #[error("the constrained strategy set is empty")]
    EmptyFeasibleSet,

    #[error("transformed payoffs are constant (beta1 = beta2 = 0): no constrained ESS")]
    NoEss,

    #[error("game is not a discoordination game (class {0})")]
    NotDiscoordination(String),

    #[error("no real solution: epsilon^2 < 4y (epsilon = {epsilon}, y = {y})")]
    NoRealSolution { epsilon: f64, y: f64 },

    #[error("lambda21 must be non-zero")]
    ZeroCoupling,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Whether the error stems from unreadable input rather than a violated precondition.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
