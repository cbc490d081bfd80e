use thiserror::Error;

/// Failure categories shared by every solver in the crate.
///
/// The CLI maps each category onto a process exit code, so new variants
/// must also be added to [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: dimension mismatches, unknown identifiers, degenerate rows.
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A modelling assumption (negative mean, sign change) does not hold.
    #[error("input assumption violated: {0}")]
    InputAssumption(String),

    /// The solver was asked for the interior regime but the instance is first-best (or vice versa).
    #[error("regime error: {0}")]
    Regime(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("iteration limit of {0} pivots reached")]
    IterationLimit(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("input not IC: {0}")]
    NotIncentiveCompatible(String),

    /// The quadratic solver refuses distributions whose hazard rate is not monotone.
    #[error("monotonicity unverified: {0}")]
    MonotonicityUnverified(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::Precondition(_) => "precondition",
            Error::InputAssumption(_) => "input_assumption",
            Error::Regime(_) => "regime",
            Error::Infeasible => "infeasible",
            Error::Unbounded => "unbounded",
            Error::IterationLimit(_) => "iteration_limit",
            Error::Numerical(_) => "numerical",
            Error::NotIncentiveCompatible(_) => "not_ic",
            Error::MonotonicityUnverified(_) => "monotonicity_unverified",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }

    /// Exit code: 2 config, 3 infeasible/regime, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) | Error::Structural(_) => 2,
            Error::Precondition(_)
            | Error::InputAssumption(_)
            | Error::Regime(_)
            | Error::Infeasible
            | Error::Unbounded
            | Error::NotIncentiveCompatible(_)
            | Error::MonotonicityUnverified(_) => 3,
            Error::IterationLimit(_) | Error::Numerical(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
