use thiserror::Error;

/// Errors raised by the symbolic engine and the modules built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero{}", context_suffix(.0))]
    DivisionByZero(Option<String>),
    #[error("denominator vanishes at every sample point ({attempts} attempts)")]
    PoleAtAllSamples { attempts: usize },
    #[error("jet coordinate of order {order} exceeds truncation order {limit}")]
    TruncationExceeded { order: usize, limit: usize },
    #[error("lambda-prolongation needs exactly one independent variable, found {0}")]
    NotScalarBase(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("horizontal Maurer-Cartan condition violated for directions ({0}, {1})")]
    MchViolated(usize, usize),
    #[error("no solved rule eliminates {0}")]
    NoSolvedRule(String),
    #[error("equation is not linear in its leading derivative {0}")]
    NotSolvable(String),
    #[error("{0} is not invariant under the prolonged field")]
    NotInvariant(String),
    #[error("contact form order {order} must be below the truncation order {limit}")]
    OrderTooHigh { order: usize, limit: usize },
    #[error("contact-ideal membership is decided for degrees 1 and 2 only, got {0}")]
    UnsupportedDegree(usize),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("field is not vertical")]
    NotVertical,
    #[error("field is not of exponential form in the auxiliary variable")]
    NotExponentialForm,
    #[error("compatibility residual does not reduce modulo the base system: {0}")]
    NoDecomposition(String),
    #[error("field is not Lie-point: {0}")]
    NotLiePoint(String),
    #[error("invalid expression: {0}")]
    InvalidExpression(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

fn context_suffix(ctx: &Option<String>) -> String {
    match ctx {
        Some(c) => format!(" ({c})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
