use thiserror::Error;

/// Errors produced by the symbolic engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero scalar")]
    DivisionByZero,

    #[error("unknown coordinate name `{0}`")]
    UnknownCoordinate(String),

    #[error("operands live on different charts")]
    ChartMismatch,

    #[error("operands have different grades ({0} vs {1})")]
    GradeMismatch(usize, usize),

    #[error("grade {grade} is invalid here: {reason}")]
    InvalidGrade { grade: usize, reason: String },

    #[error("chart must have even dimension, got {0}")]
    OddDimension(usize),

    #[error("chart must have odd dimension, got {0}")]
    EvenDimension(usize),

    #[error("structure is degenerate: {0}")]
    Degenerate(String),

    #[error("matrix is singular over the fraction field")]
    SingularMatrix,

    #[error("Casimir set degenerate w.r.t. the almost symplectic structure: f \u{2261} 0")]
    DegenerateCasimirs,

    #[error("k = {0} requires the Jacobian route; use `jacobian_bracket` (dispatched automatically by `bracket`)")]
    NeedsJacobianRoute(usize),

    #[error("invalid problem data: {0}")]
    InvalidProblem(String),

    #[error("form is not semi-basic: contraction with the Reeb field is nonzero")]
    NotSemiBasic,

    #[error("sigma does not satisfy 2\u{3c3}\u{2227}\u{3b4}\u{3c3} = \u{3b4}(\u{3c3}\u{2227}\u{3c3})")]
    ComplementaryConditionFailed,

    #[error("two construction routes disagree: {0}")]
    RouteMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
