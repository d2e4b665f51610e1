use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("element has a nonzero imaginary part: {0}")]
    NotReal(String),

    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("pole {0} is not in the open unit disk")]
    PoleOutsideDisk(String),

    #[error("inconsistent pole data: {0}")]
    InconsistentPoles(String),

    #[error("function has a pole at {0}")]
    PoleAtPoint(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular system: inconsistent input ({0})")]
    Singular(String),

    #[error(
        "corona condition not certifiable with polynomial multipliers of degree <= {max_degree}"
    )]
    CoronaNotCertifiable { max_degree: usize },

    #[error("entry ({row}, {col}) of the spectral factor is not a polynomial: {value}")]
    NotPolynomial {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("row does not have unit norm on the circle: {0}")]
    NotUnitNorm(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
