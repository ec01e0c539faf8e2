use thiserror::Error;

/// Errors surfaced by the symbolic kernel and the geometric pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("zero polynomial has no squarefree part")]
    ZeroPolynomial,
    #[error("requested series order exceeds what the inputs guarantee (have {have}, need {need})")]
    OrderUnderflow { have: i64, need: i64 },
    #[error("fields live on different charts")]
    ChartMismatch,
    #[error("frame determinant is identically zero")]
    DegenerateFrame,
    #[error("could not complete the distribution fields to a frame")]
    CompletionFailed,
    #[error("evaluation hit a pole of a coefficient function")]
    EvaluationPole,
    #[error("base point lies on (D^3)-perp; the characteristic field vanishes there")]
    BasePointOnD3perp,
    #[error("deficiency locus is not a hypersurface")]
    NotHypersurface,
    #[error("operation requires a different dimension (expected {expected}, got {got})")]
    WrongDimension { expected: usize, got: usize },
    #[error("invalid epsilon_1 style `{0}`")]
    InvalidStyle(String),
    #[error("linear system for A0/A1 is inconsistent; growth-vector assumption violated")]
    InconsistentSystem,
    #[error("residual B1 - h(A1) is not zero; growth-vector assumption violated")]
    NonzeroResidual,
    #[error("fundamental form is not polynomial in the fiber variables")]
    NotPolynomial,
    #[error("form is not homogeneous of the expected degree")]
    NotHomogeneous,
    #[error("basis change matrix has identically zero determinant")]
    SingularBasisChange,
    #[error("series order too low: {0}")]
    OrderTooLow(String),
    #[error("determinant does not divide by (t0-t1)^k to the tracked order; weight not constant here")]
    NotDivisible,
    #[error("trace has a singularity beyond the universal double pole")]
    SingularAtEqualTimes,
    #[error("curve has rank > 1 at the base point")]
    RankTooHigh,
    #[error("velocity is not sign-semidefinite of rank <= 1")]
    SignViolation,
    #[error("curve does not have a weight jump of exactly one at the base point")]
    NotJumpOne,
    #[error("the coordinate basis on (D^2)-perp degenerates at this point")]
    BasisDegenerateAtPoint,
    #[error("matrix curve is not symmetric: sign-convention or basis bug")]
    NotLagrangian,
    #[error("parse error at line {line}, column {col}: {msg}")]
    ParseError { line: usize, col: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the two generating fields are linearly dependent")]
    DegenerateDistribution,
    #[error("vanishing fundamental form at the requested point")]
    VanishingFundamentalForm,
    #[error("square root of a series whose leading coefficient is not a rational square")]
    NotASquare,
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
