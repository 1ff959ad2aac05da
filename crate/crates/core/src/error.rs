use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot raise non-positive base {base} to non-integer exponent {exponent}")]
    NonPositiveBase { base: String, exponent: String },

    #[error("constant {0} is not a single radical unit term")]
    NotSingleTerm(String),

    #[error("cannot factor {0} over small primes")]
    Unfactorable(String),

    #[error("expressions live over different variable tables")]
    TableMismatch,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` is not a chart coordinate")]
    NotChartVariable(String),

    #[error("jet chain of `{0}` is too short for this derivative")]
    JetDepthExceeded(String),

    #[error("variable `{var}` is not positive and cannot carry exponent {exponent}")]
    IrrationalExponent { var: String, exponent: String },

    #[error("logarithmic antiderivative required for term {0}")]
    LogarithmicIntegral(String),

    #[error("expression depends on `{0}` where it must not")]
    UnexpectedDependence(String),

    #[error("metric is identically degenerate")]
    DegenerateMetric,

    #[error("matrix is not square or not symmetric")]
    MalformedMatrix,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("resonant denominator {0} vanishes")]
    Resonance(String),

    #[error("Hessian is not integrable: {0}")]
    Integrability(String),

    #[error("vector field is not diagonal-linear: component {0}")]
    NotDiagonalLinear(usize),

    #[error("potential does not have the expected shape: {0}")]
    Shape(String),

    #[error("expression has a non-monomial denominator")]
    NotPolynomial,

    #[error("n must be a natural number greater than 1, got {0}")]
    InvalidOrder(i64),

    #[error("numeric evaluation failed: {0}")]
    Numeric(String),

    #[error("point outside the sample domain: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
