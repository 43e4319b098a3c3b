use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} is not an element of {semiring}")]
    InvalidValue { semiring: String, value: String },

    #[error("invalid semiring spec: {0}")]
    InvalidSemiring(String),

    #[error("infimum of an empty set")]
    EmptyInfimum,

    #[error("residual {a} \\ {b} is not expressible in {semiring}; use the completed variant")]
    ResidualNotExpressible { semiring: String, a: String, b: String },

    #[error("the zero element has no inverse")]
    ZeroNotInvertible,

    #[error("{0} is not a semifield")]
    NotSemifield(String),

    #[error("element {0} has no multiplicative inverse")]
    NotInvertible(String),

    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("unknown point label `{0}`")]
    UnknownPoint(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("semiring {0} is not enumerable")]
    NotEnumerable(String),

    #[error("carrier is empty")]
    EmptyCarrier,

    #[error("carrier is not closed under scalar action: {scalar} * {element} is missing")]
    NotScalarClosed { scalar: String, element: String },

    #[error("carrier elements {0} and {1} have no upper bound in the carrier")]
    NoUpperBound(String, String),

    #[error("carrier elements {0} and {1} have no least upper bound in the carrier")]
    NoLeastUpperBound(String, String),

    #[error("scalar action by {scalar} does not distribute over the join of {f} and {g}")]
    ScalarNotDistributive { scalar: String, f: String, g: String },

    #[error("element {0} is not in the carrier")]
    NotInCarrier(String),

    #[error("size cap {cap} exceeded ({what})")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("operator table is not total: {0}")]
    IncompleteTable(String),

    #[error("operation requires an enumerated carrier: {0}")]
    NeedsCarrier(&'static str),

    #[error("source semimodule is not a b-subsemimodule; evaluation functionals are not b-linear")]
    NotBSubsemimodule,

    #[error("operator has no integral representation; mismatch at {0}")]
    NotIntegral(String),

    #[error("search budget of {0} exhausted")]
    BudgetExhausted(usize),

    #[error("negative cycle reachable from the source: {0:?}")]
    NegativeCycle(Vec<String>),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
