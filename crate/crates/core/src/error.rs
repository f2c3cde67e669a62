use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QgwError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {order} exceeds the configured limit {limit}")]
    OrderLimit { order: u64, limit: u32 },
    #[error("malformed structure constants: {0}")]
    SchemaError(String),
    #[error("functionals live on different algebras")]
    AlgebraMismatch,
    #[error("not a CQG algebra: {0}")]
    NotCQG(String),
    #[error("D_{0} has no Klein subgroup of the required form (K must be even)")]
    NoKleinSubgroup(usize),
    #[error("invalid Hopf quotient: {0}")]
    InvalidQuotient(String),
    #[error("twist failed: {0}")]
    TwistFailure(String),
    #[error("group kind does not match: {0}")]
    BadKind(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("transport failed: {0}")]
    TransportError(String),
    #[error("{k} does not divide {n}")]
    BadDivisor { k: usize, n: usize },
    #[error("parameters out of range: {0}")]
    BadParams(String),
    #[error("isomorphism test needs inducing data: {0}")]
    NeedsProvenance(String),
    #[error("functional is not a state: {0}")]
    NotAState(String),
    #[error("oracle limited to dimension 8, got {0}")]
    OracleLimit(usize),
    #[error("oracle case analysis left the base field: {0}")]
    OracleField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, QgwError>;

impl QgwError {
    /// Stable machine-readable code used in CLI error records.
    pub fn code(&self) -> &'static str {
        match self {
            QgwError::DivisionByZero => "DivisionByZero",
            QgwError::OrderLimit { .. } => "OrderLimit",
            QgwError::SchemaError(_) => "SchemaError",
            QgwError::AlgebraMismatch => "AlgebraMismatch",
            QgwError::NotCQG(_) => "NotCQG",
            QgwError::NoKleinSubgroup(_) => "NoKleinSubgroup",
            QgwError::InvalidQuotient(_) => "InvalidQuotient",
            QgwError::TwistFailure(_) => "TwistFailure",
            QgwError::BadKind(_) => "BadKind",
            QgwError::NotSubgroup(_) => "NotSubgroup",
            QgwError::TransportError(_) => "TransportError",
            QgwError::BadDivisor { .. } => "BadDivisor",
            QgwError::BadParams(_) => "BadParams",
            QgwError::NeedsProvenance(_) => "NeedsProvenance",
            QgwError::NotAState(_) => "NotAState",
            QgwError::OracleLimit(_) => "OracleLimit",
            QgwError::OracleField(_) => "OracleField",
            QgwError::Parse(_) => "Parse",
            QgwError::Io(_) => "Io",
        }
    }

    pub fn module(&self) -> &'static str {
        match self {
            QgwError::DivisionByZero | QgwError::OrderLimit { .. } => "cyclo",
            QgwError::SchemaError(_) | QgwError::AlgebraMismatch | QgwError::NotCQG(_) => "hopf",
            QgwError::NoKleinSubgroup(_) | QgwError::InvalidQuotient(_) => "groups",
            QgwError::TwistFailure(_) => "twist",
            QgwError::BadKind(_) | QgwError::NotSubgroup(_) | QgwError::TransportError(_) => "corep",
            QgwError::BadDivisor { .. } | QgwError::BadParams(_) | QgwError::NeedsProvenance(_) => {
                "ergodic"
            }
            QgwError::NotAState(_) | QgwError::OracleLimit(_) | QgwError::OracleField(_) => {
                "coideal"
            }
            QgwError::Parse(_) | QgwError::Io(_) => "io",
        }
    }
}
