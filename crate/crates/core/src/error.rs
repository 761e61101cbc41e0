use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vector {index} of the delta set is zero")]
    ZeroVector { index: usize },
    #[error("delta set does not sum to zero (sum = {sum})")]
    Unbalanced { sum: String },
    #[error("graph is not connected")]
    NotConnected,
    #[error("boundary currents sum to {sum}, not zero; the Neumann problem has no solution")]
    NoSolution { sum: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {vertex} carries a leg")]
    VertexHasLeg { vertex: usize },
    #[error("degenerate immersion: {0}")]
    DegenerateImmersion(String),
    #[error("curves are not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("invalid marked type: {0}")]
    InvalidType(String),
    #[error("point configuration is not generic: {0}")]
    NonGenericConfiguration(String),
    #[error("delta set is not ({s},{t})-independent")]
    NotSTIndependent { s: usize, t: usize },
    #[error("unknown type key {0}")]
    UnknownType(String),
    #[error("cycle has not been verified")]
    CycleNotVerified,
    #[error("cycle has a nonzero coefficient on the degenerate type {0}")]
    CycleOnDegenerateType(String),
    #[error("quantum numbers have a pole at hbar = {0}")]
    PoleAtHbar(f64),
    #[error("cross product {0} is not an integer; Laurent mode needs integral vertex weights")]
    NonIntegralCross(String),
    #[error("direction is parallel to the sum over indices {subset:?}")]
    NonGenericDirection { subset: Vec<usize> },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, for structured diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::ZeroVector { .. } => "ZeroVector",
            Error::Unbalanced { .. } => "Unbalanced",
            Error::NotConnected => "NotConnected",
            Error::NoSolution { .. } => "NoSolution",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::VertexHasLeg { .. } => "VertexHasLeg",
            Error::DegenerateImmersion(_) => "DegenerateImmersion",
            Error::NotGeneralPosition(_) => "NotGeneralPosition",
            Error::InvalidType(_) => "InvalidType",
            Error::NonGenericConfiguration(_) => "NonGenericConfiguration",
            Error::NotSTIndependent { .. } => "NotSTIndependent",
            Error::UnknownType(_) => "UnknownType",
            Error::CycleNotVerified => "CycleNotVerified",
            Error::CycleOnDegenerateType(_) => "CycleOnDegenerateType",
            Error::PoleAtHbar(_) => "PoleAtHbar",
            Error::NonIntegralCross(_) => "NonIntegralCross",
            Error::NonGenericDirection { .. } => "NonGenericDirection",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}
