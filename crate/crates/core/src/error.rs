use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("order is not antisymmetric: `{0}` and `{1}`")]
    NotAntisymmetric(String, String),
    #[error("order is not transitive: `{0}` <= `{1}` <= `{2}`")]
    NotTransitive(String, String, String),
    #[error("no greatest lower bound for `{0}` and `{1}`")]
    MissingMeet(String, String),
    #[error("no top element")]
    MissingTop,
    #[error("implication is not antitone/monotone: {0}")]
    Variance(String),
    #[error("lattice is not a frame: {0}")]
    NotAFrame(String),
    #[error("table has wrong shape: {0}")]
    Shape(String),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
