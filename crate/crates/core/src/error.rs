use thiserror::Error;

use crate::space::{Point, SpaceId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch { expected: SpaceId, found: SpaceId },
    #[error("numeric mode mismatch: exact and float operands in one expression")]
    ModeMismatch,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid basic set: {0}")]
    InvalidSet(String),
    #[error("not regular open: {witness} lies in int cl S but not in S")]
    NotRegularOpen { witness: Box<Point> },
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("malformed convergence certificate: {0}")]
    MalformedCertificate(String),
    #[error("chain is not monotone at index {index}")]
    NonMonotoneChain { index: u64 },
    #[error("chain centers oscillate beyond tolerance: {0}")]
    OscillatingChain(String),
    #[error("unsupported chain: {0}")]
    UnsupportedChain(String),
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
