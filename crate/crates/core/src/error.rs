use alloc::string::String;

use thiserror::Error;

use crate::group::{Element, Group};

/// Position-tagged failure from the set-description parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected an element of {expected}, found one of {found}")]
    GroupMismatch { expected: Group, found: Group },
    #[error("unknown group tag (expected Z, Z2 or F2)")]
    UnknownGroup,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid periodic set: {0}")]
    InvalidPeriodic(&'static str),
    #[error("operation requires a subset of Z")]
    NotIntegers,
    #[error("operation requires an exactly representable set")]
    NotExact,
    #[error("finite translating set has {0} elements, limit is 64")]
    ProductTooLarge(usize),
    #[error("window radius {0} is too large for this set")]
    WindowTooLarge(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("cover not established: {0} is not covered")]
    CoverNotEstablished(Element),
    #[error("no translate of the derivation witnesses {0}")]
    NotWitnessed(Element),
    #[error("parts do not union to the ambient set at {0}")]
    PartitionMismatch(Element),
    #[error("evidence member {0} is outside the declared closure")]
    HandoffMismatch(Element),
    #[error("hypothesis failed: {0} is not in the derivation of the ambient set")]
    HypothesisFailed(Element),
    #[error("no admissible placement at step {step} (forbidden set has {forbidden} elements)")]
    WindowExhausted { step: usize, forbidden: usize },
    #[error("audit failed at {at}: {reason}")]
    AuditFailure { at: String, reason: String },
    #[error("bound overflows for n = {0}")]
    BoundOverflow(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
}
