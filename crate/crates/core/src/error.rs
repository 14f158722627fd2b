use thiserror::Error;

use crate::groupoid::{ArrId, ObjId, ValidationReport};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("unknown object {0}")]
    UnknownObject(ObjId),
    #[error("unknown arrow {0}")]
    UnknownArrow(ArrId),
    #[error("arrow {arrow} has an endpoint outside the object list")]
    UnknownEndpoint { arrow: ArrId },
    #[error("composite of {f} and {h} is {result}, which has the wrong endpoints")]
    IllTypedComposite { f: ArrId, h: ArrId, result: ArrId },
    #[error("object {object} has no identity arrow")]
    MissingIdentity { object: ObjId },
    #[error("arrow {arrow} has no inverse")]
    NotInvertible { arrow: ArrId },
    #[error("groupoid laws violated: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not {0}x{0}")]
    BadTable(usize),
    #[error("table entry out of range")]
    OutOfRange,
    #[error("group axioms fail: {0}")]
    NotAGroup(String),
    #[error("group of order {order} exceeds the subgroup enumeration bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("element {0} is not in the group")]
    UnknownElement(usize),
    #[error("subset is not a subgroup")]
    NotASubgroup,
    #[error("quotient by a non-normal subgroup")]
    NotNormal,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("object map has {got} entries, source has {expected} objects")]
    ObjectMapSize { expected: usize, got: usize },
    #[error("arrow map has {got} entries, source has {expected} arrows")]
    ArrowMapSize { expected: usize, got: usize },
    #[error("image of {0} is not an object of the target")]
    ObjectOutOfRange(ObjId),
    #[error("image of {0} is not an arrow of the target")]
    ArrowOutOfRange(ArrId),
    #[error("arrow {0} is sent to an arrow with the wrong endpoints")]
    Endpoints(ArrId),
    #[error("identity of {0} is not sent to an identity")]
    Identity(ObjId),
    #[error("composite {f} ∘ {h} is not preserved")]
    Composition { f: ArrId, h: ArrId },
    #[error("morphisms are not composable")]
    NotComposable,
}

/// Errors from covering constructions and the theorem checks built on them.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("morphism is not a covering: {0}")]
    NotCovering(String),
    #[error("{0} is not over the requested base object")]
    SeedMismatch(String),
    #[error("groupoid is not connected")]
    Disconnected,
    #[error("the fiber over {0} is empty")]
    EmptyFiber(ObjId),
    #[error("subset is not a subgroup of the vertex group")]
    NotASubgroup,
    #[error("action is not free: element {element} fixes object {object}")]
    NotFree { element: usize, object: ObjId },
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("covering is not regular")]
    NotRegular,
    #[error("morphism is not monic")]
    NotMonic,
    #[error("coverings have different base groupoids")]
    BaseMismatch,
    #[error("orbit morphisms come from different universal covers")]
    UniversalMismatch,
    #[error("morphism does not cover the given base morphism")]
    DoesNotCover,
    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("pushforward on vertex groups is not injective at {object}: loops {first} and {second}")]
    PushforwardNotInjective {
        object: ObjId,
        first: ArrId,
        second: ArrId,
    },
    /// A machine check of a theorem failed; always a bug.
    #[error("verification failed [{clause}]: {detail}")]
    Verification { clause: String, detail: String },
}

impl CoverError {
    pub(crate) fn verification(clause: &str, detail: impl Into<String>) -> Self {
        CoverError::Verification {
            clause: clause.to_string(),
            detail: detail.into(),
        }
    }

    /// True for failures of internal theorem checks (as opposed to bad input).
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            CoverError::Verification { .. } | CoverError::PushforwardNotInjective { .. }
        )
    }
}

/// A malformed input document; `path` is a JSON path into it.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{path}: {message}")]
pub struct DocumentError {
    pub path: String,
    pub message: String,
}

impl DocumentError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError {
            path: path.into(),
            message: message.into(),
        }
    }
}
