use thiserror::Error;

use crate::semigroupoid::{ArrowId, ObjectId};

/// Errors raised by constructors and operations across the crate.
///
/// Invariant violations of otherwise well-formed data (non-associativity,
/// failed compatibility, ...) are not errors: validators return them as
/// violation lists so that every defect can be reported at once.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arrow {arrow} references missing object {object}")]
    DanglingObject { arrow: ArrowId, object: ObjectId },

    #[error("reference to missing arrow {0}")]
    DanglingArrow(ArrowId),

    #[error("reference to missing state {state} of object {object}")]
    DanglingState { object: ObjectId, state: usize },

    #[error("arrows {f} and {g} are not composable: cod({f}) = {cod_f}, dom({g}) = {dom_g}")]
    NotComposable {
        f: ArrowId,
        g: ArrowId,
        cod_f: ObjectId,
        dom_g: ObjectId,
    },

    #[error("composable pair ({f}, {g}) has no composite in the table")]
    MissingComposite { f: ArrowId, g: ArrowId },

    #[error("transformation has {got} images but its domain has {expected} states")]
    MappingArity { expected: usize, got: usize },

    #[error("state set of object {0} is empty")]
    EmptyStateSet(ObjectId),

    #[error("arrows {0} and {1} are the same function")]
    DuplicateArrow(ArrowId, ArrowId),

    #[error("state index {state} out of range for a domain of {size} states")]
    StateOutOfRange { state: usize, size: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("functor chain mismatch: target of the first functor is not the source of the second")]
    ChainMismatch,

    #[error("arrow map covers {got} source arrows, expected {expected}")]
    ArrowMapLength { expected: usize, got: usize },

    #[error("relational functor is not surjective; uncovered target arrows: {0:?}")]
    NotSurjective(Vec<ArrowId>),

    #[error("relational functor is invalid: {0}")]
    InvalidFunctor(String),

    #[error("relational morphism is invalid: {0}")]
    InvalidMorphism(String),

    #[error("restriction arrows are not closed: composite of {0} and {1} is missing")]
    NotClosed(String, String),

    #[error("arrow {arrow} is outside the codec scope of top arrow {top}")]
    Scope { top: ArrowId, arrow: ArrowId },

    #[error("explicit codec for top arrow {top} is not a bijection on its preimage: {reason}")]
    BadCodec { top: ArrowId, reason: String },

    #[error("emulation certificate failed: {0}")]
    EmulationViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
