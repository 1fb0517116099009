//! Exact event types of the theory and their composition algebra.
//!
//! States `α_{f,Ξ}`, effects `a_{v,E}` and transformations `T^{f,g}_Ω` are
//! stored in canonical form, so derived equality is equality of events. All
//! probabilities are bits; nothing here touches floating point.

mod effect;
mod event;
mod matrix;
mod ops;
mod state;
mod transform;

use thiserror::Error;

use crate::system::SystemType;

pub use effect::EffectEvent;
pub use event::{EventKind, KindTag};
pub use matrix::{BoolMatrix, MatrixError};
pub use ops::{apply, apply_leading, compose_par, compose_seq, marginalize, pair, sum_events};
pub use state::StateEvent;
pub use transform::{Branch, Cell, RecoveryError, TransformationEvent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("system mismatch in {context}: expected {expected}, found {found}")]
    SystemMismatch {
        context: &'static str,
        expected: SystemType,
        found: SystemType,
    },
    #[error("{what} {index} out of range (must be < {bound})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    #[error("not a valid {what}: {detail}")]
    Overlap { what: &'static str, detail: String },
    #[error("anchor conflict at output pointer {t}: {first} vs {second}")]
    AnchorConflict {
        t: usize,
        first: usize,
        second: usize,
    },
    #[error("effects with different pointers cannot be summed (v = {first} and v = {second})")]
    CrossPointer { first: usize, second: usize },
    #[error("cannot combine a {first} with a {second}")]
    KindMismatch { first: KindTag, second: KindTag },
    #[error("sum of an empty list of events")]
    EmptySum,
    #[error("factor {index} out of range: system has {count} factors")]
    FactorOutOfRange { index: usize, count: usize },
    #[error("marginalization needs a composite system, got {0}")]
    NotComposite(SystemType),
    #[error("invalid factor permutation {0:?}")]
    BadPermutation(Vec<usize>),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
}

pub type Result<T> = std::result::Result<T, KernelError>;

pub(crate) fn check_range(what: &'static str, index: usize, bound: usize) -> Result<()> {
    if index < bound {
        Ok(())
    } else {
        Err(KernelError::OutOfRange { what, index, bound })
    }
}
