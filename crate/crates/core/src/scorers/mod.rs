//! Next-character scorers.
//!
//! A scorer assigns costs (negative log-probabilities) over A ∪ {EOS} for
//! the next symbol, conditioned only on the characters decoded so far. The
//! decoded history is threaded through opaque value states: beam search
//! keeps one state per hypothesis and advances it per emitted character.
//!
//! Contract, checked by the conformance suite in each implementation's
//! tests:
//! - `step` returns a normalized distribution (logsumexp of the negated
//!   costs within 1e-6 of zero);
//! - `advance` is deterministic — equal states and characters yield equal
//!   successor states;
//! - models are immutable and shareable; states are value-semantic.

mod ngram;
mod teacher;
mod uniform;

pub use ngram::{NgramModel, DEFAULT_INTERPOLATION_WEIGHT, DEFAULT_ORDER};
pub use teacher::TeacherScorer;
pub use uniform::UniformScorer;

use crate::matrix::CostVector;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScorerError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("n-gram order must be at least 1")]
    InvalidOrder,
    #[error("teacher correct mass must lie in (0.5, 1), got {got}")]
    InvalidMass { got: f64 },
    #[error("scorer requires a non-empty alphabet")]
    EmptyAlphabet,
}

/// Per-hypothesis scorer state, advanced once per emitted character.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScorerState {
    /// No state at all (uniform scorer).
    Stateless,
    /// Position along a fixed reference; `on_reference` drops permanently on
    /// the first divergence.
    Track { position: usize, on_reference: bool },
    /// The most recent characters, newest last (n-gram context).
    History(Vec<u32>),
}

/// The next-character scorer contract.
pub trait Scorer: Send + Sync {
    /// State before any character has been emitted.
    fn initial_state(&self) -> ScorerState;

    /// Costs over A ∪ {EOS} (EOS at index `|A|`) for the next symbol.
    fn step(&self, state: &ScorerState) -> CostVector;

    /// Successor state after emitting character `c` (`c < |A|`; EOS ends a
    /// hypothesis and is never advanced over).
    fn advance(&self, state: &ScorerState, c: u32) -> ScorerState;
}
