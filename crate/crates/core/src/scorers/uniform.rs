//! Baseline scorer: every symbol costs `ln(|A|+1)` at every step.

use crate::alphabet::Alphabet;
use crate::matrix::CostVector;
use crate::scorers::{Scorer, ScorerState};

/// State-free scorer assigning the uniform distribution over A ∪ {EOS}.
///
/// Fused with any weight it shifts every candidate by the same constant, so
/// it never changes a ranking; useful as a no-op language-model slot.
#[derive(Debug, Clone)]
pub struct UniformScorer {
    width: usize,
}

impl UniformScorer {
    pub fn new(alphabet: &Alphabet) -> Self {
        Self { width: alphabet.size() + 1 }
    }
}

impl Scorer for UniformScorer {
    fn initial_state(&self) -> ScorerState {
        ScorerState::Stateless
    }

    fn step(&self, _state: &ScorerState) -> CostVector {
        CostVector::uniform(self.width)
    }

    fn advance(&self, _state: &ScorerState, _c: u32) -> ScorerState {
        ScorerState::Stateless
    }
}
