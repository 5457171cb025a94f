//! Scripted scorer following a planted reference.
//!
//! Stands in for a trained sequence decoder in tests and benchmarks: along
//! the reference it gives the next reference character (or EOS at the end)
//! probability `correct_mass` and spreads the remainder uniformly; once a
//! hypothesis leaves the reference it falls back to the uniform distribution
//! for good.

use crate::alphabet::Transcript;
use crate::matrix::CostVector;
use crate::scorers::{Scorer, ScorerError, ScorerState};

#[derive(Debug, Clone)]
pub struct TeacherScorer {
    reference: Transcript,
    alphabet_size: usize,
    correct_mass: f64,
}

impl TeacherScorer {
    /// `correct_mass` must lie in (0.5, 1) so the planted symbol is always
    /// the strict mode of the distribution.
    pub fn new(
        reference: Transcript,
        alphabet_size: usize,
        correct_mass: f64,
    ) -> Result<Self, ScorerError> {
        if !(correct_mass > 0.5 && correct_mass < 1.0) {
            return Err(ScorerError::InvalidMass { got: correct_mass });
        }
        if alphabet_size == 0 {
            return Err(ScorerError::EmptyAlphabet);
        }
        debug_assert!(reference.iter().all(|&c| (c as usize) < alphabet_size));
        Ok(Self { reference, alphabet_size, correct_mass })
    }

    pub fn reference(&self) -> &Transcript {
        &self.reference
    }

    fn off_reference() -> ScorerState {
        // All off-reference futures behave identically; one canonical state.
        ScorerState::Track { position: 0, on_reference: false }
    }
}

impl Scorer for TeacherScorer {
    fn initial_state(&self) -> ScorerState {
        ScorerState::Track { position: 0, on_reference: true }
    }

    fn step(&self, state: &ScorerState) -> CostVector {
        let width = self.alphabet_size + 1;
        match state {
            ScorerState::Track { position, on_reference: true } => {
                let target = if *position < self.reference.len() {
                    self.reference.as_slice()[*position]
                } else {
                    self.alphabet_size as u32 // EOS
                };
                let rest = (1.0 - self.correct_mass) / self.alphabet_size as f64;
                let mut costs = vec![-rest.ln(); width];
                costs[target as usize] = -self.correct_mass.ln();
                CostVector::new(costs)
            }
            ScorerState::Track { on_reference: false, .. } => CostVector::uniform(width),
            other => panic!("teacher scorer got a foreign state {other:?}"),
        }
    }

    fn advance(&self, state: &ScorerState, c: u32) -> ScorerState {
        debug_assert!((c as usize) < self.alphabet_size);
        match state {
            ScorerState::Track { position, on_reference: true }
                if *position < self.reference.len()
                    && self.reference.as_slice()[*position] == c =>
            {
                ScorerState::Track { position: position + 1, on_reference: true }
            }
            ScorerState::Track { .. } => Self::off_reference(),
            other => panic!("teacher scorer got a foreign state {other:?}"),
        }
    }
}
