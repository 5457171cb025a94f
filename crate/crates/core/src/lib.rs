//! Decoding engine for text-line recognition.
//!
//! The input is a *confidence matrix*: one row per frame holding a
//! log-probability distribution over the alphabet plus the CTC blank.
//! On top of that this crate provides:
//!
//! - [`ctc`] — CTC collapse, best-path decoding, the full-sequence forward
//!   algorithm, an incremental prefix scorer, and brute-force enumeration
//!   references used to validate all of the above.
//! - [`scorers`] — the pluggable next-character scorer contract with a
//!   character n-gram language model, a uniform baseline, and a scripted
//!   teacher scorer that stands in for a trained sequence decoder.
//! - [`beam`] — joint beam search fusing the CTC prefix score with decoder
//!   and language-model costs, including pre-beam pruning of candidate
//!   symbols.
//! - [`eval`] — CER/WER computation with corpus micro-averaging.
//! - [`synth`] — seeded generation of synthetic confidence matrices from
//!   ground-truth text, replacing a trained encoder in tests and benchmarks.
//!
//! All probability arithmetic is carried in natural-log space; costs are
//! negated log-probabilities. Every public type is immutable after
//! construction and safe to share across threads.

pub mod alphabet;
pub mod beam;
pub mod ctc;
pub mod eval;
pub mod files;
pub mod math;
pub mod matrix;
pub mod scorers;
pub mod synth;

pub use alphabet::{Alphabet, AlphabetError, Transcript};
pub use beam::{BeamError, DecodeConfig, DecodeResult, DecodeStats, Hypothesis};
pub use ctc::PrefixScorerState;
pub use matrix::{ConfidenceMatrix, CostVector, MatrixError};
pub use scorers::{NgramModel, Scorer, ScorerState, TeacherScorer, UniformScorer};
