//! Synthetic confidence matrices from ground-truth text.
//!
//! Generation is a pure function of (text, alphabet, config): the per-line
//! RNG is seeded from the configured seed and the encoded text, so corpora
//! can be generated in any order — or in parallel — without changing a
//! single matrix.
//!
//! The frame plan emits `frames_per_char` frames peaked at each character
//! with `blank_frames_between` blank-peaked frames between characters; a
//! separating blank is always forced between equal adjacent characters,
//! otherwise the ground truth would be unreachable under CTC collapse.
//! Noise perturbs logits and renormalizes, which keeps rows valid for any
//! temperature.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::alphabet::{Alphabet, AlphabetError, Transcript};
use crate::math::log_sum_exp;
use crate::matrix::ConfidenceMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Frames peaked at each character (>= 1).
    pub frames_per_char: usize,
    /// Blank-peaked frames between characters; forced to >= 1 between equal
    /// adjacent characters.
    pub blank_frames_between: usize,
    /// Probability mass of the peaked symbol, in (1/(|A|+1), 1].
    pub peak_confidence: f64,
    /// Standard deviation of the Gaussian logit noise; 0 disables it.
    pub noise_temperature: f64,
    pub rng_seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            frames_per_char: 3,
            blank_frames_between: 1,
            peak_confidence: 0.9,
            noise_temperature: 0.0,
            rng_seed: 0,
        }
    }
}

/// Per-line aggregation of encoding failures, 1-based line numbers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{} line(s) contain characters outside the alphabet", lines.len())]
pub struct SynthCorpusError {
    pub lines: Vec<(usize, AlphabetError)>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one line: the corpus seed mixed with the encoded text.
fn line_seed(seed: u64, text: &Transcript) -> u64 {
    let mut h = splitmix64(seed ^ 0x6c69_6e65_6465_6373); // "linedecs"
    for &c in text.iter() {
        h = splitmix64(h ^ u64::from(c));
    }
    h
}

/// Generates one matrix; deterministic in (text, alphabet, config).
pub fn synth_matrix(text: &Transcript, alphabet: &Alphabet, cfg: &SynthConfig) -> ConfidenceMatrix {
    let width = alphabet.size() + 1;
    assert!(cfg.frames_per_char >= 1, "frames_per_char must be at least 1");
    assert!(
        cfg.peak_confidence > 1.0 / width as f64 && cfg.peak_confidence <= 1.0,
        "peak confidence must exceed 1/(|A|+1) and not exceed 1"
    );
    assert!(cfg.noise_temperature >= 0.0, "noise temperature must be non-negative");
    debug_assert!(text.iter().all(|&c| (c as usize) < alphabet.size()));

    let blank = alphabet.blank();
    let mut plan: Vec<u32> = Vec::new();
    let mut prev: Option<u32> = None;
    for &c in text.iter() {
        if prev.is_some() {
            let mut gap = cfg.blank_frames_between;
            if prev == Some(c) {
                gap = gap.max(1);
            }
            plan.extend(std::iter::repeat(blank).take(gap));
        }
        plan.extend(std::iter::repeat(c).take(cfg.frames_per_char));
        prev = Some(c);
    }
    if plan.is_empty() {
        // Matrices carry at least one frame; empty text emits a blank.
        plan.push(blank);
    }

    let peak_logit = cfg.peak_confidence.ln();
    let rest_logit = if width > 1 {
        ((1.0 - cfg.peak_confidence) / (width - 1) as f64).ln()
    } else {
        f64::NEG_INFINITY
    };

    let mut rng = ChaCha8Rng::seed_from_u64(line_seed(cfg.rng_seed, text));
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(plan.len());
    for &sym in &plan {
        let mut row: Vec<f64> = (0..width as u32)
            .map(|s| if s == sym { peak_logit } else { rest_logit })
            .collect();
        if cfg.noise_temperature > 0.0 {
            for v in row.iter_mut() {
                let eps: f64 = rng.sample(StandardNormal);
                *v += eps * cfg.noise_temperature;
            }
            let norm = log_sum_exp(&row);
            for v in row.iter_mut() {
                *v -= norm;
            }
        }
        // Snap to the f32 grid so the matrix file format round-trips
        // bit-exactly.
        for v in row.iter_mut() {
            *v = *v as f32 as f64;
        }
        rows.push(row);
    }

    ConfidenceMatrix::from_rows(alphabet.size(), &rows)
        .expect("synthesized rows are normalized by construction")
}

/// Generates one matrix per text line, paired with its reference string.
pub fn synth_corpus(
    texts: &[String],
    alphabet: &Alphabet,
    cfg: &SynthConfig,
) -> Result<Vec<(ConfidenceMatrix, String)>, SynthCorpusError> {
    let mut errors = Vec::new();
    let mut out = Vec::with_capacity(texts.len());
    for (i, text) in texts.iter().enumerate() {
        match alphabet.encode(text) {
            Ok(encoded) => out.push((synth_matrix(&encoded, alphabet, cfg), text.clone())),
            Err(e) => errors.push((i + 1, e)),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(SynthCorpusError { lines: errors })
    }
}

/// A fully random matrix: every row is an independent uniform draw from the
/// probability simplex. Used by oracle tests and benchmarks.
pub fn random_matrix(frames: usize, alphabet_size: usize, seed: u64) -> ConfidenceMatrix {
    assert!(frames >= 1);
    let width = alphabet_size + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x7261_6e64_6d61_7472));
    let mut rows = Vec::with_capacity(frames);
    for _ in 0..frames {
        // Exponential draws normalized to a Dirichlet(1,...,1) sample.
        let draws: Vec<f64> = (0..width).map(|_| -f64::ln(1.0 - rng.random::<f64>())).collect();
        let total: f64 = draws.iter().sum();
        rows.push(draws.into_iter().map(|d| (d / total).ln()).collect::<Vec<f64>>());
    }
    ConfidenceMatrix::from_rows(alphabet_size, &rows).expect("rows normalized by construction")
}
