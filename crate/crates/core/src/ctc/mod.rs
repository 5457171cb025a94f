//! CTC decoding primitives.
//!
//! A raw path assigns one symbol (character or blank) to every frame. Its
//! collapsed labeling merges adjacent duplicates first, then erases blanks.
//! The probability of a transcript is the sum over all raw paths collapsing
//! to it; [`full_log_prob`] computes that sum with the label-major forward
//! recursion over the blank-interleaved expanded sequence, while the
//! [`oracle`] module recomputes it by literal path enumeration.

pub mod oracle;
mod prefix;

pub use prefix::PrefixScorerState;

use crate::alphabet::Transcript;
use crate::math::{log_add, LOG_ZERO};
use crate::matrix::ConfidenceMatrix;

/// Collapses a raw frame-label path: merge adjacent duplicates, drop blanks.
pub fn collapse(path: &[u32], blank: u32) -> Transcript {
    let mut out = Vec::new();
    let mut prev = None;
    for &label in path {
        if prev != Some(label) && label != blank {
            out.push(label);
        }
        prev = Some(label);
    }
    Transcript::new(out)
}

/// Greedy decoding: per-frame argmax, then collapse.
///
/// Returns the collapsed transcript and the total log-probability of the
/// argmax path. Ties break toward the lowest symbol index.
pub fn best_path_decode(m: &ConfidenceMatrix) -> (Transcript, f64) {
    let mut path = Vec::with_capacity(m.frames());
    let mut path_logp = 0.0;
    for t in 0..m.frames() {
        let row = m.row(t);
        let mut best = 0usize;
        let mut best_v = row[0];
        for (i, &v) in row.iter().enumerate().skip(1) {
            if v > best_v {
                best = i;
                best_v = v;
            }
        }
        path.push(best as u32);
        path_logp += best_v as f64;
    }
    (collapse(&path, m.blank()), path_logp)
}

/// Log-probability that the matrix emits exactly the transcript `y`:
/// the sum over all raw paths whose collapse equals `y`.
///
/// Returns log(0) when `y` is unreachable, e.g. when the frame budget cannot
/// fit the mandatory blanks between repeated characters.
pub fn full_log_prob(m: &ConfidenceMatrix, y: &Transcript) -> f64 {
    let labels = y.as_slice();
    debug_assert!(
        labels.iter().all(|&c| (c as usize) < m.alphabet_size()),
        "transcript must be blank-free and alphabet-valid"
    );
    let blank = m.blank();
    let frames = m.frames();

    // Expanded sequence: blank, y0, blank, y1, ..., blank.
    let expanded_len = 2 * labels.len() + 1;
    let symbol_at = |s: usize| -> u32 {
        if s % 2 == 0 {
            blank
        } else {
            labels[s / 2]
        }
    };

    let mut alpha = vec![LOG_ZERO; expanded_len];
    alpha[0] = m.logp(0, blank);
    if expanded_len > 1 {
        alpha[1] = m.logp(0, labels[0]);
    }
    for t in 1..frames {
        for s in (0..expanded_len).rev() {
            let mut acc = alpha[s];
            if s >= 1 {
                acc = log_add(acc, alpha[s - 1]);
            }
            if s >= 2 && s % 2 == 1 && labels[s / 2] != labels[s / 2 - 1] {
                acc = log_add(acc, alpha[s - 2]);
            }
            alpha[s] = acc + m.logp(t, symbol_at(s));
        }
    }

    if expanded_len == 1 {
        alpha[0]
    } else {
        log_add(alpha[expanded_len - 1], alpha[expanded_len - 2])
    }
}

/// `-full_log_prob`, i.e. the CTC score of `y` as a non-negative cost;
/// `+∞` for unreachable transcripts.
pub fn neg_log_likelihood(m: &ConfidenceMatrix, y: &Transcript) -> f64 {
    -full_log_prob(m, y)
}
