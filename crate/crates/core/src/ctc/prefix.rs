//! Incremental CTC prefix scoring.
//!
//! For a prefix g, Ψ(g) is the probability that the complete labeling of the
//! matrix *starts with* g — the mass of every raw path whose collapse has g
//! as a prefix. A [`PrefixScorerState`] carries the forward variables of g
//! across all frames so that extending g by one character costs a single
//! O(T) sweep instead of a recomputation from scratch:
//!
//! - `gamma_n[t]` — log-mass of paths over frames 0..=t that have emitted
//!   exactly g and end in a non-blank emission of g's last character;
//! - `gamma_b[t]` — same, but ending in a blank emission;
//! - `prefix_logp` — log Ψ(g).
//!
//! The extension to h = g·c accumulates, frame by frame, the mass Φ_t of
//! alignments that complete g strictly before frame t and may therefore emit
//! c at t; when c repeats g's last character the non-blank term is excluded
//! because a direct repeat would merge under collapse:
//!
//! ```text
//! Φ_t        = γ_{t-1}^b(g)  (⊕ γ_{t-1}^n(g) unless c repeats)
//! γ_t^n(h)   = (γ_{t-1}^n(h) ⊕ Φ_t) · p_t(c)
//! γ_t^b(h)   = (γ_{t-1}^b(h) ⊕ γ_{t-1}^n(h)) · p_t(blank)
//! Ψ(h)       = ⊕_t Φ_t · p_t(c)
//! ```
//!
//! in log space, where ⊕ is log-add and · is addition.
//!
//! States are immutable; any number of extensions from the same parent may
//! run concurrently against a shared matrix.

use crate::alphabet::Transcript;
use crate::math::{log_add, LOG_ZERO};
use crate::matrix::ConfidenceMatrix;

#[derive(Debug, Clone)]
pub struct PrefixScorerState {
    prefix: Transcript,
    gamma_n: Vec<f64>,
    gamma_b: Vec<f64>,
    prefix_logp: f64,
}

impl PrefixScorerState {
    /// State for the empty prefix: Ψ(∅) = 1, blank mass accumulates
    /// multiplicatively, and no non-blank emission exists yet.
    pub fn init(m: &ConfidenceMatrix) -> Self {
        let frames = m.frames();
        let blank = m.blank();
        let mut gamma_b = Vec::with_capacity(frames);
        let mut acc = 0.0;
        for t in 0..frames {
            acc += m.logp(t, blank);
            gamma_b.push(acc);
        }
        Self {
            prefix: Transcript::empty(),
            gamma_n: vec![LOG_ZERO; frames],
            gamma_b,
            prefix_logp: 0.0,
        }
    }

    pub fn prefix(&self) -> &Transcript {
        &self.prefix
    }

    pub fn gamma_n(&self) -> &[f64] {
        &self.gamma_n
    }

    pub fn gamma_b(&self) -> &[f64] {
        &self.gamma_b
    }

    /// log Ψ(g), the cumulative prefix log-probability.
    pub fn prefix_log_prob(&self) -> f64 {
        self.prefix_logp
    }

    /// log P(g), the probability of emitting exactly g; agrees with
    /// [`super::full_log_prob`] by construction of the forward variables.
    pub fn exact_log_prob(&self) -> f64 {
        log_add(
            *self.gamma_n.last().expect("matrices have at least one frame"),
            *self.gamma_b.last().expect("matrices have at least one frame"),
        )
    }

    /// Extends g by character `c`, returning the successor state for g·c and
    /// the cost delta `-(log Ψ(g·c) - log Ψ(g))`.
    ///
    /// A delta of `+∞` marks a dead extension (Ψ(g·c) = 0); the returned
    /// state is still well-formed so callers may prune rather than crash.
    pub fn extend(&self, c: u32, m: &ConfidenceMatrix) -> (Self, f64) {
        assert!(
            (c as usize) < m.alphabet_size(),
            "prefix extensions take character indices, not blank or EOS"
        );
        let frames = m.frames();
        debug_assert_eq!(self.gamma_n.len(), frames, "state built from a different matrix");
        let blank = m.blank();
        let repeated = self.prefix.last() == Some(c);

        // Virtual frame -1: only the empty prefix is "already complete".
        let (mut parent_n_prev, mut parent_b_prev) = if self.prefix.is_empty() {
            (LOG_ZERO, 0.0)
        } else {
            (LOG_ZERO, LOG_ZERO)
        };

        // Last frame at which the parent carries any mass; beyond it every
        // remaining term is log-zero and the sweep can stop early.
        let parent_last_alive = (0..frames)
            .rev()
            .find(|&t| self.gamma_n[t] != LOG_ZERO || self.gamma_b[t] != LOG_ZERO);

        let mut gamma_n = vec![LOG_ZERO; frames];
        let mut gamma_b = vec![LOG_ZERO; frames];
        let mut psi = LOG_ZERO;
        let mut prev_n = LOG_ZERO;
        let mut prev_b = LOG_ZERO;

        for t in 0..frames {
            let phi = if repeated { parent_b_prev } else { log_add(parent_b_prev, parent_n_prev) };
            let first_emission = phi + m.logp(t, c);
            let n_t = log_add(prev_n, phi) + m.logp(t, c);
            let b_t = log_add(prev_b, prev_n) + m.logp(t, blank);
            psi = log_add(psi, first_emission);
            gamma_n[t] = n_t;
            gamma_b[t] = b_t;
            prev_n = n_t;
            prev_b = b_t;
            parent_n_prev = self.gamma_n[t];
            parent_b_prev = self.gamma_b[t];

            // The parent's mass at frame `last` still feeds Φ at `last + 1`,
            // so the sweep may only stop strictly past it.
            if n_t == LOG_ZERO
                && b_t == LOG_ZERO
                && psi == LOG_ZERO
                && parent_last_alive.map_or(true, |last| t > last)
            {
                break;
            }
        }

        let delta = if psi == LOG_ZERO {
            f64::INFINITY
        } else {
            // Ψ never grows under extension; clamp float wobble.
            (self.prefix_logp - psi).max(0.0)
        };
        let state = Self {
            prefix: self.prefix.extended(c),
            gamma_n,
            gamma_b,
            prefix_logp: psi,
        };
        (state, delta)
    }

    /// Cost of terminating the prefix here: `-(log P(g) - log Ψ(g))`, the
    /// full-score rescaling applied when a hypothesis emits EOS. `+∞` when g
    /// cannot be emitted exactly.
    pub fn eos_cost(&self) -> f64 {
        let exact = self.exact_log_prob();
        if exact == LOG_ZERO || self.prefix_logp == LOG_ZERO {
            return f64::INFINITY;
        }
        (self.prefix_logp - exact).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn matrix(alphabet_size: usize, rows: &[&[f64]]) -> ConfidenceMatrix {
        let rows: Vec<Vec<f64>> =
            rows.iter().map(|r| r.iter().map(|p| p.ln()).collect()).collect();
        ConfidenceMatrix::from_rows(alphabet_size, &rows).unwrap()
    }

    fn two_frame_single_char() -> ConfidenceMatrix {
        matrix(1, &[&[0.6, 0.4], &[0.5, 0.5]])
    }

    #[test]
    fn init_single_frame() {
        let m = matrix(1, &[&[0.6, 0.4]]);
        let s = PrefixScorerState::init(&m);
        assert_eq!(s.gamma_n(), &[LOG_ZERO]);
        assert_relative_eq!(s.gamma_b()[0], 0.4f64.ln(), epsilon = 1e-6);
        assert_eq!(s.prefix_log_prob(), 0.0);
    }

    #[test]
    fn init_accumulates_blank_mass_multiplicatively() {
        let m = matrix(1, &[&[0.5, 0.5], &[0.5, 0.5]]);
        let s = PrefixScorerState::init(&m);
        assert_relative_eq!(s.gamma_b()[0], 0.5f64.ln(), epsilon = 1e-6);
        assert_relative_eq!(s.gamma_b()[1], 0.25f64.ln(), epsilon = 1e-6);
    }

    #[test]
    fn empty_prefix_has_unit_prefix_probability() {
        let m = two_frame_single_char();
        assert_eq!(PrefixScorerState::init(&m).prefix_log_prob(), 0.0);
    }

    #[test]
    fn extend_from_empty_matches_enumeration() {
        // Ψ("a") over the two-frame matrix: paths aa, a-, -a = 0.8.
        let m = two_frame_single_char();
        let (s, delta) = PrefixScorerState::init(&m).extend(0, &m);
        assert_relative_eq!(s.prefix_log_prob(), 0.8f64.ln(), epsilon = 1e-6);
        assert_relative_eq!(delta, -(0.8f64.ln()), epsilon = 1e-6);
        // Exact-match mass agrees with the forward algorithm.
        assert_relative_eq!(s.exact_log_prob(), 0.8f64.ln(), epsilon = 1e-6);
    }

    #[test]
    fn zero_probability_character_is_infinite_cost() {
        let m = matrix(1, &[&[0.0, 1.0], &[0.0, 1.0]]);
        let (s, delta) = PrefixScorerState::init(&m).extend(0, &m);
        assert_eq!(delta, f64::INFINITY);
        assert_eq!(s.prefix_log_prob(), LOG_ZERO);
        assert_eq!(s.eos_cost(), f64::INFINITY);
    }

    #[test]
    fn repeat_extension_requires_a_blank_gap() {
        // T=2 cannot fit "aa": Ψ("aa") = 0.
        let m = two_frame_single_char();
        let (a, _) = PrefixScorerState::init(&m).extend(0, &m);
        let (aa, delta) = a.extend(0, &m);
        assert_eq!(delta, f64::INFINITY);
        assert_eq!(aa.prefix_log_prob(), LOG_ZERO);

        // With a third frame the blank gap fits.
        let m3 = matrix(1, &[&[0.6, 0.4], &[0.5, 0.5], &[0.5, 0.5]]);
        let (a3, _) = PrefixScorerState::init(&m3).extend(0, &m3);
        let (aa3, delta3) = a3.extend(0, &m3);
        assert!(delta3.is_finite());
        // Only path a-a emits "aa": 0.6 * 0.5 * 0.5.
        assert_relative_eq!(aa3.prefix_log_prob(), (0.6f64 * 0.5 * 0.5).ln(), epsilon = 1e-6);
    }

    #[test]
    fn eos_cost_zero_for_certain_empty() {
        let m = ConfidenceMatrix::new(1, vec![f64::NEG_INFINITY, 0.0]).unwrap();
        assert_eq!(PrefixScorerState::init(&m).eos_cost(), 0.0);
    }

    #[test]
    fn eos_cost_is_full_score_rescaling() {
        // For g = "a" on the two-frame matrix both Ψ and P_exact are 0.8.
        let m = two_frame_single_char();
        let (s, _) = PrefixScorerState::init(&m).extend(0, &m);
        assert_relative_eq!(s.eos_cost(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn eos_cost_positive_when_suffixes_remain() {
        // 3 frames, A={a,b}: prefix "a" keeps continuation mass in reserve.
        let m = matrix(2, &[&[0.6, 0.2, 0.2], &[0.3, 0.4, 0.3], &[0.2, 0.3, 0.5]]);
        let (s, _) = PrefixScorerState::init(&m).extend(0, &m);
        let cost = s.eos_cost();
        assert!(cost > 0.0 && cost.is_finite());
        assert_relative_eq!(
            cost,
            s.prefix_log_prob() - s.exact_log_prob(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn early_exit_keeps_late_parent_contributions() {
        // The parent "a" carries mass only at frame 0, yet that mass feeds
        // the first possible 'b' emission at frame 1.
        let m = matrix(
            2,
            &[&[0.5, 0.25, 0.25], &[0.0, 1.0, 0.0], &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]],
        );
        let (a, _) = PrefixScorerState::init(&m).extend(0, &m);
        assert!(a.gamma_n()[1] == LOG_ZERO && a.gamma_b()[1] == LOG_ZERO);
        let (ab, delta) = a.extend(1, &m);
        assert!(delta.is_finite());
        assert_relative_eq!(ab.prefix_log_prob(), 0.5f64.ln(), epsilon = 1e-6);
    }

    #[test]
    fn states_are_value_semantic() {
        let m = two_frame_single_char();
        let root = PrefixScorerState::init(&m);
        let (a1, d1) = root.extend(0, &m);
        let (a2, d2) = root.extend(0, &m);
        assert_eq!(d1, d2);
        assert_eq!(a1.prefix_log_prob(), a2.prefix_log_prob());
        assert_eq!(a1.gamma_n(), a2.gamma_n());
        assert_eq!(a1.gamma_b(), a2.gamma_b());
    }
}
