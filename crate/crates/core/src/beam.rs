//! Joint beam search over a confidence matrix.
//!
//! Each decoding step expands every open hypothesis by one symbol. The cheap
//! cost components are combined first,
//!
//! ```text
//! C_pre = (1 - λ_ctc) · C_ce + λ_lm · C_lm
//! ```
//!
//! and, when pre-beam pruning is active, only the `ceil(factor · n_beams)`
//! symbols with the lowest `C_pre` survive to the expensive CTC prefix-score
//! evaluation (EOS is always re-admitted). Candidate totals are
//!
//! ```text
//! C_tot = λ_ctc · C_ctc + C_pre
//! ```
//!
//! accumulated componentwise per emitted symbol. EOS candidates move to the
//! finished set with the full-score rescaling; the best `n_beams` open
//! candidates survive to the next step. Each component delta is
//! non-negative, so open costs never decrease; the search stops when the
//! open pool is empty or entirely dominated by the best finished hypothesis,
//! and hypotheses hitting a length cap are force-finished through the EOS
//! path.
//!
//! A zero fusion weight annihilates its component even when that component
//! is infinite, so e.g. λ_ctc = 0 decodes by scorer costs alone.

use std::time::{Duration, Instant};

use crate::alphabet::Transcript;
use crate::ctc::{self, PrefixScorerState};
use crate::matrix::{ConfidenceMatrix, CostVector};
use crate::scorers::{Scorer, ScorerState};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BeamError {
    #[error("no hypothesis survived: every candidate had infinite cost")]
    NoHypothesisSurvived,
    #[error("invalid decode configuration: {0}")]
    InvalidConfig(String),
}

/// Beam-search parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeConfig {
    /// Weight of the CTC prefix score in [0, 1]; the decoder scorer gets
    /// `1 - lambda_ctc`.
    pub lambda_ctc: f64,
    /// Weight of the language model in [0, 1].
    pub lambda_lm: f64,
    /// Open hypotheses tracked per step.
    pub n_beams: usize,
    /// Pre-beam pruning factor (>= 1); `None` disables pruning. Pruning is
    /// also skipped whenever `ceil(factor · n_beams) >= |A| + 1`.
    pub pre_beam_factor: Option<f64>,
    /// Output length cap; `None` means the frame count T, since a collapsed
    /// labeling never exceeds it.
    pub max_len: Option<usize>,
    /// Keep every finished hypothesis instead of the best `n_beams`.
    pub keep_all_finished: bool,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            lambda_ctc: 0.3,
            lambda_lm: 0.0,
            n_beams: 5,
            pre_beam_factor: Some(1.5),
            max_len: None,
            keep_all_finished: false,
        }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<(), BeamError> {
        let bad = |msg: String| Err(BeamError::InvalidConfig(msg));
        if !(0.0..=1.0).contains(&self.lambda_ctc) {
            return bad(format!("lambda_ctc {} outside [0, 1]", self.lambda_ctc));
        }
        if !(0.0..=1.0).contains(&self.lambda_lm) {
            return bad(format!("lambda_lm {} outside [0, 1]", self.lambda_lm));
        }
        if self.n_beams < 1 {
            return bad("n_beams must be at least 1".into());
        }
        if let Some(f) = self.pre_beam_factor {
            if !(f >= 1.0) {
                return bad(format!("pre-beam factor {f} must be at least 1"));
            }
        }
        if self.max_len == Some(0) {
            return bad("max_len must be at least 1".into());
        }
        Ok(())
    }

    /// Candidate symbols surviving pre-beam pruning per hypothesis, if
    /// pruning applies at width `|A| + 1`.
    fn pre_beam_count(&self, width: usize) -> Option<usize> {
        let factor = self.pre_beam_factor?;
        let k = (factor * self.n_beams as f64).ceil() as usize;
        (k < width).then_some(k)
    }
}

/// One beam: a prefix with accumulated costs and per-scorer states.
#[derive(Debug, Clone)]
pub struct Hypothesis {
    pub prefix: Transcript,
    /// `lambda_ctc * ctc_cost + (1 - lambda_ctc) * ce_cost + lambda_lm * lm_cost`.
    pub total_cost: f64,
    pub ctc_cost: f64,
    pub ce_cost: f64,
    pub lm_cost: f64,
    pub finished: bool,
    pub ctc_state: PrefixScorerState,
    pub decoder_state: ScorerState,
    pub lm_state: Option<ScorerState>,
}

/// Search counters; wall time covers the decode call only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecodeStats {
    /// Expansion rounds executed.
    pub steps: usize,
    /// CTC prefix-score extensions evaluated (the O(T) sweeps).
    pub prefix_evals: usize,
    /// Open hypotheses expanded, summed over steps.
    pub expanded: usize,
    pub wall: Duration,
}

/// Ranked finished hypotheses plus counters.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    /// Finished hypotheses by ascending total cost; ties prefer the shorter,
    /// then lexicographically smaller prefix.
    pub n_best: Vec<Hypothesis>,
    pub stats: DecodeStats,
}

impl DecodeResult {
    pub fn best(&self) -> &Hypothesis {
        &self.n_best[0]
    }
}

/// A zero weight annihilates its component, infinities included.
#[inline]
fn weighted(weight: f64, cost: f64) -> f64 {
    if weight == 0.0 {
        0.0
    } else {
        weight * cost
    }
}

/// `C_pre = (1 - λ_ctc) · C_ce + λ_lm · C_lm`, elementwise; `+∞` propagates
/// through any non-zero weight.
pub fn combine_pre(c_ce: &CostVector, c_lm: &CostVector, cfg: &DecodeConfig) -> CostVector {
    assert_eq!(c_ce.len(), c_lm.len(), "cost vectors must share a support");
    let w_ce = 1.0 - cfg.lambda_ctc;
    let costs = c_ce
        .as_slice()
        .iter()
        .zip(c_lm.as_slice())
        .map(|(&ce, &lm)| weighted(w_ce, ce) + weighted(cfg.lambda_lm, lm))
        .collect();
    CostVector::new(costs)
}

fn total_cost(cfg: &DecodeConfig, ctc_cost: f64, ce_cost: f64, lm_cost: f64) -> f64 {
    weighted(cfg.lambda_ctc, ctc_cost)
        + weighted(1.0 - cfg.lambda_ctc, ce_cost)
        + weighted(cfg.lambda_lm, lm_cost)
}

fn rank(a: &Hypothesis, b: &Hypothesis) -> std::cmp::Ordering {
    a.total_cost
        .total_cmp(&b.total_cost)
        .then_with(|| a.prefix.len().cmp(&b.prefix.len()))
        .then_with(|| a.prefix.cmp(&b.prefix))
}

/// Best-path mode behind the same decode entry point: per-frame argmax plus
/// collapse, no scorers, no search.
pub fn decode_best_path_mode(m: &ConfidenceMatrix) -> Transcript {
    ctc::best_path_decode(m).0
}

/// Joint beam search decoding.
///
/// `decoder` supplies `C_ce`; `lm`, when present, supplies `C_lm` (absent, a
/// zero vector is fused instead). Scorers must conform to the scorer
/// contract.
pub fn beam_decode(
    m: &ConfidenceMatrix,
    decoder: &dyn Scorer,
    lm: Option<&dyn Scorer>,
    cfg: &DecodeConfig,
) -> Result<DecodeResult, BeamError> {
    cfg.validate()?;
    let start = Instant::now();
    let width = m.alphabet_size() + 1;
    let eos = m.alphabet_size() as u32;
    let max_len = cfg.max_len.unwrap_or(m.frames()).min(m.frames());
    let no_lm_costs = CostVector::zeros(width);
    let mut stats = DecodeStats::default();

    let mut open = vec![Hypothesis {
        prefix: Transcript::empty(),
        total_cost: 0.0,
        ctc_cost: 0.0,
        ce_cost: 0.0,
        lm_cost: 0.0,
        finished: false,
        ctc_state: PrefixScorerState::init(m),
        decoder_state: decoder.initial_state(),
        lm_state: lm.map(|s| s.initial_state()),
    }];
    let mut finished: Vec<Hypothesis> = Vec::new();

    while !open.is_empty() {
        stats.steps += 1;
        let mut candidates: Vec<Hypothesis> = Vec::new();

        for hyp in &open {
            stats.expanded += 1;
            let c_ce = decoder.step(&hyp.decoder_state);
            let c_lm = match (lm, &hyp.lm_state) {
                (Some(s), Some(state)) => s.step(state),
                _ => no_lm_costs.clone(),
            };
            debug_assert_eq!(c_ce.len(), width);

            if hyp.prefix.len() >= max_len {
                // Length cap: force-finish through the EOS path.
                finish(hyp, &c_ce, &c_lm, cfg, &mut finished);
                continue;
            }

            let c_pre = combine_pre(&c_ce, &c_lm, cfg);
            let survivors = select_pre_beam(&c_pre, cfg, eos);

            for &symbol in &survivors {
                if symbol == eos {
                    finish(hyp, &c_ce, &c_lm, cfg, &mut finished);
                    continue;
                }
                stats.prefix_evals += 1;
                let (ctc_state, ctc_delta) = hyp.ctc_state.extend(symbol, m);
                let ctc_cost = hyp.ctc_cost + ctc_delta;
                let ce_cost = hyp.ce_cost + c_ce.get(symbol);
                let lm_cost = hyp.lm_cost + c_lm.get(symbol);
                let total = total_cost(cfg, ctc_cost, ce_cost, lm_cost);
                if total == f64::INFINITY {
                    continue;
                }
                candidates.push(Hypothesis {
                    prefix: hyp.prefix.extended(symbol),
                    total_cost: total,
                    ctc_cost,
                    ce_cost,
                    lm_cost,
                    finished: false,
                    ctc_state,
                    decoder_state: decoder.advance(&hyp.decoder_state, symbol),
                    lm_state: lm
                        .zip(hyp.lm_state.as_ref())
                        .map(|(s, state)| s.advance(state, symbol)),
                });
            }
        }

        candidates.sort_by(rank);
        candidates.truncate(cfg.n_beams);
        open = candidates;

        if !cfg.keep_all_finished && finished.len() > cfg.n_beams {
            finished.sort_by(rank);
            finished.truncate(cfg.n_beams);
        }

        // Dominance: costs only grow, so once the best finished hypothesis
        // beats every open one the search cannot improve.
        if let Some(best_finished) =
            finished.iter().map(|h| h.total_cost).min_by(f64::total_cmp)
        {
            if open.iter().all(|h| h.total_cost > best_finished) {
                break;
            }
        }
    }

    if finished.is_empty() {
        return Err(BeamError::NoHypothesisSurvived);
    }
    finished.sort_by(rank);
    if !cfg.keep_all_finished {
        finished.truncate(cfg.n_beams);
    }
    stats.wall = start.elapsed();
    Ok(DecodeResult { n_best: finished, stats })
}

/// Moves one hypothesis to the finished set via the EOS costs, unless the
/// resulting total is infinite.
fn finish(
    hyp: &Hypothesis,
    c_ce: &CostVector,
    c_lm: &CostVector,
    cfg: &DecodeConfig,
    finished: &mut Vec<Hypothesis>,
) {
    let ctc_cost = hyp.ctc_cost + hyp.ctc_state.eos_cost();
    let ce_cost = hyp.ce_cost + c_ce.eos();
    let lm_cost = hyp.lm_cost + c_lm.eos();
    let total = total_cost(cfg, ctc_cost, ce_cost, lm_cost);
    if total == f64::INFINITY {
        return;
    }
    finished.push(Hypothesis {
        prefix: hyp.prefix.clone(),
        total_cost: total,
        ctc_cost,
        ce_cost,
        lm_cost,
        finished: true,
        ctc_state: hyp.ctc_state.clone(),
        decoder_state: hyp.decoder_state.clone(),
        lm_state: hyp.lm_state.clone(),
    });
}

/// Symbols surviving pre-beam pruning, by ascending `C_pre` with index
/// tie-break; EOS is re-admitted if pruned away.
fn select_pre_beam(c_pre: &CostVector, cfg: &DecodeConfig, eos: u32) -> Vec<u32> {
    let width = c_pre.len();
    match cfg.pre_beam_count(width) {
        None => (0..width as u32).collect(),
        Some(k) => {
            let mut order: Vec<u32> = (0..width as u32).collect();
            order.sort_by(|&a, &b| {
                c_pre.get(a).total_cmp(&c_pre.get(b)).then_with(|| a.cmp(&b))
            });
            order.truncate(k);
            if !order.contains(&eos) {
                order.push(eos);
            }
            // Deterministic expansion order regardless of cost ordering.
            order.sort_unstable();
            order
        }
    }
}
