//! Structured record of a decode run.
//!
//! The manifest echoes the full decode configuration, so feeding the echoed
//! flags back into `linedec decode` reproduces identical transcripts; the
//! timing fields are the only non-reproducible values in the file.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ConfigEcho,
    pub lines: Vec<LineResult>,
    pub stats: RunStats,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub mode: String,
    pub beams: usize,
    pub lambda_ctc: f64,
    pub lambda_lm: f64,
    /// `None` means pre-beam pruning disabled.
    pub pre_beam_factor: Option<f64>,
    pub max_len: Option<usize>,
    pub nbest: usize,
    pub teacher_confidence: f64,
    pub alphabet: String,
    pub matrices: String,
    pub lm: Option<String>,
    pub teacher: Option<String>,
    pub parallel: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineResult {
    pub file: String,
    pub transcript: String,
    /// In best-path mode: the negated log-probability of the argmax path,
    /// with zero component costs.
    pub total_cost: f64,
    pub ctc_cost: f64,
    pub ce_cost: f64,
    pub lm_cost: f64,
    pub n_best: Vec<NBestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NBestEntry {
    pub transcript: String,
    pub total_cost: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunStats {
    pub lines: usize,
    /// Decode loop only; file and model loading excluded.
    pub decode_seconds: f64,
    pub lines_per_sec: f64,
    pub steps: usize,
    pub prefix_evals: usize,
    pub expanded_hypotheses: usize,
}
