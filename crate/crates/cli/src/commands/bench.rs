//! `linedec bench`: throughput of named decode configurations.
//!
//! Matrices and models are loaded up front; each configuration then decodes
//! the corpus one line at a time (batch size 1) and only that loop is timed.
//! Transcripts and evaluation counters are deterministic; the timings are
//! wall-clock and labeled as such in the report.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use linedec_core::beam::{beam_decode, DecodeConfig};
use linedec_core::ctc;
use linedec_core::matrix::ConfidenceMatrix;
use linedec_core::scorers::{NgramModel, Scorer, TeacherScorer};
use linedec_core::Alphabet;
use serde::{Deserialize, Serialize};

use crate::commands::{load_alphabet, load_matrix_dir, read_lines};
use crate::error::CliError;

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Directory of .ctcm matrix files.
    #[arg(long)]
    pub matrices: PathBuf,
    #[arg(long)]
    pub alphabet: PathBuf,
    /// JSON file holding an array of named configurations.
    #[arg(long)]
    pub configs: PathBuf,
    /// Teacher reference file; required by beam configurations.
    #[arg(long)]
    pub teacher: Option<PathBuf>,
    /// Serialized n-gram model; required by configurations with use_lm.
    #[arg(long)]
    pub lm: Option<PathBuf>,
}

fn default_beams() -> usize {
    5
}
fn default_lambda_ctc() -> f64 {
    0.3
}
fn default_pre_beam_factor() -> Option<f64> {
    Some(1.5)
}
fn default_teacher_confidence() -> f64 {
    0.9
}

/// One named entry of the configs file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfigEntry {
    pub name: String,
    /// "bestpath" or "beam".
    pub mode: String,
    #[serde(default = "default_beams")]
    pub beams: usize,
    #[serde(default = "default_lambda_ctc")]
    pub lambda_ctc: f64,
    #[serde(default)]
    pub lambda_lm: f64,
    #[serde(default)]
    pub use_lm: bool,
    #[serde(default = "default_pre_beam_factor")]
    pub pre_beam_factor: Option<f64>,
    #[serde(default = "default_teacher_confidence")]
    pub teacher_confidence: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub lines: usize,
    pub seconds: f64,
    pub lines_per_sec: f64,
    pub prefix_evals: usize,
    pub expanded_hypotheses: usize,
    pub steps: usize,
    /// Deterministic output fingerprint: the decoded transcripts.
    pub transcripts: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub fn run(args: &BenchArgs) -> Result<BenchReport, CliError> {
    let alphabet = load_alphabet(&args.alphabet)?;
    let matrices = load_matrix_dir(&args.matrices)?;
    let configs: Vec<BenchConfigEntry> = {
        let text = std::fs::read_to_string(&args.configs)
            .map_err(|e| CliError::Data(format!("{}: {e}", args.configs.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", args.configs.display())))?
    };
    if configs.is_empty() {
        return Err(CliError::Data("configs file lists no configurations".into()));
    }

    let needs_teacher = configs.iter().any(|c| c.mode == "beam");
    let teachers: Option<Vec<Vec<u32>>> = match (&args.teacher, needs_teacher) {
        (Some(path), _) => {
            let references = read_lines(path)?;
            if references.len() != matrices.len() {
                return Err(CliError::Data(format!(
                    "teacher file has {} lines but {} matrices were found",
                    references.len(),
                    matrices.len()
                )));
            }
            Some(
                references
                    .iter()
                    .enumerate()
                    .map(|(i, text)| {
                        alphabet
                            .encode(text)
                            .map(|t| t.as_slice().to_vec())
                            .map_err(|e| CliError::Data(format!("teacher line {}: {e}", i + 1)))
                    })
                    .collect::<Result<_, _>>()?,
            )
        }
        (None, true) => {
            return Err(CliError::Config(
                "beam configurations require a teacher reference file (--teacher)".into(),
            ))
        }
        (None, false) => None,
    };

    let needs_lm = configs.iter().any(|c| c.use_lm);
    let lm: Option<NgramModel> = match (&args.lm, needs_lm) {
        (Some(path), _) => {
            let model = NgramModel::load(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            if model.alphabet() != &alphabet {
                return Err(CliError::Data(format!(
                    "language model {} was trained on a different alphabet",
                    path.display()
                )));
            }
            Some(model)
        }
        (None, true) => {
            return Err(CliError::Config(
                "configurations with use_lm require a model file (--lm)".into(),
            ))
        }
        (None, false) => None,
    };

    let mut rows = Vec::with_capacity(configs.len());
    for entry in &configs {
        rows.push(run_config(entry, &alphabet, &matrices, teachers.as_deref(), lm.as_ref())?);
    }

    print_report(&rows);
    Ok(BenchReport { rows })
}

fn run_config(
    entry: &BenchConfigEntry,
    alphabet: &Alphabet,
    matrices: &[(String, ConfidenceMatrix)],
    teachers: Option<&[Vec<u32>]>,
    lm: Option<&NgramModel>,
) -> Result<BenchRow, CliError> {
    match entry.mode.as_str() {
        "bestpath" => {
            let start = Instant::now();
            let transcripts: Vec<String> = matrices
                .iter()
                .map(|(_, m)| alphabet.decode(&ctc::best_path_decode(m).0))
                .collect();
            let seconds = start.elapsed().as_secs_f64();
            Ok(BenchRow {
                name: entry.name.clone(),
                lines: matrices.len(),
                seconds,
                lines_per_sec: matrices.len() as f64 / seconds.max(f64::MIN_POSITIVE),
                prefix_evals: 0,
                expanded_hypotheses: 0,
                steps: 0,
                transcripts,
            })
        }
        "beam" => {
            let cfg = DecodeConfig {
                lambda_ctc: entry.lambda_ctc,
                lambda_lm: entry.lambda_lm,
                n_beams: entry.beams,
                pre_beam_factor: entry.pre_beam_factor,
                max_len: None,
                keep_all_finished: false,
            };
            cfg.validate().map_err(CliError::config)?;
            let teachers = teachers.expect("beam configs checked for a teacher upfront");
            let scorers: Vec<TeacherScorer> = teachers
                .iter()
                .map(|t| {
                    TeacherScorer::new(
                        t.clone().into(),
                        alphabet.size(),
                        entry.teacher_confidence,
                    )
                    .map_err(CliError::config)
                })
                .collect::<Result<_, _>>()?;
            let lm_ref: Option<&dyn Scorer> =
                entry.use_lm.then(|| lm.expect("use_lm checked upfront") as &dyn Scorer);

            let mut transcripts = Vec::with_capacity(matrices.len());
            let (mut steps, mut prefix_evals, mut expanded) = (0usize, 0usize, 0usize);
            let start = Instant::now();
            for ((name, m), teacher) in matrices.iter().zip(&scorers) {
                let result = beam_decode(m, teacher, lm_ref, &cfg)
                    .map_err(|e| CliError::Data(format!("config {}: matrix {name}: {e}", entry.name)))?;
                steps += result.stats.steps;
                prefix_evals += result.stats.prefix_evals;
                expanded += result.stats.expanded;
                transcripts.push(alphabet.decode(&result.best().prefix));
            }
            let seconds = start.elapsed().as_secs_f64();
            Ok(BenchRow {
                name: entry.name.clone(),
                lines: matrices.len(),
                seconds,
                lines_per_sec: matrices.len() as f64 / seconds.max(f64::MIN_POSITIVE),
                prefix_evals,
                expanded_hypotheses: expanded,
                steps,
                transcripts,
            })
        }
        other => Err(CliError::Config(format!(
            "config {}: unknown mode {other:?} (expected \"bestpath\" or \"beam\")",
            entry.name
        ))),
    }
}

fn print_report(rows: &[BenchRow]) {
    println!(
        "{:<20} {:>7} {:>10} {:>12} {:>14} {:>12} {:>14}",
        "config", "lines", "seconds", "lines/sec", "prefix-evals", "steps", "evals/hyp-step"
    );
    for row in rows {
        let per_hyp_step = if row.expanded_hypotheses > 0 {
            format!("{:.2}", row.prefix_evals as f64 / row.expanded_hypotheses as f64)
        } else {
            "-".into()
        };
        println!(
            "{:<20} {:>7} {:>10.4} {:>12.2} {:>14} {:>12} {:>14}",
            row.name,
            row.lines,
            row.seconds,
            row.lines_per_sec,
            row.prefix_evals,
            row.steps,
            per_hyp_step
        );
    }
    println!("# timings are wall-clock and vary between runs; transcripts and counters are deterministic");
}
