//! `linedec decode`: matrix files to transcripts, in best-path or beam mode.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use linedec_core::beam::{beam_decode, DecodeConfig, DecodeResult};
use linedec_core::ctc;
use linedec_core::matrix::ConfidenceMatrix;
use linedec_core::scorers::{NgramModel, Scorer, TeacherScorer};
use linedec_core::{Alphabet, Transcript};
use rayon::prelude::*;

use crate::commands::{load_alphabet, load_matrix_dir, read_lines};
use crate::error::CliError;
use crate::manifest::{ConfigEcho, LineResult, NBestEntry, RunManifest, RunStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Per-frame argmax plus CTC collapse; no scorers, no search.
    #[value(name = "bestpath")]
    BestPath,
    /// Joint beam search fusing CTC prefix, decoder, and LM costs.
    #[value(name = "beam")]
    Beam,
}

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    /// Directory of .ctcm matrix files, decoded in filename order.
    #[arg(long)]
    pub matrices: PathBuf,
    #[arg(long)]
    pub alphabet: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, default_value_t = 5)]
    pub beams: usize,
    #[arg(long, default_value_t = 0.3)]
    pub lambda_ctc: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_lm: f64,
    /// Serialized n-gram model; absent means no LM term.
    #[arg(long)]
    pub lm: Option<PathBuf>,
    /// Reference file driving the teacher scorer (aligned with the sorted
    /// matrix files); required in beam mode.
    #[arg(long)]
    pub teacher: Option<PathBuf>,
    #[arg(long, default_value_t = 0.9)]
    pub teacher_confidence: f64,
    #[arg(long, default_value_t = 1.5)]
    pub pre_beam_factor: f64,
    /// Disable pre-beam pruning entirely.
    #[arg(long)]
    pub no_pre_beam: bool,
    /// Output length cap; defaults to each matrix's frame count.
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub nbest: usize,
    /// Transcript file (one line per matrix); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON run manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Decode lines in parallel; per-line results are unchanged.
    #[arg(long)]
    pub parallel: bool,
}

pub fn run(args: &DecodeArgs) -> Result<RunManifest, CliError> {
    let alphabet = load_alphabet(&args.alphabet)?;
    let matrices = load_matrix_dir(&args.matrices)?;
    for (name, m) in &matrices {
        if m.alphabet_size() != alphabet.size() {
            return Err(CliError::Data(format!(
                "matrix {name}: alphabet size {} does not match the alphabet file ({})",
                m.alphabet_size(),
                alphabet.size()
            )));
        }
    }
    if args.nbest < 1 {
        return Err(CliError::Config("--nbest must be at least 1".into()));
    }

    let manifest = match args.mode {
        Mode::BestPath => run_bestpath(args, &alphabet, &matrices)?,
        Mode::Beam => run_beam(args, &alphabet, &matrices)?,
    };

    let mut transcripts = String::new();
    for line in &manifest.lines {
        transcripts.push_str(&line.transcript);
        transcripts.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, transcripts)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?,
        None => print!("{transcripts}"),
    }
    if let Some(path) = &args.manifest {
        let json = serde_json::to_string_pretty(&manifest)
            .expect("manifest serialization cannot fail");
        std::fs::write(path, json)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(manifest)
}

fn config_echo(args: &DecodeArgs) -> ConfigEcho {
    ConfigEcho {
        mode: match args.mode {
            Mode::BestPath => "bestpath".into(),
            Mode::Beam => "beam".into(),
        },
        beams: args.beams,
        lambda_ctc: args.lambda_ctc,
        lambda_lm: args.lambda_lm,
        pre_beam_factor: (!args.no_pre_beam).then_some(args.pre_beam_factor),
        max_len: args.max_len,
        nbest: args.nbest,
        teacher_confidence: args.teacher_confidence,
        alphabet: args.alphabet.display().to_string(),
        matrices: args.matrices.display().to_string(),
        lm: args.lm.as_ref().map(|p| p.display().to_string()),
        teacher: args.teacher.as_ref().map(|p| p.display().to_string()),
        parallel: args.parallel,
    }
}

fn run_bestpath(
    args: &DecodeArgs,
    alphabet: &Alphabet,
    matrices: &[(String, ConfidenceMatrix)],
) -> Result<RunManifest, CliError> {
    let decode_one = |(name, m): &(String, ConfidenceMatrix)| -> LineResult {
        let (transcript, path_logp) = ctc::best_path_decode(m);
        let text = alphabet.decode(&transcript);
        LineResult {
            file: name.clone(),
            transcript: text.clone(),
            total_cost: -path_logp,
            ctc_cost: 0.0,
            ce_cost: 0.0,
            lm_cost: 0.0,
            n_best: vec![NBestEntry { transcript: text, total_cost: -path_logp }],
        }
    };

    let start = Instant::now();
    let lines: Vec<LineResult> = if args.parallel {
        matrices.par_iter().map(decode_one).collect()
    } else {
        matrices.iter().map(decode_one).collect()
    };
    let secs = start.elapsed().as_secs_f64();

    Ok(RunManifest {
        config: config_echo(args),
        stats: RunStats {
            lines: lines.len(),
            decode_seconds: secs,
            lines_per_sec: lines.len() as f64 / secs.max(f64::MIN_POSITIVE),
            steps: 0,
            prefix_evals: 0,
            expanded_hypotheses: 0,
        },
        lines,
    })
}

fn run_beam(
    args: &DecodeArgs,
    alphabet: &Alphabet,
    matrices: &[(String, ConfidenceMatrix)],
) -> Result<RunManifest, CliError> {
    let cfg = DecodeConfig {
        lambda_ctc: args.lambda_ctc,
        lambda_lm: args.lambda_lm,
        n_beams: args.beams,
        pre_beam_factor: (!args.no_pre_beam).then_some(args.pre_beam_factor),
        max_len: args.max_len,
        keep_all_finished: args.nbest > args.beams,
    };
    cfg.validate().map_err(CliError::config)?;

    let teacher_path = args.teacher.as_ref().ok_or_else(|| {
        CliError::Config("beam mode requires a decoder scorer source (--teacher FILE)".into())
    })?;
    let references = read_lines(teacher_path)?;
    if references.len() != matrices.len() {
        return Err(CliError::Data(format!(
            "teacher file has {} lines but {} matrices were found",
            references.len(),
            matrices.len()
        )));
    }
    let teachers: Vec<TeacherScorer> = references
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let reference = alphabet
                .encode(text)
                .map_err(|e| CliError::Data(format!("teacher line {}: {e}", i + 1)))?;
            TeacherScorer::new(reference, alphabet.size(), args.teacher_confidence)
                .map_err(CliError::config)
        })
        .collect::<Result<_, _>>()?;

    let lm = match &args.lm {
        None => None,
        Some(path) => {
            let model = NgramModel::load(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            if model.alphabet() != alphabet {
                return Err(CliError::Data(format!(
                    "language model {} was trained on a different alphabet",
                    path.display()
                )));
            }
            Some(model)
        }
    };

    let decode_one = |((name, m), teacher): (&(String, ConfidenceMatrix), &TeacherScorer)|
     -> Result<(LineResult, linedec_core::DecodeStats), CliError> {
        let lm_ref: Option<&dyn Scorer> = lm.as_ref().map(|m| m as &dyn Scorer);
        let result: DecodeResult = beam_decode(m, teacher, lm_ref, &cfg)
            .map_err(|e| CliError::Data(format!("matrix {name}: {e}")))?;
        let best = result.best();
        let line = LineResult {
            file: name.clone(),
            transcript: alphabet.decode(&best.prefix),
            total_cost: best.total_cost,
            ctc_cost: best.ctc_cost,
            ce_cost: best.ce_cost,
            lm_cost: best.lm_cost,
            n_best: result
                .n_best
                .iter()
                .take(args.nbest)
                .map(|h| NBestEntry {
                    transcript: alphabet.decode(&h.prefix),
                    total_cost: h.total_cost,
                })
                .collect(),
        };
        Ok((line, result.stats))
    };

    let start = Instant::now();
    let decoded: Vec<(LineResult, linedec_core::DecodeStats)> = if args.parallel {
        matrices
            .par_iter()
            .zip(teachers.par_iter())
            .map(decode_one)
            .collect::<Result<_, _>>()?
    } else {
        matrices
            .iter()
            .zip(teachers.iter())
            .map(decode_one)
            .collect::<Result<_, _>>()?
    };
    let secs = start.elapsed().as_secs_f64();

    let mut lines = Vec::with_capacity(decoded.len());
    let (mut steps, mut prefix_evals, mut expanded) = (0usize, 0usize, 0usize);
    for (line, stats) in decoded {
        steps += stats.steps;
        prefix_evals += stats.prefix_evals;
        expanded += stats.expanded;
        lines.push(line);
    }

    Ok(RunManifest {
        config: config_echo(args),
        stats: RunStats {
            lines: lines.len(),
            decode_seconds: secs,
            lines_per_sec: lines.len() as f64 / secs.max(f64::MIN_POSITIVE),
            steps,
            prefix_evals,
            expanded_hypotheses: expanded,
        },
        lines,
    })
}

/// Reconstructs a transcript for replay-style checks.
pub fn parse_transcript(alphabet: &Alphabet, text: &str) -> Result<Transcript, CliError> {
    alphabet.encode(text).map_err(CliError::data)
}
