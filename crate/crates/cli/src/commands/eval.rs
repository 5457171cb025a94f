//! `linedec eval`: CER/WER of hypothesis lines against references.

use std::path::PathBuf;

use clap::Args;
use linedec_core::eval::{evaluate_corpus, EvalReport};

use crate::commands::read_lines;
use crate::error::CliError;

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Hypothesis file, one line per text line.
    #[arg(long)]
    pub hyp: PathBuf,
    /// Reference file, aligned by line number.
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Suppress the per-line breakdown.
    #[arg(long)]
    pub summary_only: bool,
}

pub fn run(args: &EvalArgs) -> Result<EvalReport, CliError> {
    let hyps = read_lines(&args.hyp)?;
    let refs = read_lines(&args.reference)?;
    if hyps.len() != refs.len() {
        return Err(CliError::Data(format!(
            "line counts differ: {} hypothesis lines vs {} reference lines",
            hyps.len(),
            refs.len()
        )));
    }
    let report = evaluate_corpus(&hyps, &refs);
    print_report(&report, args.summary_only);
    Ok(report)
}

fn percent(rate: Option<f64>) -> String {
    match rate {
        Some(v) if v.is_finite() => format!("{:.2}%", 100.0 * v),
        _ => "n/a (empty reference)".into(),
    }
}

fn print_report(report: &EvalReport, summary_only: bool) {
    if !summary_only {
        for (i, line) in report.lines.iter().enumerate() {
            println!(
                "line {}: CER {} ({} / {})  WER {} ({} / {})",
                i + 1,
                percent(line.cer),
                line.char_edits,
                line.ref_chars,
                percent(line.wer),
                line.word_edits,
                line.ref_words
            );
        }
    }
    println!(
        "corpus: CER {:.2}% ({} / {})  WER {:.2}% ({} / {})",
        100.0 * report.cer,
        report.total_char_edits,
        report.total_ref_chars,
        100.0 * report.wer,
        report.total_word_edits,
        report.total_ref_words
    );
}
