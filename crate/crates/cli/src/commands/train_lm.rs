//! `linedec train-lm`: fit and serialize a character n-gram model.

use std::path::PathBuf;

use clap::Args;
use linedec_core::scorers::{NgramModel, ScorerError};

use crate::commands::{load_alphabet, read_lines};
use crate::error::CliError;

#[derive(Debug, Clone, Args)]
pub struct TrainLmArgs {
    /// Training corpus, one line per training string.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub alphabet: PathBuf,
    #[arg(long, default_value_t = linedec_core::scorers::DEFAULT_ORDER)]
    pub order: usize,
    /// Output model file (NGLM format).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &TrainLmArgs) -> Result<(), CliError> {
    let alphabet = load_alphabet(&args.alphabet)?;
    let corpus = read_lines(&args.corpus)?;
    let model = NgramModel::train(&corpus, &alphabet, args.order).map_err(|e| match e {
        ScorerError::EmptyCorpus => CliError::data(e),
        other => CliError::config(other),
    })?;
    if model.unknown_skipped() > 0 {
        eprintln!(
            "warning: skipped {} character(s) outside the alphabet",
            model.unknown_skipped()
        );
    }
    model
        .save(&args.out)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.out.display())))?;
    println!(
        "order {} model trained on {} line(s); training perplexity {:.4} (uniform {})",
        model.order(),
        corpus.len(),
        model.perplexity(&corpus),
        alphabet.size() + 1
    );
    Ok(())
}
