use clap::{Parser, Subcommand};
use linedec_cli::commands::{bench, decode, eval, synth, train_lm};
use linedec_cli::CliError;

/// Text-line decoding over confidence matrices: synthesis, n-gram training,
/// best-path and beam decoding, CER/WER evaluation, and a throughput bench.
#[derive(Debug, Parser)]
#[command(name = "linedec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize confidence matrices from ground-truth text.
    Synth(synth::SynthArgs),
    /// Decode matrix files to transcripts.
    Decode(decode::DecodeArgs),
    /// Train and serialize a character n-gram language model.
    TrainLm(train_lm::TrainLmArgs),
    /// Score hypothesis lines against references (CER/WER).
    Eval(eval::EvalArgs),
    /// Time decoding configurations over a corpus.
    Bench(bench::BenchArgs),
}

fn main() {
    let cli = Cli::parse();
    let result: Result<(), CliError> = match &cli.command {
        Command::Synth(args) => synth::run(args),
        Command::Decode(args) => decode::run(args).map(|_| ()),
        Command::TrainLm(args) => train_lm::run(args),
        Command::Eval(args) => eval::run(args).map(|_| ()),
        Command::Bench(args) => bench::run(args).map(|_| ()),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
