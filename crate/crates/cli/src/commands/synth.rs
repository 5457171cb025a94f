//! `linedec synth`: texts plus alphabet in, matrix files plus an aligned
//! references file out.

use std::path::PathBuf;

use clap::Args;
use linedec_core::files;
use linedec_core::synth::{synth_corpus, SynthConfig};

use crate::commands::{load_alphabet, read_lines};
use crate::error::CliError;

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Ground-truth text file, one line per matrix.
    #[arg(long)]
    pub texts: PathBuf,
    /// Alphabet file (one character per line).
    #[arg(long)]
    pub alphabet: PathBuf,
    /// Output directory; receives NNNNNN.ctcm files and references.txt.
    #[arg(long)]
    pub out: PathBuf,
    /// Frames peaked at each character.
    #[arg(long, default_value_t = 3)]
    pub frames_per_char: usize,
    /// Blank frames between characters (repeats always get at least one).
    #[arg(long, default_value_t = 1)]
    pub blank_frames: usize,
    /// Probability mass on the peaked symbol.
    #[arg(long, default_value_t = 0.9)]
    pub peak: f64,
    /// Gaussian logit noise temperature.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(args: &SynthArgs) -> Result<(), CliError> {
    let alphabet = load_alphabet(&args.alphabet)?;
    let texts = read_lines(&args.texts)?;

    if args.frames_per_char < 1 {
        return Err(CliError::Config("--frames-per-char must be at least 1".into()));
    }
    if args.noise < 0.0 {
        return Err(CliError::Config("--noise must be non-negative".into()));
    }
    let width = alphabet.size() + 1;
    if !(args.peak > 1.0 / width as f64 && args.peak <= 1.0) {
        return Err(CliError::Config(format!(
            "--peak must lie in (1/{width}, 1] for this alphabet"
        )));
    }

    let cfg = SynthConfig {
        frames_per_char: args.frames_per_char,
        blank_frames_between: args.blank_frames,
        peak_confidence: args.peak,
        noise_temperature: args.noise,
        rng_seed: args.seed,
    };

    let pairs = synth_corpus(&texts, &alphabet, &cfg).map_err(|err| {
        let mut msg = String::new();
        for (line, e) in &err.lines {
            msg.push_str(&format!("line {line}: {e}\n"));
        }
        msg.push_str(&err.to_string());
        CliError::Data(msg)
    })?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.out.display())))?;
    for (i, (matrix, _)) in pairs.iter().enumerate() {
        let path = args.out.join(format!("{i:06}.ctcm"));
        files::write_matrix_file(&path, matrix)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    let mut references = String::new();
    for (_, text) in &pairs {
        references.push_str(text);
        references.push('\n');
    }
    let ref_path = args.out.join("references.txt");
    std::fs::write(&ref_path, references)
        .map_err(|e| CliError::Data(format!("{}: {e}", ref_path.display())))?;

    println!("wrote {} matrices and references.txt to {}", pairs.len(), args.out.display());
    Ok(())
}
