pub mod bench;
pub mod decode;
pub mod eval;
pub mod synth;
pub mod train_lm;

use std::path::Path;

use linedec_core::files;
use linedec_core::matrix::ConfidenceMatrix;
use linedec_core::Alphabet;

use crate::error::CliError;

pub(crate) fn load_alphabet(path: &Path) -> Result<Alphabet, CliError> {
    files::read_alphabet_file(path)
        .map_err(|e| CliError::Data(format!("alphabet {}: {e}", path.display())))
}

pub(crate) fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(text.lines().map(str::to_string).collect())
}

/// Matrix files from a directory in deterministic (byte-wise filename)
/// order.
pub(crate) fn load_matrix_dir(dir: &Path) -> Result<Vec<(String, ConfidenceMatrix)>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    let mut names: Vec<String> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.ends_with(".ctcm") {
            names.push(name);
        }
    }
    if names.is_empty() {
        return Err(CliError::Data(format!("no .ctcm matrix files in {}", dir.display())));
    }
    names.sort_unstable();
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        let path = dir.join(&name);
        let matrix = files::read_matrix_file(&path)
            .map_err(|e| CliError::Data(format!("matrix {}: {e}", path.display())))?;
        out.push((name, matrix));
    }
    Ok(out)
}
