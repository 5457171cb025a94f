//! On-disk formats.
//!
//! Confidence matrices use the "CTCM" container: magic bytes, a format
//! version, the dimensions, then row-major float32 little-endian
//! log-probabilities with blank in the last column. Reading widens every
//! value to `f64` exactly; writing narrows to `f32`, so matrices whose
//! values already sit on the `f32` grid (file reads, synthesis) round-trip
//! bit-for-bit.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::alphabet::{Alphabet, AlphabetError};
use crate::matrix::{ConfidenceMatrix, MatrixError};

pub const MATRIX_MAGIC: [u8; 4] = *b"CTCM";
pub const MATRIX_VERSION: u16 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("bad magic bytes, not a {expected} file")]
    BadMagic { expected: &'static str },
    #[error("unsupported {kind} format version {got} (expected {expected})")]
    Version { kind: &'static str, got: u16, expected: u16 },
    #[error("corrupt file: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

pub(crate) fn read_exact_array<const N: usize>(r: &mut impl Read) -> io::Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

pub(crate) fn read_u16(r: &mut impl Read) -> io::Result<u16> {
    Ok(u16::from_le_bytes(read_exact_array(r)?))
}

pub(crate) fn read_u32(r: &mut impl Read) -> io::Result<u32> {
    Ok(u32::from_le_bytes(read_exact_array(r)?))
}

pub(crate) fn read_u64(r: &mut impl Read) -> io::Result<u64> {
    Ok(u64::from_le_bytes(read_exact_array(r)?))
}

pub(crate) fn read_f64(r: &mut impl Read) -> io::Result<f64> {
    Ok(f64::from_le_bytes(read_exact_array(r)?))
}

pub fn write_matrix(w: &mut impl Write, m: &ConfidenceMatrix) -> io::Result<()> {
    w.write_all(&MATRIX_MAGIC)?;
    w.write_all(&MATRIX_VERSION.to_le_bytes())?;
    w.write_all(&(m.frames() as u32).to_le_bytes())?;
    w.write_all(&(m.alphabet_size() as u32).to_le_bytes())?;
    for &v in m.data() {
        w.write_all(&(v as f32).to_le_bytes())?;
    }
    Ok(())
}

pub fn read_matrix(r: &mut impl Read) -> Result<ConfidenceMatrix, FileError> {
    let magic: [u8; 4] = read_exact_array(r)?;
    if magic != MATRIX_MAGIC {
        return Err(FileError::BadMagic { expected: "CTCM" });
    }
    let version = read_u16(r)?;
    if version != MATRIX_VERSION {
        return Err(FileError::Version { kind: "CTCM", got: version, expected: MATRIX_VERSION });
    }
    let frames = read_u32(r)? as usize;
    let alphabet_size = read_u32(r)? as usize;
    let width = alphabet_size + 1;
    let count = frames
        .checked_mul(width)
        .ok_or_else(|| FileError::Corrupt("matrix dimensions overflow".into()))?;
    let mut data = Vec::with_capacity(count);
    for _ in 0..count {
        data.push(f32::from_le_bytes(read_exact_array(r)?) as f64);
    }
    Ok(ConfidenceMatrix::new(alphabet_size, data)?)
}

pub fn write_matrix_file(path: &Path, m: &ConfidenceMatrix) -> Result<(), FileError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix(&mut w, m)?;
    w.flush()?;
    Ok(())
}

pub fn read_matrix_file(path: &Path) -> Result<ConfidenceMatrix, FileError> {
    read_matrix(&mut BufReader::new(File::open(path)?))
}

/// Loads an alphabet file: UTF-8, one character per line, line order giving
/// index order.
pub fn read_alphabet_file(path: &Path) -> Result<Alphabet, FileError> {
    let text = std::fs::read_to_string(path)?;
    Ok(Alphabet::from_text(&text)?)
}

pub fn write_alphabet_file(path: &Path, alphabet: &Alphabet) -> Result<(), FileError> {
    std::fs::write(path, alphabet.to_text())?;
    Ok(())
}
