//! Confidence matrices and cost vectors.

use crate::math::log_sum_exp;

/// Tolerance for the per-row normalization check, in log space.
pub const ROW_NORM_TOL: f64 = 1e-4;

/// Upper tolerance for individual log-probability entries.
pub const ENTRY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix must have at least one frame")]
    Empty,
    #[error("data length {got} does not match {frames} frames x {width} symbols")]
    Shape { got: usize, frames: usize, width: usize },
    #[error("row {row} is not a normalized distribution (logsumexp {lse:e})")]
    RowNotNormalized { row: usize, lse: f64 },
    #[error("row {row} column {col} is not a log-probability ({value})")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },
}

/// T×(|A|+1) per-frame log-probability distributions, blank in the last
/// column.
///
/// Entries are stored row-major as `f64`. Sources that must round-trip
/// through the float32 file format (synthesis, file reads) keep every value
/// on the `f32` grid; in-memory arithmetic always runs at `f64`. Rows are
/// validated once at construction, not on access.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceMatrix {
    data: Vec<f64>,
    alphabet_size: usize,
    frames: usize,
}

impl ConfidenceMatrix {
    pub fn new(alphabet_size: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        let width = alphabet_size + 1;
        if data.is_empty() {
            return Err(MatrixError::Empty);
        }
        if data.len() % width != 0 {
            return Err(MatrixError::Shape { got: data.len(), frames: data.len() / width, width });
        }
        let frames = data.len() / width;
        for t in 0..frames {
            let row = &data[t * width..(t + 1) * width];
            for (col, &v) in row.iter().enumerate() {
                if !(v <= ENTRY_TOL) {
                    return Err(MatrixError::EntryOutOfRange { row: t, col, value: v });
                }
            }
            let lse = log_sum_exp(row);
            if !(lse.abs() <= ROW_NORM_TOL) {
                return Err(MatrixError::RowNotNormalized { row: t, lse });
            }
        }
        Ok(Self { data, alphabet_size, frames })
    }

    /// Builds a matrix from row slices.
    pub fn from_rows(alphabet_size: usize, rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let mut data = Vec::with_capacity(rows.len() * (alphabet_size + 1));
        for row in rows {
            if row.len() != alphabet_size + 1 {
                return Err(MatrixError::Shape {
                    got: row.len(),
                    frames: rows.len(),
                    width: alphabet_size + 1,
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(alphabet_size, data)
    }

    /// T, the number of frames.
    pub fn frames(&self) -> usize {
        self.frames
    }

    /// |A|.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// |A|+1, the row width.
    pub fn width(&self) -> usize {
        self.alphabet_size + 1
    }

    /// The blank column index (`|A|`).
    pub fn blank(&self) -> u32 {
        self.alphabet_size as u32
    }

    pub fn row(&self, t: usize) -> &[f64] {
        let w = self.width();
        &self.data[t * w..(t + 1) * w]
    }

    /// Log-probability of `symbol` at frame `t`.
    #[inline]
    pub fn logp(&self, t: usize, symbol: u32) -> f64 {
        self.data[t * self.width() + symbol as usize]
    }

    /// Raw row-major storage.
    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Negative log-probabilities over A ∪ {EOS}; index `|A|` is EOS.
///
/// Entries are non-negative; `+∞` marks a forbidden symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct CostVector {
    costs: Vec<f64>,
}

impl CostVector {
    pub fn new(costs: Vec<f64>) -> Self {
        debug_assert!(
            costs.iter().all(|&c| c >= 0.0 || c == f64::INFINITY),
            "cost vectors hold non-negative or infinite entries"
        );
        Self { costs }
    }

    /// All symbols equally likely: every cost is `ln(width)`.
    pub fn uniform(width: usize) -> Self {
        Self { costs: vec![(width as f64).ln(); width] }
    }

    /// All costs zero; used when a scorer slot is absent.
    pub fn zeros(width: usize) -> Self {
        Self { costs: vec![0.0; width] }
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    /// Cost of one symbol (character index or the EOS index `len-1`).
    #[inline]
    pub fn get(&self, symbol: u32) -> f64 {
        self.costs[symbol as usize]
    }

    /// The EOS entry (last index).
    pub fn eos(&self) -> f64 {
        *self.costs.last().expect("cost vector is never empty")
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.costs
    }

    /// logsumexp of the implied probabilities; ~0 for a normalized scorer.
    pub fn log_norm(&self) -> f64 {
        let negated: Vec<f64> = self.costs.iter().map(|&c| -c).collect();
        log_sum_exp(&negated)
    }
}
