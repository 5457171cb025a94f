//! Brute-force path enumeration.
//!
//! These routines literally walk every raw frame-label path, collapse it, and
//! add up plain probabilities. They share no code with the forward recursions
//! and exist as the independent reference the dynamic programs are checked
//! against.

use std::collections::HashMap;

use crate::alphabet::Transcript;
use crate::ctc::collapse;
use crate::math::LOG_ZERO;
use crate::matrix::ConfidenceMatrix;

/// Enumeration guard: refuse instances with more raw paths than this.
pub const MAX_ORACLE_PATHS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{paths} raw paths exceed the enumeration guard of {MAX_ORACLE_PATHS}")]
    InstanceTooLarge { paths: u128 },
}

fn path_count(m: &ConfidenceMatrix) -> Result<u64, OracleError> {
    let paths = (m.width() as u128).checked_pow(m.frames() as u32).unwrap_or(u128::MAX);
    if paths > MAX_ORACLE_PATHS as u128 {
        return Err(OracleError::InstanceTooLarge { paths });
    }
    Ok(paths as u64)
}

/// Every collapsed labeling with its total probability (linear space),
/// ordered lexicographically.
///
/// The probabilities of all labelings sum to 1 up to rounding.
pub fn enumerate_labelings(
    m: &ConfidenceMatrix,
) -> Result<Vec<(Transcript, f64)>, OracleError> {
    path_count(m)?;
    let frames = m.frames();
    let width = m.width();
    let blank = m.blank();

    // Plain probabilities; path products never underflow at guard sizes.
    let probs: Vec<f64> = m.data().iter().map(|&v| (v as f64).exp()).collect();

    let mut mass: HashMap<Vec<u32>, f64> = HashMap::new();
    let mut path = vec![0u32; frames];
    loop {
        let mut p = 1.0;
        for t in 0..frames {
            p *= probs[t * width + path[t] as usize];
        }
        if p > 0.0 {
            let labeling = collapse(&path, blank);
            *mass.entry(labeling.as_slice().to_vec()).or_insert(0.0) += p;
        }

        // Odometer increment over the width^frames path space.
        let mut t = 0;
        loop {
            if t == frames {
                let mut out: Vec<(Transcript, f64)> =
                    mass.into_iter().map(|(k, v)| (Transcript::new(k), v)).collect();
                out.sort_by(|a, b| a.0.cmp(&b.0));
                return Ok(out);
            }
            path[t] += 1;
            if (path[t] as usize) < width {
                break;
            }
            path[t] = 0;
            t += 1;
        }
    }
}

/// log Ψ(g) by enumeration: the total probability of raw paths whose
/// collapsed labeling starts with `g`.
pub fn prefix_prob(m: &ConfidenceMatrix, g: &Transcript) -> Result<f64, OracleError> {
    if g.len() > m.frames() {
        // A collapsed labeling never exceeds the frame count.
        path_count(m)?;
        return Ok(LOG_ZERO);
    }
    let labelings = enumerate_labelings(m)?;
    let total: f64 = labelings
        .iter()
        .filter(|(labeling, _)| labeling.as_slice().starts_with(g.as_slice()))
        .map(|&(_, p)| p)
        .sum();
    Ok(if total > 0.0 { total.ln() } else { LOG_ZERO })
}

/// log P(g) by enumeration: the probability of collapsing to exactly `g`.
pub fn exact_prob(m: &ConfidenceMatrix, g: &Transcript) -> Result<f64, OracleError> {
    let labelings = enumerate_labelings(m)?;
    let total: f64 = labelings
        .iter()
        .filter(|(labeling, _)| labeling == g)
        .map(|&(_, p)| p)
        .sum();
    Ok(if total > 0.0 { total.ln() } else { LOG_ZERO })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_frame_single_char() -> ConfidenceMatrix {
        let rows = vec![vec![0.6f64.ln(), 0.4f64.ln()], vec![0.5f64.ln(), 0.5f64.ln()]];
        ConfidenceMatrix::from_rows(1, &rows).unwrap()
    }

    #[test]
    fn empty_prefix_has_probability_one() {
        let m = two_frame_single_char();
        assert_relative_eq!(prefix_prob(&m, &Transcript::empty()).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_char_alphabet_complement_identity() {
        // With |A| = 1 every labeling is a run of a's, so Ψ("a") = 1 - P("").
        let m = two_frame_single_char();
        let psi = prefix_prob(&m, &Transcript::new(vec![0])).unwrap();
        let empty = exact_prob(&m, &Transcript::empty()).unwrap();
        assert_relative_eq!(psi.exp(), 1.0 - empty.exp(), epsilon = 1e-12);
        assert_relative_eq!(psi.exp(), 0.8, epsilon = 1e-9);
    }

    #[test]
    fn prefix_longer_than_frames_is_impossible() {
        let m = two_frame_single_char();
        assert_eq!(prefix_prob(&m, &Transcript::new(vec![0, 0, 0])).unwrap(), LOG_ZERO);
    }

    #[test]
    fn labeling_mass_sums_to_one() {
        let m = two_frame_single_char();
        let total: f64 = enumerate_labelings(&m).unwrap().iter().map(|&(_, p)| p).sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn guard_rejects_large_instances() {
        // 4 symbols over 13 frames is past the 1e7 path guard.
        let width = 4;
        let uniform = (1.0f64 / width as f64).ln();
        let m = ConfidenceMatrix::new(width - 1, vec![uniform; width * 13]).unwrap();
        assert!(matches!(
            enumerate_labelings(&m),
            Err(OracleError::InstanceTooLarge { .. })
        ));
        assert!(matches!(
            prefix_prob(&m, &Transcript::empty()),
            Err(OracleError::InstanceTooLarge { .. })
        ));
    }
}
