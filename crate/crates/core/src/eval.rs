//! Character and word error rates.
//!
//! CER operates on unicode scalar values, WER on whitespace-separated
//! tokens; neither applies any hidden normalization. Corpus rates are
//! micro-averages — summed edit distances over summed reference lengths,
//! carried in integers until the final division — never the mean of
//! per-line rates.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("reference is empty while the hypothesis is not")]
    EmptyReference,
}

/// Levenshtein distance with unit-cost insertions, deletions, and
/// substitutions; two-row dynamic program.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Character error rate: edit distance over reference length in unicode
/// scalars. An empty reference pairs only with an empty hypothesis (rate 0).
pub fn cer(hyp: &str, reference: &str) -> Result<f64, EvalError> {
    let h: Vec<char> = hyp.chars().collect();
    let r: Vec<char> = reference.chars().collect();
    rate(edit_distance(&h, &r), r.len(), h.len())
}

/// Word error rate over runs of whitespace, no punctuation normalization.
pub fn wer(hyp: &str, reference: &str) -> Result<f64, EvalError> {
    let h: Vec<&str> = hyp.split_whitespace().collect();
    let r: Vec<&str> = reference.split_whitespace().collect();
    rate(edit_distance(&h, &r), r.len(), h.len())
}

fn rate(distance: usize, ref_len: usize, hyp_len: usize) -> Result<f64, EvalError> {
    if ref_len == 0 {
        if hyp_len == 0 {
            Ok(0.0)
        } else {
            Err(EvalError::EmptyReference)
        }
    } else {
        Ok(distance as f64 / ref_len as f64)
    }
}

/// Per-line evaluation record.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRecord {
    pub char_edits: usize,
    pub ref_chars: usize,
    pub word_edits: usize,
    pub ref_words: usize,
    /// `None` marks the empty-reference sentinel (non-empty hypothesis
    /// against an empty reference).
    pub cer: Option<f64>,
    pub wer: Option<f64>,
}

/// Corpus-level report.
///
/// Lines with an empty reference stay in the distance numerators unless the
/// hypothesis is empty too, in which case they are excluded entirely.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub lines: Vec<LineRecord>,
    pub total_char_edits: usize,
    pub total_ref_chars: usize,
    pub total_word_edits: usize,
    pub total_ref_words: usize,
    /// Micro-averaged character error rate.
    pub cer: f64,
    /// Micro-averaged word error rate.
    pub wer: f64,
}

/// Evaluates aligned hypothesis/reference lines.
///
/// Panics if the slices differ in length; callers check first.
pub fn evaluate_corpus(hyps: &[String], refs: &[String]) -> EvalReport {
    assert_eq!(hyps.len(), refs.len(), "hypothesis and reference line counts differ");
    let mut lines = Vec::with_capacity(hyps.len());
    let (mut ce, mut cn, mut we, mut wn) = (0usize, 0usize, 0usize, 0usize);
    for (hyp, reference) in hyps.iter().zip(refs) {
        let h_chars: Vec<char> = hyp.chars().collect();
        let r_chars: Vec<char> = reference.chars().collect();
        let h_words: Vec<&str> = hyp.split_whitespace().collect();
        let r_words: Vec<&str> = reference.split_whitespace().collect();
        let char_edits = edit_distance(&h_chars, &r_chars);
        let word_edits = edit_distance(&h_words, &r_words);

        if !(r_chars.is_empty() && h_chars.is_empty()) {
            ce += char_edits;
            cn += r_chars.len();
        }
        if !(r_words.is_empty() && h_words.is_empty()) {
            we += word_edits;
            wn += r_words.len();
        }
        lines.push(LineRecord {
            char_edits,
            ref_chars: r_chars.len(),
            word_edits,
            ref_words: r_words.len(),
            cer: per_line(char_edits, r_chars.len(), h_chars.len()),
            wer: per_line(word_edits, r_words.len(), h_words.len()),
        });
    }
    EvalReport {
        lines,
        total_char_edits: ce,
        total_ref_chars: cn,
        total_word_edits: we,
        total_ref_words: wn,
        cer: micro(ce, cn),
        wer: micro(we, wn),
    }
}

fn per_line(distance: usize, ref_len: usize, hyp_len: usize) -> Option<f64> {
    match rate(distance, ref_len, hyp_len) {
        Ok(v) => Some(v),
        Err(_) => None,
    }
}

fn micro(edits: usize, ref_len: usize) -> f64 {
    if ref_len > 0 {
        edits as f64 / ref_len as f64
    } else if edits == 0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identical_sequences_have_distance_zero() {
        let a: Vec<char> = "abc".chars().collect();
        assert_eq!(edit_distance(&a, &a), 0);
    }

    #[test]
    fn pure_insertions() {
        let empty: Vec<char> = vec![];
        let abc: Vec<char> = "abc".chars().collect();
        assert_eq!(edit_distance(&empty, &abc), 3);
        assert_eq!(edit_distance(&abc, &empty), 3);
    }

    #[test]
    fn mixed_edits() {
        let a: Vec<char> = "kitten".chars().collect();
        let b: Vec<char> = "sitting".chars().collect();
        assert_eq!(edit_distance(&a, &b), 3);
    }

    #[test]
    fn cer_examples() {
        assert_eq!(cer("abc", "abc").unwrap(), 0.0);
        assert_relative_eq!(cer("ab", "abcd").unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn wer_counts_token_edits() {
        assert_relative_eq!(
            wer("the cat", "the cat sat").unwrap(),
            1.0 / 3.0,
            epsilon = 1e-12
        );
        assert_eq!(wer("the cat", "the cat").unwrap(), 0.0);
    }

    #[test]
    fn empty_reference_is_surfaced() {
        assert_eq!(cer("x", ""), Err(EvalError::EmptyReference));
        assert_eq!(cer("", "").unwrap(), 0.0);
        assert_eq!(wer("x y", ""), Err(EvalError::EmptyReference));
    }

    #[test]
    fn corpus_micro_average_is_summed_integers() {
        let hyps = vec!["ab".to_string(), "xyz".to_string()];
        let refs = vec!["abcd".to_string(), "xyz".to_string()];
        let report = evaluate_corpus(&hyps, &refs);
        // 2 edits over 4 chars plus 0 over 3: micro = 2/7.
        assert_eq!(report.total_char_edits, 2);
        assert_eq!(report.total_ref_chars, 7);
        assert_relative_eq!(report.cer, 2.0 / 7.0, epsilon = 1e-12);
        // Not the mean of per-line rates (which would be 0.25).
        assert!((report.cer - 0.25).abs() > 1e-3);
    }

    #[test]
    fn corpus_handles_empty_reference_lines() {
        let hyps = vec!["ab".to_string(), String::new()];
        let refs = vec![String::new(), String::new()];
        let report = evaluate_corpus(&hyps, &refs);
        assert_eq!(report.lines[0].cer, None);
        assert_eq!(report.lines[1].cer, Some(0.0));
        // Line 0 contributes its 2 edits with no reference mass; line 1 is
        // excluded entirely.
        assert_eq!(report.total_char_edits, 2);
        assert_eq!(report.total_ref_chars, 0);
        assert_eq!(report.cer, f64::INFINITY);
    }

    #[test]
    fn distance_works_on_unicode_scalars() {
        let a: Vec<char> = "école".chars().collect();
        let b: Vec<char> = "ecole".chars().collect();
        assert_eq!(edit_distance(&a, &b), 1);
    }
}
