//! Character n-gram language model.
//!
//! Conditional distributions are Jelinek–Mercer interpolations of
//! maximum-likelihood estimates across context lengths, grounded in the
//! uniform distribution over A ∪ {EOS}:
//!
//! ```text
//! P_0(c | h)  = w · ML(c | ())  + (1-w) · 1/(|A|+1)
//! P_j(c | h)  = w · ML(c | h_j) + (1-w) · P_{j-1}(c | h)   (h_j seen)
//!             = P_{j-1}(c | h)                             (h_j unseen)
//! ```
//!
//! where `h_j` is the last j characters of the history. Every training line
//! contributes a terminal EOS event, so EOS is scored like any character.
//! The interpolation preserves normalization exactly at every level.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::alphabet::Alphabet;
use crate::files::{read_exact_array, read_f64, read_u16, read_u32, read_u64, FileError};
use crate::matrix::CostVector;
use crate::scorers::{Scorer, ScorerError, ScorerState};

pub const DEFAULT_ORDER: usize = 6;
pub const DEFAULT_INTERPOLATION_WEIGHT: f64 = 0.4;

pub const NGRAM_MAGIC: [u8; 4] = *b"NGLM";
pub const NGRAM_VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
struct ContextCounts {
    total: u64,
    /// Dense counts over A ∪ {EOS}.
    counts: Vec<u64>,
}

/// Immutable trained model; shareable across decoding threads.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramModel {
    order: usize,
    interpolation_weight: f64,
    alphabet: Alphabet,
    /// Context (most recent character last) to next-symbol counts. A BTreeMap
    /// keeps serialization order deterministic.
    tables: BTreeMap<Vec<u32>, ContextCounts>,
    unknown_skipped: usize,
}

impl NgramModel {
    /// Trains from a line corpus. Characters outside the alphabet are
    /// skipped and tallied in [`NgramModel::unknown_skipped`]; every line
    /// ends in an EOS event.
    pub fn train(
        corpus: &[String],
        alphabet: &Alphabet,
        order: usize,
    ) -> Result<Self, ScorerError> {
        if corpus.is_empty() {
            return Err(ScorerError::EmptyCorpus);
        }
        if order == 0 {
            return Err(ScorerError::InvalidOrder);
        }
        let width = alphabet.size() + 1;
        let eos = alphabet.eos();
        let mut tables: BTreeMap<Vec<u32>, ContextCounts> = BTreeMap::new();
        let mut unknown_skipped = 0usize;

        let bump = |tables: &mut BTreeMap<Vec<u32>, ContextCounts>, ctx: &[u32], sym: u32| {
            let entry = tables.entry(ctx.to_vec()).or_insert_with(|| ContextCounts {
                total: 0,
                counts: vec![0; width],
            });
            entry.total += 1;
            entry.counts[sym as usize] += 1;
        };

        for line in corpus {
            let mut encoded = Vec::with_capacity(line.len());
            for ch in line.chars() {
                match alphabet.index_of(ch) {
                    Some(i) => encoded.push(i),
                    None => unknown_skipped += 1,
                }
            }
            for pos in 0..=encoded.len() {
                let sym = if pos < encoded.len() { encoded[pos] } else { eos };
                let max_ctx = (order - 1).min(pos);
                for ctx_len in 0..=max_ctx {
                    bump(&mut tables, &encoded[pos - ctx_len..pos], sym);
                }
            }
        }

        Ok(Self {
            order,
            interpolation_weight: DEFAULT_INTERPOLATION_WEIGHT,
            alphabet: alphabet.clone(),
            tables,
            unknown_skipped,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn interpolation_weight(&self) -> f64 {
        self.interpolation_weight
    }

    /// Characters dropped during training because the alphabet lacks them.
    pub fn unknown_skipped(&self) -> usize {
        self.unknown_skipped
    }

    /// Conditional distribution over A ∪ {EOS} given the history suffix.
    pub fn conditional(&self, history: &[u32]) -> Vec<f64> {
        let width = self.alphabet.size() + 1;
        let w = self.interpolation_weight;
        let mut p = vec![1.0 / width as f64; width];
        let max_ctx = (self.order - 1).min(history.len());
        for ctx_len in 0..=max_ctx {
            let ctx = &history[history.len() - ctx_len..];
            if let Some(cc) = self.tables.get(ctx) {
                let total = cc.total as f64;
                for (sym, q) in p.iter_mut().enumerate() {
                    *q = w * (cc.counts[sym] as f64 / total) + (1.0 - w) * *q;
                }
            }
        }
        p
    }

    /// Fraction of next-symbol events (including the terminal EOS of every
    /// line) whose true symbol ranks within the k lowest costs. Ties break
    /// toward the lower symbol index.
    pub fn top_k_accuracy(&self, heldout: &[String], k: usize) -> f64 {
        assert!(k >= 1, "top-k needs k >= 1");
        let eos = self.alphabet.eos();
        let mut events = 0usize;
        let mut hits = 0usize;
        for line in heldout {
            let encoded: Vec<u32> =
                line.chars().filter_map(|ch| self.alphabet.index_of(ch)).collect();
            for pos in 0..=encoded.len() {
                let target = if pos < encoded.len() { encoded[pos] } else { eos };
                let history = &encoded[..pos];
                let p = self.conditional(history);
                let target_p = p[target as usize];
                let rank = p
                    .iter()
                    .enumerate()
                    .filter(|&(sym, &q)| q > target_p || (q == target_p && (sym as u32) < target))
                    .count();
                events += 1;
                if rank < k {
                    hits += 1;
                }
            }
        }
        if events == 0 {
            0.0
        } else {
            hits as f64 / events as f64
        }
    }

    /// exp of the mean per-event cost over a corpus; the uniform model scores
    /// exactly `|A|+1`.
    pub fn perplexity(&self, corpus: &[String]) -> f64 {
        let eos = self.alphabet.eos();
        let mut events = 0usize;
        let mut total_cost = 0.0;
        for line in corpus {
            let encoded: Vec<u32> =
                line.chars().filter_map(|ch| self.alphabet.index_of(ch)).collect();
            for pos in 0..=encoded.len() {
                let target = if pos < encoded.len() { encoded[pos] } else { eos };
                let p = self.conditional(&encoded[..pos]);
                total_cost -= p[target as usize].ln();
                events += 1;
            }
        }
        if events == 0 {
            1.0
        } else {
            (total_cost / events as f64).exp()
        }
    }

    pub fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(&NGRAM_MAGIC)?;
        w.write_all(&NGRAM_VERSION.to_le_bytes())?;
        w.write_all(&(self.order as u32).to_le_bytes())?;
        w.write_all(&self.interpolation_weight.to_le_bytes())?;
        w.write_all(&(self.alphabet.size() as u32).to_le_bytes())?;
        for &ch in self.alphabet.chars() {
            w.write_all(&(ch as u32).to_le_bytes())?;
        }
        w.write_all(&(self.tables.len() as u64).to_le_bytes())?;
        for (ctx, cc) in &self.tables {
            w.write_all(&(ctx.len() as u32).to_le_bytes())?;
            for &c in ctx {
                w.write_all(&c.to_le_bytes())?;
            }
            for &count in &cc.counts {
                w.write_all(&count.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self, FileError> {
        let magic: [u8; 4] = read_exact_array(r)?;
        if magic != NGRAM_MAGIC {
            return Err(FileError::BadMagic { expected: "NGLM" });
        }
        let version = read_u16(r)?;
        if version != NGRAM_VERSION {
            return Err(FileError::Version { kind: "NGLM", got: version, expected: NGRAM_VERSION });
        }
        let order = read_u32(r)? as usize;
        if order == 0 {
            return Err(FileError::Corrupt("order must be at least 1".into()));
        }
        let interpolation_weight = read_f64(r)?;
        if !(interpolation_weight > 0.0 && interpolation_weight < 1.0) {
            return Err(FileError::Corrupt("interpolation weight outside (0,1)".into()));
        }
        let alphabet_size = read_u32(r)? as usize;
        let mut chars = Vec::with_capacity(alphabet_size);
        for _ in 0..alphabet_size {
            let raw = read_u32(r)?;
            let ch = char::from_u32(raw)
                .ok_or_else(|| FileError::Corrupt(format!("invalid scalar value {raw:#x}")))?;
            chars.push(ch);
        }
        let alphabet = Alphabet::new(chars)?;
        let width = alphabet.size() + 1;
        let n_contexts = read_u64(r)?;
        let mut tables = BTreeMap::new();
        for _ in 0..n_contexts {
            let ctx_len = read_u32(r)? as usize;
            if ctx_len >= order {
                return Err(FileError::Corrupt(format!(
                    "context length {ctx_len} not below order {order}"
                )));
            }
            let mut ctx = Vec::with_capacity(ctx_len);
            for _ in 0..ctx_len {
                let c = read_u32(r)?;
                if c as usize >= alphabet.size() {
                    return Err(FileError::Corrupt(format!("context character {c} out of range")));
                }
                ctx.push(c);
            }
            let mut counts = Vec::with_capacity(width);
            let mut total = 0u64;
            for _ in 0..width {
                let c = read_u64(r)?;
                total += c;
                counts.push(c);
            }
            if total == 0 {
                return Err(FileError::Corrupt("context table with zero events".into()));
            }
            tables.insert(ctx, ContextCounts { total, counts });
        }
        Ok(Self { order, interpolation_weight, alphabet, tables, unknown_skipped: 0 })
    }

    pub fn save(&self, path: &Path) -> Result<(), FileError> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, FileError> {
        Self::read_from(&mut BufReader::new(File::open(path)?))
    }
}

impl Scorer for NgramModel {
    fn initial_state(&self) -> ScorerState {
        ScorerState::History(Vec::new())
    }

    fn step(&self, state: &ScorerState) -> CostVector {
        let ScorerState::History(history) = state else {
            panic!("n-gram scorer got a foreign state {state:?}");
        };
        CostVector::new(self.conditional(history).into_iter().map(|p| -p.ln()).collect())
    }

    fn advance(&self, state: &ScorerState, c: u32) -> ScorerState {
        let ScorerState::History(history) = state else {
            panic!("n-gram scorer got a foreign state {state:?}");
        };
        debug_assert!((c as usize) < self.alphabet.size());
        let keep = self.order.saturating_sub(1);
        let mut next = Vec::with_capacity(keep);
        let start = (history.len() + 1).saturating_sub(keep);
        next.extend_from_slice(&history[start.min(history.len())..]);
        next.push(c);
        if next.len() > keep {
            next.drain(..next.len() - keep);
        }
        ScorerState::History(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scorers::contract::check_scorer_contract;
    use approx::assert_relative_eq;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    fn strings(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert_eq!(NgramModel::train(&[], &ab(), 2), Err(ScorerError::EmptyCorpus));
    }

    #[test]
    fn bigram_counts_interpolate_by_hand() {
        // Corpus ["ab", "ab"], |A| = 2, w = 0.4.
        // Events: a:2 b:2 EOS:2, so ML0 = 1/3 each and P0 = 1/3 each.
        // Context "a" is always followed by b: P(b|a) = 0.4*1 + 0.6/3 = 0.6,
        // P(a|a) = 0.6/3 = 0.2.
        let model = NgramModel::train(&strings(&["ab", "ab"]), &ab(), 2).unwrap();
        let p = model.conditional(&[0]);
        assert_relative_eq!(p[1], 0.6, epsilon = 1e-12);
        assert_relative_eq!(p[0], 0.2, epsilon = 1e-12);
        assert!(p[1] > p[0]);
    }

    #[test]
    fn eos_dominates_after_terminal_context() {
        // Corpus ["a"], |A| = 1: in context "a" only EOS was observed.
        // P(EOS|a) = 0.4 + 0.6 * P0(EOS); P0(EOS) = 0.4*0.5 + 0.6*0.5 = 0.5.
        let alphabet = Alphabet::new(['a']).unwrap();
        let model = NgramModel::train(&strings(&["a"]), &alphabet, 3).unwrap();
        let p = model.conditional(&[0]);
        assert_relative_eq!(p[1], 0.7, epsilon = 1e-12);
        assert_relative_eq!(p[0], 0.3, epsilon = 1e-12);
    }

    #[test]
    fn unknown_characters_are_skipped_and_counted() {
        let model = NgramModel::train(&strings(&["axb"]), &ab(), 2).unwrap();
        assert_eq!(model.unknown_skipped(), 1);
        // "axb" trains as "ab": context "a" is followed by b.
        let p = model.conditional(&[0]);
        assert!(p[1] > p[0]);
    }

    #[test]
    fn top1_follows_the_dominant_continuation() {
        let alphabet = Alphabet::new(['a']).unwrap();
        let corpus = strings(&["aaaa"]);
        let model = NgramModel::train(&corpus, &alphabet, 3).unwrap();
        // Four 'a' continuations rank first; the terminal EOS event does not.
        assert_relative_eq!(model.top_k_accuracy(&corpus, 1), 0.8, epsilon = 1e-12);
        // k = |A|+1 catches everything.
        assert_relative_eq!(model.top_k_accuracy(&corpus, 2), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn top_k_is_monotone_in_k() {
        let corpus = strings(&["abab", "aab", "b"]);
        let model = NgramModel::train(&corpus, &ab(), 3).unwrap();
        let mut prev = 0.0;
        for k in 1..=3 {
            let acc = model.top_k_accuracy(&corpus, k);
            assert!(acc >= prev);
            prev = acc;
        }
        assert_relative_eq!(model.top_k_accuracy(&corpus, 3), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn training_perplexity_beats_uniform() {
        let corpus = strings(&["abab", "abba", "aabb"]);
        let model = NgramModel::train(&corpus, &ab(), 3).unwrap();
        assert!(model.perplexity(&corpus) <= 3.0 + 1e-9);
    }

    #[test]
    fn step_costs_normalize() {
        let corpus = strings(&["ab", "ba", "abb"]);
        let model = NgramModel::train(&corpus, &ab(), 2).unwrap();
        check_scorer_contract(&model, 2, &[&[], &[0], &[1, 0], &[0, 0, 1, 1]]);
    }

    #[test]
    fn history_stays_within_order() {
        let model = NgramModel::train(&strings(&["abab"]), &ab(), 3).unwrap();
        let mut state = model.initial_state();
        for &c in &[0u32, 1, 0, 1, 0] {
            state = model.advance(&state, c);
        }
        assert_eq!(state, ScorerState::History(vec![1, 0]));
    }

    #[test]
    fn serialization_roundtrip_preserves_distributions() {
        let corpus = strings(&["abab", "bb", "a"]);
        let model = NgramModel::train(&corpus, &ab(), 3).unwrap();
        let mut buf = Vec::new();
        model.write_to(&mut buf).unwrap();
        let back = NgramModel::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back.order(), model.order());
        assert_eq!(back.alphabet().chars(), model.alphabet().chars());
        for history in [&[][..], &[0][..], &[1][..], &[0, 1][..], &[1, 1][..]] {
            assert_eq!(back.conditional(history), model.conditional(history));
        }
    }

    #[test]
    fn read_rejects_bad_magic() {
        let model = NgramModel::train(&strings(&["a"]), &Alphabet::new(['a']).unwrap(), 1).unwrap();
        let mut buf = Vec::new();
        model.write_to(&mut buf).unwrap();
        buf[0] = b'Z';
        assert!(matches!(
            NgramModel::read_from(&mut buf.as_slice()),
            Err(FileError::BadMagic { .. })
        ));
    }
}
