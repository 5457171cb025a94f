//! Shared fixtures for the criterion benchmarks.

use linedec_core::scorers::NgramModel;
use linedec_core::synth::{synth_corpus, SynthConfig};
use linedec_core::{Alphabet, ConfidenceMatrix};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub alphabet: Alphabet,
    /// (matrix, reference text) pairs.
    pub corpus: Vec<(ConfidenceMatrix, String)>,
    pub lm: NgramModel,
}

/// A seeded corpus of noisy synthetic lines plus an n-gram model trained on
/// the same text distribution.
pub fn fixture(lines: usize, seed: u64) -> Fixture {
    let alphabet = Alphabet::new("abcdefghijklmnop ".chars()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = |min: usize, max: usize| -> String {
        let len = rng.random_range(min..=max);
        (0..len)
            .map(|_| alphabet.char_at(rng.random_range(0..alphabet.size() as u32)).unwrap())
            .collect()
    };
    let texts: Vec<String> = (0..lines).map(|_| text(12, 28)).collect();
    let train: Vec<String> = (0..64).map(|_| text(8, 40)).collect();
    let cfg = SynthConfig { noise_temperature: 1.0, rng_seed: seed, ..SynthConfig::default() };
    let corpus = synth_corpus(&texts, &alphabet, &cfg).expect("alphabet covers its own draws");
    let lm = NgramModel::train(&train, &alphabet, 5).expect("non-empty corpus");
    Fixture { alphabet, corpus, lm }
}
