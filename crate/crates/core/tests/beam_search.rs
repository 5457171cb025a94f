//! Beam-search behaviour against exhaustive scoring and its own invariants.

use linedec_core::alphabet::{Alphabet, Transcript};
use linedec_core::beam::{beam_decode, DecodeConfig, DecodeResult};
use linedec_core::ctc;
use linedec_core::matrix::ConfidenceMatrix;
use linedec_core::scorers::{NgramModel, Scorer, TeacherScorer, UniformScorer};
use linedec_core::synth::{random_matrix, synth_matrix, SynthConfig};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn test_alphabet(size: usize) -> Alphabet {
    Alphabet::new("abc".chars().take(size)).unwrap()
}

fn random_text(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> Transcript {
    let len = rng.random_range(0..=max_len);
    Transcript::new((0..len).map(|_| rng.random_range(0..alphabet.size() as u32)).collect())
}

/// Replays a scorer over a transcript plus its EOS step.
fn replay_cost(scorer: &dyn Scorer, y: &[u32], eos: u32) -> f64 {
    let mut state = scorer.initial_state();
    let mut cost = 0.0;
    for &c in y {
        cost += scorer.step(&state).get(c);
        state = scorer.advance(&state, c);
    }
    cost + scorer.step(&state).get(eos)
}

fn weighted(w: f64, cost: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * cost
    }
}

/// Total cost of one complete transcript under the fusion weights, computed
/// from the label-major forward algorithm and scorer replays — a route
/// independent of the incremental search.
fn exhaustive_cost(
    m: &ConfidenceMatrix,
    decoder: &dyn Scorer,
    lm: Option<&dyn Scorer>,
    cfg: &DecodeConfig,
    y: &[u32],
) -> f64 {
    let eos = m.alphabet_size() as u32;
    let ctc_cost = ctc::neg_log_likelihood(m, &Transcript::from(y));
    let ce_cost = replay_cost(decoder, y, eos);
    let lm_cost = lm.map(|l| replay_cost(l, y, eos)).unwrap_or(0.0);
    weighted(cfg.lambda_ctc, ctc_cost) + weighted(1.0 - cfg.lambda_ctc, ce_cost)
        + weighted(cfg.lambda_lm, lm_cost)
}

/// Argmin of the exhaustive cost over every transcript up to max_len, with
/// the search's tie-break (cost, then length, then lexicographic).
fn exhaustive_argmin(
    m: &ConfidenceMatrix,
    decoder: &dyn Scorer,
    lm: Option<&dyn Scorer>,
    cfg: &DecodeConfig,
    max_len: usize,
) -> (Vec<u32>, f64) {
    let chars = m.alphabet_size() as u32;
    let mut best: Option<(Vec<u32>, f64)> = None;
    let mut frontier: Vec<Vec<u32>> = vec![vec![]];
    for len in 0..=max_len {
        for y in &frontier {
            let cost = exhaustive_cost(m, decoder, lm, cfg, y);
            if cost.is_finite() {
                let better = match &best {
                    None => true,
                    Some((by, bc)) => {
                        cost < *bc || (cost == *bc && (y.len(), y) < (by.len(), by))
                    }
                };
                if better {
                    best = Some((y.clone(), cost));
                }
            }
        }
        if len < max_len {
            frontier = frontier
                .iter()
                .flat_map(|y| {
                    (0..chars).map(move |c| {
                        let mut e = y.clone();
                        e.push(c);
                        e
                    })
                })
                .collect();
        }
    }
    best.expect("some transcript is always reachable on positive matrices")
}

fn small_lm(alphabet: &Alphabet, seed: u64) -> NgramModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus: Vec<String> = (0..8)
        .map(|_| {
            let t = random_text(&mut rng, alphabet, 5);
            alphabet.decode(&t)
        })
        .collect();
    NgramModel::train(&corpus, alphabet, 3).unwrap()
}

#[test]
fn beam_matches_exhaustive_argmin_without_pruning() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    for round in 0..12 {
        let alphabet_size = rng.random_range(1..=3usize);
        let frames = rng.random_range(1..=5usize);
        let alphabet = test_alphabet(alphabet_size);
        let m = random_matrix(frames, alphabet_size, 9000 + round);
        let max_len = 4.min(frames);
        let reference = random_text(&mut rng, &alphabet, max_len);
        let teacher = TeacherScorer::new(reference, alphabet_size, 0.8).unwrap();
        let lm = small_lm(&alphabet, 500 + round);

        for lambda_ctc in [0.0, 0.3, 1.0] {
            for (lambda_lm, use_lm) in [(0.0, false), (0.5, true)] {
                let cfg = DecodeConfig {
                    lambda_ctc,
                    lambda_lm,
                    n_beams: 200,
                    pre_beam_factor: None,
                    max_len: Some(max_len),
                    keep_all_finished: true,
                };
                let lm_ref: Option<&dyn Scorer> = if use_lm { Some(&lm) } else { None };
                let result = beam_decode(&m, &teacher, lm_ref, &cfg).unwrap();
                let (expected, expected_cost) =
                    exhaustive_argmin(&m, &teacher, lm_ref, &cfg, max_len);
                assert_eq!(
                    result.best().prefix.as_slice(),
                    &expected[..],
                    "argmin mismatch (λ_ctc={lambda_ctc}, λ_lm={lambda_lm}, round {round})"
                );
                assert!(
                    (result.best().total_cost - expected_cost).abs() <= 1e-9,
                    "cost mismatch: {} vs {}",
                    result.best().total_cost,
                    expected_cost
                );
                checked += 1;
            }
        }
    }
    assert!(checked >= 50, "exercised {checked} configurations");
}

#[test]
fn pure_ctc_beam_finds_most_likely_transcript() {
    // λ_ctc = 1: the winner is the exhaustive argmax of the forward score.
    for seed in 0..10u64 {
        let alphabet_size = 2;
        let m = random_matrix(4, alphabet_size, 4000 + seed);
        let teacher =
            TeacherScorer::new(Transcript::new(vec![0]), alphabet_size, 0.9).unwrap();
        let cfg = DecodeConfig {
            lambda_ctc: 1.0,
            lambda_lm: 0.0,
            n_beams: 200,
            pre_beam_factor: None,
            max_len: Some(4),
            keep_all_finished: true,
        };
        let result = beam_decode(&m, &teacher, None, &cfg).unwrap();

        let mut best: Option<(Vec<u32>, f64)> = None;
        let mut stack = vec![vec![]];
        while let Some(y) = stack.pop() {
            let cost = ctc::neg_log_likelihood(&m, &Transcript::new(y.clone()));
            if cost.is_finite() {
                let better = match &best {
                    None => true,
                    Some((by, bc)) => {
                        cost < *bc || (cost == *bc && (y.len(), &y) < (by.len(), by))
                    }
                };
                if better {
                    best = Some((y.clone(), cost));
                }
            }
            if y.len() < 4 {
                for c in 0..alphabet_size as u32 {
                    let mut e = y.clone();
                    e.push(c);
                    stack.push(e);
                }
            }
        }
        assert_eq!(result.best().prefix.as_slice(), &best.unwrap().0[..], "seed {seed}");
    }
}

#[test]
fn disabling_pre_beam_is_neutral_when_candidates_fit() {
    // ceil(1.5 * n_beams) >= |A| + 1 skips pruning, so results match the
    // pruning-off run bit for bit.
    let alphabet = test_alphabet(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..20 {
        let text = random_text(&mut rng, &alphabet, 6);
        let s_cfg = SynthConfig {
            noise_temperature: 1.0,
            rng_seed: 600 + round,
            ..SynthConfig::default()
        };
        let m = synth_matrix(&text, &alphabet, &s_cfg);
        let teacher = TeacherScorer::new(text.clone(), alphabet.size(), 0.8).unwrap();
        let on = DecodeConfig {
            n_beams: 3,
            pre_beam_factor: Some(1.5),
            ..DecodeConfig::default()
        };
        let off = DecodeConfig { pre_beam_factor: None, ..on.clone() };
        let a = beam_decode(&m, &teacher, None, &on).unwrap();
        let b = beam_decode(&m, &teacher, None, &off).unwrap();
        assert_eq!(a.n_best.len(), b.n_best.len());
        for (x, y) in a.n_best.iter().zip(&b.n_best) {
            assert_eq!(x.prefix, y.prefix);
            assert_eq!(x.total_cost.to_bits(), y.total_cost.to_bits());
        }
    }
}

#[test]
fn wider_beams_never_worsen_the_best_cost() {
    let alphabet = test_alphabet(3);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for round in 0..10 {
        let m = random_matrix(5, alphabet.size(), 7100 + round);
        let reference = random_text(&mut rng, &alphabet, 4);
        let teacher = TeacherScorer::new(reference, alphabet.size(), 0.7).unwrap();
        let mut prev_best = f64::INFINITY;
        for n_beams in [1usize, 2, 4, 8, 16, 64] {
            let cfg = DecodeConfig {
                n_beams,
                pre_beam_factor: None,
                max_len: Some(4),
                ..DecodeConfig::default()
            };
            let result = beam_decode(&m, &teacher, None, &cfg).unwrap();
            assert!(
                result.best().total_cost <= prev_best + 1e-12,
                "cost grew from {prev_best} at n_beams={n_beams}"
            );
            prev_best = result.best().total_cost;
        }
    }
}

#[test]
fn replaying_winners_reproduces_component_costs() {
    let alphabet = test_alphabet(3);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..10 {
        let text = random_text(&mut rng, &alphabet, 5);
        let s_cfg = SynthConfig {
            noise_temperature: 0.8,
            rng_seed: 880 + round,
            ..SynthConfig::default()
        };
        let m = synth_matrix(&text, &alphabet, &s_cfg);
        let teacher = TeacherScorer::new(text.clone(), alphabet.size(), 0.8).unwrap();
        let lm = small_lm(&alphabet, 40 + round);
        let cfg = DecodeConfig { lambda_lm: 0.4, n_beams: 4, ..DecodeConfig::default() };
        let result = beam_decode(&m, &teacher, Some(&lm), &cfg).unwrap();
        let eos = alphabet.eos();
        for hyp in &result.n_best {
            let y = hyp.prefix.as_slice();
            assert!((replay_cost(&teacher, y, eos) - hyp.ce_cost).abs() <= 1e-9);
            assert!((replay_cost(&lm, y, eos) - hyp.lm_cost).abs() <= 1e-9);
            let mut state = linedec_core::PrefixScorerState::init(&m);
            let mut ctc_cost = 0.0;
            for &c in y {
                let (next, delta) = state.extend(c, &m);
                state = next;
                ctc_cost += delta;
            }
            ctc_cost += state.eos_cost();
            assert!((ctc_cost - hyp.ctc_cost).abs() <= 1e-9);
        }
    }
}

#[test]
fn nbest_is_sorted_and_deduplicated() {
    let alphabet = test_alphabet(2);
    let text = alphabet.encode("abab").unwrap();
    let s_cfg = SynthConfig { noise_temperature: 1.2, rng_seed: 5, ..SynthConfig::default() };
    let m = synth_matrix(&text, &alphabet, &s_cfg);
    let teacher = TeacherScorer::new(text, alphabet.size(), 0.8).unwrap();
    let cfg = DecodeConfig { n_beams: 6, keep_all_finished: true, ..DecodeConfig::default() };
    let result: DecodeResult = beam_decode(&m, &teacher, None, &cfg).unwrap();
    for pair in result.n_best.windows(2) {
        assert!(pair[0].total_cost <= pair[1].total_cost);
        assert_ne!(pair[0].prefix, pair[1].prefix, "duplicate finished transcript");
    }
    assert!(result.n_best.iter().all(|h| h.finished));
    assert_eq!(result.best().prefix, result.n_best[0].prefix);
}

#[test]
fn stats_count_prefix_evaluations_within_pre_beam_budget() {
    let alphabet = test_alphabet(3);
    let text = alphabet.encode("abcabc").unwrap();
    let m = synth_matrix(&text, &alphabet, &SynthConfig::default());
    let teacher = TeacherScorer::new(text, alphabet.size(), 0.9).unwrap();
    let cfg = DecodeConfig { n_beams: 2, pre_beam_factor: Some(1.5), ..DecodeConfig::default() };
    let result = beam_decode(&m, &teacher, None, &cfg).unwrap();
    let budget = (1.5f64 * cfg.n_beams as f64).ceil() as usize;
    assert!(result.stats.prefix_evals <= budget * result.stats.expanded);
    assert!(result.stats.steps > 0);
}
