mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use zipfcode::coding::{
    self, canonical_prefix_code, huffman_lengths, is_uniquely_decipherable, kraft_sum,
    mean_code_length, nonsingular_optimal_code, nonsingular_optimal_lengths, shannon_lengths,
    Alphabet, ProbabilityDistribution,
};
use zipfcode::corpus::{corpus_report, corpus_report_from_table, tokenize, TokenCounter};
use zipfcode::estimation::{
    build_rank_frequency, fit_zipf_mle, ks_statistic, length_frequency_correlation, sample_table,
    RankFrequencyTable, RankWindow,
};
use zipfcode::random_typing::{enumerate_types, sample_tokens};
use zipfcode::zipf_model::{random_typing_exponent, zipf_pmf};
use zipfcode::RandomTypingParams;

fn distribution() -> impl Strategy<Value = ProbabilityDistribution> {
    prop::collection::vec(1e-6f64..1.0, 1..60)
        .prop_map(|w| ProbabilityDistribution::from_weights(w).unwrap())
}

proptest! {
    #[test]
    fn shannon_within_one_letter_of_information(p in distribution(), n in 2usize..8) {
        let s = shannon_lengths(&p, n).unwrap();
        for (i, (&pi, &l)) in p.probs().iter().zip(s.lengths.as_slice()).enumerate() {
            if s.raised.contains(&i) {
                continue;
            }
            let info = -pi.ln() / (n as f64).ln();
            prop_assert!(l as f64 >= info - 1e-9);
            prop_assert!((l as f64) < info + 1.0 + 1e-9);
        }
    }

    #[test]
    fn shannon_lengths_satisfy_kraft(p in distribution(), n in 2usize..8) {
        prop_assume!(p.probs()[0] <= 1.0 / n as f64);
        let s = shannon_lengths(&p, n).unwrap();
        prop_assert!(!s.any_raised());
        prop_assert!(kraft_sum(&s.lengths, n) <= 1.0 + 1e-9);
    }

    #[test]
    fn optimality_chain_and_entropy_sandwich(p in distribution(), n in 2usize..6) {
        let ns = mean_code_length(&p, &nonsingular_optimal_lengths(p.len(), n).unwrap()).unwrap();
        let huff_lengths = huffman_lengths(&p, n).unwrap();
        let huff = mean_code_length(&p, &huff_lengths).unwrap();
        let shannon = mean_code_length(&p, &shannon_lengths(&p, n).unwrap().lengths).unwrap();
        prop_assert!(ns <= huff + 1e-12);
        prop_assert!(huff <= shannon + 1e-12);
        prop_assert!(kraft_sum(&huff_lengths, n) <= 1.0 + 1e-12);
        if p.len() > 1 {
            let h = p.entropy(n);
            prop_assert!(h <= huff + 1e-9);
            prop_assert!(huff < h + 1.0);
        }
    }

    #[test]
    fn huffman_code_is_uniquely_decipherable(p in distribution(), n in 2usize..5) {
        let alphabet = Alphabet::with_size(n).unwrap();
        let code = canonical_prefix_code(&huffman_lengths(&p, n).unwrap(), &alphabet).unwrap();
        prop_assert!(is_uniquely_decipherable(&code));
    }

    #[test]
    fn tokenize_is_idempotent(text in "\\PC{0,80}") {
        let once = tokenize(&text);
        prop_assert_eq!(tokenize(&once.join(" ")), once);
    }

    #[test]
    fn ks_perfect_table_beats_any_swap(alpha in 0.3f64..2.5, m in 3usize..40, i in 0usize..40, j in 0usize..40) {
        let (i, j) = (i % m, j % m);
        prop_assume!(i != j);
        let model = zipf_pmf(alpha, m).unwrap();
        let expected: Vec<f64> = model.probs().iter().map(|p| p * 1e6).collect();
        let mut swapped = expected.clone();
        swapped.swap(i, j);
        prop_assume!(swapped != expected);
        prop_assert!(ks_statistic(&expected, model.probs()) < ks_statistic(&swapped, model.probs()));
    }

    #[test]
    fn regression_scale_invariant(counts in prop::collection::vec(1u64..10_000, 3..50), c in 2u64..1000) {
        let mut counts = counts;
        counts.sort_unstable_by(|a, b| b.cmp(a));
        prop_assume!(counts.first() != counts.last());
        let t = |cs: &[u64]| RankFrequencyTable::from_word_counts(
            cs.iter().enumerate().map(|(i, &x)| (format!("w{i:03}"), x))).unwrap();
        let a = t(&counts);
        let scaled: Vec<u64> = counts.iter().map(|x| x * c).collect();
        let b = t(&scaled);
        let fa = zipfcode::estimation::fit_zipf_regression(&a, RankWindow::all(&a)).unwrap();
        let fb = zipfcode::estimation::fit_zipf_regression(&b, RankWindow::all(&b)).unwrap();
        prop_assert!((fa.alpha - fb.alpha).abs() < 1e-9);
    }
}

#[test]
fn mle_agrees_with_grid_on_small_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..12 {
        let alpha = rand::Rng::gen_range(&mut rng, 0.4..2.5);
        let m = rand::Rng::gen_range(&mut rng, 5..=100);
        let seed = rand::Rng::gen::<u64>(&mut rng);
        let t = sample_table(&zipf_pmf(alpha, m).unwrap(), 5_000, seed).unwrap();
        let fit = fit_zipf_mle(&t, RankWindow::all(&t)).unwrap();
        let counts: Vec<f64> = t.counts().map(|c| c as f64).collect();
        let grid = common::zeta_grid_scan(&counts, 0.05, 10.0, 1e-4);
        assert!((fit.alpha - grid).abs() < 1e-3, "{} vs {grid}", fit.alpha);
    }
}

#[test]
fn mle_recovers_sampled_exponent() {
    let t = sample_table(&zipf_pmf(1.2, 1000).unwrap(), 100_000, 17).unwrap();
    let fit = fit_zipf_mle(&t, RankWindow::all(&t)).unwrap();
    assert!((1.17..=1.23).contains(&fit.alpha), "{}", fit.alpha);
}

#[test]
fn mle_error_shrinks_with_sample_size() {
    let dist = zipf_pmf(1.1, 500).unwrap();
    let mean_error = |n: usize| {
        (0..10u64)
            .map(|seed| {
                let t = sample_table(&dist, n, 1000 + seed).unwrap();
                (fit_zipf_mle(&t, RankWindow::all(&t)).unwrap().alpha - 1.1).abs()
            })
            .sum::<f64>()
            / 10.0
    };
    let (small, large) = (mean_error(10_000), mean_error(1_000_000));
    assert!(large < small, "{large} !< {small}");
}

#[test]
fn nonsingular_code_matches_exhaustive_minimum() {
    for n in [2, 3] {
        let alphabet = Alphabet::with_size(n).unwrap();
        for m in 1..=20 {
            let code = nonsingular_optimal_code(m, &alphabet).unwrap();
            assert!(coding::is_nonsingular(&code));
            assert_eq!(
                code.lengths().total(),
                common::min_total_length_exhaustive(m, n)
            );
        }
    }
}

#[test]
fn sardinas_patterson_matches_factorization_search() {
    let words = common::binary_words(3);
    for set in common::subsets(&words, 4) {
        let code =
            coding::Code::new(set.iter().map(|w| common::digits_to_string(w)).collect()).unwrap();
        assert_eq!(
            is_uniquely_decipherable(&code),
            !common::has_double_factorization(&set, 2, 12),
            "{:?}",
            code.words()
        );
    }
}

#[test]
fn sampler_passes_chi_square() {
    let params = RandomTypingParams::new(2, 0.5, 1).unwrap();
    let top = enumerate_types(&params, 50).unwrap();
    let critical = ChiSquared::new(50.0).unwrap().inverse_cdf(0.999);
    for seed in [1u64, 2, 3] {
        let n = 1_000_000;
        let tokens = sample_tokens(&params, n, seed).unwrap();
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for t in &tokens {
            *counts.entry(t.as_str()).or_default() += 1;
        }
        let mut chi2 = 0.0;
        let mut covered_obs = 0u64;
        let mut covered_p = 0.0;
        for e in &top.entries {
            let obs = counts.get(e.word.as_str()).copied().unwrap_or(0);
            let exp = e.probability * n as f64;
            chi2 += (obs as f64 - exp).powi(2) / exp;
            covered_obs += obs;
            covered_p += e.probability;
        }
        let rest_exp = (1.0 - covered_p) * n as f64;
        chi2 += ((n as u64 - covered_obs) as f64 - rest_exp).powi(2) / rest_exp;
        assert!(
            chi2 < critical,
            "seed {seed}: chi2 = {chi2}, critical = {critical}"
        );
    }
}

#[test]
fn single_letter_types_lead_sampled_table() {
    let params = RandomTypingParams::new(2, 0.5, 1).unwrap();
    let t = build_rank_frequency(sample_tokens(&params, 1_000_000, 8).unwrap()).unwrap();
    let mut top: Vec<&str> = t.entries()[..2].iter().map(|e| e.word.as_str()).collect();
    top.sort_unstable();
    assert_eq!(top, ["a", "b"]);
}

#[test]
fn random_typing_table_obeys_law_of_abbreviation() {
    let params = RandomTypingParams::new(2, 0.5, 1).unwrap();
    let types = enumerate_types(&params, 100).unwrap();
    // probabilities are 4^-l, so 4^6 * p is an exact integer count
    let t = RankFrequencyTable::from_word_counts(
        types
            .entries
            .iter()
            .map(|e| (e.word.clone(), (e.probability * 4096.0).round() as u64)),
    )
    .unwrap();
    let lengths: Vec<usize> = t.entries().iter().map(|e| e.word.len()).collect();
    let rho = length_frequency_correlation(&t, &lengths).unwrap();
    assert!((rho + 1.0).abs() < 1e-12, "{rho}");
}

#[test]
fn shuffled_lengths_are_uncorrelated() {
    let t = sample_table(&zipf_pmf(1.0, 1000).unwrap(), 200_000, 4).unwrap();
    let mut lengths: Vec<usize> = (0..t.len()).map(|i| 1 + i % 9).collect();
    lengths.shuffle(&mut ChaCha8Rng::seed_from_u64(21));
    let rho = length_frequency_correlation(&t, &lengths).unwrap();
    assert!(rho.abs() < 0.1, "{rho}");
}

#[test]
fn random_typing_corpus_is_nearly_optimal() {
    let params = RandomTypingParams::new(2, 0.5, 1).unwrap();
    let tokens = sample_tokens(&params, 100_000, 31).unwrap();
    let stats = corpus_report(&tokens, Some(2)).unwrap();
    assert!(
        stats.optimality_ratio > 0.9 && stats.optimality_ratio <= 1.0,
        "{}",
        stats.optimality_ratio
    );
    assert!(stats.optimal_ns_mean_length <= stats.optimal_ud_mean_length);
    assert!((stats.actual_mean_length - params.mean_word_length()).abs() < 0.05);
}

#[test]
fn corpus_report_is_deterministic_and_bounded() {
    let text = "It was the best of times, it was the worst of times, it was the age of \
                wisdom, it was the age of foolishness, it was the epoch of belief.";
    let run = || {
        let mut c = TokenCounter::new();
        c.read(text.as_bytes()).unwrap();
        corpus_report_from_table(c.into_table().unwrap(), None).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    assert!(a.optimality_ratio > 0.0 && a.optimality_ratio <= 1.0);
    assert!(a.optimal_ns_mean_length <= a.optimal_ud_mean_length);
}

#[test]
fn exponent_is_negative_reciprocal_of_slope_coefficient() {
    for (n, ps) in [(2, 0.5), (5, 0.2), (26, 0.18), (3, 0.01)] {
        let params = RandomTypingParams::new(n, ps, 1).unwrap();
        let a = zipfcode::random_typing::ab_coefficients(&params).a;
        assert!((random_typing_exponent(n, ps).unwrap() + 1.0 / a).abs() < 1e-12);
    }
}
