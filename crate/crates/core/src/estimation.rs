//! Zipf exponent estimation and law-of-abbreviation statistics on empirical
//! rank-frequency data.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coding::ProbabilityDistribution;
use crate::stats;

/// Search bracket for the MLE exponent.
pub const MLE_ALPHA_MIN: f64 = 0.05;
pub const MLE_ALPHA_MAX: f64 = 10.0;
pub const MLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimationError {
    #[error("empty-input: no tokens")]
    EmptyInput,
    #[error("window-too-small: rank window {0}:{1} needs at least two ranks")]
    WindowTooSmall(usize, usize),
    #[error("degenerate-data: {0}")]
    DegenerateData(String),
    #[error("constant-input: correlation is undefined when one side is constant")]
    ConstantInput,
    #[error("size-mismatch: {left} types vs {right} lengths")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid-table: {0}")]
    InvalidTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: usize,
    pub word: String,
    pub count: u64,
}

/// Word types by decreasing count; equal counts in lexicographic word order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFrequencyTable {
    entries: Vec<RankEntry>,
    total_tokens: u64,
}

impl RankFrequencyTable {
    /// Ranks `(word, count)` pairs. Repeated words are merged.
    pub fn from_word_counts<I>(counts: I) -> Result<Self, EstimationError>
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        let mut merged: HashMap<String, u64> = HashMap::new();
        for (word, count) in counts {
            *merged.entry(word).or_default() += count;
        }
        let mut pairs: Vec<(String, u64)> = merged.into_iter().filter(|(_, c)| *c > 0).collect();
        if pairs.is_empty() {
            return Err(EstimationError::EmptyInput);
        }
        pairs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let total_tokens = pairs.iter().map(|(_, c)| c).sum();
        let entries = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (word, count))| RankEntry {
                rank: i + 1,
                word,
                count,
            })
            .collect();
        Ok(Self {
            entries,
            total_tokens,
        })
    }

    /// Accepts already-ranked entries, checking ranks run `1, 2, ...` and counts
    /// never increase.
    pub fn from_entries(entries: Vec<RankEntry>) -> Result<Self, EstimationError> {
        if entries.is_empty() {
            return Err(EstimationError::EmptyInput);
        }
        for (i, e) in entries.iter().enumerate() {
            if e.rank != i + 1 {
                return Err(EstimationError::InvalidTable(format!(
                    "expected rank {} at row {}, found {}",
                    i + 1,
                    i + 1,
                    e.rank
                )));
            }
            if e.count == 0 {
                return Err(EstimationError::InvalidTable(format!(
                    "zero count at rank {}",
                    e.rank
                )));
            }
            if i > 0 && entries[i - 1].count < e.count {
                return Err(EstimationError::InvalidTable(format!(
                    "count rises from {} to {} at rank {}",
                    entries[i - 1].count,
                    e.count,
                    e.rank
                )));
            }
        }
        let total_tokens = entries.iter().map(|e| e.count).sum();
        Ok(Self {
            entries,
            total_tokens,
        })
    }

    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|e| e.count)
    }

    /// Empirical distribution over types.
    pub fn distribution(&self) -> ProbabilityDistribution {
        ProbabilityDistribution::from_counts(&self.counts().collect::<Vec<_>>())
            .expect("counts are positive and non-empty")
    }
}

pub fn build_rank_frequency<I, S>(tokens: I) -> Result<RankFrequencyTable, EstimationError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts: HashMap<String, u64> = HashMap::new();
    for t in tokens {
        let t = t.as_ref();
        match counts.get_mut(t) {
            Some(c) => *c += 1,
            None => {
                counts.insert(t.to_owned(), 1);
            }
        }
    }
    RankFrequencyTable::from_word_counts(counts)
}

/// Inclusive range of 1-based ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankWindow {
    pub min: usize,
    pub max: usize,
}

impl RankWindow {
    pub fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    /// Every rank of a table.
    pub fn all(table: &RankFrequencyTable) -> Self {
        Self::new(1, table.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMethod {
    Mle,
    Regression,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub method: FitMethod,
    /// The window actually used, after clipping to the table.
    pub rank_window: (usize, usize),
    pub ks_statistic: f64,
    /// Maximized log-likelihood (MLE only), up to the multinomial constant.
    pub log_likelihood: Option<f64>,
    /// The estimate sits on an edge of the search bracket (MLE) or is not
    /// positive (regression).
    pub at_boundary: bool,
    pub n_types: usize,
    pub n_tokens: u64,
}

/// Ranks and counts inside the window, clipped to the table.
fn window_slice(
    table: &RankFrequencyTable,
    window: RankWindow,
) -> Result<(usize, &[RankEntry]), EstimationError> {
    if window.min < 1 || window.max <= window.min {
        return Err(EstimationError::WindowTooSmall(window.min, window.max));
    }
    if window.min > table.len() {
        return Err(EstimationError::DegenerateData(format!(
            "window starts at rank {} but the table has {} types",
            window.min,
            table.len()
        )));
    }
    let hi = window.max.min(table.len());
    let slice = &table.entries[window.min - 1..hi];
    if slice.len() < 2 {
        return Err(EstimationError::DegenerateData(
            "all mass on one rank".into(),
        ));
    }
    Ok((window.min, slice))
}

/// Truncated-zeta log-likelihood over ranks `first..first + counts.len()`.
#[derive(Debug, Clone)]
pub struct ZetaLikelihood {
    ln_ranks: Vec<f64>,
    counts: Vec<f64>,
    weighted_ln_rank: f64,
    total: f64,
}

impl ZetaLikelihood {
    pub fn new(first_rank: usize, counts: &[f64]) -> Self {
        let ln_ranks: Vec<f64> = (0..counts.len())
            .map(|k| ((first_rank + k) as f64).ln())
            .collect();
        let weighted_ln_rank = ln_ranks.iter().zip(counts).map(|(l, c)| l * c).sum();
        Self {
            ln_ranks,
            counts: counts.to_vec(),
            weighted_ln_rank,
            total: counts.iter().sum(),
        }
    }

    pub fn log_likelihood(&self, alpha: f64) -> f64 {
        let h: f64 = self.ln_ranks.iter().map(|l| (-alpha * l).exp()).sum();
        -alpha * self.weighted_ln_rank - self.total * h.ln()
    }

    /// Model probabilities over the window for exponent `alpha`.
    pub fn model(&self, alpha: f64) -> Vec<f64> {
        let w: Vec<f64> = self.ln_ranks.iter().map(|l| (-alpha * l).exp()).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }
}

/// Maximizes a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    // the ends are not probed by the interior points
    [lo, mid, hi]
        .into_iter()
        .max_by(|a, b| f(*a).total_cmp(&f(*b)))
        .expect("non-empty")
}

/// Maximum-likelihood exponent of a truncated zeta law on the window.
pub fn fit_zipf_mle(
    table: &RankFrequencyTable,
    window: RankWindow,
) -> Result<FitResult, EstimationError> {
    let (first, slice) = window_slice(table, window)?;
    let counts: Vec<f64> = slice.iter().map(|e| e.count as f64).collect();
    let lik = ZetaLikelihood::new(first, &counts);
    let alpha = golden_section_max(
        |a| lik.log_likelihood(a),
        MLE_ALPHA_MIN,
        MLE_ALPHA_MAX,
        MLE_TOLERANCE,
    );
    let edge = 10.0 * MLE_TOLERANCE;
    Ok(FitResult {
        alpha,
        method: FitMethod::Mle,
        rank_window: (first, first + slice.len() - 1),
        ks_statistic: stats::ks_distance(&counts, &lik.model(alpha)),
        log_likelihood: Some(lik.log_likelihood(alpha)),
        at_boundary: alpha - MLE_ALPHA_MIN < edge || MLE_ALPHA_MAX - alpha < edge,
        n_types: slice.len(),
        n_tokens: slice.iter().map(|e| e.count).sum(),
    })
}

/// Exponent from the least-squares slope of `ln count` on `ln rank`.
pub fn fit_zipf_regression(
    table: &RankFrequencyTable,
    window: RankWindow,
) -> Result<FitResult, EstimationError> {
    let (first, slice) = window_slice(table, window)?;
    let xs: Vec<f64> = (0..slice.len())
        .map(|k| ((first + k) as f64).ln())
        .collect();
    let ys: Vec<f64> = slice.iter().map(|e| (e.count as f64).ln()).collect();
    let (slope, _) = stats::ols(&xs, &ys)
        .ok_or_else(|| EstimationError::DegenerateData("ranks do not vary".into()))?;
    let alpha = -slope;
    let counts: Vec<f64> = slice.iter().map(|e| e.count as f64).collect();
    let model = ZetaLikelihood::new(first, &counts).model(alpha);
    Ok(FitResult {
        alpha,
        method: FitMethod::Regression,
        rank_window: (first, first + slice.len() - 1),
        ks_statistic: stats::ks_distance(&counts, &model),
        log_likelihood: None,
        at_boundary: alpha <= 0.0,
        n_types: slice.len(),
        n_tokens: slice.iter().map(|e| e.count).sum(),
    })
}

/// KS distance between observed per-rank weights and a model pmf over the same
/// ranks. Weights need not be ranked or integral.
pub fn ks_statistic(observed: &[f64], model: &[f64]) -> f64 {
    stats::ks_distance(observed, model)
}

/// Spearman correlation between type counts and type lengths (midranks for ties).
/// Negative values mean frequent words are shorter.
pub fn length_frequency_correlation(
    table: &RankFrequencyTable,
    lengths: &[usize],
) -> Result<f64, EstimationError> {
    if table.len() != lengths.len() {
        return Err(EstimationError::SizeMismatch {
            left: table.len(),
            right: lengths.len(),
        });
    }
    let counts: Vec<f64> = table.counts().map(|c| c as f64).collect();
    let lengths: Vec<f64> = lengths.iter().map(|&l| l as f64).collect();
    stats::spearman(&counts, &lengths).ok_or(EstimationError::ConstantInput)
}

/// Draws `n_tokens` i.i.d. ranks from `dist` and tabulates them. Rank `i` of the
/// source distribution is named `t{i}`; the table re-ranks by observed count.
pub fn sample_table(
    dist: &ProbabilityDistribution,
    n_tokens: usize,
    seed: u64,
) -> Result<RankFrequencyTable, EstimationError> {
    if n_tokens == 0 {
        return Err(EstimationError::EmptyInput);
    }
    let index = WeightedIndex::new(dist.probs()).expect("validated distribution");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..n_tokens {
        counts[index.sample(&mut rng)] += 1;
    }
    RankFrequencyTable::from_word_counts(
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("t{}", i + 1), c)),
    )
}
