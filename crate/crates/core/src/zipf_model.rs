//! Theoretical exponents and the coding derivation of `p_i ~ i^-alpha`.
//!
//! Optimal uniquely decipherable coding gives `l_i ~ -log_N p_i`; optimal
//! non-singular coding gives `l_i ~ log_N((N-1)/N * i)`. Equating the two yields
//! `p_i ~ N / ((N-1) i)`, Zipf's law with `alpha = 1`. Random typing instead gives
//! `alpha = 1 - log_N(1 - p_s) > 1`, and coding the two schemes over alphabets of
//! different sizes `N`, `N'` gives `alpha = log_N N'`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coding::{
    check_alphabet_size, nonsingular_length_at_rank, CodingError, ProbabilityDistribution,
};
use crate::stats::OlsAccumulator;

/// Largest rank [`verify_derivation`] will walk.
pub const MAX_DERIVATION_RANK: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Coding(#[from] CodingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionSource {
    OptimalCoding,
    RandomTyping,
    MixedAlphabet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipfPrediction {
    pub alpha: f64,
    pub source: PredictionSource,
}

impl ZipfPrediction {
    pub fn optimal_coding() -> Self {
        Self {
            alpha: 1.0,
            source: PredictionSource::OptimalCoding,
        }
    }

    pub fn random_typing(alphabet_size: usize, space_prob: f64) -> Result<Self, ModelError> {
        Ok(Self {
            alpha: random_typing_exponent(alphabet_size, space_prob)?,
            source: PredictionSource::RandomTyping,
        })
    }

    pub fn mixed_alphabet(
        nonsingular_size: usize,
        decipherable_size: usize,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            alpha: mixed_alphabet_exponent(nonsingular_size, decipherable_size)?,
            source: PredictionSource::MixedAlphabet,
        })
    }
}

/// Unnormalized `p_i = N / ((N - 1) i)`. Only meaningful for large ranks, and not
/// summable: the harmonic series diverges.
pub fn combined_rank_probability(rank: u64, alphabet_size: usize) -> f64 {
    let n = alphabet_size as f64;
    n / ((n - 1.0) * rank as f64)
}

/// `1 - log_N(1 - p_s)`.
pub fn random_typing_exponent(alphabet_size: usize, space_prob: f64) -> Result<f64, ModelError> {
    check_alphabet_size(alphabet_size)?;
    if !(space_prob > 0.0 && space_prob < 1.0) {
        return Err(ModelError::InvalidParameter(format!(
            "space probability must lie in (0, 1), got {space_prob}"
        )));
    }
    Ok(1.0 - (1.0 - space_prob).ln() / (alphabet_size as f64).ln())
}

/// `log_N N'`, where `N` letters serve the non-singular scheme and `N'` the
/// uniquely decipherable one.
pub fn mixed_alphabet_exponent(
    nonsingular_size: usize,
    decipherable_size: usize,
) -> Result<f64, ModelError> {
    check_alphabet_size(nonsingular_size)?;
    check_alphabet_size(decipherable_size)?;
    if nonsingular_size == decipherable_size {
        return Ok(1.0);
    }
    Ok((decipherable_size as f64).ln() / (nonsingular_size as f64).ln())
}

/// `p_i = i^-alpha / H(M, alpha)` for `i = 1..=M`.
pub fn zipf_pmf(alpha: f64, vocab: usize) -> Result<ProbabilityDistribution, ModelError> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(ModelError::InvalidParameter(format!(
            "exponent must be finite and non-negative, got {alpha}"
        )));
    }
    if vocab < 1 {
        return Err(ModelError::InvalidParameter(
            "vocabulary size must be >= 1".into(),
        ));
    }
    let weights: Vec<f64> = (1..=vocab).map(|i| (i as f64).powf(-alpha)).collect();
    let total: f64 = weights.iter().sum();
    Ok(ProbabilityDistribution::new(
        weights.into_iter().map(|w| w / total).collect(),
    )?)
}

/// `l_i - log_N((N-1)/N * i)`: how far the exact non-singular length sits above
/// its large-rank approximation.
pub fn approximation_residual(rank: u64, alphabet_size: usize) -> f64 {
    let n = alphabet_size as f64;
    let exact = nonsingular_length_at_rank(rank, alphabet_size as u64);
    f64::from(exact) - ((n - 1.0) / n * rank as f64).ln() / n.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecadeSlope {
    pub rank_min: u64,
    pub rank_max: u64,
    /// Least squares over every rank in the decade; `None` with fewer than two ranks.
    pub slope: Option<f64>,
}

/// Outcome of walking the coding derivation over a window of ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationReport {
    #[serde(rename = "N")]
    pub alphabet_size: usize,
    pub rank_min: u64,
    pub rank_max: u64,
    /// Log-log slope of `p = N^-l` against rank, fitted through the first rank of
    /// every code length inside the window. `None` when fewer than two such ranks
    /// exist.
    pub slope: Option<f64>,
    pub degenerate: bool,
    pub onset_ranks: Vec<u64>,
    /// Least squares over every rank of the window, one point per rank.
    pub rank_ols_slope: Option<f64>,
    pub max_abs_residual: f64,
    pub max_residual_rank: u64,
    pub per_decade_slopes: Vec<DecadeSlope>,
}

impl DerivationReport {
    pub fn slope_deviation(&self) -> Option<f64> {
        self.slope.map(|s| (s + 1.0).abs())
    }
}

/// First rank that receives a code of `len` letters: `1 + N + ... + N^(len-1)`.
fn onset_rank(len: u32, n: u64) -> Option<u64> {
    let mut rank: u64 = 1;
    let mut level: u64 = 1;
    for _ in 1..len {
        level = level.checked_mul(n)?;
        rank = rank.checked_add(level)?;
    }
    Some(rank)
}

/// For each rank in `[rank_min, rank_max]`: take the exact optimal non-singular
/// length, invert the optimal decipherable relation (`p = N^-l`) and fit the
/// log-log slope, which the derivation predicts to be `-1`.
///
/// The length staircase is flat between onsets, so a fit weighted by every rank
/// mostly measures where the window cuts the last step. The headline slope is
/// therefore fitted through the step onsets; the per-rank fit is reported beside
/// it as `rank_ols_slope`.
pub fn verify_derivation(
    alphabet_size: usize,
    rank_min: u64,
    rank_max: u64,
) -> Result<DerivationReport, ModelError> {
    check_alphabet_size(alphabet_size)?;
    if rank_min < 1 || rank_min > rank_max || rank_max > MAX_DERIVATION_RANK {
        return Err(ModelError::InvalidParameter(format!(
            "rank range {rank_min}:{rank_max} must satisfy 1 <= min <= max <= {MAX_DERIVATION_RANK}"
        )));
    }
    let n = alphabet_size as u64;
    let ln_n = (alphabet_size as f64).ln();

    let mut all = OlsAccumulator::default();
    let mut decades: Vec<(u64, u64, OlsAccumulator)> = Vec::new();
    let mut max_abs_residual = f64::NEG_INFINITY;
    let mut max_residual_rank = rank_min;

    let mut len = nonsingular_length_at_rank(rank_min, n);
    let mut next_onset = onset_rank(len + 1, n).unwrap_or(u64::MAX);
    let mut decade_end = 0;
    for rank in rank_min..=rank_max {
        if rank >= next_onset {
            len += 1;
            next_onset = onset_rank(len + 1, n).unwrap_or(u64::MAX);
        }
        let x = (rank as f64).ln();
        let y = -f64::from(len) * ln_n;
        all.push(x, y);

        if rank > decade_end {
            let mut lo = 1u64;
            while lo.saturating_mul(10) <= rank {
                lo *= 10;
            }
            decade_end = (lo * 10 - 1).min(rank_max);
            decades.push((rank, decade_end, OlsAccumulator::default()));
        }
        decades.last_mut().expect("pushed above").2.push(x, y);

        let r = approximation_residual(rank, alphabet_size).abs();
        if r > max_abs_residual {
            max_abs_residual = r;
            max_residual_rank = rank;
        }
    }

    let onset_ranks: Vec<u64> = (1u32..)
        .map_while(|l| onset_rank(l, n))
        .take_while(|&r| r <= rank_max)
        .filter(|&r| r >= rank_min)
        .collect();
    let mut onsets = OlsAccumulator::default();
    for &r in &onset_ranks {
        let l = nonsingular_length_at_rank(r, n);
        onsets.push((r as f64).ln(), -f64::from(l) * ln_n);
    }
    let slope = onsets.fit().map(|(s, _)| s);

    Ok(DerivationReport {
        alphabet_size,
        rank_min,
        rank_max,
        slope,
        degenerate: slope.is_none(),
        onset_ranks,
        rank_ols_slope: all.fit().map(|(s, _)| s),
        max_abs_residual,
        max_residual_rank,
        per_decade_slopes: decades
            .into_iter()
            .map(|(lo, hi, acc)| DecadeSlope {
                rank_min: lo,
                rank_max: hi,
                slope: acc.fit().map(|(s, _)| s),
            })
            .collect(),
    })
}
