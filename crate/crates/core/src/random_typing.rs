//! The generalized random-typing ("monkey") model.
//!
//! A typist hits the space bar with probability `p_s` and otherwise one of `N`
//! letters uniformly at random. Words are the letter runs between spaces, and
//! words shorter than `l_0` letters are discarded. Every specific word of length
//! `l >= l_0` then has probability
//!
//! ```text
//! p(l) = p_s * ((1 - p_s) / N)^l / (1 - p_s)^l_0
//! ```
//!
//! so that `l = a * log_N p + b` with `a = 1 / log_N((1 - p_s) / N)` and
//! `b = a * log_N((1 - p_s)^l_0 / p_s)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coding::{check_alphabet_size, Alphabet, CodingError, LengthLexStrings};

/// Default cap on the number of types [`enumerate_types`] will materialize.
pub const DEFAULT_MAX_TYPES: usize = 10_000_000;

/// Tokens generated per shard. Shard `k` always covers tokens
/// `k * SHARD_TOKENS ..`, so output does not depend on the thread count.
pub const SHARD_TOKENS: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypingError {
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid-length: word length {length} is below the minimum {min_len}")]
    InvalidLength { length: usize, min_len: usize },
    #[error("resource-limit: {requested} types requested, cap is {cap}")]
    ResourceLimit { requested: usize, cap: usize },
    #[error(transparent)]
    Coding(#[from] CodingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomTypingParams {
    alphabet_size: usize,
    space_prob: f64,
    min_len: usize,
}

impl RandomTypingParams {
    pub fn new(alphabet_size: usize, space_prob: f64, min_len: usize) -> Result<Self, TypingError> {
        check_alphabet_size(alphabet_size)?;
        if !(space_prob > 0.0 && space_prob < 1.0) {
            return Err(TypingError::InvalidParameter(format!(
                "space probability must lie in (0, 1), got {space_prob}"
            )));
        }
        Ok(Self {
            alphabet_size,
            space_prob,
            min_len,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn space_prob(&self) -> f64 {
        self.space_prob
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    /// Probability that a word has exactly `length` letters.
    pub fn length_probability(&self, length: usize) -> f64 {
        if length < self.min_len {
            return 0.0;
        }
        self.space_prob * (1.0 - self.space_prob).powi((length - self.min_len) as i32)
    }

    /// Mean word length in letters, `l_0 + (1 - p_s) / p_s`.
    pub fn mean_word_length(&self) -> f64 {
        self.min_len as f64 + (1.0 - self.space_prob) / self.space_prob
    }
}

/// Natural log of the probability of one specific word of `length` letters.
pub fn ln_word_type_probability(
    length: usize,
    params: &RandomTypingParams,
) -> Result<f64, TypingError> {
    if length < params.min_len {
        return Err(TypingError::InvalidLength {
            length,
            min_len: params.min_len,
        });
    }
    let ps = params.space_prob;
    let n = params.alphabet_size as f64;
    Ok(ps.ln() + length as f64 * ((1.0 - ps) / n).ln() - params.min_len as f64 * (1.0 - ps).ln())
}

pub fn word_type_probability(
    length: usize,
    params: &RandomTypingParams,
) -> Result<f64, TypingError> {
    ln_word_type_probability(length, params).map(f64::exp)
}

/// Coefficients of the length-probability line `l = a * log_N p + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbCoefficients {
    pub a: f64,
    pub b: f64,
}

impl AbCoefficients {
    /// Length predicted for a word of probability `p`.
    pub fn length_for(&self, p: f64, alphabet_size: usize) -> f64 {
        self.length_for_ln(p.ln(), alphabet_size)
    }

    pub fn length_for_ln(&self, ln_p: f64, alphabet_size: usize) -> f64 {
        self.a * ln_p / (alphabet_size as f64).ln() + self.b
    }
}

pub fn ab_coefficients(params: &RandomTypingParams) -> AbCoefficients {
    let ps = params.space_prob;
    let ln_n = (params.alphabet_size as f64).ln();
    let a = ln_n / ((1.0 - ps) / params.alphabet_size as f64).ln();
    let b = a * (params.min_len as f64 * (1.0 - ps).ln() - ps.ln()) / ln_n;
    AbCoefficients { a, b }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeEntry {
    pub rank: usize,
    pub word: String,
    pub probability: f64,
    pub length: usize,
}

/// Word types in decreasing probability; equiprobable types (same length) in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedTypeTable {
    pub entries: Vec<TypeEntry>,
}

impl RankedTypeTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.length)
    }
}

pub fn enumerate_types(
    params: &RandomTypingParams,
    top_k: usize,
) -> Result<RankedTypeTable, TypingError> {
    enumerate_types_capped(params, top_k, DEFAULT_MAX_TYPES)
}

/// The `top_k` most probable types, refusing to build more than `cap` of them.
pub fn enumerate_types_capped(
    params: &RandomTypingParams,
    top_k: usize,
    cap: usize,
) -> Result<RankedTypeTable, TypingError> {
    if top_k < 1 {
        return Err(TypingError::InvalidParameter("top_k must be >= 1".into()));
    }
    if top_k > cap {
        return Err(TypingError::ResourceLimit {
            requested: top_k,
            cap,
        });
    }
    let alphabet = Alphabet::with_size(params.alphabet_size)?;
    let mut entries = Vec::with_capacity(top_k);
    let mut current_len = usize::MAX;
    let mut current_prob = 0.0;
    for (i, word) in LengthLexStrings::new(&alphabet, params.min_len)
        .take(top_k)
        .enumerate()
    {
        let length = word.chars().count();
        if length != current_len {
            current_len = length;
            current_prob = word_type_probability(length, params)?;
        }
        entries.push(TypeEntry {
            rank: i + 1,
            word,
            probability: current_prob,
            length,
        });
    }
    Ok(RankedTypeTable { entries })
}

/// Types one keystroke sequence into a word, retrying until it is long enough.
fn type_word<R: Rng>(rng: &mut R, params: &RandomTypingParams, alphabet: &Alphabet) -> String {
    let mut word = String::new();
    loop {
        word.clear();
        let mut len = 0;
        while !rng.gen_bool(params.space_prob) {
            word.push(alphabet.symbol(rng.gen_range(0..params.alphabet_size)));
            len += 1;
        }
        if len >= params.min_len {
            return word;
        }
    }
}

/// Draws `n_tokens` words by keystroke simulation. Deterministic for a given
/// seed; shards run in parallel on the current rayon pool.
///
/// Rejection makes the expected work per token grow like `(1 - p_s)^(-l_0)`.
pub fn sample_tokens(
    params: &RandomTypingParams,
    n_tokens: usize,
    seed: u64,
) -> Result<Vec<String>, TypingError> {
    if n_tokens < 1 {
        return Err(TypingError::InvalidParameter(
            "n_tokens must be >= 1".into(),
        ));
    }
    let alphabet = Alphabet::with_size(params.alphabet_size)?;
    let shards = n_tokens.div_ceil(SHARD_TOKENS);
    let parts: Vec<Vec<String>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = shard_rng(seed, shard);
            let len = SHARD_TOKENS.min(n_tokens - shard * SHARD_TOKENS);
            (0..len)
                .map(|_| type_word(&mut rng, params, &alphabet))
                .collect()
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// Shard generators share the master seed and differ by ChaCha stream id.
pub fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}
