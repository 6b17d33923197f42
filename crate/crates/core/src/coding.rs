//! Optimal non-singular and uniquely decipherable codes over an N-letter alphabet.
//!
//! Two coding schemes are built here:
//!
//! - **Non-singular**: every word type gets a distinct non-empty string. The optimum
//!   hands out the shortest strings first, so rank `i` receives length
//!   `ceil(log_N((N-1)/N * i + 1))`.
//! - **Uniquely decipherable**: any concatenation of codewords factors in exactly one
//!   way. Shannon lengths `ceil(-log_N p_i)` are the textbook near-optimum and the
//!   N-ary Huffman construction is the exact optimum.
//!
//! The cost being minimized throughout is the mean code length `sum_i p_i * l_i`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `|sum(p) - 1|` accepted before renormalizing.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// Distance from an integer below which `-log_N p` is treated as that integer.
const LOG_SNAP_TOLERANCE: f64 = 1e-9;

const DEFAULT_GLYPHS: &str = "abcdefghijklmnopqrstuvwxyz0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodingError {
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid-distribution: {0}")]
    InvalidDistribution(String),
    #[error("size-mismatch: {left} probabilities vs {right} lengths")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid-code: {0}")]
    InvalidCode(String),
    #[error("kraft-violation: sum of N^-l is {0} > 1, no prefix code has these lengths")]
    KraftViolation(f64),
}

/// An ordered set of `N >= 2` distinct letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, CodingError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.len() < 2 {
            return Err(CodingError::InvalidParameter(format!(
                "alphabet needs at least 2 letters, got {}",
                symbols.len()
            )));
        }
        let mut seen = HashSet::with_capacity(symbols.len());
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(CodingError::InvalidParameter(format!(
                    "duplicate alphabet symbol {c:?}"
                )));
            }
        }
        Ok(Self { symbols })
    }

    /// The first `n` glyphs of `a-z`, then `0-9`, then `A-Z`.
    pub fn with_size(n: usize) -> Result<Self, CodingError> {
        check_alphabet_size(n)?;
        let available = DEFAULT_GLYPHS.chars().count();
        if n > available {
            return Err(CodingError::InvalidParameter(format!(
                "no default glyphs for N = {n} (at most {available}); supply symbols explicitly"
            )));
        }
        Self::new(DEFAULT_GLYPHS.chars().take(n))
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }
}

pub(crate) fn check_alphabet_size(n: usize) -> Result<(), CodingError> {
    if n < 2 {
        Err(CodingError::InvalidParameter(format!(
            "alphabet size must be >= 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Ranked word-type probabilities `p_1 >= p_2 >= ... > 0` summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Validates and renormalizes. Sums further than `PROBABILITY_SUM_TOLERANCE`
    /// from one are rejected.
    pub fn new(probs: Vec<f64>) -> Result<Self, CodingError> {
        if probs.is_empty() {
            return Err(CodingError::InvalidDistribution(
                "distribution is empty".into(),
            ));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(p.is_finite() && p > 0.0) {
                return Err(CodingError::InvalidDistribution(format!(
                    "p_{} = {p} is not a positive finite number",
                    i + 1
                )));
            }
        }
        if let Some(i) = probs.windows(2).position(|w| w[0] < w[1]) {
            return Err(CodingError::InvalidDistribution(format!(
                "not ranked: p_{} = {} < p_{} = {}",
                i + 1,
                probs[i],
                i + 2,
                probs[i + 1]
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(CodingError::InvalidDistribution(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self {
            probs: probs.into_iter().map(|p| p / sum).collect(),
        })
    }

    /// Normalizes raw counts after sorting them in decreasing order.
    pub fn from_counts(counts: &[u64]) -> Result<Self, CodingError> {
        if counts.contains(&0) {
            return Err(CodingError::InvalidDistribution(
                "counts must be positive".into(),
            ));
        }
        Self::from_weights(counts.iter().map(|&c| c as f64).collect())
    }

    /// Normalizes arbitrary positive weights after sorting them in decreasing order.
    pub fn from_weights(mut weights: Vec<f64>) -> Result<Self, CodingError> {
        if weights.is_empty() {
            return Err(CodingError::InvalidDistribution(
                "distribution is empty".into(),
            ));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(CodingError::InvalidDistribution(
                "weights must be positive and finite".into(),
            ));
        }
        weights.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = weights.iter().sum();
        Ok(Self {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Entropy in base `n`.
    pub fn entropy(&self, n: usize) -> f64 {
        let ln_n = (n as f64).ln();
        -self.probs.iter().map(|&p| p * p.ln()).sum::<f64>() / ln_n
    }
}

/// Code lengths `l_1 ... l_M`, in letters, all at least one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeLengths(Vec<u32>);

impl CodeLengths {
    pub fn new(lengths: Vec<u32>) -> Result<Self, CodingError> {
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return Err(CodingError::InvalidCode(format!(
                "length at rank {} is zero",
                i + 1
            )));
        }
        Ok(Self(lengths))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&l| u64::from(l)).sum()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

/// Strings assigned to word types; position `i` holds the string of the `i+1`-th
/// most probable type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    words: Vec<String>,
}

impl Code {
    pub fn new(words: Vec<String>) -> Result<Self, CodingError> {
        if let Some(i) = words.iter().position(String::is_empty) {
            return Err(CodingError::InvalidCode(format!(
                "codeword at rank {} is empty",
                i + 1
            )));
        }
        Ok(Self { words })
    }

    /// Like [`Code::new`], additionally requiring every letter to be in `alphabet`.
    pub fn over(alphabet: &Alphabet, words: Vec<String>) -> Result<Self, CodingError> {
        for (i, w) in words.iter().enumerate() {
            if let Some(c) = w.chars().find(|&c| !alphabet.contains(c)) {
                return Err(CodingError::InvalidCode(format!(
                    "codeword {w:?} at rank {} uses {c:?}, not in the alphabet",
                    i + 1
                )));
            }
        }
        Self::new(words)
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn lengths(&self) -> CodeLengths {
        CodeLengths(
            self.words
                .iter()
                .map(|w| w.chars().count() as u32)
                .collect(),
        )
    }
}

/// Strings over an alphabet in length-then-lexicographic order, starting at
/// `min_len` letters. `min_len = 0` yields the empty string first.
#[derive(Debug, Clone)]
pub struct LengthLexStrings<'a> {
    alphabet: &'a Alphabet,
    digits: Vec<usize>,
    started: bool,
}

impl<'a> LengthLexStrings<'a> {
    pub fn new(alphabet: &'a Alphabet, min_len: usize) -> Self {
        Self {
            alphabet,
            digits: vec![0; min_len],
            started: false,
        }
    }

    fn advance(&mut self) {
        let n = self.alphabet.size();
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < n {
                return;
            }
            *d = 0;
        }
        // every position wrapped: move on to the next length
        self.digits.push(0);
    }
}

impl Iterator for LengthLexStrings<'_> {
    type Item = String;

    fn next(&mut self) -> Option<String> {
        if self.started {
            self.advance();
        }
        self.started = true;
        Some(
            self.digits
                .iter()
                .map(|&d| self.alphabet.symbol(d))
                .collect(),
        )
    }
}

/// Length of the `rank`-th shortest distinct non-empty string over `n` letters:
/// the smallest `l` with `n + n^2 + ... + n^l >= rank`.
pub fn nonsingular_length_at_rank(rank: u64, n: u64) -> u32 {
    debug_assert!(rank >= 1 && n >= 2);
    let n = u128::from(n);
    let rank = u128::from(rank);
    let mut level = n;
    let mut covered = n;
    let mut len = 1;
    while covered < rank {
        level *= n;
        covered += level;
        len += 1;
    }
    len
}

/// Optimal non-singular code lengths for `m` ranked types over `n` letters.
pub fn nonsingular_optimal_lengths(m: usize, n: usize) -> Result<CodeLengths, CodingError> {
    check_alphabet_size(n)?;
    if m < 1 {
        return Err(CodingError::InvalidParameter(
            "vocabulary size must be >= 1".into(),
        ));
    }
    // Fill each length level (n^l strings) before moving to the next.
    let mut lengths = Vec::with_capacity(m);
    let mut len = 1u32;
    let mut level = n as u128;
    while lengths.len() < m {
        let take = level.min((m - lengths.len()) as u128) as usize;
        lengths.extend(std::iter::repeat_n(len, take));
        len += 1;
        level = level.saturating_mul(n as u128);
    }
    Ok(CodeLengths(lengths))
}

/// The first `m` distinct non-empty strings in length-lex order.
pub fn nonsingular_optimal_code(m: usize, alphabet: &Alphabet) -> Result<Code, CodingError> {
    if m < 1 {
        return Err(CodingError::InvalidParameter(
            "vocabulary size must be >= 1".into(),
        ));
    }
    Ok(Code {
        words: LengthLexStrings::new(alphabet, 1).take(m).collect(),
    })
}

/// Shannon code lengths together with the ranks (0-based) whose computed length
/// of zero was raised to one letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShannonLengths {
    pub lengths: CodeLengths,
    pub raised: Vec<usize>,
}

impl ShannonLengths {
    pub fn any_raised(&self) -> bool {
        !self.raised.is_empty()
    }
}

/// `ceil(-log_N p)`; values within `LOG_SNAP_TOLERANCE` of an integer snap to it so
/// that dyadic (N-adic) probabilities get their exact lengths.
pub fn shannon_length(p: f64, n: usize) -> u32 {
    let x = -p.ln() / (n as f64).ln();
    let nearest = x.round();
    let l = if (x - nearest).abs() <= LOG_SNAP_TOLERANCE {
        nearest
    } else {
        x.ceil()
    };
    l.max(0.0) as u32
}

pub fn shannon_lengths(
    p: &ProbabilityDistribution,
    n: usize,
) -> Result<ShannonLengths, CodingError> {
    check_alphabet_size(n)?;
    let mut raised = Vec::new();
    let lengths = p
        .probs()
        .iter()
        .enumerate()
        .map(|(i, &pi)| match shannon_length(pi, n) {
            0 => {
                raised.push(i);
                1
            }
            l => l,
        })
        .collect();
    Ok(ShannonLengths {
        lengths: CodeLengths(lengths),
        raised,
    })
}

#[derive(Debug, Clone, Copy)]
struct QueueEntry {
    weight: f64,
    seq: usize,
    node: usize,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    // Reversed so that BinaryHeap pops the lightest, earliest-inserted entry.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .total_cmp(&self.weight)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Codeword lengths of an optimal `n`-ary prefix code (Huffman).
///
/// Zero-weight dummy leaves pad the tree so that every merge takes exactly `n`
/// nodes. A single-type vocabulary gets one letter.
pub fn huffman_lengths(p: &ProbabilityDistribution, n: usize) -> Result<CodeLengths, CodingError> {
    check_alphabet_size(n)?;
    let m = p.len();
    if m == 1 {
        return Ok(CodeLengths(vec![1]));
    }
    let dummies = (n - 1 - (m - 1) % (n - 1)) % (n - 1);
    let leaves = m + dummies;

    let mut parent: Vec<usize> = Vec::with_capacity(2 * leaves);
    let mut heap = BinaryHeap::with_capacity(leaves);
    for (i, &w) in p
        .probs()
        .iter()
        .chain(std::iter::repeat_n(&0.0, dummies))
        .enumerate()
    {
        parent.push(usize::MAX);
        heap.push(QueueEntry {
            weight: w,
            seq: i,
            node: i,
        });
    }
    let mut seq = leaves;
    while heap.len() > 1 {
        let node = parent.len();
        parent.push(usize::MAX);
        let mut weight = 0.0;
        for _ in 0..n {
            let e = heap.pop().expect("padding guarantees n nodes per merge");
            parent[e.node] = node;
            weight += e.weight;
        }
        heap.push(QueueEntry { weight, seq, node });
        seq += 1;
    }

    // Parents are always created after their children, so a reverse sweep sees
    // every parent's depth before its children's.
    let mut depth = vec![0u32; parent.len()];
    for v in (0..parent.len()).rev() {
        if parent[v] != usize::MAX {
            depth[v] = depth[parent[v]] + 1;
        }
    }
    Ok(CodeLengths(depth[..m].to_vec()))
}

/// `sum_i n^(-l_i)`.
pub fn kraft_sum(lengths: &CodeLengths, n: usize) -> f64 {
    let base = 1.0 / n as f64;
    lengths
        .as_slice()
        .iter()
        .map(|&l| base.powi(l.min(i32::MAX as u32) as i32))
        .sum()
}

/// Mean code length `sum_i p_i * l_i`, in letters per token.
pub fn mean_code_length(
    p: &ProbabilityDistribution,
    lengths: &CodeLengths,
) -> Result<f64, CodingError> {
    if p.len() != lengths.len() {
        return Err(CodingError::SizeMismatch {
            left: p.len(),
            right: lengths.len(),
        });
    }
    Ok(p.probs()
        .iter()
        .zip(lengths.as_slice())
        .map(|(&pi, &li)| pi * f64::from(li))
        .sum())
}

pub fn is_nonsingular(code: &Code) -> bool {
    let mut seen = HashSet::with_capacity(code.len());
    code.words().iter().all(|w| seen.insert(w.as_str()))
}

/// Sardinas–Patterson test for unique decipherability.
///
/// Dangling suffixes are generated from the codeword set until either a codeword
/// shows up as a dangling suffix (two factorizations exist) or no new suffix
/// appears. Every dangling suffix is a suffix of some codeword, so the search is
/// finite.
pub fn is_uniquely_decipherable(code: &Code) -> bool {
    if !is_nonsingular(code) {
        return false;
    }
    let words = code.words();
    let codewords: HashSet<&str> = words.iter().map(String::as_str).collect();

    let mut seen: HashSet<String> = HashSet::new();
    let mut pending: Vec<String> = Vec::new();
    for u in words {
        for v in words {
            if u != v {
                if let Some(rest) = v.strip_prefix(u.as_str()) {
                    if seen.insert(rest.to_owned()) {
                        pending.push(rest.to_owned());
                    }
                }
            }
        }
    }

    while let Some(suffix) = pending.pop() {
        if codewords.contains(suffix.as_str()) {
            return false;
        }
        for w in words {
            let next = w
                .strip_prefix(suffix.as_str())
                .into_iter()
                .chain(suffix.strip_prefix(w.as_str()));
            for rest in next {
                if !rest.is_empty() && seen.insert(rest.to_owned()) {
                    pending.push(rest.to_owned());
                }
            }
        }
    }
    true
}

/// Canonical prefix code with the given lengths: codewords are handed out in
/// order of increasing length, each one the successor of the previous, padded
/// with the first letter when the length grows.
pub fn canonical_prefix_code(
    lengths: &CodeLengths,
    alphabet: &Alphabet,
) -> Result<Code, CodingError> {
    let n = alphabet.size();
    let kraft = kraft_sum(lengths, n);
    if kraft > 1.0 + 1e-12 {
        return Err(CodingError::KraftViolation(kraft));
    }
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths.as_slice()[i], i));

    let mut words = vec![String::new(); lengths.len()];
    let mut digits: Vec<usize> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let len = lengths.as_slice()[i] as usize;
        if k > 0 {
            // increment, then extend
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    return Err(CodingError::KraftViolation(kraft));
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < n {
                    break;
                }
                digits[pos] = 0;
                digits.truncate(pos);
            }
        }
        digits.resize(len, 0);
        words[i] = digits.iter().map(|&d| alphabet.symbol(d)).collect();
    }
    Code::over(alphabet, words)
}
