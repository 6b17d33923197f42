//! Corpus ingestion and comparison of observed word lengths with the optimal
//! coding baselines.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coding::{mean_code_length, nonsingular_optimal_lengths, shannon_lengths, CodingError};
use crate::estimation::{EstimationError, RankFrequencyTable};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("encoding-error: invalid UTF-8 at byte offset {offset}")]
    Encoding { offset: usize },
    #[error("empty-input: no tokens")]
    EmptyInput,
    #[error("io-error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Coding(#[from] CodingError),
}

impl From<EstimationError> for CorpusError {
    fn from(e: EstimationError) -> Self {
        match e {
            EstimationError::EmptyInput => CorpusError::EmptyInput,
            other => unreachable!("table construction only fails on empty input: {other}"),
        }
    }
}

fn trim_token(raw: &str) -> &str {
    raw.trim_matches(|c: char| !c.is_alphanumeric())
}

fn push_tokens<F: FnMut(String)>(text: &str, mut sink: F) {
    for raw in text.split_whitespace() {
        let t = trim_token(raw);
        if !t.is_empty() {
            sink(t.to_lowercase());
        }
    }
}

/// Lowercased whitespace-separated tokens with non-alphanumeric characters
/// stripped from both ends. Inner punctuation (apostrophes, hyphens) is kept.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    push_tokens(text, |t| out.push(t));
    out
}

pub fn tokenize_bytes(bytes: &[u8]) -> Result<Vec<String>, CorpusError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CorpusError::Encoding {
        offset: e.valid_up_to(),
    })?;
    Ok(tokenize(text))
}

/// Streaming type counter. Memory grows with the number of types, not tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenCounter {
    counts: HashMap<String, u64>,
    tokens: u64,
}

impl TokenCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_token(&mut self, token: &str) {
        self.tokens += 1;
        match self.counts.get_mut(token) {
            Some(c) => *c += 1,
            None => {
                self.counts.insert(token.to_owned(), 1);
            }
        }
    }

    pub fn add_text(&mut self, text: &str) {
        push_tokens(text, |t| self.add_token(&t));
    }

    /// Reads line by line; invalid UTF-8 is reported with its absolute byte offset.
    pub fn read<R: BufRead>(&mut self, mut reader: R) -> Result<(), CorpusError> {
        let mut buf = Vec::new();
        let mut offset = 0usize;
        loop {
            buf.clear();
            let n = reader.read_until(b'\n', &mut buf)?;
            if n == 0 {
                return Ok(());
            }
            let line = std::str::from_utf8(&buf).map_err(|e| CorpusError::Encoding {
                offset: offset + e.valid_up_to(),
            })?;
            self.add_text(line);
            offset += n;
        }
    }

    pub fn merge(&mut self, other: TokenCounter) {
        self.tokens += other.tokens;
        for (word, c) in other.counts {
            *self.counts.entry(word).or_default() += c;
        }
    }

    pub fn token_count(&self) -> u64 {
        self.tokens
    }

    pub fn type_count(&self) -> usize {
        self.counts.len()
    }

    pub fn into_table(self) -> Result<RankFrequencyTable, CorpusError> {
        if self.counts.is_empty() {
            return Err(CorpusError::EmptyInput);
        }
        Ok(RankFrequencyTable::from_word_counts(self.counts)?)
    }
}

/// Counts `text` in parallel chunks split at whitespace, merged in chunk order.
pub fn count_text_parallel(text: &str, chunks: usize) -> TokenCounter {
    let chunks = chunks.max(1);
    let target = text.len() / chunks + 1;
    let mut pieces = Vec::with_capacity(chunks);
    let mut rest = text;
    while !rest.is_empty() {
        let mut cut = target.min(rest.len());
        while cut < rest.len()
            && !(rest.is_char_boundary(cut) && starts_with_whitespace(&rest[cut..]))
        {
            cut += 1;
        }
        pieces.push(&rest[..cut]);
        rest = &rest[cut..];
    }
    pieces
        .into_par_iter()
        .map(|p| {
            let mut c = TokenCounter::new();
            c.add_text(p);
            c
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(TokenCounter::new(), |mut acc, c| {
            acc.merge(c);
            acc
        })
}

fn starts_with_whitespace(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_whitespace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub table: RankFrequencyTable,
    /// Characters (Unicode scalar values) per type, in rank order.
    pub type_lengths: Vec<usize>,
    pub alphabet_size: usize,
    pub actual_mean_length: f64,
    pub optimal_ns_mean_length: f64,
    pub optimal_ud_mean_length: f64,
    /// `optimal_ns_mean_length / actual_mean_length`.
    pub optimality_ratio: f64,
}

/// The scalar part of [`CorpusStats`], for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    #[serde(rename = "N")]
    pub alphabet_size: usize,
    pub total_tokens: u64,
    pub type_count: usize,
    pub actual_mean_length: f64,
    pub optimal_ns_mean_length: f64,
    pub optimal_ud_mean_length: f64,
    pub optimality_ratio: f64,
}

impl CorpusStats {
    pub fn summary(&self) -> CorpusSummary {
        CorpusSummary {
            alphabet_size: self.alphabet_size,
            total_tokens: self.table.total_tokens(),
            type_count: self.table.len(),
            actual_mean_length: self.actual_mean_length,
            optimal_ns_mean_length: self.optimal_ns_mean_length,
            optimal_ud_mean_length: self.optimal_ud_mean_length,
            optimality_ratio: self.optimality_ratio,
        }
    }
}

/// Number of distinct characters across the types of a table.
pub fn character_inventory(table: &RankFrequencyTable) -> usize {
    table
        .entries()
        .iter()
        .flat_map(|e| e.word.chars())
        .collect::<HashSet<char>>()
        .len()
}

pub fn corpus_report<S: AsRef<str>>(
    tokens: &[S],
    alphabet_size: Option<usize>,
) -> Result<CorpusStats, CorpusError> {
    let mut counter = TokenCounter::new();
    for t in tokens {
        counter.add_token(t.as_ref());
    }
    corpus_report_from_table(counter.into_table()?, alphabet_size)
}

/// Compares observed lengths against the optimal codes for the empirical
/// distribution. Without an explicit `alphabet_size` the observed character
/// inventory is used (at least 2).
pub fn corpus_report_from_table(
    table: RankFrequencyTable,
    alphabet_size: Option<usize>,
) -> Result<CorpusStats, CorpusError> {
    let n = alphabet_size.unwrap_or_else(|| character_inventory(&table).max(2));
    let dist = table.distribution();
    let type_lengths: Vec<usize> = table
        .entries()
        .iter()
        .map(|e| e.word.chars().count())
        .collect();
    let total = table.total_tokens() as f64;
    let actual_mean_length = table
        .counts()
        .zip(&type_lengths)
        .map(|(c, &l)| c as f64 * l as f64)
        .sum::<f64>()
        / total;
    let ns = nonsingular_optimal_lengths(table.len(), n)?;
    let ud = shannon_lengths(&dist, n)?;
    let optimal_ns_mean_length = mean_code_length(&dist, &ns)?;
    let optimal_ud_mean_length = mean_code_length(&dist, &ud.lengths)?;
    Ok(CorpusStats {
        type_lengths,
        alphabet_size: n,
        actual_mean_length,
        optimal_ns_mean_length,
        optimal_ud_mean_length,
        optimality_ratio: optimal_ns_mean_length / actual_mean_length,
        table,
    })
}
