use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use zipfcode::coding::{
    canonical_prefix_code, huffman_lengths, kraft_sum, mean_code_length,
    nonsingular_length_at_rank, nonsingular_optimal_code, shannon_lengths,
};
use zipfcode::corpus::{corpus_report_from_table, tokenize_bytes, CorpusSummary, TokenCounter};
use zipfcode::estimation::{
    build_rank_frequency, fit_zipf_mle, fit_zipf_regression, length_frequency_correlation,
    sample_table, ZetaLikelihood,
};
use zipfcode::random_typing::{enumerate_types_capped, sample_tokens, DEFAULT_MAX_TYPES};
use zipfcode::zipf_model::{approximation_residual, verify_derivation, zipf_pmf, ZipfPrediction};
use zipfcode::{Alphabet, FitResult, RandomTypingParams, RankFrequencyTable, RankWindow};

use crate::args::*;
use crate::io;

/// Environment variable capping how many types `types` may enumerate.
pub const MAX_TYPES_ENV: &str = "ZIPFCODE_MAX_TYPES";

/// Flag combinations clap cannot check; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "usage: {}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => generate(a),
        Command::Types(a) => types(a),
        Command::Code(a) => code(a),
        Command::Fit(a) => fit(a),
        Command::Analyze(a) => analyze(a),
        Command::Predict(a) => predict(a),
        Command::Verify(a) => verify(a),
    }
}

fn typing_params(t: &TypingArgs) -> Result<RandomTypingParams> {
    Ok(RandomTypingParams::new(
        t.alphabet_size,
        t.space_prob,
        t.min_len,
    )?)
}

fn window(ranks: Option<Ranks>, table: &RankFrequencyTable) -> RankWindow {
    ranks.map_or_else(|| RankWindow::all(table), |r| RankWindow::new(r.min, r.max))
}

fn write_table(path: Option<&Path>, table: &RankFrequencyTable) -> Result<()> {
    io::write_csv(path, table.entries())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let out = a.output.as_deref();
    if let Some(alpha) = a.alpha {
        if a.format != TokenFormat::Csv {
            return Err(usage(
                "--alpha sampling only produces a table; add --format csv",
            ));
        }
        let vocab = a.vocab.expect("clap requires --vocab with --alpha");
        let table = sample_table(&zipf_pmf(alpha, vocab)?, a.tokens, a.seed)?;
        return write_table(out, &table);
    }
    let params = typing_params(&a.typing)?;
    let tokens = sample_tokens(&params, a.tokens, a.seed)?;
    match a.format {
        TokenFormat::Tokens => {
            let mut w = io::output(out)?;
            for t in &tokens {
                writeln!(w, "{t}")?;
            }
            w.flush()?;
            Ok(())
        }
        TokenFormat::Csv => write_table(out, &build_rank_frequency(&tokens)?),
    }
}

fn max_types() -> Result<usize> {
    match std::env::var(MAX_TYPES_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| usage(format!("{MAX_TYPES_ENV}={v:?} is not a count: {e}"))),
        Err(_) => Ok(DEFAULT_MAX_TYPES),
    }
}

fn types(a: TypesArgs) -> Result<()> {
    let params = typing_params(&a.typing)?;
    let table = enumerate_types_capped(&params, a.top, max_types()?)?;
    match a.format {
        DataFormat::Csv => io::write_csv(a.output.as_deref(), &table.entries),
        DataFormat::Json => io::write_json(a.output.as_deref(), &table),
    }
}

#[derive(Debug, Deserialize)]
struct FrequencyRow {
    word: String,
    count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeRow {
    pub rank: usize,
    pub string: String,
    pub length: usize,
}

#[derive(Debug, Serialize)]
struct CodeReport<'a> {
    scheme: &'a str,
    #[serde(rename = "N")]
    alphabet_size: usize,
    entropy: f64,
    mean_length: f64,
    kraft_sum: f64,
    codewords: Vec<CodeRow>,
}

fn read_frequencies(path: &Path) -> Result<RankFrequencyTable> {
    let mut reader = csv::Reader::from_reader(io::input(Some(path))?);
    let rows = reader
        .deserialize::<FrequencyRow>()
        .map(|r| r.map(|r| (r.word, r.count)))
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(RankFrequencyTable::from_word_counts(rows)?)
}

fn code(a: CodeArgs) -> Result<()> {
    let dist = match (&a.input, a.alpha, a.vocab) {
        (Some(path), _, _) => read_frequencies(path)?.distribution(),
        (None, Some(alpha), Some(vocab)) => zipf_pmf(alpha, vocab)?,
        _ => return Err(usage("give a frequency CSV or --alpha with -M/--vocab")),
    };
    let n = a.alphabet_size;
    let alphabet = Alphabet::with_size(n)?;
    let (scheme, words) = match a.scheme {
        Scheme::Nonsingular => (
            "nonsingular",
            nonsingular_optimal_code(dist.len(), &alphabet)?,
        ),
        Scheme::Shannon => (
            "shannon",
            canonical_prefix_code(&shannon_lengths(&dist, n)?.lengths, &alphabet)?,
        ),
        Scheme::Huffman => (
            "huffman",
            canonical_prefix_code(&huffman_lengths(&dist, n)?, &alphabet)?,
        ),
    };
    let lengths = words.lengths();
    let rows: Vec<CodeRow> = words
        .words()
        .iter()
        .enumerate()
        .map(|(i, s)| CodeRow {
            rank: i + 1,
            length: s.chars().count(),
            string: s.clone(),
        })
        .collect();
    match a.format {
        DataFormat::Csv => io::write_csv(a.output.as_deref(), rows),
        DataFormat::Json => io::write_json(
            a.output.as_deref(),
            &CodeReport {
                scheme,
                alphabet_size: n,
                entropy: dist.entropy(n),
                mean_length: mean_code_length(&dist, &lengths)?,
                kraft_sum: kraft_sum(&lengths, n),
                codewords: rows,
            },
        ),
    }
}

const TABLE_HEADER: &str = "rank,word,count";

fn read_table_csv(bytes: &[u8]) -> Result<RankFrequencyTable> {
    let entries = csv::Reader::from_reader(bytes)
        .deserialize()
        .collect::<Result<Vec<_>, _>>()
        .context("reading rank-frequency table")?;
    Ok(RankFrequencyTable::from_entries(entries)?)
}

fn read_token_lines(bytes: &[u8]) -> Result<RankFrequencyTable> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        anyhow!(
            "encoding-error: invalid UTF-8 at byte offset {}",
            e.valid_up_to()
        )
    })?;
    Ok(build_rank_frequency(text.lines())?)
}

fn looks_like_table(bytes: &[u8]) -> bool {
    let first = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
    first.strip_suffix(b"\r").unwrap_or(first) == TABLE_HEADER.as_bytes()
}

fn load_fit_input(path: &Path, format: FitInput) -> Result<RankFrequencyTable> {
    let bytes = io::read_all(path)?;
    match format {
        FitInput::Table => read_table_csv(&bytes),
        FitInput::Tokens => read_token_lines(&bytes),
        FitInput::Auto if looks_like_table(&bytes) => read_table_csv(&bytes),
        FitInput::Auto => read_token_lines(&bytes),
        FitInput::Text => Ok(build_rank_frequency(tokenize_bytes(&bytes)?)?),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub rank: usize,
    pub frequency: u64,
    pub fitted: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub predicted: Option<f64>,
}

/// Observed counts over the fitted window with expected counts under the fitted
/// exponent and, optionally, a predicted one.
fn curve(table: &RankFrequencyTable, fit: &FitResult, predicted: Option<f64>) -> Vec<CurveRow> {
    let (lo, hi) = fit.rank_window;
    let slice = &table.entries()[lo - 1..hi];
    let counts: Vec<f64> = slice.iter().map(|e| e.count as f64).collect();
    let lik = ZetaLikelihood::new(lo, &counts);
    let total = fit.n_tokens as f64;
    let fitted = lik.model(fit.alpha);
    let pred = predicted.map(|alpha| lik.model(alpha));
    slice
        .iter()
        .enumerate()
        .map(|(k, e)| CurveRow {
            rank: e.rank,
            frequency: e.count,
            fitted: total * fitted[k],
            predicted: pred.as_ref().map(|p| total * p[k]),
        })
        .collect()
}

fn fit(a: FitArgs) -> Result<()> {
    let table = load_fit_input(&a.input, a.input_format)?;
    let w = window(a.ranks, &table);
    let result = match a.method {
        Method::Mle => fit_zipf_mle(&table, w)?,
        Method::Regression => fit_zipf_regression(&table, w)?,
    };
    if let Some(path) = &a.curve {
        io::write_csv(Some(path), curve(&table, &result, None))?;
    }
    io::write_json(a.output.as_deref(), &result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub summary: CorpusSummary,
    /// Spearman correlation of type count against type length.
    pub length_frequency_correlation: Option<f64>,
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let mut counter = TokenCounter::new();
    counter.read(io::input(a.input.as_deref())?)?;
    let stats = corpus_report_from_table(counter.into_table()?, a.alphabet_size)?;
    if let Some(path) = &a.table {
        write_table(Some(path), &stats.table)?;
    }
    let report = AnalyzeReport {
        summary: stats.summary(),
        length_frequency_correlation: length_frequency_correlation(
            &stats.table,
            &stats.type_lengths,
        )
        .ok(),
    };
    io::write_json(a.output.as_deref(), &report)
}

fn predict(a: PredictArgs) -> Result<()> {
    let need_n = || a.alphabet_size.ok_or_else(|| usage("this model needs -N"));
    let prediction = match a.model {
        Model::OptimalCoding => ZipfPrediction::optimal_coding(),
        Model::RandomTyping => {
            let ps = a
                .space_prob
                .ok_or_else(|| usage("random-typing needs --ps"))?;
            ZipfPrediction::random_typing(need_n()?, ps)?
        }
        Model::MixedAlphabet => {
            let n_prime = a
                .n_prime
                .ok_or_else(|| usage("mixed-alphabet needs --n-prime"))?;
            ZipfPrediction::mixed_alphabet(need_n()?, n_prime)?
        }
    };
    match a.format {
        PredictFormat::Json => io::write_json(a.output.as_deref(), &prediction),
        PredictFormat::Text => {
            let mut w = io::output(a.output.as_deref())?;
            writeln!(w, "alpha={:?}", prediction.alpha)?;
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    #[serde(rename = "N")]
    pub alphabet_size: usize,
    pub ps: f64,
    pub l0: usize,
    pub tokens: usize,
    pub seed: u64,
    pub alpha_fit: f64,
    pub alpha_predicted: f64,
    pub abs_error: f64,
    pub threshold: f64,
    pub pass: bool,
    pub fit: FitResult,
}

#[derive(Debug, Serialize)]
struct ResidualRow {
    rank: u64,
    length: u32,
    residual: f64,
}

fn verify(a: VerifyArgs) -> Result<()> {
    if a.self_test {
        return self_test(a);
    }
    let n = a.typing.alphabet_size;
    let r = a.ranks.unwrap_or(Ranks {
        min: 1000,
        max: 1_000_000,
    });
    let report = verify_derivation(n, r.min as u64, r.max as u64)?;
    if let Some(path) = &a.residuals {
        io::write_csv(
            Some(path),
            (r.min as u64..=r.max as u64).map(|rank| ResidualRow {
                rank,
                length: nonsingular_length_at_rank(rank, n as u64),
                residual: approximation_residual(rank, n),
            }),
        )?;
    }
    io::write_json(a.output.as_deref(), &report)
}

fn self_test(a: VerifyArgs) -> Result<()> {
    let params = typing_params(&a.typing)?;
    let predicted = ZipfPrediction::random_typing(params.alphabet_size(), params.space_prob())?;
    let tokens = sample_tokens(&params, a.tokens, a.seed)?;
    let table = build_rank_frequency(&tokens)?;
    let r = a.ranks.unwrap_or(Ranks { min: 1, max: 1000 });
    let fit = fit_zipf_mle(&table, RankWindow::new(r.min, r.max))?;
    if let Some(path) = &a.curve {
        io::write_csv(Some(path), curve(&table, &fit, Some(predicted.alpha)))?;
    }
    let abs_error = (fit.alpha - predicted.alpha).abs();
    let report = SelfTestReport {
        alphabet_size: params.alphabet_size(),
        ps: params.space_prob(),
        l0: params.min_len(),
        tokens: a.tokens,
        seed: a.seed,
        alpha_fit: fit.alpha,
        alpha_predicted: predicted.alpha,
        abs_error,
        threshold: a.threshold,
        pass: abs_error <= a.threshold,
        fit,
    };
    io::write_json(a.output.as_deref(), &report)?;
    if !report.pass {
        bail!(
            "self-test failed: |alpha_fit - alpha_predicted| = {abs_error:.4} exceeds {}",
            a.threshold
        );
    }
    Ok(())
}
