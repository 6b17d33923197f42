use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used by every randomized subcommand unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "zipfcode",
    version,
    about = "Zipf's law from optimal coding: codes, random typing, exponent fits"
)]
pub struct Cli {
    /// Worker threads for sampling (output does not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate random-typing (or Zipf) tokens.
    Generate(GenerateArgs),
    /// Analytic type table of the random-typing model.
    Types(TypesArgs),
    /// Optimal codes for a frequency list.
    Code(CodeArgs),
    /// Fit a Zipf exponent to a rank-frequency table or token file.
    Fit(FitArgs),
    /// Corpus statistics against the optimal coding baselines.
    Analyze(AnalyzeArgs),
    /// Theoretical exponent.
    Predict(PredictArgs),
    /// Walk the coding derivation, or run the generate/fit/predict self-test.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ranks {
    pub min: usize,
    pub max: usize,
}

pub fn parse_ranks(s: &str) -> Result<Ranks, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected MIN:MAX, got {s:?}"))?;
    let min = a
        .trim()
        .parse()
        .map_err(|e| format!("bad MIN {a:?}: {e}"))?;
    let max = b
        .trim()
        .parse()
        .map_err(|e| format!("bad MAX {b:?}: {e}"))?;
    if min < 1 || max < min {
        return Err(format!("need 1 <= MIN <= MAX, got {min}:{max}"));
    }
    Ok(Ranks { min, max })
}

#[derive(Debug, Args)]
pub struct TypingArgs {
    /// Alphabet size N.
    #[arg(short = 'N', long = "alphabet-size", default_value_t = 26)]
    pub alphabet_size: usize,
    /// Space-bar probability p_s.
    #[arg(long = "ps", default_value_t = 0.18)]
    pub space_prob: f64,
    /// Minimum word length l_0.
    #[arg(long = "l0", default_value_t = 1)]
    pub min_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TokenFormat {
    /// One token per line.
    Tokens,
    /// Rank-frequency table `rank,word,count`.
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub typing: TypingArgs,
    /// Sample from a truncated Zipf law with this exponent instead of random typing.
    #[arg(long, requires = "vocab")]
    pub alpha: Option<f64>,
    /// Vocabulary size for `--alpha`.
    #[arg(short = 'M', long)]
    pub vocab: Option<usize>,
    #[arg(short = 'n', long = "tokens", default_value_t = 100_000)]
    pub tokens: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TokenFormat::Tokens)]
    pub format: TokenFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TypesArgs {
    #[command(flatten)]
    pub typing: TypingArgs,
    /// Number of most probable types to list.
    #[arg(long, default_value_t = 100)]
    pub top: usize,
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    pub format: DataFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Shortest distinct strings (optimal non-singular).
    Nonsingular,
    /// ceil(-log_N p) lengths, canonical prefix code.
    Shannon,
    /// Optimal prefix code.
    Huffman,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// Frequency CSV with header `word,count`. Omit to code a Zipf law (`--alpha`, `-M`).
    pub input: Option<PathBuf>,
    #[arg(short = 'N', long = "alphabet-size", default_value_t = 2)]
    pub alphabet_size: usize,
    #[arg(long, value_enum, default_value_t = Scheme::Nonsingular)]
    pub scheme: Scheme,
    #[arg(long, requires = "vocab", conflicts_with = "input")]
    pub alpha: Option<f64>,
    #[arg(short = 'M', long)]
    pub vocab: Option<usize>,
    #[arg(long, value_enum, default_value_t = DataFormat::Csv)]
    pub format: DataFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitInput {
    /// Table if the first line is the `rank,word,count` header, else tokens.
    Auto,
    /// Rank-frequency CSV.
    Table,
    /// One token per line.
    Tokens,
    /// Free text, tokenized.
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mle,
    Regression,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = FitInput::Auto)]
    pub input_format: FitInput,
    #[arg(long, value_enum, default_value_t = Method::Mle)]
    pub method: Method,
    /// Rank window MIN:MAX (default: every rank).
    #[arg(long, value_parser = parse_ranks)]
    pub ranks: Option<Ranks>,
    /// Write `rank,frequency,fitted` for plotting.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Text file; standard input when omitted or `-`.
    pub input: Option<PathBuf>,
    /// Alphabet size for the baselines (default: distinct characters observed).
    #[arg(short = 'N', long = "alphabet-size")]
    pub alphabet_size: Option<usize>,
    /// Also write the rank-frequency table as CSV.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    OptimalCoding,
    RandomTyping,
    MixedAlphabet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredictFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(short = 'N', long = "alphabet-size")]
    pub alphabet_size: Option<usize>,
    #[arg(long = "ps")]
    pub space_prob: Option<f64>,
    /// Alphabet size of the uniquely decipherable scheme (mixed-alphabet model).
    #[arg(long = "n-prime")]
    pub n_prime: Option<usize>,
    #[arg(long, value_enum, default_value_t = PredictFormat::Text)]
    pub format: PredictFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub typing: TypingArgs,
    /// Generate tokens, fit alpha by MLE and compare with the prediction.
    #[arg(long)]
    pub self_test: bool,
    /// Rank window. Derivation default 1000:1000000; self-test default 1:1000.
    #[arg(long, value_parser = parse_ranks)]
    pub ranks: Option<Ranks>,
    #[arg(short = 'n', long = "tokens", default_value_t = 1_000_000)]
    pub tokens: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest accepted |alpha_fit - alpha_predicted| in the self-test.
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
    /// Derivation: write `rank,length,residual` for every rank.
    #[arg(long)]
    pub residuals: Option<PathBuf>,
    /// Self-test: write `rank,frequency,fitted,predicted`.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
