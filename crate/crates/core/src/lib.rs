//! Zipf's law from optimal coding.
//!
//! - [`coding`]: optimal non-singular and uniquely decipherable codes, Kraft sums,
//!   mean code length, Sardinas–Patterson.
//! - [`random_typing`]: the generalized random-typing model `(N, p_s, l_0)`.
//! - [`zipf_model`]: theoretical exponents and a numeric walk through the coding
//!   derivation of `alpha = 1`.
//! - [`estimation`]: rank-frequency tables and exponent fits (truncated-zeta MLE,
//!   log-log regression).
//! - [`corpus`]: tokenization and optimality of real word lengths.

pub mod coding;
pub mod corpus;
pub mod estimation;
pub mod random_typing;
pub mod stats;
pub mod zipf_model;

pub use coding::{Alphabet, Code, CodeLengths, CodingError, ProbabilityDistribution};
pub use corpus::{CorpusError, CorpusStats, CorpusSummary};
pub use estimation::{EstimationError, FitMethod, FitResult, RankFrequencyTable, RankWindow};
pub use random_typing::{RandomTypingParams, RankedTypeTable, TypingError};
pub use zipf_model::{DerivationReport, ModelError, PredictionSource, ZipfPrediction};
