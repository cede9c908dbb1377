//! Statistical analysis of word frequencies in books.
//!
//! The crate works in the `W_D(k)` representation: `W_D(k)` is the number of
//! distinct words that occur exactly `k` times in a text, and
//! `P(k) = W_D(k) / W_D` is the probability that a randomly picked distinct
//! word occurs `k` times. On top of that it provides
//!
//! - tokenization of plain-text books ([`corpus`]),
//! - frequency spectra, log2 binning and vocabulary growth curves
//!   ([`freqstats`]),
//! - section averaging with periodic boundaries and translational-invariance
//!   statistics ([`sections`]),
//! - the shuffled-book null model and half-read profiles with significance
//!   bands ([`nullmodel`]),
//! - the Simon growth model together with its closed-form asymptotics
//!   ([`simon`]),
//! - the random book transformation (binomial thinning of a frequency
//!   spectrum) and parametric fitting of `P(k)` against the `w_D/w_T` curve
//!   ([`rbt`]).

pub mod cli;
pub mod corpus;
pub mod freqstats;
pub mod io;
pub mod nullmodel;
mod numeric;
mod optim;
pub mod rbt;
pub mod sections;
pub mod simon;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input bytes could not be decoded in the declared encoding.
    #[error("undecodable byte at offset {offset}")]
    Decode { offset: usize },

    /// A text had no tokens where at least one was required.
    #[error("empty corpus")]
    EmptyCorpus,

    /// A precondition on an operation's arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerically ill-conditioned computation was detected (e.g. the
    /// inverse random book transformation outside its supported regime).
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    /// A structured file (CSV/JSON schema) failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
