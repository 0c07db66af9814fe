use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::coalition::Coalition;

/// Structural problems with coalitions or games.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("voter count {0} outside 1..=16")]
    VoterCount(usize),
    #[error("bit pattern {bits:#b} does not fit {n} voters")]
    BitsOutOfRange { n: usize, bits: u32 },
    #[error("voter {voter} outside 1..={n}")]
    VoterOutOfRange { voter: usize, n: usize },
    #[error("coalitions over {left} and {right} voters cannot be compared")]
    VoterMismatch { left: usize, right: usize },
    #[error("invalid coalition string {0:?}")]
    BadCoalition(String),
    #[error("a game needs at least one minimal winning coalition")]
    NoWinningCoalitions,
    #[error("the empty coalition cannot be winning")]
    EmptyWinning,
    #[error("{lower} ⪯ {upper}: minimal winning coalitions must be pairwise incomparable")]
    NotAntichain { lower: Coalition, upper: Coalition },
    #[error("duplicate coalition {0}")]
    Duplicate(Coalition),
    #[error("winning set is not monotone: {0} wins but {1} loses")]
    NotMonotone(Coalition, Coalition),
    #[error("voter {0} is not at least as desirable as voter {1}")]
    DesirabilityViolation(usize, usize),
    #[error("{n} voters exceeds the limit of {max} for this operation")]
    UnsupportedSize { n: usize, max: usize },
    #[error("{0} is not a valid search prefix")]
    BadPrefix(String),
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { expected: usize, got: usize },
}

/// Kinds of failure when reading a `.csg` game file.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Antichain {
        line: usize,
        #[source]
        source: GameError,
    },
    #[error("line {line}: coalitions must be listed in decreasing lexicographic order ({prev} then {next})")]
    Ordering {
        line: usize,
        prev: Coalition,
        next: Coalition,
    },
    #[error("{0}")]
    Game(#[from] GameError),
}

/// Failures while reading or writing a classification checkpoint.
#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path} belongs to a different run: expected {expected}, found {found}")]
    Mismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error(transparent)]
    Game(#[from] GameError),
}
