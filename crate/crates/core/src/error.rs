use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data.
    Data,
    /// A numeric precondition failed (non-finite values, degenerate weights).
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("duplicate game_id {0:?}")]
    DuplicateGameId(String),

    #[error("game {game_id:?}: label {value} is not 0 or 1")]
    InvalidLabel { game_id: String, value: String },

    #[error("game {0:?}: team1 and team2 are the same team")]
    SameTeam(String),

    #[error("game {game_id:?} is from season {found}, expected {expected} (multi-season not enabled)")]
    MixedSeasons {
        game_id: String,
        expected: i32,
        found: i32,
    },

    #[error("mirror link broken for {0:?}: counterpart missing or not a swapped, flipped, negated copy")]
    BrokenMirror(String),

    #[error("game set is already mirrored")]
    AlreadyMirrored,

    #[error("game set has no mirror links")]
    NotMirrored,

    #[error("no stats for team {0:?}")]
    MissingTeam(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("game {0:?} has no features")]
    MissingFeatures(String),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("baseline {system:?}: accuracy {value} outside [0, 1]")]
    InvalidAccuracy { system: String, value: f64 },

    #[error("baseline {0:?}: team ranks are not a permutation of 1..#teams")]
    NotAPermutation(String),

    #[error("bracket game {index}: winner {winner:?} did not play")]
    InvalidWinner { index: usize, winner: String },

    #[error("bracket with {teams} teams has {found} games, expected {expected}")]
    BracketSize {
        teams: usize,
        found: usize,
        expected: usize,
    },

    #[error("score at item {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("empty score vector")]
    Empty,

    #[error("min-max normalization of constant scores")]
    ConstantScores,

    #[error("systems are defined on different item counts ({0} vs {1})")]
    ItemCountMismatch(usize, usize),

    #[error("need at least {required} systems, found {found}")]
    TooFewSystems { found: usize, required: usize },

    #[error("system {system:?}: weight {weight} is not positive")]
    NonPositiveWeight { system: String, weight: f64 },

    #[error("weighting {0} needs per-system weights")]
    MissingWeights(&'static str),

    #[error("unknown system {0:?}")]
    UnknownSystem(String),

    #[error("invalid ensemble label {0:?}")]
    InvalidLabelText(String),

    #[error("expected a {expected} combination, got {found}")]
    WrongSpace {
        expected: &'static str,
        found: &'static str,
    },

    #[error("{predictions} predictions for {games} games")]
    CoverageGap { predictions: usize, games: usize },

    #[error("team {0:?} never appears as team1")]
    TeamNotCovered(String),

    #[error("team {0:?} is not in the ranking")]
    UnknownTeam(String),

    #[error("no baselines with an accuracy")]
    EmptyBaselines,

    #[error("season {0}: system set differs from the first season")]
    InconsistentSystems(i32),

    #[error("improvement table is empty")]
    EmptyTable,

    #[error("no seasons given")]
    NoSeasons,

    #[error("model file: {0}")]
    ModelFormat(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonFinite { .. }
            | Error::ConstantScores
            | Error::NonPositiveWeight { .. }
            | Error::SingleClass => ErrorKind::Numeric,
            _ => ErrorKind::Data,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, row: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            row,
            message: message.into(),
        }
    }
}
