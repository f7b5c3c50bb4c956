//! Combinatorial fusion of scoring systems for tournament prediction.
//!
//! Several base systems score the same set of games. Each system's rank
//! function and rank-score characteristic (RSC) function feed a cognitive
//! diversity measure; subsets of systems are then fused by score or rank
//! combination under average, diversity-strength or performance weighting.
//! The resulting game rankings are evaluated per season, the most reliable
//! subset is selected across seasons, and game rankings are turned into team
//! rankings that can be scored against bracket results and public baselines.
//!
//! ```
//! use cfa_core::fusion::{combine_ranks, Weighting};
//! use cfa_core::scoring::{Ranked, ScoringSystem};
//!
//! let a = ScoringSystem::higher_better("A", vec![0.9, 0.4, 0.7, 0.1]).unwrap();
//! let b = ScoringSystem::higher_better("B", vec![0.6, 0.8, 0.5, 0.2]).unwrap();
//! let rc = combine_ranks(&[a, b], &["A", "B"], Weighting::Average, None, Default::default()).unwrap();
//! assert_eq!(rc.values(), &[1.5, 2.0, 2.5, 4.0]);
//! assert_eq!(rc.label(), "AB/RC/AC");
//! ```

pub mod builtin_scorers;
pub mod dataset;
pub mod diversity;
pub mod error;
pub mod evaluation;
pub mod fusion;
pub mod scoring;
pub mod selection;

pub use error::{Error, ErrorKind, Result};
