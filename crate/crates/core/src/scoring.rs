//! Scoring systems: a score per item, the rank function derived from it, and
//! the rank-score characteristic (RSC) function `f(i) = s(r⁻¹(i))`.
//!
//! Ranks are strict (1..=n). Scores that differ by at most [`TIE_TOLERANCE`]
//! are treated as tied and ordered by ascending item index, so the rank
//! function is always invertible while the RSC keeps its flat segments.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Absolute tolerance under which two scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    HigherBetter,
    LowerBetter,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::HigherBetter => "higher_better",
            Orientation::LowerBetter => "lower_better",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    None,
    MinMax,
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Normalization::None),
            "minmax" | "min_max" => Ok(Normalization::MinMax),
            other => Err(format!("unknown normalization {other:?} (expected none|minmax)")),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::None => "none",
            Normalization::MinMax => "minmax",
        })
    }
}

fn check_finite(scores: &[f64]) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::Empty);
    }
    match scores.iter().position(|s| !s.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: scores[index],
        }),
        None => Ok(()),
    }
}

/// Item indices in rank order (best first) for higher-is-better `keys`.
///
/// Runs of keys whose neighbours differ by at most [`TIE_TOLERANCE`] are
/// reordered by ascending index.
fn rank_order(keys: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));

    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && keys[order[end - 1]] - keys[order[end]] <= TIE_TOLERANCE {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].sort_unstable();
        }
        start = end;
    }
    order
}

fn oriented(scores: &[f64], orientation: Orientation) -> Vec<f64> {
    match orientation {
        Orientation::HigherBetter => scores.to_vec(),
        Orientation::LowerBetter => scores.iter().map(|s| -s).collect(),
    }
}

/// Rank of every item, 1 = best under `orientation`.
pub fn derive_ranks(scores: &[f64], orientation: Orientation) -> Result<Vec<usize>> {
    check_finite(scores)?;
    let keys = oriented(scores, orientation);
    let mut ranks = vec![0; scores.len()];
    for (position, item) in rank_order(&keys).into_iter().enumerate() {
        ranks[item] = position + 1;
    }
    Ok(ranks)
}

/// Anything carrying per-item values with a derived strict ranking.
pub trait Ranked {
    fn values(&self) -> &[f64];
    fn orientation(&self) -> Orientation;
    /// `ranks()[i]` is the rank of item `i`, 1 = best.
    fn ranks(&self) -> &[usize];
}

/// A named score function with its derived rank and RSC functions.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringSystem {
    name: String,
    scores: Vec<f64>,
    orientation: Orientation,
    ranks: Vec<usize>,
    rsc: Vec<f64>,
}

impl ScoringSystem {
    pub fn new(name: impl Into<String>, scores: Vec<f64>, orientation: Orientation) -> Result<Self> {
        check_finite(&scores)?;
        let keys = oriented(&scores, orientation);
        let order = rank_order(&keys);
        let mut ranks = vec![0; scores.len()];
        for (position, &item) in order.iter().enumerate() {
            ranks[item] = position + 1;
        }
        let rsc = order.iter().map(|&item| keys[item]).collect();
        Ok(ScoringSystem {
            name: name.into(),
            scores,
            orientation,
            ranks,
            rsc,
        })
    }

    pub fn higher_better(name: impl Into<String>, scores: Vec<f64>) -> Result<Self> {
        Self::new(name, scores, Orientation::HigherBetter)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `ranks()[i]` is the rank of item `i`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// RSC values for ranks 1..=n, on the internal higher-is-better scale
    /// (lower-is-better scores appear negated).
    pub fn rsc(&self) -> &[f64] {
        &self.rsc
    }

    /// Item index holding each rank, i.e. the inverse rank function.
    pub fn items_by_rank(&self) -> Vec<usize> {
        let mut items = vec![0; self.ranks.len()];
        for (item, &rank) in self.ranks.iter().enumerate() {
            items[rank - 1] = item;
        }
        items
    }

    pub fn normalize(&self, method: Normalization) -> Result<ScoringSystem> {
        match method {
            Normalization::None => Ok(self.clone()),
            Normalization::MinMax => {
                let min = self.scores.iter().copied().fold(f64::INFINITY, f64::min);
                let max = self.scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if max - min <= 0.0 {
                    return Err(Error::ConstantScores);
                }
                let span = max - min;
                let scaled = self.scores.iter().map(|s| (s - min) / span).collect();
                let mut out = ScoringSystem::new(self.name.clone(), scaled, self.orientation)?;
                // Affine rescaling can pull distinct scores inside the tie
                // tolerance; ranks stay those of the raw scores.
                out.ranks = self.ranks.clone();
                let keys = oriented(&out.scores, out.orientation);
                out.rsc = self.items_by_rank().into_iter().map(|i| keys[i]).collect();
                Ok(out)
            }
        }
    }

    /// Scores on the higher-is-better scale (negated for lower-is-better).
    pub fn oriented_scores(&self) -> Vec<f64> {
        oriented(&self.scores, self.orientation)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl Ranked for ScoringSystem {
    fn values(&self) -> &[f64] {
        &self.scores
    }

    fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn ranks(&self) -> &[usize] {
        &self.ranks
    }
}

/// Writes the `system,rank,score` RSC table for a set of systems.
pub fn write_rsc_csv<W: std::io::Write>(writer: W, systems: &[ScoringSystem]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["system", "rank", "score"])?;
    for system in systems {
        for (i, value) in system.rsc().iter().enumerate() {
            out.write_record([system.name(), &(i + 1).to_string(), &value.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_descending_scores() {
        let ranks = derive_ranks(&[0.9, 0.4, 0.7, 0.1], Orientation::HigherBetter).unwrap();
        assert_eq!(ranks, vec![1, 3, 2, 4]);
    }

    #[test]
    fn strictly_decreasing_is_identity() {
        let ranks = derive_ranks(&[5.0, 4.0, 3.0, -1.0], Orientation::HigherBetter).unwrap();
        assert_eq!(ranks, vec![1, 2, 3, 4]);
    }

    #[test]
    fn ties_break_by_index() {
        assert_eq!(
            derive_ranks(&[0.5, 0.5, 0.2], Orientation::HigherBetter).unwrap(),
            vec![1, 2, 3]
        );
        // within tolerance, even when the later item is marginally larger
        assert_eq!(
            derive_ranks(&[0.5, 0.5 + 5e-10, 0.2], Orientation::HigherBetter).unwrap(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn lower_better_ranks_ascending() {
        let ranks = derive_ranks(&[1.5, 2.0, 2.5, 4.0], Orientation::LowerBetter).unwrap();
        assert_eq!(ranks, vec![1, 2, 3, 4]);
        let sys = ScoringSystem::new("L", vec![3.0, 1.0, 2.0], Orientation::LowerBetter).unwrap();
        assert_eq!(sys.ranks(), &[3, 1, 2]);
        assert_eq!(sys.rsc(), &[-1.0, -2.0, -3.0]);
    }

    #[test]
    fn rejects_non_finite() {
        let err = derive_ranks(&[0.1, f64::NAN], Orientation::HigherBetter).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 1, .. }));
        assert!(ScoringSystem::higher_better("x", vec![f64::INFINITY]).is_err());
        assert!(matches!(
            ScoringSystem::higher_better("x", vec![]),
            Err(Error::Empty)
        ));
    }

    #[test]
    fn rsc_examples() {
        let sys = ScoringSystem::higher_better("A", vec![0.9, 0.4, 0.7, 0.1]).unwrap();
        assert_eq!(sys.rsc(), &[0.9, 0.7, 0.4, 0.1]);
        let flat = ScoringSystem::higher_better("C", vec![0.3, 0.3, 0.3]).unwrap();
        assert_eq!(flat.rsc(), &[0.3, 0.3, 0.3]);
        let one = ScoringSystem::higher_better("S", vec![42.0]).unwrap();
        assert_eq!(one.rsc(), &[42.0]);
        assert_eq!(one.ranks(), &[1]);
    }

    #[test]
    fn minmax() {
        let sys = ScoringSystem::higher_better("A", vec![2.0, 6.0, 4.0]).unwrap();
        let n = sys.normalize(Normalization::MinMax).unwrap();
        assert_eq!(n.scores(), &[0.0, 1.0, 0.5]);
        assert_eq!(n.ranks(), sys.ranks());
        assert_eq!(n.rsc(), &[1.0, 0.5, 0.0]);
        assert_eq!(sys.normalize(Normalization::None).unwrap(), sys);

        let flat = ScoringSystem::higher_better("C", vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            flat.normalize(Normalization::MinMax),
            Err(Error::ConstantScores)
        ));
    }

    #[test]
    fn items_by_rank_inverts_ranks() {
        let sys = ScoringSystem::higher_better("A", vec![0.9, 0.4, 0.7, 0.1]).unwrap();
        assert_eq!(sys.items_by_rank(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn rsc_csv_layout() {
        let sys = ScoringSystem::higher_better("A", vec![0.25, 0.75]).unwrap();
        let mut buf = Vec::new();
        write_rsc_csv(&mut buf, &[sys]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "system,rank,score\nA,1,0.75\nA,2,0.25\n"
        );
    }
}
