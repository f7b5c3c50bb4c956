//! Game predictions, accuracy, game-to-team ranking conversion and baseline
//! comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::dataset::{BaselineRanking, BracketResults, GameSet};
use crate::error::{Error, Result};
use crate::fusion::{CombinedSystem, Space};
use crate::scoring::{Orientation, Ranked};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionMode {
    /// Within each mirror pair the better-ranked orientation is predicted 1.
    MirrorPair,
    /// `value > 0.5` for higher-is-better, top half of ranks otherwise.
    Threshold,
}

impl PredictionMode {
    /// Mirror pairs when the set has links, threshold otherwise.
    pub fn auto(games: &GameSet) -> Self {
        if games.is_mirrored() {
            PredictionMode::MirrorPair
        } else {
            PredictionMode::Threshold
        }
    }
}

impl FromStr for PredictionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mirror_pair" | "mirror-pair" => Ok(PredictionMode::MirrorPair),
            "threshold" => Ok(PredictionMode::Threshold),
            _ => Err(format!("unknown prediction mode {s:?} (expected mirror_pair|threshold)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionSet {
    pub predictions: Vec<u8>,
    pub mode: PredictionMode,
}

pub fn predict<R: Ranked + ?Sized>(
    system: &R,
    games: &GameSet,
    mode: PredictionMode,
) -> Result<PredictionSet> {
    let n = games.len();
    if system.values().len() != n {
        return Err(Error::ItemCountMismatch(system.values().len(), n));
    }
    let ranks = system.ranks();
    let predictions = match mode {
        PredictionMode::MirrorPair => {
            let pairs = games.mirror_index();
            pairs
                .iter()
                .enumerate()
                .map(|(i, other)| {
                    let j = other.ok_or(Error::NotMirrored)?;
                    Ok(u8::from(ranks[i] < ranks[j]))
                })
                .collect::<Result<Vec<_>>>()?
        }
        PredictionMode::Threshold => match system.orientation() {
            Orientation::HigherBetter => system
                .values()
                .iter()
                .map(|&v| u8::from(v > 0.5))
                .collect(),
            Orientation::LowerBetter => {
                let cutoff = n.div_ceil(2);
                ranks.iter().map(|&r| u8::from(r <= cutoff)).collect()
            }
        },
    };
    Ok(PredictionSet { predictions, mode })
}

/// Correct count over a number of games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
}

impl Tally {
    pub fn fraction(self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

/// Correct predictions over the original games; mirrored copies are skipped.
pub fn tally(preds: &PredictionSet, games: &GameSet) -> Result<Tally> {
    if preds.predictions.len() != games.len() {
        return Err(Error::CoverageGap {
            predictions: preds.predictions.len(),
            games: games.len(),
        });
    }
    let mut t = Tally {
        correct: 0,
        total: 0,
    };
    for (p, g) in preds.predictions.iter().zip(games.records()) {
        if g.is_mirror() {
            continue;
        }
        t.total += 1;
        if *p == g.label {
            t.correct += 1;
        }
    }
    Ok(t)
}

pub fn accuracy(preds: &PredictionSet, games: &GameSet) -> Result<f64> {
    Ok(tally(preds, games)?.fraction())
}

/// Predicts with `system` under `mode` and scores against the labels.
pub fn system_accuracy<R: Ranked + ?Sized>(
    system: &R,
    games: &GameSet,
    mode: PredictionMode,
) -> Result<f64> {
    accuracy(&predict(system, games, mode)?, games)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankingSource {
    RankCombination,
    ScoreCombination,
    Baseline,
}

/// How to treat teams that never appear as team1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coverage {
    #[default]
    Strict,
    /// Missing teams get the worst aggregate.
    Lenient,
}

impl FromStr for Coverage {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Coverage::Strict),
            "lenient" => Ok(Coverage::Lenient),
            _ => Err(format!("unknown coverage mode {s:?} (expected strict|lenient)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamRank {
    pub team: String,
    pub aggregate: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeamRanking {
    pub entries: Vec<TeamRank>,
    pub source: RankingSource,
}

impl TeamRanking {
    pub fn rank_of(&self, team: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.team == team).map(|e| e.rank)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Worst team first.
    pub fn reversed(&self) -> TeamRanking {
        let entries = self
            .entries
            .iter()
            .rev()
            .enumerate()
            .map(|(i, e)| TeamRank {
                team: e.team.clone(),
                aggregate: e.aggregate,
                rank: i + 1,
            })
            .collect();
        TeamRanking {
            entries,
            source: self.source,
        }
    }

    /// Ranking given directly by a baseline's team ranks.
    pub fn from_baseline(baseline: &BaselineRanking) -> Option<TeamRanking> {
        let ranks = baseline.team_ranks.as_ref()?;
        let mut entries: Vec<TeamRank> = ranks
            .iter()
            .map(|(team, &rank)| TeamRank {
                team: team.clone(),
                aggregate: rank as f64,
                rank,
            })
            .collect();
        entries.sort_by_key(|e| e.rank);
        Some(TeamRanking {
            entries,
            source: RankingSource::Baseline,
        })
    }

    /// `rank,team_id,aggregate`.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["rank", "team_id", "aggregate"])?;
        for e in &self.entries {
            out.write_record([&e.rank.to_string(), &e.team, &e.aggregate.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Mean of `per_game` over the games each team plays as team1.
fn team1_means(
    per_game: &[f64],
    games: &GameSet,
    coverage: Coverage,
    missing: f64,
) -> Result<Vec<(String, f64)>> {
    let mut sums: BTreeMap<&str, (f64, usize)> =
        games.teams().into_iter().map(|t| (t, (0.0, 0))).collect();
    for (g, v) in games.records().iter().zip(per_game) {
        let entry = sums.get_mut(g.team1.as_str()).expect("team collected above");
        entry.0 += v;
        entry.1 += 1;
    }
    sums.into_iter()
        .map(|(team, (sum, count))| {
            if count == 0 {
                match coverage {
                    Coverage::Strict => Err(Error::TeamNotCovered(team.to_string())),
                    Coverage::Lenient => Ok((team.to_string(), missing)),
                }
            } else {
                Ok((team.to_string(), sum / count as f64))
            }
        })
        .collect()
}

fn ranking_from(mut aggregates: Vec<(String, f64)>, ascending: bool, source: RankingSource) -> TeamRanking {
    aggregates.sort_by(|a, b| {
        let ord = if ascending {
            a.1.total_cmp(&b.1)
        } else {
            b.1.total_cmp(&a.1)
        };
        ord.then_with(|| a.0.cmp(&b.0))
    });
    TeamRanking {
        entries: aggregates
            .into_iter()
            .enumerate()
            .map(|(i, (team, aggregate))| TeamRank {
                team,
                aggregate,
                rank: i + 1,
            })
            .collect(),
        source,
    }
}

fn check_space(cs: &CombinedSystem, games: &GameSet, expected: Space) -> Result<()> {
    if cs.spec().space() != expected {
        return Err(Error::WrongSpace {
            expected: expected.as_str(),
            found: cs.spec().space().as_str(),
        });
    }
    if cs.len() != games.len() {
        return Err(Error::ItemCountMismatch(cs.len(), games.len()));
    }
    Ok(())
}

/// Team ranking from a rank combination: each team's aggregate is the mean
/// derived game rank over its team1 games, sorted ascending.
pub fn game_to_team_ranking_rc(
    cs: &CombinedSystem,
    games: &GameSet,
    coverage: Coverage,
) -> Result<TeamRanking> {
    check_space(cs, games, Space::Rank)?;
    let ranks: Vec<f64> = cs.ranks().iter().map(|&r| r as f64).collect();
    let worst = (games.len() + 1) as f64;
    let aggregates = team1_means(&ranks, games, coverage, worst)?;
    Ok(ranking_from(aggregates, true, RankingSource::RankCombination))
}

/// Team ranking from a score combination: each team's aggregate is the mean
/// combined score over its team1 games, sorted descending.
pub fn game_to_team_ranking_sc(
    cs: &CombinedSystem,
    games: &GameSet,
    coverage: Coverage,
) -> Result<TeamRanking> {
    check_space(cs, games, Space::Score)?;
    let aggregates = team1_means(cs.values(), games, coverage, f64::NEG_INFINITY)?;
    Ok(ranking_from(aggregates, false, RankingSource::ScoreCombination))
}

/// Games in `results` won by the better-ranked team.
pub fn team_ranking_tally(tr: &TeamRanking, results: &BracketResults) -> Result<Tally> {
    let ranks: BTreeMap<&str, usize> = tr.entries.iter().map(|e| (e.team.as_str(), e.rank)).collect();
    let lookup = |team: &str| {
        ranks
            .get(team)
            .copied()
            .ok_or_else(|| Error::UnknownTeam(team.to_string()))
    };
    let mut correct = 0;
    for g in results.games() {
        let r1 = lookup(&g.team1)?;
        let r2 = lookup(&g.team2)?;
        let favourite = if r1 < r2 { &g.team1 } else { &g.team2 };
        if *favourite == g.winner {
            correct += 1;
        }
    }
    Ok(Tally {
        correct,
        total: results.len(),
    })
}

pub fn team_ranking_accuracy(tr: &TeamRanking, results: &BracketResults) -> Result<f64> {
    Ok(team_ranking_tally(tr, results)?.fraction())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub label: String,
    pub accuracy: f64,
    pub delta_vs_best_baseline: Option<f64>,
    /// Baselines with strictly lower accuracy.
    pub baselines_beaten: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvaluationReport {
    pub entries: Vec<ReportEntry>,
    pub baselines: Vec<(String, f64)>,
}

impl EvaluationReport {
    pub fn push(&mut self, label: impl Into<String>, accuracy: f64) {
        self.entries.push(ReportEntry {
            label: label.into(),
            accuracy,
            delta_vs_best_baseline: None,
            baselines_beaten: None,
        });
    }

    pub fn best_baseline(&self) -> Option<f64> {
        self.baselines.iter().map(|b| b.1).max_by(f64::total_cmp)
    }

    /// `label,accuracy,delta_vs_best_baseline`.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["label", "accuracy", "delta_vs_best_baseline"])?;
        for e in &self.entries {
            let delta = e.delta_vs_best_baseline.map(|d| d.to_string()).unwrap_or_default();
            out.write_record([&e.label, &e.accuracy.to_string(), &delta])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Fills in each entry's delta against the best baseline accuracy and the
/// number of baselines it strictly beats.
pub fn compare_baselines(
    report: &EvaluationReport,
    baselines: &[BaselineRanking],
) -> Result<EvaluationReport> {
    let scored: Vec<(String, f64)> = baselines
        .iter()
        .filter_map(|b| b.accuracy.map(|a| (b.system_name.clone(), a)))
        .collect();
    let best = scored
        .iter()
        .map(|b| b.1)
        .max_by(f64::total_cmp)
        .ok_or(Error::EmptyBaselines)?;
    let entries = report
        .entries
        .iter()
        .map(|e| ReportEntry {
            label: e.label.clone(),
            accuracy: e.accuracy,
            delta_vs_best_baseline: Some(e.accuracy - best),
            baselines_beaten: Some(scored.iter().filter(|b| e.accuracy > b.1).count()),
        })
        .collect();
    Ok(EvaluationReport {
        entries,
        baselines: scored,
    })
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{:<24} {:>8.4}%", e.label, e.accuracy * 100.0)?;
            if let Some(d) = e.delta_vs_best_baseline {
                write!(f, "  {:+.4}% vs best baseline", d * 100.0)?;
            }
            if let Some(b) = e.baselines_beaten {
                write!(f, "  beats {b}/{}", self.baselines.len())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
