//! Game data: loading and validating the wide CSV layout, mirrored games,
//! difference features, public baseline rankings and bracket results.
//!
//! Wide CSV layout (header required):
//!
//! ```text
//! game_id,season,team1,team2,label[,f_1..f_k][,sys_<NAME>...]
//! ```
//!
//! Feature columns are any header starting with `f_`; score columns start with
//! `sys_` and hold one scoring system's confidence that team1 wins. Mirrored
//! rows are recognised by the `#m` id suffix and linked to their original.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Suffix appended to the id of a mirrored game.
pub const MIRROR_SUFFIX: &str = "#m";

const BASE_COLUMNS: [&str; 5] = ["game_id", "season", "team1", "team2", "label"];

#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub game_id: String,
    pub season: i32,
    pub team1: String,
    pub team2: String,
    /// 1 if team1 won.
    pub label: u8,
    pub features: Option<Vec<f64>>,
    /// Scores of the set's systems, aligned with [`GameSet::system_names`].
    pub system_scores: Vec<f64>,
    pub mirror_of: Option<String>,
}

impl GameRecord {
    pub fn new(
        game_id: impl Into<String>,
        season: i32,
        team1: impl Into<String>,
        team2: impl Into<String>,
        label: u8,
    ) -> Self {
        GameRecord {
            game_id: game_id.into(),
            season,
            team1: team1.into(),
            team2: team2.into(),
            label,
            features: None,
            system_scores: Vec::new(),
            mirror_of: None,
        }
    }

    pub fn with_features(mut self, features: Vec<f64>) -> Self {
        self.features = Some(features);
        self
    }

    pub fn with_scores(mut self, scores: Vec<f64>) -> Self {
        self.system_scores = scores;
        self
    }

    /// True for the added half of a mirror pair.
    pub fn is_mirror(&self) -> bool {
        match &self.mirror_of {
            Some(original) => {
                self.game_id.strip_suffix(MIRROR_SUFFIX) == Some(original.as_str())
            }
            None => false,
        }
    }
}

/// An ordered, validated collection of games. Item `i` of every scoring
/// system defined on the set is `records[i]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GameSet {
    records: Vec<GameRecord>,
    feature_names: Vec<String>,
    system_names: Vec<String>,
    multi_season: bool,
}

impl GameSet {
    pub fn new(
        records: Vec<GameRecord>,
        feature_names: Vec<String>,
        system_names: Vec<String>,
        multi_season: bool,
    ) -> Result<Self> {
        let set = GameSet {
            records,
            feature_names,
            system_names,
            multi_season,
        };
        set.validate()?;
        Ok(set)
    }

    /// A set with no features or score columns.
    pub fn from_records(records: Vec<GameRecord>) -> Result<Self> {
        let multi = records
            .iter()
            .map(|r| r.season)
            .collect::<BTreeSet<_>>()
            .len()
            > 1;
        let dim = records
            .iter()
            .find_map(|r| r.features.as_ref().map(Vec::len))
            .unwrap_or(0);
        let names = (1..=dim).map(|i| format!("f_{i}")).collect();
        let systems = records
            .first()
            .map(|r| r.system_scores.len())
            .unwrap_or(0);
        let system_names = (1..=systems).map(|i| format!("S{i}")).collect();
        Self::new(records, names, system_names, multi)
    }

    fn validate(&self) -> Result<()> {
        let mut ids = HashSet::with_capacity(self.records.len());
        let season = self.records.first().map(|r| r.season);
        let dim = self.feature_names.len();
        for record in &self.records {
            if !ids.insert(record.game_id.as_str()) {
                return Err(Error::DuplicateGameId(record.game_id.clone()));
            }
            if record.team1 == record.team2 {
                return Err(Error::SameTeam(record.game_id.clone()));
            }
            if record.label > 1 {
                return Err(Error::InvalidLabel {
                    game_id: record.game_id.clone(),
                    value: record.label.to_string(),
                });
            }
            if let Some(expected) = season {
                if !self.multi_season && record.season != expected {
                    return Err(Error::MixedSeasons {
                        game_id: record.game_id.clone(),
                        expected,
                        found: record.season,
                    });
                }
            }
            match &record.features {
                Some(f) if f.len() != dim => {
                    return Err(Error::LengthMismatch {
                        expected: dim,
                        found: f.len(),
                    })
                }
                None if dim > 0 => return Err(Error::MissingFeatures(record.game_id.clone())),
                _ => {}
            }
            if record.system_scores.len() != self.system_names.len() {
                return Err(Error::LengthMismatch {
                    expected: self.system_names.len(),
                    found: record.system_scores.len(),
                });
            }
        }

        let index: HashMap<&str, &GameRecord> = self
            .records
            .iter()
            .map(|r| (r.game_id.as_str(), r))
            .collect();
        for record in &self.records {
            let Some(other_id) = &record.mirror_of else {
                continue;
            };
            let broken = || Error::BrokenMirror(record.game_id.clone());
            let other = index.get(other_id.as_str()).ok_or_else(broken)?;
            let negated = match (&record.features, &other.features) {
                (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| *x == -*y),
                (None, None) => true,
                _ => false,
            };
            if other.mirror_of.as_deref() != Some(record.game_id.as_str())
                || other.team1 != record.team2
                || other.team2 != record.team1
                || other.label + record.label != 1
                || !negated
            {
                return Err(broken());
            }
        }
        Ok(())
    }

    pub fn records(&self) -> &[GameRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn system_names(&self) -> &[String] {
        &self.system_names
    }

    pub fn multi_season(&self) -> bool {
        self.multi_season
    }

    pub fn has_features(&self) -> bool {
        !self.feature_names.is_empty()
    }

    pub fn is_mirrored(&self) -> bool {
        self.records.iter().any(|r| r.mirror_of.is_some())
    }

    pub fn labels(&self) -> Vec<u8> {
        self.records.iter().map(|r| r.label).collect()
    }

    /// Scores of the named score column, one per game.
    pub fn system_scores(&self, name: &str) -> Option<Vec<f64>> {
        let col = self.system_names.iter().position(|n| n == name)?;
        Some(self.records.iter().map(|r| r.system_scores[col]).collect())
    }

    /// Index of each mirror counterpart, if linked.
    pub fn mirror_index(&self) -> Vec<Option<usize>> {
        let index: HashMap<&str, usize> = self
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.game_id.as_str(), i))
            .collect();
        self.records
            .iter()
            .map(|r| r.mirror_of.as_deref().and_then(|id| index.get(id).copied()))
            .collect()
    }

    /// Every team id appearing in the set, sorted.
    pub fn teams(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .flat_map(|r| [r.team1.as_str(), r.team2.as_str()])
            .collect()
    }

    /// Records of one season, keeping the set's columns.
    pub fn season(&self, season: i32) -> Result<GameSet> {
        let records = self
            .records
            .iter()
            .filter(|r| r.season == season)
            .cloned()
            .collect();
        GameSet::new(
            records,
            self.feature_names.clone(),
            self.system_names.clone(),
            false,
        )
    }

    /// Drops every score column.
    pub fn without_scores(&self) -> GameSet {
        let mut out = self.clone();
        out.system_names.clear();
        for r in &mut out.records {
            r.system_scores.clear();
        }
        out
    }

    /// Adds a score column.
    pub fn with_system(&self, name: impl Into<String>, scores: &[f64]) -> Result<GameSet> {
        if scores.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: scores.len(),
            });
        }
        let mut out = self.clone();
        out.system_names.push(name.into());
        for (r, s) in out.records.iter_mut().zip(scores) {
            r.system_scores.push(*s);
        }
        out.validate()?;
        Ok(out)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
        header.extend(self.feature_names.iter().cloned());
        header.extend(self.system_names.iter().map(|n| format!("sys_{n}")));
        out.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![
                r.game_id.clone(),
                r.season.to_string(),
                r.team1.clone(),
                r.team2.clone(),
                r.label.to_string(),
            ];
            if let Some(f) = &r.features {
                row.extend(f.iter().map(f64::to_string));
            }
            row.extend(r.system_scores.iter().map(f64::to_string));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        self.write_csv(file).map_err(|source| Error::Csv {
            path: path.into(),
            source,
        })
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.into(),
        source,
    })
}

fn parse_f64(path: &Path, row: usize, column: &str, text: &str) -> Result<f64> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::parse(path, row, format!("missing value in column {column}")));
    }
    text.parse::<f64>()
        .map_err(|_| Error::parse(path, row, format!("column {column}: {text:?} is not a number")))
}

/// Loads a single-season wide CSV file.
pub fn load_games(path: &Path) -> Result<GameSet> {
    load_games_from(open(path)?, path, false)
}

/// Loads a wide CSV file that may span several seasons.
pub fn load_games_multi(path: &Path) -> Result<GameSet> {
    load_games_from(open(path)?, path, true)
}

/// Parses wide CSV from any reader; `path` is only used in error messages.
pub fn load_games_from<R: Read>(reader: R, path: &Path, multi_season: bool) -> Result<GameSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let csv_err = |source| Error::Csv {
        path: path.into(),
        source,
    };
    let header = rdr.headers().map_err(csv_err)?.clone();
    for (i, expected) in BASE_COLUMNS.iter().enumerate() {
        if header.get(i) != Some(*expected) {
            return Err(Error::parse(
                path,
                1,
                format!("column {} must be {expected:?}", i + 1),
            ));
        }
    }
    let mut feature_cols = Vec::new();
    let mut system_cols = Vec::new();
    for (i, name) in header.iter().enumerate().skip(BASE_COLUMNS.len()) {
        if let Some(system) = name.strip_prefix("sys_") {
            if system.is_empty() {
                return Err(Error::parse(path, 1, "empty system name in sys_ column"));
            }
            system_cols.push((i, system.to_string()));
        } else if name.starts_with("f_") {
            if !system_cols.is_empty() {
                return Err(Error::parse(path, 1, "feature columns must precede sys_ columns"));
            }
            feature_cols.push((i, name.to_string()));
        } else {
            return Err(Error::parse(path, 1, format!("unexpected column {name:?}")));
        }
    }

    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if row.len() != header.len() {
            return Err(Error::parse(
                path,
                line,
                format!("{} fields, header has {}", row.len(), header.len()),
            ));
        }
        let game_id = row[0].to_string();
        if game_id.is_empty() {
            return Err(Error::parse(path, line, "empty game_id"));
        }
        let season = row[1]
            .parse::<i32>()
            .map_err(|_| Error::parse(path, line, format!("season {:?} is not an integer", &row[1])))?;
        let label = match &row[4] {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(Error::InvalidLabel {
                    game_id,
                    value: other.to_string(),
                })
            }
        };
        let features = if feature_cols.is_empty() {
            None
        } else {
            Some(
                feature_cols
                    .iter()
                    .map(|(c, name)| parse_f64(path, line, name, &row[*c]))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        let system_scores = system_cols
            .iter()
            .map(|(c, name)| parse_f64(path, line, name, &row[*c]))
            .collect::<Result<Vec<_>>>()?;
        records.push(GameRecord {
            game_id,
            season,
            team1: row[2].to_string(),
            team2: row[3].to_string(),
            label,
            features,
            system_scores,
            mirror_of: None,
        });
    }
    if records.is_empty() {
        return Err(Error::parse(path, 2, "no games"));
    }

    // Link `<id>#m` rows to `<id>`.
    let ids: HashSet<String> = records.iter().map(|r| r.game_id.clone()).collect();
    let mut links = Vec::new();
    for record in &records {
        if let Some(original) = record.game_id.strip_suffix(MIRROR_SUFFIX) {
            if ids.contains(original) {
                links.push((original.to_string(), record.game_id.clone()));
            }
        }
    }
    if !links.is_empty() {
        let map: HashMap<String, String> = links
            .iter()
            .flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())])
            .collect();
        for record in &mut records {
            record.mirror_of = map.get(&record.game_id).cloned();
        }
    }

    GameSet::new(
        records,
        feature_cols.into_iter().map(|(_, n)| n).collect(),
        system_cols.into_iter().map(|(_, n)| n).collect(),
        multi_season,
    )
}

/// Appends a mirrored copy of every game: teams swapped, label flipped,
/// features negated. Original `i` pairs with record `n + i`.
///
/// Score columns are read as team1-win probabilities, so the mirrored game
/// gets `1 - p`.
pub fn mirror(games: &GameSet) -> Result<GameSet> {
    if games.is_mirrored() {
        return Err(Error::AlreadyMirrored);
    }
    let mut records = games.records.clone();
    for original in &games.records {
        let id = format!("{}{}", original.game_id, MIRROR_SUFFIX);
        records.push(GameRecord {
            game_id: id,
            season: original.season,
            team1: original.team2.clone(),
            team2: original.team1.clone(),
            label: 1 - original.label,
            features: original
                .features
                .as_ref()
                .map(|f| f.iter().map(|x| -x).collect()),
            system_scores: original.system_scores.iter().map(|p| 1.0 - p).collect(),
            mirror_of: Some(original.game_id.clone()),
        });
    }
    let n = games.len();
    for i in 0..n {
        records[i].mirror_of = Some(records[n + i].game_id.clone());
    }
    GameSet::new(
        records,
        games.feature_names.clone(),
        games.system_names.clone(),
        games.multi_season,
    )
}

/// Per-team statistics vectors, all of the same length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TeamStats {
    names: Vec<String>,
    by_team: BTreeMap<String, Vec<f64>>,
}

impl TeamStats {
    pub fn new(names: Vec<String>, by_team: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        for stats in by_team.values() {
            if stats.len() != names.len() {
                return Err(Error::LengthMismatch {
                    expected: names.len(),
                    found: stats.len(),
                });
            }
        }
        Ok(TeamStats { names, by_team })
    }

    /// Builds from a plain map, naming the columns `stat_1..stat_k`.
    pub fn from_map(by_team: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let dim = by_team.values().next().map(Vec::len).unwrap_or(0);
        Self::new((1..=dim).map(|i| format!("stat_{i}")).collect(), by_team)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, team: &str) -> Option<&[f64]> {
        self.by_team.get(team).map(Vec::as_slice)
    }

    /// Loads `team_id,stat_1..stat_k`.
    pub fn load(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(open(path)?);
        let header = rdr
            .headers()
            .map_err(|source| Error::Csv {
                path: path.into(),
                source,
            })?
            .clone();
        if header.get(0) != Some("team_id") {
            return Err(Error::parse(path, 1, "first column must be \"team_id\""));
        }
        let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut by_team = BTreeMap::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
            let values = names
                .iter()
                .enumerate()
                .map(|(c, name)| parse_f64(path, line, name, row.get(c + 1).unwrap_or("")))
                .collect::<Result<Vec<_>>>()?;
            if by_team.insert(row[0].to_string(), values).is_some() {
                return Err(Error::parse(path, line, format!("duplicate team {:?}", &row[0])));
            }
        }
        Self::new(names, by_team)
    }
}

/// Replaces each game's features with `stats(team1) - stats(team2)`.
pub fn difference_features(stats: &TeamStats, games: &GameSet) -> Result<GameSet> {
    let dim = stats.names.len();
    let lookup = |team: &str| -> Result<&[f64]> {
        let v = stats
            .get(team)
            .ok_or_else(|| Error::MissingTeam(team.to_string()))?;
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        Ok(v)
    };
    let mut records = games.records.clone();
    for r in &mut records {
        let a = lookup(&r.team1)?;
        let b = lookup(&r.team2)?;
        r.features = Some(a.iter().zip(b).map(|(x, y)| x - y).collect());
    }
    GameSet::new(
        records,
        stats.names.clone(),
        games.system_names.clone(),
        games.multi_season,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRanking {
    pub system_name: String,
    pub accuracy: Option<f64>,
    pub team_ranks: Option<BTreeMap<String, usize>>,
}

impl BaselineRanking {
    fn validate(&self) -> Result<()> {
        if let Some(a) = self.accuracy {
            if !(0.0..=1.0).contains(&a) || a.is_nan() {
                return Err(Error::InvalidAccuracy {
                    system: self.system_name.clone(),
                    value: a,
                });
            }
        }
        if let Some(ranks) = &self.team_ranks {
            let seen: BTreeSet<usize> = ranks.values().copied().collect();
            let n = ranks.len();
            if seen.len() != n || seen.first() != Some(&1) || seen.last() != Some(&n) {
                return Err(Error::NotAPermutation(self.system_name.clone()));
            }
        }
        Ok(())
    }
}

/// Best accuracy among baselines that report one.
pub fn best_baseline_accuracy(baselines: &[BaselineRanking]) -> Option<f64> {
    baselines
        .iter()
        .filter_map(|b| b.accuracy)
        .max_by(f64::total_cmp)
}

/// Loads `system_name,accuracy` or the long form `system_name,team_id,rank`.
pub fn load_baselines(path: &Path) -> Result<Vec<BaselineRanking>> {
    let mut text = String::new();
    open(path)?
        .read_to_string(&mut text)
        .map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
    load_baselines_from(text.as_bytes(), path)
}

pub fn load_baselines_from<R: Read>(reader: R, path: &Path) -> Result<Vec<BaselineRanking>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|source| Error::Csv {
            path: path.into(),
            source,
        })?
        .clone();
    let cols: Vec<&str> = header.iter().collect();
    let long_form = match cols.as_slice() {
        [] | [""] => return Ok(Vec::new()),
        ["system_name", "accuracy"] => false,
        ["system_name", "team_id", "rank"] => true,
        _ => {
            return Err(Error::parse(
                path,
                1,
                "expected header system_name,accuracy or system_name,team_id,rank",
            ))
        }
    };

    let mut out: Vec<BaselineRanking> = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
        let name = row[0].to_string();
        if long_form {
            let team = row[1].to_string();
            let rank = row[2]
                .parse::<usize>()
                .map_err(|_| Error::parse(path, line, format!("rank {:?} is not a positive integer", &row[2])))?;
            let entry = match out.iter_mut().position(|b| b.system_name == name) {
                Some(p) => &mut out[p],
                None => {
                    out.push(BaselineRanking {
                        system_name: name,
                        accuracy: None,
                        team_ranks: Some(BTreeMap::new()),
                    });
                    out.last_mut().unwrap()
                }
            };
            let ranks = entry.team_ranks.get_or_insert_with(BTreeMap::new);
            if ranks.insert(team.clone(), rank).is_some() {
                return Err(Error::parse(path, line, format!("team {team:?} ranked twice")));
            }
        } else {
            let accuracy = parse_f64(path, line, "accuracy", &row[1])?;
            if out.iter().any(|b| b.system_name == name) {
                return Err(Error::parse(path, line, format!("duplicate system {name:?}")));
            }
            out.push(BaselineRanking {
                system_name: name,
                accuracy: Some(accuracy),
                team_ranks: None,
            });
        }
    }
    for b in &out {
        b.validate()?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketGame {
    pub round: u32,
    pub team1: String,
    pub team2: String,
    pub winner: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BracketResults {
    games: Vec<BracketGame>,
}

impl BracketResults {
    pub fn new(games: Vec<BracketGame>) -> Result<Self> {
        for (index, g) in games.iter().enumerate() {
            if g.winner != g.team1 && g.winner != g.team2 {
                return Err(Error::InvalidWinner {
                    index: index + 1,
                    winner: g.winner.clone(),
                });
            }
        }
        let teams: BTreeSet<&str> = games
            .iter()
            .flat_map(|g| [g.team1.as_str(), g.team2.as_str()])
            .collect();
        if teams.len() == 64 && games.len() != 63 {
            return Err(Error::BracketSize {
                teams: 64,
                found: games.len(),
                expected: 63,
            });
        }
        Ok(BracketResults { games })
    }

    pub fn games(&self) -> &[BracketGame] {
        &self.games
    }

    pub fn len(&self) -> usize {
        self.games.len()
    }

    pub fn is_empty(&self) -> bool {
        self.games.is_empty()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(open(path)?);
        let header = rdr
            .headers()
            .map_err(|source| Error::Csv {
                path: path.into(),
                source,
            })?
            .clone();
        if header.iter().collect::<Vec<_>>() != ["round", "team1", "team2", "winner"] {
            return Err(Error::parse(path, 1, "expected header round,team1,team2,winner"));
        }
        let mut games = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
            let round = row[0]
                .parse()
                .map_err(|_| Error::parse(path, line, format!("round {:?} is not an integer", &row[0])))?;
            games.push(BracketGame {
                round,
                team1: row[1].to_string(),
                team2: row[2].to_string(),
                winner: row[3].to_string(),
            });
        }
        Self::new(games)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["round", "team1", "team2", "winner"])?;
        for g in &self.games {
            out.write_record([&g.round.to_string(), &g.team1, &g.team2, &g.winner])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test.csv")
    }

    #[test]
    fn loads_rows_in_order() {
        let csv = "game_id,season,team1,team2,label,f_1,sys_A\n\
                   G1,2024,X,Y,1,3.0,0.8\n\
                   G2,2024,Y,Z,0,-1,0.4\n\
                   G3,2024,Z,X,1,2.5,0.6\n\
                   G4,2024,X,Z,0,0,0.1\n";
        let set = load_games_from(csv.as_bytes(), p(), false).unwrap();
        assert_eq!(set.len(), 4);
        assert_eq!(set.records()[0].game_id, "G1");
        assert_eq!(set.records()[0].features, Some(vec![3.0]));
        assert_eq!(set.system_names(), &["A".to_string()]);
        assert_eq!(set.system_scores("A").unwrap(), vec![0.8, 0.4, 0.6, 0.1]);
        assert!(!set.is_mirrored());
    }

    #[test]
    fn duplicate_id_named() {
        let csv = "game_id,season,team1,team2,label\nG7,2024,X,Y,1\nG7,2024,Y,Z,1\n";
        let err = load_games_from(csv.as_bytes(), p(), false).unwrap_err();
        assert!(matches!(&err, Error::DuplicateGameId(id) if id == "G7"));
        assert!(err.to_string().contains("G7"));
    }

    #[test]
    fn bad_label_and_bad_number() {
        let csv = "game_id,season,team1,team2,label\nG1,2024,X,Y,2\n";
        assert!(matches!(
            load_games_from(csv.as_bytes(), p(), false),
            Err(Error::InvalidLabel { .. })
        ));
        let csv = "game_id,season,team1,team2,label,f_1\nG1,2024,X,Y,1,abc\n";
        let err = load_games_from(csv.as_bytes(), p(), false).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }), "{err}");
        let csv = "game_id,season,team1,team2,label,f_1\nG1,2024,X,Y,1,\n";
        assert!(matches!(
            load_games_from(csv.as_bytes(), p(), false),
            Err(Error::Parse { row: 2, .. })
        ));
    }

    #[test]
    fn mixed_seasons_need_flag() {
        let csv = "game_id,season,team1,team2,label\nG1,2023,X,Y,1\nG2,2024,X,Y,1\n";
        assert!(matches!(
            load_games_from(csv.as_bytes(), p(), false),
            Err(Error::MixedSeasons { .. })
        ));
        assert_eq!(load_games_from(csv.as_bytes(), p(), true).unwrap().len(), 2);
    }

    #[test]
    fn mirror_example() {
        let set = GameSet::from_records(vec![
            GameRecord::new("G1", 2024, "X", "Y", 1).with_features(vec![3.0, -1.5])
        ])
        .unwrap();
        let m = mirror(&set).unwrap();
        assert_eq!(m.len(), 2);
        let added = &m.records()[1];
        assert_eq!(added.game_id, "G1#m");
        assert_eq!((added.team1.as_str(), added.team2.as_str()), ("Y", "X"));
        assert_eq!(added.label, 0);
        assert_eq!(added.features, Some(vec![-3.0, 1.5]));
        assert_eq!(added.mirror_of.as_deref(), Some("G1"));
        assert_eq!(m.records()[0].mirror_of.as_deref(), Some("G1#m"));
        assert!(added.is_mirror());
        assert!(!m.records()[0].is_mirror());
        assert!(matches!(mirror(&m), Err(Error::AlreadyMirrored)));
    }

    #[test]
    fn mirror_empty_and_counts() {
        assert!(mirror(&GameSet::default()).unwrap().is_empty());
        let records = (0..5)
            .map(|i| GameRecord::new(format!("G{i}"), 2024, format!("T{i}"), "Z", 1))
            .collect();
        let m = mirror(&GameSet::from_records(records).unwrap()).unwrap();
        assert_eq!(m.len(), 10);
        let idx = m.mirror_index();
        for i in 0..5 {
            assert_eq!(idx[i], Some(i + 5));
            assert_eq!(idx[i + 5], Some(i));
        }
    }

    #[test]
    fn mirror_complements_scores() {
        let set = GameSet::new(
            vec![GameRecord::new("G1", 2024, "X", "Y", 1).with_scores(vec![0.75])],
            vec![],
            vec!["A".into()],
            false,
        )
        .unwrap();
        let m = mirror(&set).unwrap();
        assert_eq!(m.system_scores("A").unwrap(), vec![0.75, 0.25]);
    }

    #[test]
    fn mirrored_file_round_trip() {
        let set = GameSet::from_records(vec![
            GameRecord::new("G1", 2024, "X", "Y", 1).with_features(vec![1.25]),
            GameRecord::new("G2", 2024, "Y", "Z", 0).with_features(vec![-0.5]),
        ])
        .unwrap();
        let m = mirror(&set).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let back = load_games_from(buf.as_slice(), p(), false).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn broken_mirror_rejected() {
        let csv = "game_id,season,team1,team2,label\nG1,2024,X,Y,1\nG1#m,2024,Y,X,1\n";
        assert!(matches!(
            load_games_from(csv.as_bytes(), p(), false),
            Err(Error::BrokenMirror(_))
        ));
    }

    #[test]
    fn difference_features_examples() {
        let mut map = BTreeMap::new();
        map.insert("X".to_string(), vec![10.0, 2.0]);
        map.insert("Y".to_string(), vec![7.0, 5.0]);
        map.insert("W".to_string(), vec![7.0, 5.0]);
        let stats = TeamStats::from_map(map).unwrap();
        let games = GameSet::from_records(vec![
            GameRecord::new("G1", 2024, "X", "Y", 1),
            GameRecord::new("G2", 2024, "Y", "X", 0),
            GameRecord::new("G3", 2024, "Y", "W", 1),
        ])
        .unwrap();
        let out = difference_features(&stats, &games).unwrap();
        assert_eq!(out.records()[0].features, Some(vec![3.0, -3.0]));
        assert_eq!(out.records()[1].features, Some(vec![-3.0, 3.0]));
        assert_eq!(out.records()[2].features, Some(vec![0.0, 0.0]));
        assert_eq!(out.feature_names(), &["stat_1", "stat_2"]);

        let missing = GameSet::from_records(vec![GameRecord::new("G9", 2024, "X", "Q", 1)]).unwrap();
        assert!(matches!(
            difference_features(&stats, &missing),
            Err(Error::MissingTeam(t)) if t == "Q"
        ));
    }

    #[test]
    fn team_stats_length_mismatch() {
        let mut map = BTreeMap::new();
        map.insert("X".to_string(), vec![1.0, 2.0]);
        map.insert("Y".to_string(), vec![1.0]);
        assert!(matches!(
            TeamStats::from_map(map),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn baselines_short_and_long() {
        let short = "system_name,accuracy\nLogan,0.7302\nMassey,0.6984\n";
        let b = load_baselines_from(short.as_bytes(), p()).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].accuracy, Some(0.7302));
        assert_eq!(best_baseline_accuracy(&b), Some(0.7302));

        let long = "system_name,team_id,rank\nK,X,2\nK,Y,1\nK,Z,3\n";
        let b = load_baselines_from(long.as_bytes(), p()).unwrap();
        assert_eq!(b[0].team_ranks.as_ref().unwrap()["Y"], 1);

        let gap = "system_name,team_id,rank\nK,X,1\nK,Y,3\n";
        assert!(matches!(
            load_baselines_from(gap.as_bytes(), p()),
            Err(Error::NotAPermutation(_))
        ));
        let bad = "system_name,accuracy\nK,1.2\n";
        assert!(matches!(
            load_baselines_from(bad.as_bytes(), p()),
            Err(Error::InvalidAccuracy { .. })
        ));
        assert!(load_baselines_from("".as_bytes(), p()).unwrap().is_empty());
        assert!(load_baselines_from("system_name,accuracy\n".as_bytes(), p())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn bracket_validation() {
        let bad = vec![BracketGame {
            round: 1,
            team1: "X".into(),
            team2: "Y".into(),
            winner: "Z".into(),
        }];
        assert!(matches!(
            BracketResults::new(bad),
            Err(Error::InvalidWinner { .. })
        ));
        let partial: Vec<BracketGame> = (0..32)
            .map(|i| BracketGame {
                round: 1,
                team1: format!("T{}", 2 * i),
                team2: format!("T{}", 2 * i + 1),
                winner: format!("T{}", 2 * i),
            })
            .collect();
        assert!(matches!(
            BracketResults::new(partial),
            Err(Error::BracketSize { found: 32, .. })
        ));
    }
}
