//! Seeded synthetic inputs for the bundled example configs and tests.
//!
//! Each selection season plants one "trio" of systems. Every trio member is
//! wrong on its own small block of games while the other two are confidently
//! right there, so the trio outvotes each mistake but no pair can. Each of
//! the two remaining systems has a block where it alone is wrong with near
//! certainty, which drags any subset containing it back to the best single
//! system's accuracy. All five systems end up equally accurate.

use std::path::Path;

use cfa_core::dataset::{BracketGame, BracketResults, GameRecord, GameSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{io_err, CliResult, Context};
use crate::reports::{write_text, write_with};

pub const SYSTEMS: [&str; 5] = ["A", "B", "C", "D", "E"];
pub const FIRST_SEASON: i32 = 2014;
pub const TARGET_SEASON: i32 = 2024;
pub const DEFAULT_SEED: u64 = 20240407;

/// Planted trio for each selection season, as indices into [`SYSTEMS`].
pub const SCHEDULE: [[usize; 3]; 10] = [
    [0, 1, 4],
    [0, 3, 4],
    [0, 1, 4],
    [1, 2, 3],
    [0, 1, 4],
    [0, 3, 4],
    [0, 1, 4],
    [0, 1, 4],
    [0, 3, 4],
    [0, 1, 4],
];

const GAMES_PER_SEASON: usize = 60;
const BLOCK: usize = 6;
const TEAMS: usize = 64;

/// Public ranking systems and their 2024 bracket accuracies.
pub const BASELINES: [(&str, f64); 10] = [
    ("INCC Stats", 0.7143),
    ("Jelly Juke", 0.6667),
    ("Joby Nitty Gritty", 0.6984),
    ("Logan", 0.7302),
    ("Massey", 0.6984),
    ("Moore", 0.7143),
    ("NET Rankings", 0.7302),
    ("ESPN SOR", 0.6984),
    ("Sports Ratings", 0.6825),
    ("Donchess Inference", 0.6984),
];

fn team(i: usize) -> String {
    format!("T{:02}", i + 1)
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn two_teams(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let a = rng.gen_range(0..TEAMS);
    let mut b = rng.gen_range(0..TEAMS - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn features(rng: &mut ChaCha8Rng, signal: f64) -> Vec<f64> {
    vec![
        round4(signal + rng.gen_range(-1.0..1.0)),
        round4(rng.gen_range(-1.0..1.0)),
    ]
}

fn game_set(records: Vec<GameRecord>) -> GameSet {
    let systems = SYSTEMS.iter().map(|s| s.to_string()).collect();
    GameSet::new(records, vec!["f_1".into(), "f_2".into()], systems, false).expect("fixture games are valid")
}

/// One selection season with `trio` planted.
pub fn selection_season(rng: &mut ChaCha8Rng, season: i32, trio: [usize; 3]) -> GameSet {
    let others: Vec<usize> = (0..SYSTEMS.len()).filter(|k| !trio.contains(k)).collect();
    // 0: everyone right; 1..=3: one trio member wrong; 4, 5: one other system wrong
    let mut blocks: Vec<usize> = std::iter::repeat(0)
        .take(GAMES_PER_SEASON - 5 * BLOCK)
        .chain((1..=5).flat_map(|b| std::iter::repeat(b).take(BLOCK)))
        .collect();
    blocks.shuffle(rng);

    let records = blocks
        .iter()
        .enumerate()
        .map(|(g, &block)| {
            let label = u8::from(rng.gen_bool(0.5));
            let (t1, t2) = two_teams(rng);
            let jitter = |rng: &mut ChaCha8Rng| rng.gen_range(-0.02..0.02);
            let scores: Vec<f64> = (0..SYSTEMS.len())
                .map(|k| {
                    // confidence placed on the actual winner
                    let c = match block {
                        0 => 0.70,
                        1..=3 if trio[block - 1] == k => 0.20,
                        1..=3 if trio.contains(&k) => 0.78,
                        1..=3 => 0.70,
                        _ if others[block - 4] == k => 0.03,
                        _ => 0.60,
                    } + jitter(rng);
                    round4(if label == 1 { c } else { 1.0 - c })
                })
                .collect();
            let signal = if label == 1 { 0.6 } else { -0.6 };
            GameRecord::new(format!("g{:03}", g + 1), season, team(t1), team(t2), label)
                .with_features(features(rng, signal))
                .with_scores(scores)
        })
        .collect();
    game_set(records)
}

fn strength(i: usize) -> f64 {
    (TEAMS - i) as f64 / TEAMS as f64 * 4.0
}

/// Target season: every team plays at least once; win chances follow a
/// fixed strength order with T01 strongest.
pub fn target_season(rng: &mut ChaCha8Rng) -> GameSet {
    let mut order: Vec<usize> = (0..TEAMS).collect();
    order.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = order.chunks(2).map(|p| (p[0], p[1])).collect();
    pairs.extend((0..128).map(|_| two_teams(rng)));

    let slopes = [1.0, 0.9, 1.1, 0.8, 1.2];
    let records = pairs
        .iter()
        .enumerate()
        .map(|(g, &(a, b))| {
            let diff = strength(a) - strength(b);
            let label = u8::from(rng.gen_bool(sigmoid(diff)));
            let scores = slopes
                .iter()
                .map(|k| round4(sigmoid(k * diff + rng.gen_range(-0.8..0.8))))
                .collect();
            GameRecord::new(format!("g{:03}", g + 1), TARGET_SEASON, team(a), team(b), label)
                .with_features(features(rng, diff / 4.0))
                .with_scores(scores)
        })
        .collect();
    game_set(records)
}

/// 64-team single elimination; the stronger team wins with logistic odds.
pub fn target_bracket(rng: &mut ChaCha8Rng) -> BracketResults {
    let mut alive: Vec<usize> = (0..TEAMS / 2).flat_map(|i| [i, TEAMS - 1 - i]).collect();
    let mut games = Vec::new();
    let mut round = 1;
    while alive.len() > 1 {
        let mut next = Vec::with_capacity(alive.len() / 2);
        for p in alive.chunks(2) {
            let first = rng.gen_bool(sigmoid(strength(p[0]) - strength(p[1])));
            let w = if first { p[0] } else { p[1] };
            games.push(BracketGame {
                round,
                team1: team(p[0]),
                team2: team(p[1]),
                winner: team(w),
            });
            next.push(w);
        }
        alive = next;
        round += 1;
    }
    BracketResults::new(games).expect("63 valid games")
}

fn baselines_csv() -> String {
    let mut out = String::from("system_name,accuracy\n");
    for (name, acc) in BASELINES {
        out.push_str(&format!("{name},{acc}\n"));
    }
    out
}

const CONFIG: &str = r#"# Synthetic ten-season fixture: five score columns, mirrored games.
output_dir = "out"

[data]
games = [
    "season_2014.csv", "season_2015.csv", "season_2016.csv", "season_2017.csv",
    "season_2018.csv", "season_2019.csv", "season_2020.csv", "season_2021.csv",
    "season_2022.csv", "season_2023.csv", "season_2024.csv",
]
mirror = "all"

[[systems]]
name = "A"

[[systems]]
name = "B"

[[systems]]
name = "C"

[[systems]]
name = "D"

[[systems]]
name = "E"

[fusion]
spaces = ["SC", "RC"]
weightings = ["AC", "WCDS", "WCP"]

[performance]
source = "validation"
season = 2014

[selection]
deploy_space = "RC"
deploy_weighting = "WCDS"

[target]
season = 2024
results = "results_2024.csv"
baselines = "baselines.csv"
"#;

const BUILTIN_CONFIG: &str = r#"# Two score columns plus two scorers trained on the game features.
output_dir = "out-builtin"

[data]
games = [
    "season_2014.csv", "season_2015.csv", "season_2016.csv", "season_2017.csv",
    "season_2018.csv", "season_2024.csv",
]
mirror = "all"

[[systems]]
name = "A"

[[systems]]
name = "B"

[[systems]]
name = "LR"
kind = "logistic"

[[systems]]
name = "CEN"
kind = "centroid"

[builtin]
train_seasons = [2014, 2015]

[performance]
source = "in_sample"

[target]
season = 2024
results = "results_2024.csv"
baselines = "baselines.csv"
"#;

/// Writes the synthetic seasons, target bracket, baselines and both
/// example configs into `dir`.
pub fn write_synthetic(dir: &Path, seed: u64) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, trio) in SCHEDULE.iter().enumerate() {
        let season = FIRST_SEASON + i as i32;
        let games = selection_season(&mut rng, season, *trio);
        games
            .save(&dir.join(format!("season_{season}.csv")))
            .context(|| "fixture".into())?;
    }
    target_season(&mut rng)
        .save(&dir.join(format!("season_{TARGET_SEASON}.csv")))
        .context(|| "fixture".into())?;
    let bracket = target_bracket(&mut rng);
    write_with(&dir.join(format!("results_{TARGET_SEASON}.csv")), |w| bracket.write_csv(w))?;
    write_text(&dir.join("baselines.csv"), &baselines_csv())?;
    write_text(&dir.join("config.toml"), CONFIG)?;
    write_text(&dir.join("builtin.toml"), BUILTIN_CONFIG)
}

/// A ranking of T01..T64 in order and a bracket where it picks 47 of 63
/// winners: the sixteen best seeds lose in round one, every other game
/// goes to the better-ranked team.
pub fn write_bracket(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut ranking = String::from("rank,team_id,aggregate\n");
    for i in 0..TEAMS {
        ranking.push_str(&format!("{},{},{}\n", i + 1, team(i), i + 1));
    }
    let mut alive: Vec<usize> = (0..TEAMS / 2).flat_map(|i| [i, TEAMS - 1 - i]).collect();
    let mut games = Vec::new();
    let mut round = 1;
    while alive.len() > 1 {
        let mut next = Vec::new();
        for p in alive.chunks(2) {
            let (better, worse) = (p[0].min(p[1]), p[0].max(p[1]));
            let w = if round == 1 && better < 16 { worse } else { better };
            games.push(BracketGame {
                round,
                team1: team(p[0]),
                team2: team(p[1]),
                winner: team(w),
            });
            next.push(w);
        }
        alive = next;
        round += 1;
    }
    let results = BracketResults::new(games).expect("63 valid games");
    write_text(&dir.join("ranking.csv"), &ranking)?;
    write_with(&dir.join("results.csv"), |w| results.write_csv(w))?;
    write_text(&dir.join("baselines.csv"), &baselines_csv())
}
