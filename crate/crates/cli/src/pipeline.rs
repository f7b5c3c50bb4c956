//! The full pipeline behind `cfa run`, and the per-step helpers the other
//! subcommands share.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cfa_core::builtin_scorers::{train_centroid, train_logistic, BaseModel};
use cfa_core::dataset::{
    difference_features, load_baselines, load_games, mirror, BracketResults, GameRecord, GameSet, TeamStats,
};
use cfa_core::diversity::DiversityMatrix;
use cfa_core::evaluation::{
    compare_baselines, game_to_team_ranking_rc, game_to_team_ranking_sc, predict, system_accuracy,
    team_ranking_accuracy, Coverage, EvaluationReport, PredictionMode, TeamRanking,
};
use cfa_core::fusion::{fuse_all, CombinedSystem, EnsembleSpec, FusionConfig, Space};
use cfa_core::scoring::{write_rsc_csv, ScoringSystem};
use cfa_core::selection::{improvement_table, select_model, SelectionConfig, YearResult};
use log::{info, warn};
use rayon::prelude::*;

use crate::config::{BuiltinConfig, MirrorMode, PerformanceSource, PipelineConfig, SystemKind};
use crate::error::{CliError, CliResult, Context};
use crate::plot;
use crate::reports::{self, write_with};

/// Loads one file per season, optionally swapping in difference features.
pub fn load_seasons(paths: &[PathBuf], team_stats: Option<&Path>) -> CliResult<Vec<GameSet>> {
    let stats = team_stats
        .map(|p| TeamStats::load(p).context(|| "dataset: team stats".into()))
        .transpose()?;
    let mut seasons: Vec<GameSet> = Vec::with_capacity(paths.len());
    for path in paths {
        let mut games = load_games(path).context(|| "dataset".into())?;
        if let Some(stats) = &stats {
            games = difference_features(stats, &games)
                .context(|| format!("dataset: difference features for {}", path.display()))?;
        }
        let season = games.records()[0].season;
        if seasons.iter().any(|g| g.records()[0].season == season) {
            return Err(CliError::Input {
                path: path.clone(),
                message: format!("season {season} is loaded twice"),
            });
        }
        seasons.push(games);
    }
    seasons.sort_by_key(|g| g.records()[0].season);
    Ok(seasons)
}

pub fn season_of(games: &GameSet) -> i32 {
    games.records()[0].season
}

/// Features and labels of several seasons in one set; game ids get a
/// season prefix so they stay unique.
fn training_set(seasons: &[&GameSet]) -> CliResult<GameSet> {
    let names = seasons[0].feature_names().to_vec();
    if names.is_empty() {
        return Err(CliError::config("builtin scorers need feature columns or data.team_stats"));
    }
    let mut records = Vec::new();
    for games in seasons {
        if games.feature_names() != names.as_slice() {
            return Err(CliError::config(format!(
                "season {} has different feature columns",
                season_of(games)
            )));
        }
        for r in games.records() {
            let prefix = |id: &str| format!("{}:{id}", r.season);
            let mut copy = GameRecord::new(prefix(&r.game_id), r.season, &r.team1, &r.team2, r.label);
            copy.features = r.features.clone();
            copy.mirror_of = r.mirror_of.as_deref().map(prefix);
            records.push(copy);
        }
    }
    GameSet::new(records, names, Vec::new(), true).context(|| "builtin: training set".into())
}

/// Trains every builtin system on `builtin.train_seasons`.
pub fn train_builtins(
    systems: &[(String, SystemKind)],
    seasons: &[GameSet],
    config: &BuiltinConfig,
    mirror_mode: MirrorMode,
) -> CliResult<BTreeMap<String, BaseModel>> {
    let wanted: Vec<&(String, SystemKind)> = systems
        .iter()
        .filter(|(_, k)| !matches!(k, SystemKind::Column { .. }))
        .collect();
    let mut models = BTreeMap::new();
    if wanted.is_empty() {
        return Ok(models);
    }
    let chosen: Vec<&GameSet> = config
        .train_seasons
        .iter()
        .map(|s| {
            seasons
                .iter()
                .find(|g| season_of(g) == *s)
                .ok_or_else(|| CliError::config(format!("training season {s} is not loaded")))
        })
        .collect::<CliResult<_>>()?;
    let mut train = training_set(&chosen)?;
    if mirror_mode != MirrorMode::None && !train.is_mirrored() {
        train = mirror(&train).context(|| "builtin: mirroring training set".into())?;
    }
    for (name, kind) in wanted {
        let model = match kind {
            SystemKind::Logistic => BaseModel::Logistic {
                name: name.clone(),
                model: train_logistic(&train, &config.logistic())
                    .context(|| format!("builtin: training {name}"))?,
            },
            SystemKind::Centroid => BaseModel::Centroid {
                name: name.clone(),
                model: train_centroid(&train, config.centroid_scale)
                    .context(|| format!("builtin: training {name}"))?,
            },
            SystemKind::Column { .. } => unreachable!(),
        };
        info!("trained {name} on {} games", train.len());
        models.insert(name.clone(), model);
    }
    Ok(models)
}

/// The configured systems scored on one season, in config order.
pub fn score_systems(
    games: &GameSet,
    systems: &[(String, SystemKind)],
    models: &BTreeMap<String, BaseModel>,
) -> CliResult<Vec<ScoringSystem>> {
    let season = season_of(games);
    systems
        .iter()
        .map(|(name, kind)| match kind {
            SystemKind::Column { column, orientation } => {
                let scores = games.system_scores(column).ok_or_else(|| CliError::Input {
                    path: PathBuf::from(format!("season {season}")),
                    message: format!("no score column sys_{column} for system {name}"),
                })?;
                ScoringSystem::new(name.clone(), scores, *orientation)
                    .context(|| format!("scoring: {name} in season {season}"))
            }
            _ => models[name]
                .score(games)
                .context(|| format!("scoring: {name} in season {season}")),
        })
        .collect()
}

/// Everything computed for one season.
#[derive(Debug, Clone)]
pub struct SeasonEvaluation {
    pub season: i32,
    pub systems: Vec<ScoringSystem>,
    pub diversity: DiversityMatrix,
    pub base: Vec<(String, f64)>,
    pub combined: Vec<(CombinedSystem, f64)>,
}

impl SeasonEvaluation {
    pub fn best_individual(&self) -> f64 {
        self.base.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn find(&self, spec: &EnsembleSpec) -> Option<&CombinedSystem> {
        self.combined.iter().map(|c| &c.0).find(|c| c.spec() == spec)
    }

    pub fn year_result(&self) -> YearResult {
        YearResult {
            season: self.season,
            base: self.base.clone(),
            combined: self
                .combined
                .iter()
                .map(|(c, a)| (c.spec().clone(), *a))
                .collect(),
        }
    }

    pub fn report_rows(&self) -> Vec<(EnsembleSpec, f64)> {
        self.year_result().combined
    }
}

pub fn base_accuracies(
    systems: &[ScoringSystem],
    games: &GameSet,
    mode: PredictionMode,
) -> CliResult<Vec<(String, f64)>> {
    systems
        .iter()
        .map(|s| {
            let acc = system_accuracy(s, games, mode)
                .context(|| format!("evaluation: {} in season {}", s.name(), season_of(games)))?;
            Ok((s.name().to_string(), acc))
        })
        .collect()
}

/// Fuses and scores one season.
pub fn evaluate_season(
    games: &GameSet,
    systems: Vec<ScoringSystem>,
    fusion: &FusionConfig,
    performance: Option<&[f64]>,
    mode: PredictionMode,
) -> CliResult<SeasonEvaluation> {
    let season = season_of(games);
    let base = base_accuracies(&systems, games, mode)?;
    let normalized = systems
        .iter()
        .map(|s| s.normalize(fusion.normalization))
        .collect::<cfa_core::Result<Vec<_>>>()
        .context(|| format!("scoring: normalization in season {season}"))?;
    let diversity = DiversityMatrix::compute(&normalized).context(|| format!("diversity: season {season}"))?;
    let fused = fuse_all(&systems, fusion, performance).context(|| format!("fusion: season {season}"))?;
    let combined = fused
        .into_par_iter()
        .map(|cs| {
            let preds = predict(&cs, games, mode)?;
            let acc = cfa_core::evaluation::accuracy(&preds, games)?;
            Ok((cs, acc))
        })
        .collect::<cfa_core::Result<Vec<_>>>()
        .context(|| format!("evaluation: season {season}"))?;
    Ok(SeasonEvaluation {
        season,
        systems: normalized,
        diversity,
        base,
        combined,
    })
}

/// Writes the per-season CSVs and plots into `dir`.
pub fn write_season(dir: &Path, eval: &SeasonEvaluation) -> CliResult<()> {
    let rows = eval.report_rows();
    write_with(&dir.join("fusion_report.csv"), |w| reports::write_fusion_report(w, &rows))?;
    write_with(&dir.join("base_accuracy.csv"), |w| reports::write_base_accuracy(w, &eval.base))?;
    write_with(&dir.join("rsc.csv"), |w| write_rsc_csv(w, &eval.systems))?;
    write_with(&dir.join("cd.csv"), |w| eval.diversity.write_cd_csv(w))?;
    write_with(&dir.join("ds.csv"), |w| eval.diversity.write_ds_csv(w))?;

    let series: Vec<(String, Vec<(usize, f64)>)> = eval
        .systems
        .iter()
        .map(|s| (s.name().to_string(), s.rsc().iter().enumerate().map(|(i, v)| (i + 1, *v)).collect()))
        .collect();
    reports::write_text(&dir.join("rsc.svg"), &plot::rsc_svg(&series))?;
    let perf = reports::performance_rows(&rows);
    reports::write_text(
        &dir.join("performance.svg"),
        &plot::performance_svg(&perf, Some(eval.best_individual())),
    )
}

/// Team rankings of the deployed subset in a season, by rank and by score
/// combination where both are configured.
pub fn team_rankings(
    eval: &SeasonEvaluation,
    games: &GameSet,
    members: &[String],
    weighting: cfa_core::fusion::Weighting,
    coverage: Coverage,
) -> CliResult<Vec<(EnsembleSpec, TeamRanking)>> {
    let names: Vec<&str> = members.iter().map(String::as_str).collect();
    let mut out = Vec::new();
    for space in [Space::Rank, Space::Score] {
        let spec = EnsembleSpec::new(&names, space, weighting).context(|| "selection: deployed ensemble".into())?;
        let Some(cs) = eval.find(&spec) else {
            warn!("{} was not fused; skipping its team ranking", spec.label());
            continue;
        };
        let ranking = match space {
            Space::Rank => game_to_team_ranking_rc(cs, games, coverage),
            Space::Score => game_to_team_ranking_sc(cs, games, coverage),
        }
        .context(|| format!("evaluation: team ranking for {}", spec.label()))?;
        out.push((spec, ranking));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub selected: Option<String>,
    pub report: Option<EvaluationReport>,
}

pub fn season_dir(root: &Path, season: i32) -> PathBuf {
    root.join(format!("season_{season}"))
}

pub fn run(config: &PipelineConfig) -> CliResult<RunOutcome> {
    let resolved = config.resolve()?;
    let out_dir = config.output_dir.clone();

    let loaded = load_seasons(&config.data.games, config.data.team_stats.as_deref())?;
    let models = train_builtins(&resolved.systems, &loaded, &config.builtin, resolved.mirror)?;
    for model in models.values() {
        let path = out_dir.join("models").join(format!("{}.txt", model.name()));
        reports::write_text(&path, &model.to_text())?;
    }

    let seasons: Vec<GameSet> = loaded
        .into_iter()
        .map(|g| {
            if resolved.mirror == MirrorMode::All && !g.is_mirrored() {
                mirror(&g).context(|| format!("dataset: mirroring season {}", season_of(&g)))
            } else {
                Ok(g)
            }
        })
        .collect::<CliResult<_>>()?;

    let scored: Vec<Vec<ScoringSystem>> = seasons
        .iter()
        .map(|g| score_systems(g, &resolved.systems, &models))
        .collect::<CliResult<_>>()?;
    let mode_for = |g: &GameSet| resolved.prediction_mode.unwrap_or_else(|| PredictionMode::auto(g));

    let fixed_performance: Option<Vec<f64>> = match &resolved.performance {
        PerformanceSource::Validation(season) => {
            let k = seasons
                .iter()
                .position(|g| season_of(g) == *season)
                .ok_or_else(|| CliError::config(format!("validation season {season} is not loaded")))?;
            let acc = base_accuracies(&scored[k], &seasons[k], mode_for(&seasons[k]))?;
            Some(acc.into_iter().map(|a| a.1).collect())
        }
        PerformanceSource::Fixed(values) => Some(resolved.systems.iter().map(|(n, _)| values[n]).collect()),
        PerformanceSource::InSample => None,
    };

    let mut evaluations = Vec::with_capacity(seasons.len());
    for (games, systems) in seasons.iter().zip(scored) {
        let mode = mode_for(games);
        let performance = match &fixed_performance {
            Some(p) => p.clone(),
            None => base_accuracies(&systems, games, mode)?
                .into_iter()
                .map(|a| a.1)
                .collect(),
        };
        let eval = evaluate_season(games, systems, &resolved.fusion, Some(&performance), mode)?;
        write_season(&season_dir(&out_dir, eval.season), &eval)?;
        info!(
            "season {}: best individual {:.4}, {} ensembles",
            eval.season,
            eval.best_individual(),
            eval.combined.len()
        );
        evaluations.push(eval);
    }

    let target = config.target.as_ref().map(|t| t.season);
    let selection_seasons: Vec<i32> = if config.selection.seasons.is_empty() {
        evaluations
            .iter()
            .map(|e| e.season)
            .filter(|s| Some(*s) != target)
            .collect()
    } else {
        config.selection.seasons.clone()
    };
    let years: Vec<YearResult> = selection_seasons
        .iter()
        .map(|s| {
            evaluations
                .iter()
                .find(|e| e.season == *s)
                .map(SeasonEvaluation::year_result)
                .ok_or_else(|| CliError::config(format!("selection season {s} is not loaded")))
        })
        .collect::<CliResult<_>>()?;
    let selected = if years.is_empty() {
        warn!("no selection seasons; skipping model selection");
        None
    } else {
        let select_cfg = SelectionConfig {
            spaces: resolved.admitted_spaces.clone(),
            weightings: resolved.admitted_weightings.clone(),
        };
        let table = improvement_table(&years, &select_cfg).context(|| "selection".into())?;
        let chosen = select_model(&table).context(|| "selection".into())?;
        write_with(&out_dir.join("selection.csv"), |w| table.write_csv(w, Some(&chosen)))?;
        info!("selected {chosen} ({} of {} seasons)", table.count(&chosen).unwrap_or(0), table.seasons);
        Some(chosen)
    };

    let mut report = None;
    if let (Some(t), Some(chosen)) = (&config.target, &selected) {
        let k = evaluations
            .iter()
            .position(|e| e.season == t.season)
            .ok_or_else(|| CliError::config(format!("target season {} is not loaded", t.season)))?;
        let members = cfa_core::fusion::parse_members_label(chosen).expect("label produced by selection");
        let rankings = team_rankings(&evaluations[k], &seasons[k], &members, resolved.deploy_weighting, resolved.coverage)?;
        let dir = out_dir.join(format!("target_{}", t.season));
        for (spec, ranking) in &rankings {
            let file = match spec.space() {
                Space::Rank => "team_ranking_rc.csv",
                Space::Score => "team_ranking_sc.csv",
            };
            write_with(&dir.join(file), |w| ranking.write_csv(w))?;
        }
        if let Some(results_path) = &t.results {
            let results = BracketResults::load(results_path).context(|| "dataset: bracket results".into())?;
            // deployed variant first
            let mut ordered: Vec<&(EnsembleSpec, TeamRanking)> = rankings
                .iter()
                .filter(|(s, _)| s.space() == resolved.deploy_space)
                .collect();
            ordered.extend(rankings.iter().filter(|(s, _)| s.space() != resolved.deploy_space));
            let mut r = EvaluationReport::default();
            for (spec, ranking) in ordered {
                let acc = team_ranking_accuracy(ranking, &results)
                    .context(|| format!("evaluation: bracket accuracy of {}", spec.label()))?;
                r.push(spec.label(), acc);
            }
            if let Some(path) = &t.baselines {
                let baselines = load_baselines(path).context(|| "dataset: baselines".into())?;
                if !baselines.is_empty() {
                    r = compare_baselines(&r, &baselines).context(|| "evaluation: baseline comparison".into())?;
                }
            }
            write_with(&dir.join("report.csv"), |w| r.write_csv(w))?;
            report = Some(r);
        }
    }

    Ok(RunOutcome {
        output_dir: out_dir,
        selected,
        report,
    })
}
