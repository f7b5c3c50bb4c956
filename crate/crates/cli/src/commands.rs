//! Argument definitions and handlers for each subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cfa_core::dataset::{difference_features, load_baselines, load_games, mirror, BracketResults, GameSet, TeamStats};
use cfa_core::evaluation::{
    compare_baselines, game_to_team_ranking_rc, game_to_team_ranking_sc, team_ranking_accuracy, Coverage,
    EvaluationReport, PredictionMode,
};
use cfa_core::fusion::{fuse_all, DsScope, EnsembleSpec, FusionConfig, RankWeightMode, RankWeighting, Space};
use cfa_core::scoring::{write_rsc_csv, Normalization, Orientation, ScoringSystem};
use cfa_core::selection::{improvement_table, select_model, SelectionConfig, YearResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;

use crate::config::PipelineConfig;
use crate::error::{CliError, CliResult, Context};
use crate::pipeline::{self, base_accuracies, evaluate_season, write_season};
use crate::reports::{self, write_text, write_with};
use crate::{fixture, plot};

#[derive(Debug, Parser)]
#[command(name = "cfa", version, about = "Combinatorial fusion of scoring systems for bracket prediction")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate game files and write them back, optionally mirrored or with difference features.
    Ingest(IngestArgs),
    /// Fuse the systems of one season and write the combined values.
    Fuse(FuseArgs),
    /// Fuse one season and write accuracy reports and plots.
    Evaluate(EvaluateArgs),
    /// Pick the subset that most often beats the best individual system.
    Select(SelectArgs),
    /// Turn one ensemble's game ranking into a team ranking.
    TeamRank(TeamRankArgs),
    /// Score a team ranking against bracket results and baselines.
    Compare(CompareArgs),
    /// Draw an RSC or performance chart as SVG.
    Plot(PlotArgs),
    /// Run the full pipeline from a config file.
    Run(RunArgs),
    /// Write the synthetic example inputs.
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Game files, one season each.
    #[arg(required = true)]
    pub games: Vec<PathBuf>,
    #[arg(long)]
    pub team_stats: Option<PathBuf>,
    #[arg(long)]
    pub mirror: bool,
    /// Output directory; files keep their names.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SeasonArgs {
    /// Game file for one season.
    #[arg(long)]
    pub games: PathBuf,
    /// Systems to use (score column names); default: every sys_ column.
    #[arg(long, value_delimiter = ',')]
    pub systems: Vec<String>,
    /// Systems whose scores are better when lower.
    #[arg(long, value_delimiter = ',')]
    pub lower_better: Vec<String>,
    /// Mirror the games before scoring.
    #[arg(long)]
    pub mirror: bool,
    #[arg(long, default_value = "none")]
    pub normalization: String,
    /// Performance values for WCP as NAME=VALUE; default: accuracy on this season.
    #[arg(long, value_delimiter = ',')]
    pub performance: Vec<String>,
    #[arg(long, default_value = "auto")]
    pub prediction_mode: String,
}

#[derive(Debug, Args)]
pub struct FusionArgs {
    #[arg(long, value_delimiter = ',', default_value = "SC,RC")]
    pub spaces: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "AC,WCDS,WCP")]
    pub weightings: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub h_min: usize,
    #[arg(long, default_value = "reciprocal")]
    pub rc_weight_mode: String,
    #[arg(long, default_value = "pool")]
    pub ds_scope: String,
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    #[command(flatten)]
    pub season: SeasonArgs,
    #[command(flatten)]
    pub fusion: FusionArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub season: SeasonArgs,
    #[command(flatten)]
    pub fusion: FusionArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Season directories holding fusion_report.csv and base_accuracy.csv.
    #[arg(required = true)]
    pub dirs: Vec<PathBuf>,
    /// Variants admitted when counting improvements; default all.
    #[arg(long, value_delimiter = ',')]
    pub spaces: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub weightings: Vec<String>,
    /// Where to write the improvement table.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TeamRankArgs {
    #[command(flatten)]
    pub season: SeasonArgs,
    /// Ensemble label such as ABE/RC/WCDS.
    #[arg(long)]
    pub ensemble: String,
    #[arg(long, default_value = "strict")]
    pub coverage: String,
    #[arg(long, default_value = "reciprocal")]
    pub rc_weight_mode: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Team ranking CSV (rank,team_id,aggregate).
    #[arg(long)]
    pub ranking: PathBuf,
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub baselines: Option<PathBuf>,
    /// Label for the ranking in the report.
    #[arg(long, default_value = "ranking")]
    pub label: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PlotKind {
    Rsc,
    Performance,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub kind: PlotKind,
    /// rsc.csv or fusion_report.csv.
    #[arg(long)]
    pub input: PathBuf,
    /// base_accuracy.csv, for the best-individual line.
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Best-individual accuracy, if no base file is given.
    #[arg(long)]
    pub best: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Override a config key, e.g. --set fusion.weightings='["WCDS"]'.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = fixture::DEFAULT_SEED)]
    pub seed: u64,
    /// Write the 63-game bracket check instead of the synthetic seasons.
    #[arg(long)]
    pub bracket: bool,
}

fn parse<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    text.parse()
        .map_err(|e| CliError::config(format!("{what}: {e}")))
}

fn parse_all<T: std::str::FromStr>(items: &[String], what: &str) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    items.iter().map(|s| parse(s, what)).collect()
}

impl FusionArgs {
    fn config(&self, normalization: Normalization) -> CliResult<FusionConfig> {
        Ok(FusionConfig {
            spaces: parse_all(&self.spaces, "--spaces")?,
            weightings: parse_all(&self.weightings, "--weightings")?,
            h_min: self.h_min,
            normalization,
            rank_weighting: RankWeighting {
                mode: parse::<RankWeightMode>(&self.rc_weight_mode, "--rc-weight-mode")?,
                ..Default::default()
            },
            ds_scope: parse::<DsScope>(&self.ds_scope, "--ds-scope")?,
        })
    }
}

/// A loaded season with its systems.
struct Season {
    games: GameSet,
    systems: Vec<ScoringSystem>,
    mode: PredictionMode,
    normalization: Normalization,
}

impl SeasonArgs {
    fn load(&self) -> CliResult<Season> {
        let mut games = load_games(&self.games).context(|| "dataset".into())?;
        if self.mirror && !games.is_mirrored() {
            games = mirror(&games).context(|| "dataset: mirroring".into())?;
        }
        let names: Vec<String> = if self.systems.is_empty() {
            games.system_names().to_vec()
        } else {
            self.systems.clone()
        };
        if names.len() < 2 {
            return Err(CliError::config(format!(
                "at least 2 systems are required, found {}",
                names.len()
            )));
        }
        let systems = names
            .iter()
            .map(|name| {
                let scores = games.system_scores(name).ok_or_else(|| CliError::Input {
                    path: self.games.clone(),
                    message: format!("no column sys_{name}"),
                })?;
                let orientation = if self.lower_better.contains(name) {
                    Orientation::LowerBetter
                } else {
                    Orientation::HigherBetter
                };
                ScoringSystem::new(name.clone(), scores, orientation).context(|| format!("scoring: {name}"))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let mode = match self.prediction_mode.as_str() {
            "auto" => PredictionMode::auto(&games),
            other => parse(other, "--prediction-mode")?,
        };
        Ok(Season {
            normalization: parse(&self.normalization, "--normalization")?,
            games,
            systems,
            mode,
        })
    }

    fn performance(&self, season: &Season) -> CliResult<Vec<f64>> {
        if self.performance.is_empty() {
            return Ok(base_accuracies(&season.systems, &season.games, season.mode)?
                .into_iter()
                .map(|a| a.1)
                .collect());
        }
        let mut given = BTreeMap::new();
        for item in &self.performance {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("--performance {item:?} is not NAME=VALUE")))?;
            given.insert(k.trim().to_string(), parse::<f64>(v.trim(), "--performance")?);
        }
        season
            .systems
            .iter()
            .map(|s| {
                given
                    .get(s.name())
                    .copied()
                    .ok_or_else(|| CliError::config(format!("--performance has no value for {}", s.name())))
            })
            .collect()
    }
}

pub fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Fuse(a) => fuse(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Select(a) => select(a),
        Command::TeamRank(a) => team_rank(a),
        Command::Compare(a) => compare(a),
        Command::Plot(a) => plot_cmd(a),
        Command::Run(a) => run(a),
        Command::Fixture(a) => {
            if a.bracket {
                fixture::write_bracket(&a.out)
            } else {
                fixture::write_synthetic(&a.out, a.seed)
            }
        }
    }
}

fn ingest(a: IngestArgs) -> CliResult<()> {
    let stats = a
        .team_stats
        .as_deref()
        .map(|p| TeamStats::load(p).context(|| "dataset: team stats".into()))
        .transpose()?;
    for path in &a.games {
        let mut games = load_games(path).context(|| "dataset".into())?;
        if let Some(stats) = &stats {
            games = difference_features(stats, &games).context(|| "dataset: difference features".into())?;
        }
        if a.mirror && !games.is_mirrored() {
            games = mirror(&games).context(|| "dataset: mirroring".into())?;
        }
        let name = path.file_name().ok_or_else(|| CliError::config("game path has no file name"))?;
        let out = a.out.join(name);
        std::fs::create_dir_all(&a.out).map_err(crate::error::io_err(&a.out))?;
        games.save(&out).context(|| "dataset: writing".into())?;
        println!(
            "{}: season {}, {} games, {} features, {} systems{}",
            out.display(),
            pipeline::season_of(&games),
            games.len(),
            games.feature_names().len(),
            games.system_names().len(),
            if games.is_mirrored() { ", mirrored" } else { "" }
        );
    }
    Ok(())
}

fn fused(season: &SeasonArgs, fusion: &FusionArgs) -> CliResult<(Season, FusionConfig, Vec<f64>)> {
    let s = season.load()?;
    let cfg = fusion.config(s.normalization)?;
    let perf = season.performance(&s)?;
    Ok((s, cfg, perf))
}

fn fuse(a: FuseArgs) -> CliResult<()> {
    let (s, cfg, perf) = fused(&a.season, &a.fusion)?;
    let combined = fuse_all(&s.systems, &cfg, Some(&perf)).context(|| "fusion".into())?;
    let normalized = s
        .systems
        .iter()
        .map(|x| x.normalize(cfg.normalization))
        .collect::<cfa_core::Result<Vec<_>>>()
        .context(|| "scoring: normalization".into())?;
    let matrix = cfa_core::diversity::DiversityMatrix::compute(&normalized).context(|| "diversity".into())?;
    write_with(&a.out.join("combined.csv"), |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["label", "game_id", "value", "rank"])?;
        for cs in &combined {
            let label = cs.label();
            for ((g, v), r) in s.games.records().iter().zip(cfa_core::scoring::Ranked::values(cs)).zip(cfa_core::scoring::Ranked::ranks(cs)) {
                out.write_record([label.as_str(), &g.game_id, &v.to_string(), &r.to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    })?;
    write_with(&a.out.join("rsc.csv"), |w| write_rsc_csv(w, &normalized))?;
    write_with(&a.out.join("cd.csv"), |w| matrix.write_cd_csv(w))?;
    write_with(&a.out.join("ds.csv"), |w| matrix.write_ds_csv(w))?;
    println!("{} combined systems written to {}", combined.len(), a.out.display());
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> CliResult<()> {
    let (s, cfg, perf) = fused(&a.season, &a.fusion)?;
    let eval = evaluate_season(&s.games, s.systems, &cfg, Some(&perf), s.mode)?;
    write_season(&a.out, &eval)?;
    let best = eval.best_individual();
    let improved = eval.combined.iter().filter(|c| c.1 > best).count();
    println!(
        "season {}: best individual {:.4}, {} of {} ensembles above it",
        eval.season,
        best,
        improved,
        eval.combined.len()
    );
    Ok(())
}

fn select(a: SelectArgs) -> CliResult<()> {
    let years = a
        .dirs
        .iter()
        .enumerate()
        .map(|(i, dir)| {
            let season = dir
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|n| n.strip_prefix("season_"))
                .and_then(|n| n.parse().ok())
                .unwrap_or(i as i32);
            Ok(YearResult {
                season,
                base: reports::read_base_accuracy(&dir.join("base_accuracy.csv"))?,
                combined: reports::read_fusion_report(&dir.join("fusion_report.csv"))?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let cfg = SelectionConfig {
        spaces: parse_all(&a.spaces, "--spaces")?,
        weightings: parse_all(&a.weightings, "--weightings")?,
    };
    let table = improvement_table(&years, &cfg).context(|| "selection".into())?;
    let chosen = select_model(&table).context(|| "selection".into())?;
    if let Some(out) = &a.out {
        write_with(out, |w| table.write_csv(w, Some(&chosen)))?;
    }
    println!("{chosen}");
    Ok(())
}

fn team_rank(a: TeamRankArgs) -> CliResult<()> {
    let spec = EnsembleSpec::parse(&a.ensemble).context(|| "--ensemble".into())?;
    let s = a.season.load()?;
    let coverage: Coverage = parse(&a.coverage, "--coverage")?;
    let cfg = FusionConfig {
        spaces: vec![spec.space()],
        weightings: vec![spec.weighting()],
        h_min: spec.members().len(),
        normalization: s.normalization,
        rank_weighting: RankWeighting {
            mode: parse(&a.rc_weight_mode, "--rc-weight-mode")?,
            ..Default::default()
        },
        ds_scope: DsScope::Pool,
    };
    let perf = a.season.performance(&s)?;
    let all = fuse_all(&s.systems, &cfg, Some(&perf)).context(|| "fusion".into())?;
    let cs = all
        .iter()
        .find(|c| c.spec() == &spec)
        .ok_or_else(|| CliError::config(format!("{} names systems that are not loaded", spec.label())))?;
    let ranking = match spec.space() {
        Space::Rank => game_to_team_ranking_rc(cs, &s.games, coverage),
        Space::Score => game_to_team_ranking_sc(cs, &s.games, coverage),
    }
    .context(|| "evaluation: team ranking".into())?;
    write_with(&a.out, |w| ranking.write_csv(w))?;
    println!("{} teams ranked by {}", ranking.len(), spec.label());
    Ok(())
}

/// Bracket accuracy of a saved team ranking, optionally against baselines.
pub fn compare_report(ranking: &Path, results: &Path, baselines: Option<&Path>, label: &str) -> CliResult<EvaluationReport> {
    let tr = reports::read_team_ranking(ranking)?;
    let results = BracketResults::load(results).context(|| "dataset: bracket results".into())?;
    let acc = team_ranking_accuracy(&tr, &results).context(|| "evaluation".into())?;
    let mut report = EvaluationReport::default();
    report.push(label, acc);
    if let Some(path) = baselines {
        let b = load_baselines(path).context(|| "dataset: baselines".into())?;
        if b.is_empty() {
            warn!("{} lists no baselines", path.display());
        } else {
            report = compare_baselines(&report, &b).context(|| "evaluation".into())?;
        }
    }
    Ok(report)
}

fn compare(a: CompareArgs) -> CliResult<()> {
    let report = compare_report(&a.ranking, &a.results, a.baselines.as_deref(), &a.label)?;
    if let Some(out) = &a.out {
        write_with(out, |w| report.write_csv(w))?;
    }
    print!("{report}");
    Ok(())
}

fn plot_cmd(a: PlotArgs) -> CliResult<()> {
    let svg = match a.kind {
        PlotKind::Rsc => plot::rsc_svg(&reports::read_rsc(&a.input)?),
        PlotKind::Performance => {
            let rows = reports::read_fusion_report(&a.input)?;
            let best = match (&a.base, a.best) {
                (Some(path), _) => reports::read_base_accuracy(path)?
                    .into_iter()
                    .map(|b| b.1)
                    .max_by(f64::total_cmp),
                (None, best) => best,
            };
            plot::performance_svg(&reports::performance_rows(&rows), best)
        }
    };
    write_text(&a.out, &svg)
}

fn run(a: RunArgs) -> CliResult<()> {
    let config = PipelineConfig::load(&a.config, &a.overrides)?;
    let outcome = pipeline::run(&config)?;
    if let Some(chosen) = &outcome.selected {
        println!("selected {chosen}");
    }
    if let Some(report) = &outcome.report {
        print!("{report}");
    }
    println!("outputs in {}", outcome.output_dir.display());
    Ok(())
}
