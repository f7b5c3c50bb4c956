//! Pipeline configuration: a TOML file plus `key=value` overrides.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cfa_core::builtin_scorers::LogisticConfig;
use cfa_core::evaluation::{Coverage, PredictionMode};
use cfa_core::fusion::{DsScope, FusionConfig, RankWeightMode, RankWeighting, Space, Weighting};
use cfa_core::scoring::Orientation;
use serde::Deserialize;

use crate::error::{io_err, CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub data: DataConfig,
    #[serde(default)]
    pub systems: Vec<SystemConfig>,
    #[serde(default)]
    pub builtin: BuiltinConfig,
    #[serde(default)]
    pub fusion: FusionSection,
    #[serde(default)]
    pub performance: PerformanceConfig,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub selection: SelectionSection,
    pub target: Option<TargetConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("cfa-out")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    /// One wide CSV per season.
    pub games: Vec<PathBuf>,
    pub team_stats: Option<PathBuf>,
    /// `none`, `train` (builtin training only) or `all`.
    #[serde(default = "default_mirror")]
    pub mirror: String,
}

fn default_mirror() -> String {
    "none".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorMode {
    None,
    Train,
    All,
}

impl FromStr for MirrorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(MirrorMode::None),
            "train" => Ok(MirrorMode::Train),
            "all" => Ok(MirrorMode::All),
            other => Err(format!("unknown mirror mode {other:?} (none, train, all)")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub name: String,
    /// `column`, `logistic` or `centroid`.
    #[serde(default = "default_kind")]
    pub kind: String,
    /// Score column for `column` systems; defaults to the system name.
    pub column: Option<String>,
    #[serde(default = "default_orientation")]
    pub orientation: String,
}

fn default_kind() -> String {
    "column".into()
}

fn default_orientation() -> String {
    "higher_better".into()
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemKind {
    Column { column: String, orientation: Orientation },
    Logistic,
    Centroid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BuiltinConfig {
    pub train_seasons: Vec<i32>,
    pub learning_rate: f64,
    pub iterations: usize,
    pub l2: f64,
    pub intercept: Option<bool>,
    pub centroid_scale: f64,
}

impl Default for BuiltinConfig {
    fn default() -> Self {
        let lr = LogisticConfig::default();
        BuiltinConfig {
            train_seasons: Vec::new(),
            learning_rate: lr.learning_rate,
            iterations: lr.iterations,
            l2: lr.l2,
            intercept: lr.intercept,
            centroid_scale: 1.0,
        }
    }
}

impl BuiltinConfig {
    pub fn logistic(&self) -> LogisticConfig {
        LogisticConfig {
            learning_rate: self.learning_rate,
            iterations: self.iterations,
            l2: self.l2,
            intercept: self.intercept,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FusionSection {
    pub spaces: Vec<String>,
    pub weightings: Vec<String>,
    pub h_min: usize,
    pub normalization: String,
    pub rc_weight_mode: String,
    pub ds_scope: String,
    pub ds_epsilon: f64,
}

impl Default for FusionSection {
    fn default() -> Self {
        FusionSection {
            spaces: vec!["SC".into(), "RC".into()],
            weightings: vec!["AC".into(), "WCDS".into(), "WCP".into()],
            h_min: 2,
            normalization: "none".into(),
            rc_weight_mode: "reciprocal".into(),
            ds_scope: "pool".into(),
            ds_epsilon: cfa_core::fusion::DEFAULT_DS_EPSILON,
        }
    }
}

impl FusionSection {
    pub fn resolve(&self) -> CliResult<FusionConfig> {
        if self.h_min < 2 {
            return Err(CliError::config("fusion.h_min must be at least 2"));
        }
        if !(self.ds_epsilon > 0.0) {
            return Err(CliError::config("fusion.ds_epsilon must be positive"));
        }
        Ok(FusionConfig {
            spaces: parse_list(&self.spaces, "fusion.spaces")?,
            weightings: parse_list(&self.weightings, "fusion.weightings")?,
            h_min: self.h_min,
            normalization: parse_one(&self.normalization, "fusion.normalization")?,
            rank_weighting: RankWeighting {
                mode: parse_one::<RankWeightMode>(&self.rc_weight_mode, "fusion.rc_weight_mode")?,
                ds_epsilon: self.ds_epsilon,
            },
            ds_scope: parse_one::<DsScope>(&self.ds_scope, "fusion.ds_scope")?,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerformanceConfig {
    /// `validation`, `in_sample` or `fixed`.
    pub source: String,
    pub season: Option<i32>,
    pub values: BTreeMap<String, f64>,
}

impl Default for PerformanceConfig {
    fn default() -> Self {
        PerformanceConfig {
            source: "validation".into(),
            season: None,
            values: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PerformanceSource {
    Validation(i32),
    InSample,
    Fixed(BTreeMap<String, f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationConfig {
    /// `auto`, `mirror_pair` or `threshold`.
    pub prediction_mode: String,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            prediction_mode: "auto".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelectionSection {
    /// Empty: every loaded season except the target.
    pub seasons: Vec<i32>,
    /// Variants admitted when counting improvements; empty admits all.
    pub spaces: Vec<String>,
    pub weightings: Vec<String>,
    /// Variant applied to the selected subset in the target season.
    pub deploy_space: String,
    pub deploy_weighting: Option<String>,
}

impl Default for SelectionSection {
    fn default() -> Self {
        SelectionSection {
            seasons: Vec::new(),
            spaces: Vec::new(),
            weightings: Vec::new(),
            deploy_space: "RC".into(),
            deploy_weighting: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub season: i32,
    pub results: Option<PathBuf>,
    pub baselines: Option<PathBuf>,
    #[serde(default = "default_coverage")]
    pub coverage: String,
}

fn default_coverage() -> String {
    "strict".into()
}

fn parse_one<T: FromStr>(text: &str, key: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    text.parse()
        .map_err(|e| CliError::config(format!("{key}: {e}")))
}

fn parse_list<T: FromStr>(items: &[String], key: &str) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    if items.is_empty() {
        return Err(CliError::config(format!("{key} must not be empty")));
    }
    items.iter().map(|s| parse_one(s, key)).collect()
}

/// Everything in the config resolved into core types and checked.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub systems: Vec<(String, SystemKind)>,
    pub fusion: FusionConfig,
    pub performance: PerformanceSource,
    pub prediction_mode: Option<PredictionMode>,
    pub mirror: MirrorMode,
    pub admitted_spaces: Vec<Space>,
    pub admitted_weightings: Vec<Weighting>,
    pub deploy_space: Space,
    pub deploy_weighting: Weighting,
    pub coverage: Coverage,
}

impl PipelineConfig {
    /// Reads `path` and applies `key=value` overrides (TOML values; bare
    /// words are taken as strings). Relative paths are resolved against the
    /// config file's directory.
    pub fn load(path: &Path, overrides: &[String]) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let mut table: toml::Table = text
            .parse()
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let mut config: PipelineConfig = table
            .try_into()
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.rebase(base);
        Ok(config)
    }

    pub fn from_toml(text: &str, base: &Path) -> CliResult<Self> {
        let mut config: PipelineConfig =
            toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        config.rebase(base);
        Ok(config)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        self.data.games.iter_mut().for_each(fix);
        if let Some(p) = &mut self.data.team_stats {
            fix(p);
        }
        if let Some(t) = &mut self.target {
            if let Some(p) = &mut t.results {
                fix(p);
            }
            if let Some(p) = &mut t.baselines {
                fix(p);
            }
        }
    }

    pub fn resolve(&self) -> CliResult<Resolved> {
        if self.systems.len() < 2 {
            return Err(CliError::config(format!(
                "at least 2 systems are required, found {}",
                self.systems.len()
            )));
        }
        if self.data.games.is_empty() {
            return Err(CliError::config("data.games lists no files"));
        }
        let mut systems = Vec::with_capacity(self.systems.len());
        for s in &self.systems {
            if s.name.is_empty() || s.name.contains(['/', '+', ',']) {
                return Err(CliError::config(format!("invalid system name {:?}", s.name)));
            }
            if systems.iter().any(|(n, _)| n == &s.name) {
                return Err(CliError::config(format!("system {:?} listed twice", s.name)));
            }
            let kind = match s.kind.as_str() {
                "column" => SystemKind::Column {
                    column: s.column.clone().unwrap_or_else(|| s.name.clone()),
                    orientation: match s.orientation.as_str() {
                        "higher_better" => Orientation::HigherBetter,
                        "lower_better" => Orientation::LowerBetter,
                        other => {
                            return Err(CliError::config(format!(
                                "system {:?}: unknown orientation {other:?}",
                                s.name
                            )))
                        }
                    },
                },
                "logistic" => SystemKind::Logistic,
                "centroid" => SystemKind::Centroid,
                other => {
                    return Err(CliError::config(format!(
                        "system {:?}: unknown kind {other:?} (column, logistic, centroid)",
                        s.name
                    )))
                }
            };
            systems.push((s.name.clone(), kind));
        }
        let builtin = systems.iter().any(|(_, k)| !matches!(k, SystemKind::Column { .. }));
        if builtin && self.builtin.train_seasons.is_empty() {
            return Err(CliError::config("builtin scorers need builtin.train_seasons"));
        }
        if !(self.builtin.centroid_scale > 0.0) {
            return Err(CliError::config("builtin.centroid_scale must be positive"));
        }

        let fusion = self.fusion.resolve()?;
        let performance = match self.performance.source.as_str() {
            "validation" => PerformanceSource::Validation(self.performance.season.ok_or_else(|| {
                CliError::config("performance.source = \"validation\" needs performance.season")
            })?),
            "in_sample" => PerformanceSource::InSample,
            "fixed" => {
                for (name, _) in &systems {
                    match self.performance.values.get(name) {
                        Some(v) if *v > 0.0 => {}
                        Some(v) => {
                            return Err(CliError::config(format!(
                                "performance.values.{name} = {v} is not positive"
                            )))
                        }
                        None => {
                            return Err(CliError::config(format!("performance.values has no entry for {name:?}")))
                        }
                    }
                }
                PerformanceSource::Fixed(self.performance.values.clone())
            }
            other => {
                return Err(CliError::config(format!(
                    "unknown performance.source {other:?} (validation, in_sample, fixed)"
                )))
            }
        };
        let prediction_mode = match self.evaluation.prediction_mode.as_str() {
            "auto" => None,
            other => Some(parse_one(other, "evaluation.prediction_mode")?),
        };
        let deploy_weighting = match &self.selection.deploy_weighting {
            Some(w) => parse_one(w, "selection.deploy_weighting")?,
            None => fusion.weightings[0],
        };
        let deploy_space = parse_one(&self.selection.deploy_space, "selection.deploy_space")?;
        if !fusion.weightings.contains(&deploy_weighting) {
            return Err(CliError::config(format!(
                "selection.deploy_weighting {deploy_weighting} is not among fusion.weightings"
            )));
        }
        let coverage = match &self.target {
            Some(t) => parse_one(&t.coverage, "target.coverage")?,
            None => Coverage::Strict,
        };
        Ok(Resolved {
            systems,
            fusion,
            performance,
            prediction_mode,
            mirror: parse_one(&self.data.mirror, "data.mirror")?,
            admitted_spaces: self
                .selection
                .spaces
                .iter()
                .map(|s| parse_one(s, "selection.spaces"))
                .collect::<CliResult<_>>()?,
            admitted_weightings: self
                .selection
                .weightings
                .iter()
                .map(|s| parse_one(s, "selection.weightings"))
                .collect::<CliResult<_>>()?,
            deploy_space,
            deploy_weighting,
            coverage,
        })
    }
}

/// `a.b.c=value`; the value is read as TOML and falls back to a string.
fn apply_override(table: &mut toml::Table, item: &str) -> CliResult<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("override {item:?} is not key=value")))?;
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap(),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.trim().split('.').collect();
    let (last, path) = parts.split_last().unwrap();
    let mut cursor = table;
    for part in path {
        let entry = cursor
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cursor = entry
            .as_table_mut()
            .ok_or_else(|| CliError::config(format!("override {key:?}: {part:?} is not a section")))?;
    }
    cursor.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [data]
        games = ["a.csv"]

        [[systems]]
        name = "A"

        [[systems]]
        name = "B"

        [performance]
        source = "in_sample"
    "#;

    #[test]
    fn minimal_config_resolves() {
        let c = PipelineConfig::from_toml(MINIMAL, Path::new("/tmp/x")).unwrap();
        assert_eq!(c.data.games, vec![PathBuf::from("/tmp/x/a.csv")]);
        let r = c.resolve().unwrap();
        assert_eq!(r.fusion.spaces.len(), 2);
        assert_eq!(r.deploy_space, Space::Rank);
        assert_eq!(r.deploy_weighting, Weighting::Average);
        assert_eq!(r.mirror, MirrorMode::None);
    }

    #[test]
    fn one_system_is_rejected() {
        let text = MINIMAL.replace("[[systems]]\n        name = \"B\"", "");
        let c = PipelineConfig::from_toml(&text, Path::new(".")).unwrap();
        let err = c.resolve().unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("at least 2 systems"));
    }

    #[test]
    fn overrides_reach_nested_keys() {
        let mut table: toml::Table = MINIMAL.parse().unwrap();
        apply_override(&mut table, "fusion.weightings=[\"WCDS\"]").unwrap();
        apply_override(&mut table, "output_dir=out/run2").unwrap();
        apply_override(&mut table, "fusion.h_min=3").unwrap();
        let c: PipelineConfig = table.try_into().unwrap();
        assert_eq!(c.fusion.weightings, vec!["WCDS".to_string()]);
        assert_eq!(c.output_dir, PathBuf::from("out/run2"));
        assert_eq!(c.fusion.h_min, 3);
        assert!(apply_override(&mut toml::Table::new(), "novalue").is_err());
    }

    #[test]
    fn bad_enum_values_are_config_errors() {
        let text = format!("{MINIMAL}\n[fusion]\nspaces = [\"XX\"]\n");
        let c = PipelineConfig::from_toml(&text, Path::new(".")).unwrap();
        assert_eq!(c.resolve().unwrap_err().exit_code(), 1);
        let text = MINIMAL.replace("in_sample", "validation");
        let c = PipelineConfig::from_toml(&text, Path::new(".")).unwrap();
        assert!(c.resolve().unwrap_err().to_string().contains("performance.season"));
    }
}
