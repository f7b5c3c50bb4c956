//! Base scorers that run without external tooling: L2-regularized logistic
//! regression fitted by full-batch gradient descent, and a nearest-centroid
//! scorer. Both emit team1-win probabilities as higher-is-better systems.

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::GameSet;
use crate::error::{Error, Result};
use crate::scoring::ScoringSystem;

/// Distance kept between emitted probabilities and 0 or 1.
pub const PROBABILITY_CLAMP: f64 = 1e-12;

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP)
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn design(games: &GameSet) -> Result<(Vec<Vec<f64>>, Vec<u8>)> {
    let mut x = Vec::with_capacity(games.len());
    for r in games.records() {
        let f = r
            .features
            .as_ref()
            .ok_or_else(|| Error::MissingFeatures(r.game_id.clone()))?;
        x.push(f.clone());
    }
    Ok((x, games.labels()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub l2: f64,
    /// `None` fits an intercept unless the training set is mirrored.
    pub intercept: Option<bool>,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            learning_rate: 0.1,
            iterations: 5000,
            l2: 1e-3,
            intercept: None,
        }
    }
}

/// Mean negative log-likelihood plus `l2/2 · |β|²` (intercept unpenalized).
///
/// Parameters are laid out as `[β_1..β_p, b]`, with `b` present only when
/// `intercept` is set.
#[derive(Debug, Clone, Copy)]
pub struct LogisticObjective<'a> {
    pub x: &'a [Vec<f64>],
    pub y: &'a [u8],
    pub l2: f64,
    pub intercept: bool,
}

impl LogisticObjective<'_> {
    fn dim(&self) -> usize {
        self.x.first().map(Vec::len).unwrap_or(0)
    }

    fn logit(&self, params: &[f64], row: &[f64]) -> f64 {
        let p = self.dim();
        let b = if self.intercept { params[p] } else { 0.0 };
        dot(&params[..p], row) + b
    }

    pub fn loss(&self, params: &[f64]) -> f64 {
        let p = self.dim();
        let n = self.x.len() as f64;
        let nll: f64 = self
            .x
            .iter()
            .zip(self.y)
            .map(|(row, &y)| {
                let z = self.logit(params, row);
                softplus(z) - f64::from(y) * z
            })
            .sum();
        nll / n + 0.5 * self.l2 * dot(&params[..p], &params[..p])
    }

    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let p = self.dim();
        let n = self.x.len() as f64;
        let mut grad = vec![0.0; params.len()];
        for (row, &y) in self.x.iter().zip(self.y) {
            let residual = sigmoid(self.logit(params, row)) - f64::from(y);
            for (g, v) in grad[..p].iter_mut().zip(row) {
                *g += residual * v;
            }
            if self.intercept {
                grad[p] += residual;
            }
        }
        for g in grad.iter_mut() {
            *g /= n;
        }
        for (g, beta) in grad[..p].iter_mut().zip(&params[..p]) {
            *g += self.l2 * beta;
        }
        grad
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub coefficients: Vec<f64>,
    pub intercept: Option<f64>,
    pub config: LogisticConfig,
}

/// Fits a logistic model; returns it with the loss before each step and
/// after the last one.
pub fn train_logistic_traced(
    games: &GameSet,
    config: &LogisticConfig,
) -> Result<(LogisticModel, Vec<f64>)> {
    let (x, y) = design(games)?;
    if x.is_empty() || !y.contains(&0) || !y.contains(&1) {
        return Err(Error::SingleClass);
    }
    let intercept = config.intercept.unwrap_or(!games.is_mirrored());
    let objective = LogisticObjective {
        x: &x,
        y: &y,
        l2: config.l2,
        intercept,
    };
    let p = objective.dim();
    let mut params = vec![0.0; p + usize::from(intercept)];
    let mut trace = Vec::with_capacity(config.iterations + 1);
    for _ in 0..config.iterations {
        trace.push(objective.loss(&params));
        let grad = objective.gradient(&params);
        for (w, g) in params.iter_mut().zip(grad) {
            *w -= config.learning_rate * g;
        }
    }
    trace.push(objective.loss(&params));
    if let Some(i) = params.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            index: i,
            value: params[i],
        });
    }
    let model = LogisticModel {
        coefficients: params[..p].to_vec(),
        intercept: intercept.then(|| params[p]),
        config: config.clone(),
    };
    Ok((model, trace))
}

pub fn train_logistic(games: &GameSet, config: &LogisticConfig) -> Result<LogisticModel> {
    train_logistic_traced(games, config).map(|(m, _)| m)
}

impl LogisticModel {
    pub fn probability(&self, features: &[f64]) -> f64 {
        let z = dot(&self.coefficients, features) + self.intercept.unwrap_or(0.0);
        clamp_probability(sigmoid(z))
    }

    pub fn score(&self, name: &str, games: &GameSet) -> Result<ScoringSystem> {
        let scores = score_rows(games, self.coefficients.len(), |f| self.probability(f))?;
        ScoringSystem::higher_better(name, scores)
    }
}

fn score_rows(games: &GameSet, dim: usize, f: impl Fn(&[f64]) -> f64) -> Result<Vec<f64>> {
    games
        .records()
        .iter()
        .map(|r| {
            let x = r
                .features
                .as_ref()
                .ok_or_else(|| Error::MissingFeatures(r.game_id.clone()))?;
            if x.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    found: x.len(),
                });
            }
            Ok(f(x))
        })
        .collect()
}

/// Scores by how much closer a game sits to the class-1 mean than to the
/// class-0 mean: `σ(scale · (|x − μ0|² − |x − μ1|²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidModel {
    pub mean0: Vec<f64>,
    pub mean1: Vec<f64>,
    pub scale: f64,
}

pub fn train_centroid(games: &GameSet, scale: f64) -> Result<CentroidModel> {
    let (x, y) = design(games)?;
    let dim = x.first().map(Vec::len).unwrap_or(0);
    let mut sums = [vec![0.0; dim], vec![0.0; dim]];
    let mut counts = [0usize; 2];
    for (row, &label) in x.iter().zip(&y) {
        let k = usize::from(label);
        counts[k] += 1;
        for (s, v) in sums[k].iter_mut().zip(row) {
            *s += v;
        }
    }
    if counts.contains(&0) {
        return Err(Error::SingleClass);
    }
    let [s0, s1] = sums;
    let mean = |s: Vec<f64>, c: usize| s.into_iter().map(|v| v / c as f64).collect();
    Ok(CentroidModel {
        mean0: mean(s0, counts[0]),
        mean1: mean(s1, counts[1]),
        scale,
    })
}

impl CentroidModel {
    pub fn probability(&self, features: &[f64]) -> f64 {
        let sq = |m: &[f64]| -> f64 { features.iter().zip(m).map(|(a, b)| (a - b) * (a - b)).sum() };
        clamp_probability(sigmoid(self.scale * (sq(&self.mean0) - sq(&self.mean1))))
    }

    pub fn score(&self, name: &str, games: &GameSet) -> Result<ScoringSystem> {
        let scores = score_rows(games, self.mean0.len(), |f| self.probability(f))?;
        ScoringSystem::higher_better(name, scores)
    }
}

/// A trained built-in scorer with its system name.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseModel {
    Logistic { name: String, model: LogisticModel },
    Centroid { name: String, model: CentroidModel },
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn split(text: &str) -> Result<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::ModelFormat(format!("{v:?} is not a number")))
        })
        .collect()
}

impl BaseModel {
    pub fn name(&self) -> &str {
        match self {
            BaseModel::Logistic { name, .. } | BaseModel::Centroid { name, .. } => name,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            BaseModel::Logistic { model, .. } => model.coefficients.len(),
            BaseModel::Centroid { model, .. } => model.mean0.len(),
        }
    }

    pub fn score(&self, games: &GameSet) -> Result<ScoringSystem> {
        match self {
            BaseModel::Logistic { name, model } => model.score(name, games),
            BaseModel::Centroid { name, model } => model.score(name, games),
        }
    }

    /// Plain-text `key = value` form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            BaseModel::Logistic { name, model } => {
                let _ = writeln!(out, "kind = logistic");
                let _ = writeln!(out, "name = {name}");
                let _ = writeln!(out, "dimension = {}", model.coefficients.len());
                if let Some(b) = model.intercept {
                    let _ = writeln!(out, "intercept = {b}");
                }
                let _ = writeln!(out, "coefficients = {}", join(&model.coefficients));
            }
            BaseModel::Centroid { name, model } => {
                let _ = writeln!(out, "kind = centroid");
                let _ = writeln!(out, "name = {name}");
                let _ = writeln!(out, "dimension = {}", model.mean0.len());
                let _ = writeln!(out, "scale = {}", model.scale);
                let _ = writeln!(out, "mean0 = {}", join(&model.mean0));
                let _ = writeln!(out, "mean1 = {}", join(&model.mean1));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut fields = std::collections::BTreeMap::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::ModelFormat(format!("expected key = value, got {line:?}")))?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| {
            fields
                .get(k)
                .map(String::as_str)
                .ok_or_else(|| Error::ModelFormat(format!("missing key {k:?}")))
        };
        let name = get("name")?.to_string();
        let dimension: usize = get("dimension")?
            .parse()
            .map_err(|_| Error::ModelFormat("dimension is not an integer".into()))?;
        let check = |v: Vec<f64>| {
            if v.len() == dimension {
                Ok(v)
            } else {
                Err(Error::ModelFormat(format!(
                    "expected {dimension} values, found {}",
                    v.len()
                )))
            }
        };
        let number = |k: &str| -> Result<f64> {
            get(k)?
                .parse()
                .map_err(|_| Error::ModelFormat(format!("{k} is not a number")))
        };
        match get("kind")? {
            "logistic" => Ok(BaseModel::Logistic {
                name,
                model: LogisticModel {
                    coefficients: check(split(get("coefficients")?)?)?,
                    intercept: fields.contains_key("intercept").then(|| number("intercept")).transpose()?,
                    config: LogisticConfig::default(),
                },
            }),
            "centroid" => Ok(BaseModel::Centroid {
                name,
                model: CentroidModel {
                    mean0: check(split(get("mean0")?)?)?,
                    mean1: check(split(get("mean1")?)?)?,
                    scale: number("scale")?,
                },
            }),
            other => Err(Error::ModelFormat(format!("unknown kind {other:?}"))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        Self::from_text(&text)
    }
}
