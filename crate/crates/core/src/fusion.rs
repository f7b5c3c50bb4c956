//! Score and rank combination of scoring-system subsets.
//!
//! For a subset `M_h` of the pool, each item's combined value is a (weighted)
//! mean over the members:
//!
//! | space | AC | WCDS | WCP |
//! |-------|----|------|-----|
//! | score | mean of scores | scores weighted by DS | scores weighted by P |
//! | rank  | mean of ranks  | ranks weighted by 1/DS | ranks weighted by 1/P |
//!
//! Score combinations are higher-is-better; rank combinations keep the
//! averaged ranks as values and are lower-is-better.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::diversity::DiversityMatrix;
use crate::error::{Error, Result};
use crate::scoring::{derive_ranks, Normalization, Orientation, Ranked, ScoringSystem};

/// Stand-in for a zero diversity strength when its reciprocal is needed.
pub const DEFAULT_DS_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Score,
    Rank,
}

impl Space {
    pub fn as_str(self) -> &'static str {
        match self {
            Space::Score => "SC",
            Space::Rank => "RC",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Space {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "SC" | "SCORE" => Ok(Space::Score),
            "RC" | "RANK" => Ok(Space::Rank),
            _ => Err(format!("unknown space {s:?} (expected SC|RC)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weighting {
    /// Plain average.
    Average,
    /// Weighted by diversity strength.
    DiversityStrength,
    /// Weighted by performance.
    Performance,
}

impl Weighting {
    pub fn as_str(self) -> &'static str {
        match self {
            Weighting::Average => "AC",
            Weighting::DiversityStrength => "WCDS",
            Weighting::Performance => "WCP",
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AC" => Ok(Weighting::Average),
            "WCDS" => Ok(Weighting::DiversityStrength),
            "WCP" => Ok(Weighting::Performance),
            _ => Err(format!("unknown weighting {s:?} (expected AC|WCDS|WCP)")),
        }
    }
}

/// How rank combinations turn DS or P into weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankWeightMode {
    /// Weight by `1/DS` or `1/P`.
    #[default]
    Reciprocal,
    /// Weight by `DS` or `P`, as score combinations do.
    Direct,
}

impl FromStr for RankWeightMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "reciprocal" => Ok(RankWeightMode::Reciprocal),
            "direct" => Ok(RankWeightMode::Direct),
            _ => Err(format!("unknown rc_weight_mode {s:?} (expected reciprocal|direct)")),
        }
    }
}

/// Which systems diversity strength is averaged over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DsScope {
    /// All systems in the pool.
    #[default]
    Pool,
    /// Only the members of the ensemble being built.
    Subset,
}

impl FromStr for DsScope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pool" => Ok(DsScope::Pool),
            "subset" => Ok(DsScope::Subset),
            _ => Err(format!("unknown ds_scope {s:?} (expected pool|subset)")),
        }
    }
}

/// One ensemble: a member subset, a combination space and a weighting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EnsembleSpec {
    members: Vec<String>,
    space: Space,
    weighting: Weighting,
}

impl EnsembleSpec {
    pub fn new(members: &[&str], space: Space, weighting: Weighting) -> Result<Self> {
        let mut members: Vec<String> = members.iter().map(|m| m.to_string()).collect();
        members.sort();
        members.dedup();
        if members.len() < 2 {
            return Err(Error::TooFewSystems {
                found: members.len(),
                required: 2,
            });
        }
        Ok(EnsembleSpec {
            members,
            space,
            weighting,
        })
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    /// Members joined into one token: `ABE` for single-letter names,
    /// `logit+svm` otherwise.
    pub fn members_label(&self) -> String {
        members_label(&self.members)
    }

    /// Canonical label such as `ABE/RC/WCDS`.
    pub fn label(&self) -> String {
        format!("{}/{}/{}", self.members_label(), self.space, self.weighting)
    }

    pub fn parse(label: &str) -> Result<Self> {
        let bad = || Error::InvalidLabelText(label.to_string());
        let parts: Vec<&str> = label.split('/').collect();
        let [members, space, weighting] = parts.as_slice() else {
            return Err(bad());
        };
        let members = parse_members_label(members).ok_or_else(bad)?;
        let space = space.parse().map_err(|_| bad())?;
        let weighting = weighting.parse().map_err(|_| bad())?;
        let refs: Vec<&str> = members.iter().map(String::as_str).collect();
        let spec = EnsembleSpec::new(&refs, space, weighting).map_err(|_| bad())?;
        if spec.label() != label {
            return Err(bad());
        }
        Ok(spec)
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Joins sorted member names into a subset token.
pub fn members_label<S: AsRef<str>>(members: &[S]) -> String {
    let mut names: Vec<&str> = members.iter().map(AsRef::as_ref).collect();
    names.sort();
    if names.iter().all(|n| n.chars().count() == 1) {
        names.concat()
    } else {
        names.join("+")
    }
}

/// Splits a subset token back into member names.
pub fn parse_members_label(token: &str) -> Option<Vec<String>> {
    if token.is_empty() {
        return None;
    }
    let names: Vec<String> = if token.contains('+') {
        token.split('+').map(str::to_string).collect()
    } else {
        token.chars().map(|c| c.to_string()).collect()
    };
    if names.iter().any(String::is_empty) {
        return None;
    }
    Some(names)
}

/// The result of fusing one subset.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedSystem {
    spec: EnsembleSpec,
    values: Vec<f64>,
    orientation: Orientation,
    ranks: Vec<usize>,
}

impl CombinedSystem {
    fn new(spec: EnsembleSpec, values: Vec<f64>) -> Result<Self> {
        let orientation = match spec.space {
            Space::Score => Orientation::HigherBetter,
            Space::Rank => Orientation::LowerBetter,
        };
        let ranks = derive_ranks(&values, orientation)?;
        Ok(CombinedSystem {
            spec,
            values,
            orientation,
            ranks,
        })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn label(&self) -> String {
        self.spec.label()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Ranked for CombinedSystem {
    fn values(&self) -> &[f64] {
        &self.values
    }

    fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn ranks(&self) -> &[usize] {
        &self.ranks
    }
}

/// All index subsets of `0..t` with at least `h_min` members, ordered by
/// size and then lexicographically.
pub fn enumerate_subsets(t: usize, h_min: usize) -> Result<Vec<Vec<usize>>> {
    if t < 2 {
        return Err(Error::TooFewSystems {
            found: t,
            required: 2,
        });
    }
    let h_min = h_min.max(1);
    let mut out = Vec::new();
    for size in h_min..=t {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            // advance to the next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| combo[i] < t - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    Ok(out)
}

fn resolve(systems: &[ScoringSystem], members: &[&str]) -> Result<Vec<usize>> {
    let idx = members
        .iter()
        .map(|m| {
            systems
                .iter()
                .position(|s| s.name() == *m)
                .ok_or_else(|| Error::UnknownSystem(m.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = systems[idx[0]].len();
    for &i in &idx {
        if systems[i].len() != n {
            return Err(Error::ItemCountMismatch(n, systems[i].len()));
        }
    }
    Ok(idx)
}

fn weighted_mean(columns: &[Vec<f64>], weights: Option<&[f64]>) -> Vec<f64> {
    let n = columns[0].len();
    match weights {
        None => {
            let h = columns.len() as f64;
            (0..n)
                .map(|i| columns.iter().map(|c| c[i]).sum::<f64>() / h)
                .collect()
        }
        Some(w) => {
            let total: f64 = w.iter().sum();
            (0..n)
                .map(|i| columns.iter().zip(w).map(|(c, wj)| wj * c[i]).sum::<f64>() / total)
                .collect()
        }
    }
}

fn member_weights(
    systems: &[ScoringSystem],
    idx: &[usize],
    weighting: Weighting,
    weights: Option<&[f64]>,
) -> Result<Option<Vec<f64>>> {
    if weighting == Weighting::Average {
        return Ok(None);
    }
    let weights = weights.ok_or(Error::MissingWeights(weighting.as_str()))?;
    if weights.len() != systems.len() {
        return Err(Error::LengthMismatch {
            expected: systems.len(),
            found: weights.len(),
        });
    }
    Ok(Some(idx.iter().map(|&i| weights[i]).collect()))
}

fn check_positive(systems: &[ScoringSystem], idx: &[usize], w: &[f64]) -> Result<()> {
    for (&i, &weight) in idx.iter().zip(w) {
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::NonPositiveWeight {
                system: systems[i].name().to_string(),
                weight,
            });
        }
    }
    Ok(())
}

/// Score combination of `members`. `weights` are per pool system (aligned
/// with `systems`): DS values for WCDS, performance values for WCP; ignored
/// for AC.
pub fn combine_scores(
    systems: &[ScoringSystem],
    members: &[&str],
    weighting: Weighting,
    weights: Option<&[f64]>,
) -> Result<CombinedSystem> {
    let spec = EnsembleSpec::new(members, Space::Score, weighting)?;
    let idx = resolve(systems, members)?;
    let w = member_weights(systems, &idx, weighting, weights)?;
    if let Some(w) = &w {
        check_positive(systems, &idx, w)?;
    }
    let columns: Vec<Vec<f64>> = idx.iter().map(|&i| systems[i].oriented_scores()).collect();
    CombinedSystem::new(spec, weighted_mean(&columns, w.as_deref()))
}

/// Options for turning DS or P into rank-combination weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankWeighting {
    pub mode: RankWeightMode,
    /// Replaces a zero DS before weighting.
    pub ds_epsilon: f64,
}

impl Default for RankWeighting {
    fn default() -> Self {
        RankWeighting {
            mode: RankWeightMode::Reciprocal,
            ds_epsilon: DEFAULT_DS_EPSILON,
        }
    }
}

/// Rank combination of `members`: a (weighted) mean of their rank functions.
/// With the default reciprocal mode WCDS weighs by `1/DS` and WCP by `1/P`.
pub fn combine_ranks(
    systems: &[ScoringSystem],
    members: &[&str],
    weighting: Weighting,
    weights: Option<&[f64]>,
    options: RankWeighting,
) -> Result<CombinedSystem> {
    let spec = EnsembleSpec::new(members, Space::Rank, weighting)?;
    let idx = resolve(systems, members)?;
    let w = member_weights(systems, &idx, weighting, weights)?
        .map(|raw| -> Result<Vec<f64>> {
            let mut w = raw;
            if weighting == Weighting::DiversityStrength {
                for (&i, value) in idx.iter().zip(w.iter_mut()) {
                    if *value == 0.0 {
                        log::warn!(
                            "system {} has zero diversity strength; using {}",
                            systems[i].name(),
                            options.ds_epsilon
                        );
                        *value = options.ds_epsilon;
                    }
                }
            }
            check_positive(systems, &idx, &w)?;
            if options.mode == RankWeightMode::Reciprocal {
                for value in w.iter_mut() {
                    *value = 1.0 / *value;
                }
                check_positive(systems, &idx, &w)?;
            }
            Ok(w)
        })
        .transpose()?;
    let columns: Vec<Vec<f64>> = idx
        .iter()
        .map(|&i| systems[i].ranks().iter().map(|&r| r as f64).collect())
        .collect();
    CombinedSystem::new(spec, weighted_mean(&columns, w.as_deref()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionConfig {
    pub spaces: Vec<Space>,
    pub weightings: Vec<Weighting>,
    pub h_min: usize,
    pub normalization: Normalization,
    pub rank_weighting: RankWeighting,
    pub ds_scope: DsScope,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            spaces: vec![Space::Score, Space::Rank],
            weightings: vec![
                Weighting::Average,
                Weighting::DiversityStrength,
                Weighting::Performance,
            ],
            h_min: 2,
            normalization: Normalization::None,
            rank_weighting: RankWeighting::default(),
            ds_scope: DsScope::Pool,
        }
    }
}

/// Every configured (subset × space × weighting) combination, ordered by
/// subset, then space, then weighting as listed in `config`.
///
/// `performance` holds one positive value per system and is required when
/// WCP is configured. Diversity strength is computed here on the normalized
/// systems.
pub fn fuse_all(
    systems: &[ScoringSystem],
    config: &FusionConfig,
    performance: Option<&[f64]>,
) -> Result<Vec<CombinedSystem>> {
    let t = systems.len();
    let subsets = enumerate_subsets(t, config.h_min.max(2))?;
    let systems = systems
        .iter()
        .map(|s| s.normalize(config.normalization))
        .collect::<Result<Vec<_>>>()?;
    let needs_ds = config.weightings.contains(&Weighting::DiversityStrength);
    let pool_ds = if needs_ds && config.ds_scope == DsScope::Pool {
        Some(DiversityMatrix::compute(&systems)?.ds().to_vec())
    } else {
        None
    };
    if config.weightings.contains(&Weighting::Performance) {
        let p = performance.ok_or(Error::MissingWeights("WCP"))?;
        if p.len() != t {
            return Err(Error::LengthMismatch {
                expected: t,
                found: p.len(),
            });
        }
    }

    let jobs: Vec<(&Vec<usize>, Space, Weighting)> = subsets
        .iter()
        .flat_map(|subset| {
            config.spaces.iter().flat_map(move |&space| {
                config.weightings.iter().map(move |&w| (subset, space, w))
            })
        })
        .collect();

    jobs.par_iter()
        .map(|&(subset, space, weighting)| {
            let names: Vec<&str> = subset.iter().map(|&i| systems[i].name()).collect();
            let subset_ds;
            let weights: Option<&[f64]> = match weighting {
                Weighting::Average => None,
                Weighting::Performance => performance,
                Weighting::DiversityStrength => match &pool_ds {
                    Some(ds) => Some(ds),
                    None => {
                        let members: Vec<ScoringSystem> =
                            subset.iter().map(|&i| systems[i].clone()).collect();
                        let local = DiversityMatrix::compute(&members)?;
                        let mut full = vec![0.0; t];
                        for (k, &i) in subset.iter().enumerate() {
                            full[i] = local.ds()[k];
                        }
                        subset_ds = full;
                        Some(&subset_ds)
                    }
                },
            };
            match space {
                Space::Score => combine_scores(&systems, &names, weighting, weights),
                Space::Rank => {
                    combine_ranks(&systems, &names, weighting, weights, config.rank_weighting)
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(name: &str, scores: &[f64]) -> ScoringSystem {
        ScoringSystem::higher_better(name, scores.to_vec()).unwrap()
    }

    /// Builds a system whose rank function is `ranks`.
    fn from_ranks(name: &str, ranks: &[usize]) -> ScoringSystem {
        sys(name, &ranks.iter().map(|&r| -(r as f64)).collect::<Vec<_>>())
    }

    #[test]
    fn subset_counts() {
        assert_eq!(enumerate_subsets(5, 2).unwrap().len(), 26);
        assert_eq!(enumerate_subsets(2, 2).unwrap(), vec![vec![0, 1]]);
        assert_eq!(
            enumerate_subsets(3, 2).unwrap(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        assert!(matches!(
            enumerate_subsets(1, 2),
            Err(Error::TooFewSystems { .. })
        ));
        for t in 2..10 {
            assert_eq!(enumerate_subsets(t, 2).unwrap().len(), (1 << t) - 1 - t);
        }
    }

    #[test]
    fn labels_round_trip() {
        let spec = EnsembleSpec::new(&["E", "A", "B"], Space::Rank, Weighting::DiversityStrength)
            .unwrap();
        assert_eq!(spec.label(), "ABE/RC/WCDS");
        assert_eq!(EnsembleSpec::parse("ABE/RC/WCDS").unwrap(), spec);
        let long = EnsembleSpec::new(&["svm", "logit"], Space::Score, Weighting::Average).unwrap();
        assert_eq!(long.label(), "logit+svm/SC/AC");
        assert_eq!(EnsembleSpec::parse(&long.label()).unwrap(), long);
        assert!(EnsembleSpec::parse("A/RC/AC").is_err());
        assert!(EnsembleSpec::parse("AB/XX/AC").is_err());
        assert!(EnsembleSpec::parse("BA/RC/AC").is_err());
    }

    #[test]
    fn score_average() {
        let s = [sys("A", &[0.9, 0.2]), sys("B", &[0.7, 0.4])];
        let c = combine_scores(&s, &["A", "B"], Weighting::Average, None).unwrap();
        assert!((c.values()[0] - 0.8).abs() < 1e-15);
        assert_eq!(c.orientation(), Orientation::HigherBetter);
    }

    #[test]
    fn score_wcp() {
        let s = [sys("A", &[1.0, 0.5]), sys("B", &[0.0, 0.5])];
        let c = combine_scores(&s, &["A", "B"], Weighting::Performance, Some(&[0.6, 0.4])).unwrap();
        assert!((c.values()[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn identical_copies_unchanged() {
        let base = [0.3, 0.8, 0.1, 0.55];
        let s = [sys("A", &base), sys("B", &base), sys("C", &base)];
        for w in [
            Weighting::Average,
            Weighting::DiversityStrength,
            Weighting::Performance,
        ] {
            let c = combine_scores(&s, &["A", "B", "C"], w, Some(&[0.2, 0.3, 0.5])).unwrap();
            for (got, want) in c.values().iter().zip(base) {
                assert!((got - want).abs() < 1e-15);
            }
            let r = combine_ranks(&s, &["A", "B", "C"], w, Some(&[0.2, 0.3, 0.5]), Default::default())
                .unwrap();
            assert_eq!(r.ranks(), s[0].ranks());
        }
    }

    #[test]
    fn rank_average() {
        let s = [from_ranks("A", &[1, 3, 2, 4]), from_ranks("B", &[2, 1, 3, 4])];
        let c = combine_ranks(&s, &["A", "B"], Weighting::Average, None, Default::default()).unwrap();
        assert_eq!(c.values(), &[1.5, 2.0, 2.5, 4.0]);
        assert_eq!(c.ranks(), &[1, 2, 3, 4]);
        assert_eq!(c.orientation(), Orientation::LowerBetter);
    }

    #[test]
    fn rank_wcds_reciprocal() {
        // item 0 has ranks (1, 2); DS (0.1, 0.2) gives weights (10, 5).
        let s = [from_ranks("A", &[1, 2]), from_ranks("B", &[2, 1])];
        let c = combine_ranks(
            &s,
            &["A", "B"],
            Weighting::DiversityStrength,
            Some(&[0.1, 0.2]),
            Default::default(),
        )
        .unwrap();
        assert!((c.values()[0] - 4.0 / 3.0).abs() < 1e-12);

        let direct = RankWeighting {
            mode: RankWeightMode::Direct,
            ..Default::default()
        };
        let c = combine_ranks(&s, &["A", "B"], Weighting::DiversityStrength, Some(&[0.1, 0.2]), direct)
            .unwrap();
        assert!((c.values()[0] - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_ds_substituted_in_rank_space() {
        let s = [from_ranks("A", &[1, 2]), from_ranks("B", &[2, 1])];
        let c = combine_ranks(
            &s,
            &["A", "B"],
            Weighting::DiversityStrength,
            Some(&[0.0, 0.0]),
            Default::default(),
        )
        .unwrap();
        assert_eq!(c.values(), &[1.5, 1.5]);
        assert!(matches!(
            combine_scores(&s, &["A", "B"], Weighting::DiversityStrength, Some(&[0.0, 0.1])),
            Err(Error::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn weight_errors() {
        let s = [sys("A", &[0.1, 0.2]), sys("B", &[0.3, 0.1])];
        assert!(matches!(
            combine_scores(&s, &["A", "B"], Weighting::Performance, Some(&[0.5, -0.1])),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            combine_ranks(&s, &["A", "B"], Weighting::Performance, Some(&[0.0, 0.5]), Default::default()),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            combine_scores(&s, &["A", "B"], Weighting::Performance, None),
            Err(Error::MissingWeights("WCP"))
        ));
        assert!(matches!(
            combine_scores(&s, &["A", "Z"], Weighting::Average, None),
            Err(Error::UnknownSystem(z)) if z == "Z"
        ));
    }

    #[test]
    fn fuse_all_counts() {
        let systems: Vec<ScoringSystem> = (0..5)
            .map(|k| {
                let name = ((b'A' + k as u8) as char).to_string();
                let scores = (0..8).map(|i| ((i * (k + 3)) % 11) as f64 / 10.0).collect::<Vec<_>>();
                sys(&name, &scores)
            })
            .collect();
        let p = [0.7, 0.65, 0.6, 0.72, 0.68];
        let all = fuse_all(&systems, &FusionConfig::default(), Some(&p)).unwrap();
        assert_eq!(all.len(), 156);
        let wcds = FusionConfig {
            weightings: vec![Weighting::DiversityStrength],
            ..Default::default()
        };
        let out = fuse_all(&systems, &wcds, None).unwrap();
        assert_eq!(out.len(), 52);
        assert_eq!(out[0].label(), "AB/SC/WCDS");
        assert_eq!(out[1].label(), "AB/RC/WCDS");
        assert_eq!(out.last().unwrap().label(), "ABCDE/RC/WCDS");

        let subset_scope = FusionConfig {
            ds_scope: DsScope::Subset,
            ..wcds.clone()
        };
        assert_eq!(fuse_all(&systems, &subset_scope, None).unwrap().len(), 52);

        let single = FusionConfig {
            spaces: vec![Space::Rank],
            weightings: vec![Weighting::Average],
            ..Default::default()
        };
        assert_eq!(fuse_all(&systems[..2], &single, None).unwrap().len(), 1);
        assert!(matches!(
            fuse_all(&systems, &FusionConfig::default(), None),
            Err(Error::MissingWeights("WCP"))
        ));
    }
}
