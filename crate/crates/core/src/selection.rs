//! Cross-season ensemble selection: count the seasons in which each member
//! subset beats the best individual system, then pick the most frequent one.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::error::{Error, Result};
use crate::fusion::{EnsembleSpec, Space, Weighting};

/// Accuracies of the base and combined systems for one season.
#[derive(Debug, Clone, PartialEq)]
pub struct YearResult {
    pub season: i32,
    pub base: Vec<(String, f64)>,
    pub combined: Vec<(EnsembleSpec, f64)>,
}

impl YearResult {
    pub fn best_individual(&self) -> f64 {
        self.base
            .iter()
            .map(|b| b.1)
            .max_by(f64::total_cmp)
            .unwrap_or(f64::NEG_INFINITY)
    }
}

/// Which combination variants may count as an improvement.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelectionConfig {
    /// Empty means every space.
    pub spaces: Vec<Space>,
    /// Empty means every weighting.
    pub weightings: Vec<Weighting>,
}

impl SelectionConfig {
    fn admits(&self, spec: &EnsembleSpec) -> bool {
        (self.spaces.is_empty() || self.spaces.contains(&spec.space()))
            && (self.weightings.is_empty() || self.weightings.contains(&spec.weighting()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovementEntry {
    pub size: usize,
    pub count: usize,
}

/// Improvement counts keyed by member subset token (e.g. `ABE`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ImprovementTable {
    pub entries: BTreeMap<String, ImprovementEntry>,
    pub seasons: usize,
}

impl ImprovementTable {
    pub fn count(&self, members: &str) -> Option<usize> {
        self.entries.get(members).map(|e| e.count)
    }

    /// `members,count,selected`.
    pub fn write_csv<W: Write>(&self, writer: W, selected: Option<&str>) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["members", "count", "selected"])?;
        let mut rows: Vec<(&String, &ImprovementEntry)> = self.entries.iter().collect();
        rows.sort_by(|a, b| {
            b.1.count
                .cmp(&a.1.count)
                .then(a.1.size.cmp(&b.1.size))
                .then(a.0.cmp(b.0))
        });
        for (members, entry) in rows {
            let flag = if Some(members.as_str()) == selected { "1" } else { "0" };
            out.write_record([members.as_str(), &entry.count.to_string(), flag])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn improvement_table(years: &[YearResult], config: &SelectionConfig) -> Result<ImprovementTable> {
    let first = years.first().ok_or(Error::NoSeasons)?;
    let base_names = |y: &YearResult| y.base.iter().map(|b| b.0.clone()).collect::<BTreeSet<_>>();
    let labels = |y: &YearResult| y.combined.iter().map(|c| c.0.label()).collect::<BTreeSet<_>>();
    let (names0, labels0) = (base_names(first), labels(first));

    let mut table = ImprovementTable {
        entries: BTreeMap::new(),
        seasons: years.len(),
    };
    for (spec, _) in &first.combined {
        table
            .entries
            .entry(spec.members_label())
            .or_insert(ImprovementEntry {
                size: spec.members().len(),
                count: 0,
            });
    }

    for year in years {
        if base_names(year) != names0 || labels(year) != labels0 {
            return Err(Error::InconsistentSystems(year.season));
        }
        let best = year.best_individual();
        let improved: BTreeSet<String> = year
            .combined
            .iter()
            .filter(|(spec, acc)| config.admits(spec) && *acc > best)
            .map(|(spec, _)| spec.members_label())
            .collect();
        for members in improved {
            if let Some(e) = table.entries.get_mut(&members) {
                e.count += 1;
            }
        }
    }
    Ok(table)
}

/// Subset with the highest count; ties go to the smaller subset, then the
/// lexicographically smaller token.
pub fn select_model(table: &ImprovementTable) -> Result<String> {
    table
        .entries
        .iter()
        .min_by(|a, b| {
            b.1.count
                .cmp(&a.1.count)
                .then(a.1.size.cmp(&b.1.size))
                .then(a.0.cmp(b.0))
        })
        .map(|(members, _)| members.clone())
        .ok_or(Error::EmptyTable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(label: &str) -> EnsembleSpec {
        EnsembleSpec::parse(label).unwrap()
    }

    fn year(season: i32, base: f64, combined: &[(&str, f64)]) -> YearResult {
        YearResult {
            season,
            base: vec![("A".into(), base), ("B".into(), base - 0.1), ("C".into(), 0.1)],
            combined: combined.iter().map(|(l, a)| (spec(l), *a)).collect(),
        }
    }

    fn table(counts: &[(&str, usize)]) -> ImprovementTable {
        ImprovementTable {
            entries: counts
                .iter()
                .map(|(m, c)| {
                    (
                        m.to_string(),
                        ImprovementEntry {
                            size: m.len(),
                            count: *c,
                        },
                    )
                })
                .collect(),
            seasons: 10,
        }
    }

    #[test]
    fn strict_improvement_only() {
        let years: Vec<YearResult> = (0..3)
            .map(|s| year(2000 + s, 0.7, &[("AB/SC/AC", 0.7), ("AB/RC/AC", 0.69), ("BC/SC/AC", 0.5)]))
            .collect();
        let t = improvement_table(&years, &SelectionConfig::default()).unwrap();
        assert_eq!(t.count("AB"), Some(0));
        assert_eq!(t.count("BC"), Some(0));
    }

    #[test]
    fn one_year_one_pair() {
        let years = vec![year(2021, 0.7, &[("AB/SC/AC", 0.71), ("AC/SC/AC", 0.6), ("BC/RC/AC", 0.2)])];
        let t = improvement_table(&years, &SelectionConfig::default()).unwrap();
        assert_eq!(t.count("AB"), Some(1));
        assert_eq!(t.count("AC"), Some(0));
        assert_eq!(t.count("BC"), Some(0));
    }

    #[test]
    fn variants_pool_per_year() {
        // both variants improve in the same year: counted once
        let years = vec![year(2021, 0.7, &[("AB/SC/AC", 0.8), ("AB/RC/AC", 0.9)])];
        let t = improvement_table(&years, &SelectionConfig::default()).unwrap();
        assert_eq!(t.count("AB"), Some(1));
        let only_sc = SelectionConfig {
            spaces: vec![Space::Rank],
            weightings: vec![Weighting::DiversityStrength],
        };
        assert_eq!(improvement_table(&years, &only_sc).unwrap().count("AB"), Some(0));
    }

    #[test]
    fn inconsistent_years() {
        let years = vec![
            year(2021, 0.7, &[("AB/SC/AC", 0.8)]),
            year(2022, 0.7, &[("AC/SC/AC", 0.8)]),
        ];
        assert!(matches!(
            improvement_table(&years, &SelectionConfig::default()),
            Err(Error::InconsistentSystems(2022))
        ));
        assert!(matches!(
            improvement_table(&[], &SelectionConfig::default()),
            Err(Error::NoSeasons)
        ));
    }

    #[test]
    fn selection_rules() {
        assert_eq!(select_model(&table(&[("ABE", 6), ("AD", 4), ("ADE", 3)])).unwrap(), "ABE");
        assert_eq!(select_model(&table(&[("CD", 0)])).unwrap(), "CD");
        assert_eq!(select_model(&table(&[("ABC", 5), ("AB", 5)])).unwrap(), "AB");
        assert_eq!(select_model(&table(&[("BC", 5), ("AC", 5)])).unwrap(), "AC");
        assert!(matches!(
            select_model(&ImprovementTable::default()),
            Err(Error::EmptyTable)
        ));
    }

    #[test]
    fn csv_output() {
        let t = table(&[("AD", 4), ("ABE", 6)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf, Some("ABE")).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "members,count,selected\nABE,6,1\nAD,4,0\n"
        );
    }
}
