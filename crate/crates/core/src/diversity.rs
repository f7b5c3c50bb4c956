//! Cognitive diversity between scoring systems and per-system diversity
//! strength.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scoring::ScoringSystem;

/// Root-mean-square distance between the RSC functions of `a` and `b`.
pub fn cognitive_diversity(a: &ScoringSystem, b: &ScoringSystem) -> Result<f64> {
    rsc_distance(a.rsc(), b.rsc())
}

/// Same as [`cognitive_diversity`] on raw RSC vectors.
pub fn rsc_distance(fa: &[f64], fb: &[f64]) -> Result<f64> {
    if fa.len() != fb.len() {
        return Err(Error::ItemCountMismatch(fa.len(), fb.len()));
    }
    if fa.is_empty() {
        return Err(Error::Empty);
    }
    let sum: f64 = fa.iter().zip(fb).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((sum / fa.len() as f64).sqrt())
}

/// Pairwise cognitive diversity and diversity strength for a pool of systems.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityMatrix {
    system_names: Vec<String>,
    cd: Vec<Vec<f64>>,
    ds: Vec<f64>,
}

impl DiversityMatrix {
    pub fn compute(systems: &[ScoringSystem]) -> Result<Self> {
        let m = systems.len();
        if m < 2 {
            return Err(Error::TooFewSystems {
                found: m,
                required: 2,
            });
        }
        let n = systems[0].len();
        if let Some(other) = systems.iter().find(|s| s.len() != n) {
            return Err(Error::ItemCountMismatch(n, other.len()));
        }

        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();
        let values = pairs
            .par_iter()
            .map(|&(i, j)| cognitive_diversity(&systems[i], &systems[j]))
            .collect::<Result<Vec<_>>>()?;

        let mut cd = vec![vec![0.0; m]; m];
        for (&(i, j), v) in pairs.iter().zip(values) {
            cd[i][j] = v;
            cd[j][i] = v;
        }
        let ds = (0..m)
            .map(|i| {
                let total: f64 = (0..m).filter(|&j| j != i).map(|j| cd[i][j]).sum();
                total / (m - 1) as f64
            })
            .collect();
        Ok(DiversityMatrix {
            system_names: systems.iter().map(|s| s.name().to_string()).collect(),
            cd,
            ds,
        })
    }

    pub fn system_names(&self) -> &[String] {
        &self.system_names
    }

    pub fn cd(&self) -> &[Vec<f64>] {
        &self.cd
    }

    pub fn ds(&self) -> &[f64] {
        &self.ds
    }

    pub fn ds_of(&self, name: &str) -> Option<f64> {
        self.system_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.ds[i])
    }

    /// `system_i,system_j,cd` for every unordered pair.
    pub fn write_cd_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["system_i", "system_j", "cd"])?;
        let m = self.system_names.len();
        for i in 0..m {
            for j in i + 1..m {
                out.write_record([
                    self.system_names[i].as_str(),
                    self.system_names[j].as_str(),
                    &self.cd[i][j].to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// `system,ds`.
    pub fn write_ds_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["system", "ds"])?;
        for (name, ds) in self.system_names.iter().zip(&self.ds) {
            out.write_record([name.as_str(), &ds.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}
