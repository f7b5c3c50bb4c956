//! CSV report files written by the pipeline and read back by `select`,
//! `compare` and `plot`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cfa_core::evaluation::{RankingSource, TeamRank, TeamRanking};
use cfa_core::fusion::{EnsembleSpec, Space};

use crate::error::{csv_err, io_err, CliError, CliResult};

/// Creates `path` (and its parent directory) and hands a buffered writer to `body`.
pub fn write_with(path: &Path, body: impl FnOnce(&mut dyn Write) -> csv::Result<()>) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    body(&mut out).map_err(csv_err(path))?;
    out.flush().map_err(io_err(path))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, text).map_err(io_err(path))
}

fn reader(path: &Path) -> CliResult<csv::Reader<File>> {
    let file = File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn bad(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Input {
        path: PathBuf::from(path),
        message: message.into(),
    }
}

fn expect_header(path: &Path, rdr: &mut csv::Reader<File>, want: &[&str]) -> CliResult<()> {
    let header = rdr.headers().map_err(csv_err(path))?;
    if header.iter().collect::<Vec<_>>() != want {
        return Err(bad(path, format!("expected header {}", want.join(","))));
    }
    Ok(())
}

fn number(path: &Path, line: usize, text: &str) -> CliResult<f64> {
    text.parse()
        .map_err(|_| bad(path, format!("row {line}: {text:?} is not a number")))
}

/// `label,space,weighting,members,accuracy`.
pub fn write_fusion_report<W: Write>(writer: W, rows: &[(EnsembleSpec, f64)]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["label", "space", "weighting", "members", "accuracy"])?;
    for (spec, acc) in rows {
        out.write_record([
            spec.label().as_str(),
            spec.space().as_str(),
            spec.weighting().as_str(),
            spec.members_label().as_str(),
            acc.to_string().as_str(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_fusion_report(path: &Path) -> CliResult<Vec<(EnsembleSpec, f64)>> {
    let mut rdr = reader(path)?;
    expect_header(path, &mut rdr, &["label", "space", "weighting", "members", "accuracy"])?;
    let mut rows = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err(path))?;
        let spec = EnsembleSpec::parse(&row[0]).map_err(|e| bad(path, format!("row {}: {e}", i + 2)))?;
        rows.push((spec, number(path, i + 2, &row[4])?));
    }
    Ok(rows)
}

/// `system,accuracy`.
pub fn write_base_accuracy<W: Write>(writer: W, rows: &[(String, f64)]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["system", "accuracy"])?;
    for (name, acc) in rows {
        out.write_record([name.as_str(), acc.to_string().as_str()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_base_accuracy(path: &Path) -> CliResult<Vec<(String, f64)>> {
    let mut rdr = reader(path)?;
    expect_header(path, &mut rdr, &["system", "accuracy"])?;
    let mut rows = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err(path))?;
        rows.push((row[0].to_string(), number(path, i + 2, &row[1])?));
    }
    Ok(rows)
}

/// Reads `rank,team_id,aggregate` as written by [`TeamRanking::write_csv`].
pub fn read_team_ranking(path: &Path) -> CliResult<TeamRanking> {
    let mut rdr = reader(path)?;
    expect_header(path, &mut rdr, &["rank", "team_id", "aggregate"])?;
    let mut entries = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err(path))?;
        let rank = row[0]
            .parse()
            .map_err(|_| bad(path, format!("row {}: bad rank {:?}", i + 2, &row[0])))?;
        entries.push(TeamRank {
            team: row[1].to_string(),
            aggregate: number(path, i + 2, &row[2])?,
            rank,
        });
    }
    entries.sort_by_key(|e| e.rank);
    if entries.iter().enumerate().any(|(i, e)| e.rank != i + 1) {
        return Err(bad(path, "ranks must be 1..n without gaps"));
    }
    Ok(TeamRanking {
        entries,
        source: RankingSource::Baseline,
    })
}

/// `system,rank,score` grouped by system, in file order.
pub fn read_rsc(path: &Path) -> CliResult<Vec<(String, Vec<(usize, f64)>)>> {
    let mut rdr = reader(path)?;
    expect_header(path, &mut rdr, &["system", "rank", "score"])?;
    let mut out: Vec<(String, Vec<(usize, f64)>)> = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(csv_err(path))?;
        let rank = row[1]
            .parse()
            .map_err(|_| bad(path, format!("row {}: bad rank {:?}", i + 2, &row[1])))?;
        let score = number(path, i + 2, &row[2])?;
        match out.iter_mut().find(|(name, _)| name == &row[0]) {
            Some((_, points)) => points.push((rank, score)),
            None => out.push((row[0].to_string(), vec![(rank, score)])),
        }
    }
    if out.is_empty() {
        return Err(bad(path, "no rows"));
    }
    Ok(out)
}

/// Rows of a fusion report as `(label, space, accuracy)` for plotting.
pub fn performance_rows(rows: &[(EnsembleSpec, f64)]) -> Vec<(String, Space, f64)> {
    rows.iter().map(|(s, a)| (s.label(), s.space(), *a)).collect()
}
