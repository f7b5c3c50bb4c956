use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cfa_core::fusion::EnsembleSpec;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn cfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfa")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = cfa(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn run_synthetic(out: &Path, extra: &[&str]) {
    let config = s(&fixtures().join("synthetic/config.toml"));
    let dir = format!("output_dir={:?}", s(out));
    let mut args = vec!["run", "--config", &config, "--set", &dir];
    args.extend_from_slice(extra);
    ok(&args);
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

fn assert_same_tree(a: &Path, b: &Path) {
    let mut names: Vec<_> = fs::read_dir(b)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| !n.to_string_lossy().starts_with('.'))
        .collect();
    names.sort();
    for name in names {
        let want = fs::read(b.join(&name)).unwrap();
        let got = fs::read(a.join(&name)).unwrap();
        assert!(got == want, "{name:?} differs from the bundled copy");
    }
}

#[test]
fn bundled_fixtures_regenerate_exactly() {
    let tmp = tempfile::tempdir().unwrap();
    let syn = tmp.path().join("synthetic");
    let bracket = tmp.path().join("bracket");
    ok(&["fixture", "--out", &s(&syn)]);
    ok(&["fixture", "--bracket", "--out", &s(&bracket)]);
    assert_same_tree(&syn, &fixtures().join("synthetic"));
    assert_same_tree(&bracket, &fixtures().join("bracket"));
}

#[test]
fn run_selects_planted_trio() {
    let tmp = tempfile::tempdir().unwrap();
    run_synthetic(tmp.path(), &[]);
    let table = fs::read_to_string(tmp.path().join("selection.csv")).unwrap();
    let top = table.lines().nth(1).unwrap();
    assert!(top.starts_with("ABE,6,"), "{top}");
    let season = tmp.path().join("season_2016");
    assert_eq!(data_rows(&season.join("fusion_report.csv")), 156);
    assert_eq!(data_rows(&season.join("base_accuracy.csv")), 5);
    for line in fs::read_to_string(season.join("fusion_report.csv")).unwrap().lines().skip(1) {
        let label = line.split(',').next().unwrap();
        EnsembleSpec::parse(label).unwrap();
    }
    let target = tmp.path().join("target_2024");
    assert!(target.join("team_ranking_rc.csv").exists());
    assert!(target.join("report.csv").exists());
}

#[test]
fn override_restricts_weightings() {
    let tmp = tempfile::tempdir().unwrap();
    run_synthetic(tmp.path(), &["--set", r#"fusion.weightings=["WCDS"]"#]);
    for year in 2014..=2023 {
        let report = tmp.path().join(format!("season_{year}/fusion_report.csv"));
        assert_eq!(data_rows(&report), 52, "{year}");
    }
}

#[test]
fn builtin_run_writes_models() {
    let tmp = tempfile::tempdir().unwrap();
    let config = s(&fixtures().join("synthetic/builtin.toml"));
    ok(&["run", "--config", &config, "--set", &format!("output_dir={:?}", s(tmp.path()))]);
    for name in ["LR", "CEN"] {
        let text = fs::read_to_string(tmp.path().join(format!("models/{name}.txt"))).unwrap();
        assert!(!text.is_empty());
    }
}

#[test]
fn select_and_plot_from_season_dirs() {
    let tmp = tempfile::tempdir().unwrap();
    run_synthetic(tmp.path(), &[]);
    let dirs: Vec<String> = (2014..=2023).map(|y| s(&tmp.path().join(format!("season_{y}")))).collect();
    let mut args = vec!["select"];
    args.extend(dirs.iter().map(String::as_str));
    assert_eq!(ok(&args).trim(), "ABE");

    let season = tmp.path().join("season_2014");
    let rsc = tmp.path().join("rsc.svg");
    ok(&["plot", "rsc", "--input", &s(&season.join("rsc.csv")), "--out", &s(&rsc)]);
    assert_eq!(fs::read_to_string(&rsc).unwrap().matches("<polyline").count(), 5);
    let perf = tmp.path().join("perf.svg");
    ok(&[
        "plot",
        "performance",
        "--input",
        &s(&season.join("fusion_report.csv")),
        "--base",
        &s(&season.join("base_accuracy.csv")),
        "--out",
        &s(&perf),
    ]);
    let svg = fs::read_to_string(&perf).unwrap();
    assert_eq!(svg.matches("class=\"bar\"").count(), 156);
    assert_eq!(svg.matches("class=\"best\"").count(), 1);
}

#[test]
fn one_system_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let config = s(&fixtures().join("synthetic/config.toml"));
    let out = cfa(&[
        "run",
        "--config",
        &config,
        "--set",
        r#"systems=[{name="A"}]"#,
        "--set",
        &format!("output_dir={:?}", s(tmp.path())),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(cfa(&["bogus"]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_cfa"))
        .args(["select", "nowhere"])
        .env("CFA_WORKERS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_data_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cfa(&["evaluate", "--games", "/no/such/file.csv", "--out", &s(tmp.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_normalization_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let games = tmp.path().join("flat.csv");
    fs::write(
        &games,
        "game_id,season,team1,team2,label,sys_A,sys_B\n\
         g1,2020,T1,T2,1,0.5,0.9\n\
         g2,2020,T3,T4,0,0.5,0.1\n\
         g3,2020,T5,T6,1,0.5,0.7\n",
    )
    .unwrap();
    let out = cfa(&[
        "evaluate",
        "--games",
        &s(&games),
        "--normalization",
        "minmax",
        "--out",
        &s(&tmp.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn compare_reports_bracket_accuracy() {
    let dir = fixtures().join("bracket");
    let stdout = ok(&[
        "compare",
        "--ranking",
        &s(&dir.join("ranking.csv")),
        "--results",
        &s(&dir.join("results.csv")),
        "--baselines",
        &s(&dir.join("baselines.csv")),
    ]);
    assert!(stdout.contains("74.60"), "{stdout}");
}
