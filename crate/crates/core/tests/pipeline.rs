use std::fs;
use std::path::PathBuf;

use collabscope_core::ingest::SingleFieldRule;
use collabscope_core::measures::PairMode;
use collabscope_core::pipeline::{self, RunOutput};
use collabscope_core::plotspec::{plotspec, Figure};
use collabscope_core::report::{AnalysisReport, EmitFlags, RunConfig};
use collabscope_core::Error;
use serde_json::Value;

fn demo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/demo")
}

fn demo_config() -> RunConfig {
    let d = demo();
    let mut c = RunConfig::new(d.join("authors.csv"), d.join("teams.csv"));
    c.index = Some(d.join("disciplines.txt"));
    c.n_sims = 200;
    c.seed = 11;
    c
}

fn run_into(config: &mut RunConfig, dir: &tempfile::TempDir) -> RunOutput {
    config.out = Some(dir.path().to_path_buf());
    pipeline::run(config).unwrap()
}

fn series(spec: &Value) -> Vec<String> {
    fn collect(v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(m) => {
                if let Some(Value::String(s)) = m.get("series") {
                    if !out.contains(s) {
                        out.push(s.clone());
                    }
                }
                m.values().for_each(|x| collect(x, out));
            }
            Value::Array(a) => a.iter().for_each(|x| collect(x, out)),
            _ => {}
        }
    }
    let mut out = Vec::new();
    collect(spec, &mut out);
    out
}

#[test]
fn demo_report_is_complete_and_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = demo_config();
    config.emit = EmitFlags { csv: true, json: true, plotspec: true };
    let out = run_into(&mut config, &dir);
    let r = &out.analysis.report;

    assert_eq!(r.dataset.n_authors, 300);
    assert_eq!(r.dataset.n_disciplines, 27);
    assert!(r.notes.is_empty(), "{:?}", r.notes);
    assert!(!r.individual.groups.is_empty());
    assert!(r.dyadic.proportion_test.is_some());
    assert!(r.dyadic.mann_whitney.is_some() && r.dyadic.ks.is_some());
    assert!(r.teams.density_z_entropy.is_some() && r.teams.density_z_cosine.is_some());
    assert!(r.core_shell.h_index.is_some() && r.core_shell.pub_years.is_some());
    assert_eq!(r.core_shell.n_core + r.core_shell.n_shell, r.dataset.n_authors);
    assert_eq!(r.dyadic.edges.len(), r.dataset.n_edges);

    let pairs = fs::read_to_string(dir.path().join("pairs.csv")).unwrap();
    assert_eq!(pairs.lines().count() - 1, r.dataset.n_edges);
    let edgelist = fs::read_to_string(dir.path().join("graph_attributed.edgelist")).unwrap();
    assert_eq!(edgelist.lines().filter(|l| !l.starts_with('#')).count(), r.dataset.n_edges);
    let authors = fs::read_to_string(dir.path().join("authors_measures.csv")).unwrap();
    assert_eq!(authors.lines().count() - 1, r.dataset.n_authors);
    let coreshell = fs::read_to_string(dir.path().join("coreshell.csv")).unwrap();
    assert_eq!(coreshell.matches(",core,").count(), r.core_shell.n_core);
    for name in ["teams_measures.csv", "density_similarity_edges.csv", "fig1.vl.json", "fig6.vl.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }

    let text = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let back = AnalysisReport::from_json(&text).unwrap();
    assert_eq!(back.config, config);
    assert_eq!(back.to_json().unwrap(), text);
}

#[test]
fn figures_have_expected_series() {
    let out = pipeline::run(&demo_config()).unwrap();
    let r = &out.analysis.report;

    let fig1 = plotspec(r, Figure::Fig1).unwrap();
    assert_eq!(series(&fig1).len(), r.individual.groups.len());
    let rules = &fig1["layer"][1];
    assert_eq!(rules["mark"]["type"], "rule");
    assert_eq!(rules["data"]["values"].as_array().unwrap().len(), r.individual.groups.len());

    assert_eq!(series(&plotspec(r, Figure::Fig2).unwrap()), ["edges", "non-edges"]);
    assert_eq!(series(&plotspec(r, Figure::Fig4).unwrap()), ["z(H)", "z(S)"]);

    let fig6 = plotspec(r, Figure::Fig6).unwrap();
    assert_eq!(fig6["hconcat"].as_array().unwrap().len(), 2);
    assert_eq!(
        series(&fig6),
        ["core h_index", "shell h_index", "core pub_years", "shell pub_years"]
    );
}

#[test]
fn edges_only_mode_skips_figure_two() {
    let mut config = demo_config();
    config.pair_mode = PairMode::EdgesOnly;
    let out = pipeline::run(&config).unwrap();
    let r = &out.analysis.report;
    assert_eq!(r.dyadic.counts.non_edges, 0);
    assert!(r.dyadic.mann_whitney.is_none());
    assert!(matches!(plotspec(r, Figure::Fig2), Err(Error::MissingSection(_))));
}

#[test]
fn min_norm_raises_team_entropy() {
    let max = pipeline::run(&demo_config()).unwrap();
    let mut config = demo_config();
    config.entropy_norm = collabscope_core::measures::EntropyNorm::Min;
    let min = pipeline::run(&config).unwrap();
    for (a, b) in max.analysis.report.teams.teams.iter().zip(&min.analysis.report.teams.teams) {
        assert!(b.entropy >= a.entropy - 1e-12);
    }
}

#[test]
fn removing_single_field_authors_shrinks_graph() {
    let flag = pipeline::run(&demo_config()).unwrap();
    let n_single = flag.analysis.report.dataset.n_single_field;
    assert!(n_single > 0);
    let mut config = demo_config();
    config.exclusions.single_field = SingleFieldRule::Remove;
    let removed = pipeline::run(&config).unwrap();
    assert_eq!(
        removed.analysis.report.dataset.n_authors,
        flag.analysis.report.dataset.n_authors - n_single
    );
}

#[test]
fn missing_teams_file_is_an_input_error() {
    let mut config = demo_config();
    config.teams = demo().join("no_such_teams.csv");
    let err = pipeline::run(&config).unwrap_err();
    assert!(err.is_input_error());
    assert!(err.to_string().contains("no_such_teams.csv"));
}

#[test]
fn different_seeds_change_only_null_results() {
    let a = pipeline::run(&demo_config()).unwrap();
    let mut config = demo_config();
    config.seed = 12;
    let b = pipeline::run(&config).unwrap();
    let (ra, rb) = (&a.analysis.report, &b.analysis.report);
    assert_eq!(ra.dyadic, rb.dyadic);
    assert_eq!(ra.core_shell, rb.core_shell);
    assert_ne!(ra.teams.mean_z_entropy, rb.teams.mean_z_entropy);
}
