//! Browser bindings for the collabscope demo page.
//!
//! Every export takes plain strings and numbers and returns a JSON string.
//! Failures come back as `{"error": "..."}` so the page never has to catch.

use std::path::Path;

use collabscope_core::coreshell;
use collabscope_core::ingest::{parse_counts, parse_teams_lines, Dataset, TeamFile};
use collabscope_core::measures::{cosine_similarity, individual_entropy, local_transitivity, PairMode};
use collabscope_core::model::{build_graph, normalize, primary_discipline, AuthorRecord, DisciplineIndex};
use collabscope_core::pipeline;
use collabscope_core::report::RunConfig;
use collabscope_core::stats::DensityCurve;
use collabscope_core::synth::{self, SynthConfig};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn respond<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn record(id: &str, counts: &str) -> Result<AuthorRecord, String> {
    Ok(AuthorRecord {
        author_id: id.to_string(),
        counts: parse_counts(counts).map_err(|e| format!("author {id}: {e}"))?,
        h_index: 0,
        first_year: 0,
        last_year: 0,
    })
}

#[derive(Serialize)]
struct AuthorView {
    fractions: Vec<(String, f64)>,
    primary: String,
    entropy: Option<f64>,
}

#[derive(Serialize)]
struct PairView {
    n_disciplines: usize,
    a: AuthorView,
    b: AuthorView,
    cosine: f64,
}

/// Entropy of two authors and the cosine similarity between them. Counts use
/// the `LABEL:COUNT;LABEL:COUNT` form; `n_disciplines` may exceed the number
/// of labels seen, in which case the rest are treated as unused fields.
pub fn pair_measures_json(counts_a: &str, counts_b: &str, n_disciplines: usize) -> String {
    respond((|| {
        let a = record("A", counts_a)?;
        let b = record("B", counts_b)?;
        let seen = DisciplineIndex::from_records(&[a.clone(), b.clone()]).map_err(|e| e.to_string())?;
        let mut names = seen.names().to_vec();
        for k in 0..n_disciplines.saturating_sub(names.len()) {
            names.push(format!("~unused{k:02}"));
        }
        let index = DisciplineIndex::new(names).map_err(|e| e.to_string())?;
        let view = |r: &AuthorRecord| -> Result<(AuthorView, _), String> {
            let v = normalize(r, &index).map_err(|e| e.to_string())?;
            let fractions = index
                .names()
                .iter()
                .zip(v.entries())
                .filter(|(_, &x)| x > 0.0)
                .map(|(n, &x)| (n.clone(), x))
                .collect();
            Ok((
                AuthorView {
                    fractions,
                    primary: primary_discipline(&v, &index).to_string(),
                    entropy: individual_entropy(&v, index.len()).ok(),
                },
                v,
            ))
        };
        let (va, xa) = view(&a)?;
        let (vb, xb) = view(&b)?;
        Ok(PairView {
            n_disciplines: index.len(),
            a: va,
            b: vb,
            cosine: cosine_similarity(&xa, &xb),
        })
    })())
}

#[derive(Serialize)]
struct HomophilyView<'a> {
    n_authors: usize,
    n_edges: usize,
    n_teams: usize,
    same_primary_edges: Option<f64>,
    same_primary_non_edges: Option<f64>,
    mwu_p: Option<f64>,
    ks_d: Option<f64>,
    mean_z_entropy: Option<f64>,
    mean_z_cosine: Option<f64>,
    similarity_edges: Option<&'a DensityCurve>,
    similarity_non_edges: Option<&'a DensityCurve>,
    z_entropy: Option<&'a DensityCurve>,
    z_cosine: Option<&'a DensityCurve>,
}

/// Generate a synthetic dataset at the given homophily and run the dyadic and
/// team analyses on it.
pub fn homophily_json(n_authors: usize, homophily: f64, n_sims: usize, seed: u64) -> String {
    respond((|| {
        if !(0.0..=1.0).contains(&homophily) {
            return Err(format!("homophily {homophily} is outside [0, 1]"));
        }
        let data = synth::generate(&SynthConfig {
            n_authors,
            homophily,
            seed,
            ..SynthConfig::default()
        })
        .map_err(|e| e.to_string())?;
        let teams = TeamFile {
            teams: data.teams,
            exclusions: Vec::new(),
        };
        let dataset = Dataset::assemble(data.records, teams, Some(data.index)).map_err(|e| e.to_string())?;
        let mut config = RunConfig::new("", "");
        config.n_sims = n_sims;
        config.seed = seed;
        config.grid_size = 128;
        config.pair_mode = PairMode::AllPairs;
        config.peel = false;
        let analysis = pipeline::analyze(dataset, &config).map_err(|e| e.to_string())?;
        let r = &analysis.report;
        let view = HomophilyView {
            n_authors: r.dataset.n_authors,
            n_edges: r.dataset.n_edges,
            n_teams: r.teams.n_teams,
            same_primary_edges: r.dyadic.same_primary_edges,
            same_primary_non_edges: r.dyadic.same_primary_non_edges,
            mwu_p: r.dyadic.mann_whitney.as_ref().map(|t| t.p_value),
            ks_d: r.dyadic.ks.as_ref().map(|t| t.statistic),
            mean_z_entropy: r.teams.mean_z_entropy,
            mean_z_cosine: r.teams.mean_z_cosine,
            similarity_edges: r.dyadic.density_edges.as_ref(),
            similarity_non_edges: r.dyadic.density_non_edges.as_ref(),
            z_entropy: r.teams.density_z_entropy.as_ref(),
            z_cosine: r.teams.density_z_cosine.as_ref(),
        };
        serde_json::to_value(view).map_err(|e| e.to_string())
    })())
}

#[derive(Serialize)]
struct NodeView {
    id: String,
    transitivity: f64,
    label: &'static str,
    level: Option<u32>,
}

#[derive(Serialize)]
struct CoreShellView {
    nodes: Vec<NodeView>,
    edges: Vec<(usize, usize)>,
    n_core: usize,
    n_shell: usize,
}

/// Core-shell labels and peel levels for teams written as
/// `paper_id: a,b,c` lines. Authors are taken from the team lists.
pub fn coreshell_json(teams_text: &str) -> String {
    respond((|| {
        let file = parse_teams_lines(teams_text, Path::new("teams")).map_err(|e| e.to_string())?;
        let mut ids: Vec<String> = file.teams.iter().flat_map(|t| t.members.iter().cloned()).collect();
        ids.sort();
        ids.dedup();
        let records: Vec<AuthorRecord> = ids
            .iter()
            .map(|id| record(id, "X:1"))
            .collect::<Result<_, _>>()?;
        let graph = build_graph(&records, &file.teams).map_err(|e| e.to_string())?;
        let labeling = coreshell::peel(&graph, None);
        let levels = labeling.coreness.clone().unwrap_or_default();
        let nodes = (0..graph.node_count())
            .map(|i| NodeView {
                id: graph.node_id(i).to_string(),
                transitivity: local_transitivity(&graph, graph.node_id(i)).unwrap_or(1.0),
                label: labeling.labels[i].as_str(),
                level: levels.get(i).copied().flatten(),
            })
            .collect();
        Ok(CoreShellView {
            nodes,
            edges: graph.edges().collect(),
            n_core: labeling.n_core,
            n_shell: labeling.n_shell,
        })
    })())
}

#[wasm_bindgen]
pub fn pair_measures(counts_a: &str, counts_b: &str, n_disciplines: usize) -> String {
    pair_measures_json(counts_a, counts_b, n_disciplines)
}

#[wasm_bindgen]
pub fn homophily(n_authors: usize, homophily: f64, n_sims: usize, seed: u32) -> String {
    homophily_json(n_authors, homophily, n_sims, u64::from(seed))
}

#[wasm_bindgen]
pub fn core_shell(teams_text: &str) -> String {
    coreshell_json(teams_text)
}
