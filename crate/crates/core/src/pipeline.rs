//! End-to-end run: ingest, graph, measures, null model, core-shell, tests,
//! and the files written for a run.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::coreshell::{self, CoreShellLabeling};
use crate::error::{Error, Result};
use crate::ingest::{apply_exclusions, Dataset};
use crate::measures::{self, PairMode};
use crate::model::{build_graph, CollabGraph, Profiles};
use crate::nullmodel;
use crate::plotspec::{self, Figure};
use crate::report::*;
use crate::stats::{self, kde, Alternative, DensityCurve, MwuOptions};

/// A finished analysis with the intermediate structures the writers need.
#[derive(Debug)]
pub struct Analysis {
    pub dataset: Dataset,
    pub graph: CollabGraph,
    pub profiles: Profiles,
    pub labeling: CoreShellLabeling,
    pub report: AnalysisReport,
}

fn defined(xs: impl IntoIterator<Item = Option<f64>>) -> Vec<f64> {
    xs.into_iter().flatten().collect()
}

fn mean_of(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| stats::mean(xs))
}

fn median_of(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| stats::median(xs))
}

fn density(xs: &[f64], grid: usize, what: &str, notes: &mut Vec<String>) -> Option<DensityCurve> {
    match kde(xs, None, grid) {
        Ok(c) => Some(c),
        Err(e) => {
            notes.push(format!("no density for {what}: {e}"));
            None
        }
    }
}

fn individual_section(
    dataset: &Dataset,
    profiles: &Profiles,
    grid: usize,
    notes: &mut Vec<String>,
) -> (IndividualSection, Vec<Option<f64>>) {
    let nd = dataset.index.len();
    let mut entropies = vec![None; dataset.records.len()];
    if nd < 2 {
        notes.push("individual entropy skipped: fewer than two disciplines".into());
    } else {
        for (i, r) in dataset.records.iter().enumerate() {
            if !dataset.is_single_field(&r.author_id) {
                entropies[i] = measures::individual_entropy(profiles.vector(i), nd).ok();
            }
        }
    }
    let mut by_fields: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (r, h) in dataset.records.iter().zip(&entropies) {
        if let Some(h) = h {
            by_fields.entry(r.field_count()).or_default().push(*h);
        }
    }
    let all = defined(entropies.iter().copied());
    let groups = by_fields
        .into_iter()
        .map(|(n_fields, hs)| EntropyGroup {
            n_fields,
            count: hs.len(),
            mean: stats::mean(&hs),
            median: stats::median(&hs),
            density: density(&hs, grid, &format!("entropy with {n_fields} fields"), notes),
        })
        .collect();
    (
        IndividualSection {
            n_authors: all.len(),
            mean: mean_of(&all),
            groups,
        },
        entropies,
    )
}

fn dyadic_section(
    graph: &CollabGraph,
    profiles: &Profiles,
    mode: PairMode,
    grid: usize,
    notes: &mut Vec<String>,
) -> Result<DyadicSection> {
    let table = measures::pairwise_table(graph, profiles, mode)?;
    let counts = table.counts();
    let (edges, non_edges) = table.split_similarities();
    let frac = |x: u64, n: u64| (n > 0).then(|| x as f64 / n as f64);

    let proportion_test = if counts.edges > 0 && counts.non_edges > 0 {
        match stats::two_proportion_z(
            counts.same_primary_edges,
            counts.edges,
            counts.same_primary_non_edges,
            counts.non_edges,
            Alternative::TwoSided,
        ) {
            Ok(t) => Some(t),
            Err(e) => {
                notes.push(format!("same-primary proportion test: {e}"));
                None
            }
        }
    } else {
        None
    };
    let (mann_whitney, ks) = if !edges.is_empty() && !non_edges.is_empty() {
        (
            Some(stats::mann_whitney_u(&edges, &non_edges, Alternative::Greater, MwuOptions::default())?),
            Some(stats::ks_two_sample(&edges, &non_edges)?),
        )
    } else {
        notes.push("edge vs non-edge tests skipped: one of the groups is empty".into());
        (None, None)
    };

    let edge_rows = graph
        .edges()
        .zip(&edges)
        .map(|((i, j), &s)| EdgeRow {
            source: graph.node_id(i).to_string(),
            target: graph.node_id(j).to_string(),
            similarity: s,
            same_primary: profiles.primary(i) == profiles.primary(j),
        })
        .collect();
    Ok(DyadicSection {
        mode,
        counts,
        same_primary_edges: frac(counts.same_primary_edges, counts.edges),
        same_primary_non_edges: frac(counts.same_primary_non_edges, counts.non_edges),
        proportion_test,
        mann_whitney,
        ks,
        median_edges: median_of(&edges),
        median_non_edges: median_of(&non_edges),
        density_edges: density(&edges, grid, "edge similarity", notes),
        density_non_edges: if non_edges.is_empty() {
            None
        } else {
            density(&non_edges, grid, "non-edge similarity", notes)
        },
        edges: edge_rows,
    })
}

fn team_section(
    graph: &CollabGraph,
    profiles: &Profiles,
    n_disciplines: usize,
    config: &RunConfig,
    notes: &mut Vec<String>,
) -> Result<TeamSection> {
    let (observed, skipped) = measures::team_table(graph, profiles, n_disciplines, config.entropy_norm);
    let sizes = nullmodel::observed_sizes(&observed);
    let (ensemble, zs) = if sizes.is_empty() {
        notes.push("team analysis skipped: no team has two or more members".into());
        (Vec::new(), Vec::new())
    } else {
        let e = nullmodel::build_ensemble(
            profiles,
            n_disciplines,
            &sizes,
            config.n_sims,
            config.seed,
            config.entropy_norm,
        )?;
        let zs = nullmodel::z_scores(&observed, &e)?;
        (e.sizes.into_values().collect(), zs)
    };

    let z_h = defined(zs.iter().map(|z| z.z_entropy));
    let z_s = defined(zs.iter().map(|z| z.z_cosine));
    let teams: Vec<TeamRow> = observed
        .into_iter()
        .zip(&zs)
        .map(|(t, z)| TeamRow {
            paper_id: t.paper_id,
            size: t.size,
            entropy: t.entropy,
            mean_cosine: t.mean_cosine,
            z_entropy: z.z_entropy,
            z_cosine: z.z_cosine,
        })
        .collect();
    Ok(TeamSection {
        n_teams: teams.len(),
        n_solo_skipped: skipped,
        seed: config.seed,
        n_sims: config.n_sims,
        entropy_norm: config.entropy_norm,
        ensemble,
        n_undefined_z_entropy: zs.len() - z_h.len(),
        n_undefined_z_cosine: zs.len() - z_s.len(),
        mean_z_entropy: mean_of(&z_h),
        mean_z_cosine: mean_of(&z_s),
        median_z_entropy: median_of(&z_h),
        median_z_cosine: median_of(&z_s),
        density_z_entropy: if z_h.is_empty() { None } else { density(&z_h, config.grid_size, "team entropy z-scores", notes) },
        density_z_cosine: if z_s.is_empty() { None } else { density(&z_s, config.grid_size, "team cosine z-scores", notes) },
        teams,
    })
}

fn core_shell_section(
    dataset: &Dataset,
    labeling: &CoreShellLabeling,
    grid: usize,
    notes: &mut Vec<String>,
) -> CoreShellSection {
    let h: Vec<f64> = dataset.records.iter().map(|r| f64::from(r.h_index)).collect();
    let years: Vec<f64> = dataset.records.iter().map(|r| f64::from(r.pub_years())).collect();
    let mut compare = |name: &str, values: &[f64]| match coreshell::group_compare(labeling, name, values) {
        Ok(c) => Some(ComparisonSummary::new(c, grid)),
        Err(e) => {
            notes.push(format!("core/shell comparison of {name} skipped: {e}"));
            None
        }
    };
    let h_index = compare("h_index", &h);
    let pub_years = compare("pub_years", &years);
    let (peel_rounds, n_peel_survivors) = match &labeling.coreness {
        Some(levels) => (
            Some(levels.iter().flatten().map(|&r| r + 1).max().unwrap_or(0)),
            Some(levels.iter().filter(|l| l.is_none()).count()),
        ),
        None => (None, None),
    };
    CoreShellSection {
        n_core: labeling.n_core,
        n_shell: labeling.n_shell,
        peel_rounds,
        n_peel_survivors,
        h_index,
        pub_years,
    }
}

/// Run every analysis on an already-loaded dataset.
pub fn analyze(dataset: Dataset, config: &RunConfig) -> Result<Analysis> {
    let dataset = apply_exclusions(dataset, config.exclusions);
    let graph = build_graph(&dataset.records, &dataset.teams).map_err(Error::in_stage("graph"))?;
    let profiles = Profiles::from_records(&dataset.records, &dataset.index).map_err(Error::in_stage("measures"))?;
    let nd = dataset.index.len();
    let grid = config.grid_size;
    let mut notes = Vec::new();

    let (individual, entropies) = individual_section(&dataset, &profiles, grid, &mut notes);
    let dyadic = dyadic_section(&graph, &profiles, config.pair_mode, grid, &mut notes)
        .map_err(Error::in_stage("dyadic"))?;
    let teams = team_section(&graph, &profiles, nd, config, &mut notes).map_err(Error::in_stage("null model"))?;

    let labeling = if config.peel {
        coreshell::peel(&graph, None)
    } else {
        coreshell::decompose(&graph)
    };
    let core_shell = core_shell_section(&dataset, &labeling, grid, &mut notes);

    let transitivity = measures::transitivity_all(&graph);
    let authors: Vec<AuthorRow> = dataset
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| AuthorRow {
            author_id: r.author_id.clone(),
            primary: dataset.index.name(profiles.primary(i)).to_string(),
            n_fields: r.field_count(),
            entropy: entropies[i],
            degree: graph.degree(i),
            transitivity: transitivity[i],
            label: labeling.labels[i],
            coreness_level: labeling.coreness.as_ref().and_then(|l| l[i]),
            h_index: r.h_index,
            pub_years: r.pub_years(),
        })
        .collect();

    let mut primary_counts: BTreeMap<String, usize> = BTreeMap::new();
    for &p in profiles.primaries() {
        *primary_counts.entry(dataset.index.name(p).to_string()).or_default() += 1;
    }
    let summary = DatasetSummary {
        n_authors: graph.node_count(),
        n_edges: graph.edge_count(),
        n_teams: graph.teams().len(),
        n_solo_teams: graph.teams().iter().filter(|t| t.is_solo()).count(),
        n_disciplines: nd,
        n_primary_disciplines: primary_counts.len(),
        disciplines: dataset.index.names().to_vec(),
        primary_counts,
        n_single_field: dataset.records.iter().filter(|r| r.is_single_field()).count(),
    };

    let report = AnalysisReport {
        tool: concat!("collabscope ", env!("CARGO_PKG_VERSION")).to_string(),
        config: config.clone(),
        dataset: summary,
        exclusions: dataset.exclusions.clone(),
        notes,
        individual,
        dyadic,
        teams,
        core_shell,
        authors,
    };
    Ok(Analysis {
        dataset,
        graph,
        profiles,
        labeling,
        report,
    })
}

#[derive(Debug)]
pub struct RunOutput {
    pub analysis: Analysis,
    pub files: Vec<PathBuf>,
}

/// Load inputs, analyze, and write the requested outputs.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let dataset = Dataset::load(&config.authors, &config.teams, config.index.as_deref())
        .map_err(Error::in_stage("ingest"))?;
    let analysis = analyze(dataset, config)?;
    let files = match &config.out {
        Some(dir) => write_outputs(&analysis, dir, config).map_err(Error::in_stage("output"))?,
        None => Vec::new(),
    };
    Ok(RunOutput { analysis, files })
}

struct Files<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Files<'_> {
    fn put(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn csv<F>(&mut self, name: &str, header: &[&str], fill: F) -> Result<()>
    where
        F: FnOnce(&mut csv::Writer<BufWriter<fs::File>>) -> csv::Result<()>,
    {
        let path = self.dir.join(name);
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        let to_err = |e: csv::Error| Error::io(&path, std::io::Error::other(e.to_string()));
        w.write_record(header).map_err(to_err)?;
        fill(&mut w).map_err(to_err)?;
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Every density curve in the report, keyed by output file stem.
pub fn density_curves(report: &AnalysisReport) -> Vec<(String, &DensityCurve)> {
    let mut out = Vec::new();
    for g in &report.individual.groups {
        if let Some(c) = &g.density {
            out.push((format!("entropy_nfields_{}", g.n_fields), c));
        }
    }
    let d = &report.dyadic;
    out.extend(d.density_edges.as_ref().map(|c| ("similarity_edges".to_string(), c)));
    out.extend(d.density_non_edges.as_ref().map(|c| ("similarity_non_edges".to_string(), c)));
    let t = &report.teams;
    out.extend(t.density_z_entropy.as_ref().map(|c| ("z_entropy".to_string(), c)));
    out.extend(t.density_z_cosine.as_ref().map(|c| ("z_cosine".to_string(), c)));
    for cmp in [&report.core_shell.h_index, &report.core_shell.pub_years].into_iter().flatten() {
        out.extend(cmp.density_core.as_ref().map(|c| (format!("{}_core", cmp.attribute), c)));
        out.extend(cmp.density_shell.as_ref().map(|c| (format!("{}_shell", cmp.attribute), c)));
    }
    out
}

pub fn write_outputs(analysis: &Analysis, dir: &Path, config: &RunConfig) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let report = &analysis.report;
    let graph = &analysis.graph;
    let mut files = Files {
        dir,
        written: Vec::new(),
    };

    if config.emit.json {
        files.put("report.json", &report.to_json()?)?;
    }

    if config.emit.csv {
        files.csv(
            "authors_measures.csv",
            &[
                "author_id", "primary", "n_fields", "entropy", "degree", "transitivity", "label",
                "coreness_level", "h_index", "pub_years",
            ],
            |w| {
                for a in &report.authors {
                    w.write_record([
                        a.author_id.clone(),
                        a.primary.clone(),
                        a.n_fields.to_string(),
                        opt(a.entropy),
                        a.degree.to_string(),
                        a.transitivity.to_string(),
                        a.label.as_str().to_string(),
                        opt(a.coreness_level),
                        a.h_index.to_string(),
                        a.pub_years.to_string(),
                    ])?;
                }
                Ok(())
            },
        )?;

        let table = measures::pairwise_table(graph, &analysis.profiles, config.pairs_csv)?;
        files.csv("pairs.csv", &["source", "target", "similarity", "is_edge", "same_primary"], |w| {
            for r in table.iter() {
                w.write_record([
                    graph.node_id(r.i),
                    graph.node_id(r.j),
                    &r.similarity.to_string(),
                    if r.is_edge { "1" } else { "0" },
                    if r.same_primary { "1" } else { "0" },
                ])?;
            }
            Ok(())
        })?;

        files.csv(
            "teams_measures.csv",
            &["paper_id", "size", "entropy", "mean_cosine", "z_entropy", "z_cosine"],
            |w| {
                for t in &report.teams.teams {
                    w.write_record([
                        t.paper_id.clone(),
                        t.size.to_string(),
                        t.entropy.to_string(),
                        t.mean_cosine.to_string(),
                        opt(t.z_entropy),
                        opt(t.z_cosine),
                    ])?;
                }
                Ok(())
            },
        )?;

        files.csv(
            "ensemble.csv",
            &["size", "mean_entropy", "sd_entropy", "mean_cosine", "sd_cosine"],
            |w| {
                for e in &report.teams.ensemble {
                    w.write_record([
                        e.size.to_string(),
                        e.mean_entropy.to_string(),
                        e.sd_entropy.to_string(),
                        e.mean_cosine.to_string(),
                        e.sd_cosine.to_string(),
                    ])?;
                }
                Ok(())
            },
        )?;

        files.put("coreshell.csv", &analysis.labeling.to_csv(graph))?;

        for (stem, curve) in density_curves(report) {
            files.put(&format!("density_{stem}.csv"), &curve.to_csv())?;
        }

        files.put("graph_attributed.edgelist", &attributed_edgelist(report))?;
    }

    if config.emit.plotspec {
        for fig in Figure::ALL {
            match plotspec::plotspec(report, fig) {
                Ok(spec) => {
                    let mut text = serde_json::to_string_pretty(&spec)?;
                    text.push('\n');
                    files.put(&format!("{}.vl.json", fig.name()), &text)?;
                }
                Err(Error::MissingSection(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }

    Ok(files.written)
}

/// Whitespace-separated edge list: `source target similarity source_primary target_primary`.
pub fn attributed_edgelist(report: &AnalysisReport) -> String {
    let primary: BTreeMap<&str, &str> = report
        .authors
        .iter()
        .map(|a| (a.author_id.as_str(), a.primary.as_str()))
        .collect();
    let mut out = String::from("# source target similarity source_primary target_primary\n");
    for e in &report.dyadic.edges {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            e.source, e.target, e.similarity, primary[e.source.as_str()], primary[e.target.as_str()]
        ));
    }
    out
}
