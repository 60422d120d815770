//! Serializable analysis report.
//!
//! A report carries the run configuration alongside every result, so one
//! `report.json` is enough to interpret (and re-create) a run.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::coreshell::{ComparisonResult, Label};
use crate::ingest::{Exclusion, ExclusionConfig};
use crate::measures::{EntropyNorm, PairCounts, PairMode};
use crate::nullmodel::{SizeEnsemble, DEFAULT_SIMULATIONS};
use crate::stats::{DensityCurve, TestResult, DEFAULT_GRID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmitFlags {
    pub csv: bool,
    pub json: bool,
    pub plotspec: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        Self {
            csv: true,
            json: true,
            plotspec: false,
        }
    }
}

impl std::str::FromStr for EmitFlags {
    type Err = String;

    /// Comma-separated subset of `csv,json,plotspec`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut flags = EmitFlags {
            csv: false,
            json: false,
            plotspec: false,
        };
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "csv" => flags.csv = true,
                "json" => flags.json = true,
                "plotspec" => flags.plotspec = true,
                other => return Err(format!("unknown output kind `{other}`")),
            }
        }
        Ok(flags)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub authors: PathBuf,
    pub teams: PathBuf,
    pub index: Option<PathBuf>,
    pub n_sims: usize,
    pub seed: u64,
    pub entropy_norm: EntropyNorm,
    pub exclusions: ExclusionConfig,
    /// Pairs used by the dyadic analysis.
    pub pair_mode: PairMode,
    /// Pairs written to `pairs.csv`.
    pub pairs_csv: PairMode,
    pub peel: bool,
    pub grid_size: usize,
    pub out: Option<PathBuf>,
    pub emit: EmitFlags,
}

impl RunConfig {
    pub fn new(authors: impl Into<PathBuf>, teams: impl Into<PathBuf>) -> Self {
        Self {
            authors: authors.into(),
            teams: teams.into(),
            index: None,
            n_sims: DEFAULT_SIMULATIONS,
            seed: 0,
            entropy_norm: EntropyNorm::Max,
            exclusions: ExclusionConfig::default(),
            pair_mode: PairMode::AllPairs,
            pairs_csv: PairMode::EdgesOnly,
            peel: true,
            grid_size: DEFAULT_GRID,
            out: None,
            emit: EmitFlags::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n_authors: usize,
    pub n_edges: usize,
    pub n_teams: usize,
    pub n_solo_teams: usize,
    pub n_disciplines: usize,
    pub n_primary_disciplines: usize,
    pub disciplines: Vec<String>,
    /// Authors per primary discipline.
    pub primary_counts: BTreeMap<String, usize>,
    pub n_single_field: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorRow {
    pub author_id: String,
    pub primary: String,
    pub n_fields: usize,
    /// Absent for authors excluded from individual entropy.
    pub entropy: Option<f64>,
    pub degree: usize,
    pub transitivity: f64,
    pub label: Label,
    /// Peel round; absent for survivors or when peeling is off.
    pub coreness_level: Option<u32>,
    pub h_index: u32,
    pub pub_years: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyGroup {
    /// Number of disciplines with a positive count.
    pub n_fields: usize,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub density: Option<DensityCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualSection {
    pub n_authors: usize,
    pub mean: Option<f64>,
    pub groups: Vec<EntropyGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub source: String,
    pub target: String,
    pub similarity: f64,
    pub same_primary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicSection {
    pub mode: PairMode,
    pub counts: PairCounts,
    pub same_primary_edges: Option<f64>,
    pub same_primary_non_edges: Option<f64>,
    /// Same-primary proportion, edges vs non-edges (two-sided).
    pub proportion_test: Option<TestResult>,
    /// Similarity on edges > non-edges (one-tailed).
    pub mann_whitney: Option<TestResult>,
    pub ks: Option<TestResult>,
    pub median_edges: Option<f64>,
    pub median_non_edges: Option<f64>,
    pub density_edges: Option<DensityCurve>,
    pub density_non_edges: Option<DensityCurve>,
    pub edges: Vec<EdgeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamRow {
    pub paper_id: String,
    pub size: usize,
    pub entropy: f64,
    pub mean_cosine: f64,
    pub z_entropy: Option<f64>,
    pub z_cosine: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamSection {
    pub n_teams: usize,
    pub n_solo_skipped: usize,
    pub seed: u64,
    pub n_sims: usize,
    pub entropy_norm: EntropyNorm,
    pub ensemble: Vec<SizeEnsemble>,
    pub n_undefined_z_entropy: usize,
    pub n_undefined_z_cosine: usize,
    pub mean_z_entropy: Option<f64>,
    pub mean_z_cosine: Option<f64>,
    pub median_z_entropy: Option<f64>,
    pub median_z_cosine: Option<f64>,
    pub density_z_entropy: Option<DensityCurve>,
    pub density_z_cosine: Option<DensityCurve>,
    pub teams: Vec<TeamRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub attribute: String,
    pub n_core: usize,
    pub n_shell: usize,
    pub core_median: f64,
    pub shell_median: f64,
    pub mann_whitney: TestResult,
    pub ks: TestResult,
    pub density_core: Option<DensityCurve>,
    pub density_shell: Option<DensityCurve>,
}

impl ComparisonSummary {
    pub(crate) fn new(c: ComparisonResult, grid: usize) -> Self {
        Self {
            attribute: c.attribute,
            n_core: c.core.len(),
            n_shell: c.shell.len(),
            core_median: c.core_median,
            shell_median: c.shell_median,
            mann_whitney: c.mann_whitney,
            ks: c.ks,
            density_core: crate::stats::kde(&c.core, None, grid).ok(),
            density_shell: crate::stats::kde(&c.shell, None, grid).ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreShellSection {
    pub n_core: usize,
    pub n_shell: usize,
    /// Number of peel rounds that removed nodes; absent when peeling is off.
    pub peel_rounds: Option<u32>,
    pub n_peel_survivors: Option<usize>,
    pub h_index: Option<ComparisonSummary>,
    pub pub_years: Option<ComparisonSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub config: RunConfig,
    pub dataset: DatasetSummary,
    pub exclusions: Vec<Exclusion>,
    /// Analyses that could not be computed, with the reason.
    pub notes: Vec<String>,
    pub individual: IndividualSection,
    pub dyadic: DyadicSection,
    pub teams: TeamSection,
    pub core_shell: CoreShellSection,
    pub authors: Vec<AuthorRow>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> crate::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
