//! Individual, dyadic and team interdisciplinarity measures, and local
//! transitivity.
//!
//! Logarithms are natural; every entropy is divided by the log of its
//! maximum so the base cancels. `0 · log 0` is taken as 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CollabGraph, DisciplineVector, Profiles};

fn plogp_sum<I: IntoIterator<Item = f64>>(fractions: I) -> f64 {
    fractions
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| x * x.ln())
        .sum()
}

/// Normalized Shannon entropy of an author's discipline fractions.
pub fn individual_entropy(vector: &DisciplineVector, n_disciplines: usize) -> Result<f64> {
    if n_disciplines < 2 {
        return Err(Error::SingleDiscipline);
    }
    let h = -plogp_sum(vector.entries().iter().copied()) / (n_disciplines as f64).ln();
    Ok(h.clamp(0.0, 1.0))
}

/// Cosine of the angle between two discipline vectors. Non-negative entries
/// keep the result in `[0, 1]`.
pub fn cosine_similarity(x: &DisciplineVector, y: &DisciplineVector) -> f64 {
    let dot: f64 = x
        .entries()
        .iter()
        .zip(y.entries())
        .map(|(a, b)| a * b)
        .sum();
    (dot / (x.norm_squared() * y.norm_squared()).sqrt()).clamp(0.0, 1.0)
}

/// Normalizer for team entropy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyNorm {
    /// `log(max{|p|, N_d})`.
    #[default]
    Max,
    /// `log(min{|p|, N_d})`, the true upper bound of the entropy.
    Min,
}

impl EntropyNorm {
    fn denominator(self, team_size: usize, n_disciplines: usize) -> f64 {
        let m = match self {
            EntropyNorm::Max => team_size.max(n_disciplines),
            EntropyNorm::Min => team_size.min(n_disciplines),
        };
        (m as f64).ln()
    }
}

impl std::str::FromStr for EntropyNorm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "max" => Ok(EntropyNorm::Max),
            "min" => Ok(EntropyNorm::Min),
            other => Err(format!("unknown entropy norm `{other}` (expected max or min)")),
        }
    }
}

/// Within-team entropy of primary disciplines. `None` for teams of fewer
/// than two members.
pub fn team_entropy<L: Ord>(primaries: &[L], n_disciplines: usize, norm: EntropyNorm) -> Option<f64> {
    let size = primaries.len();
    if size < 2 {
        return None;
    }
    let mut counts: BTreeMap<&L, usize> = BTreeMap::new();
    for p in primaries {
        *counts.entry(p).or_default() += 1;
    }
    let denom = norm.denominator(size, n_disciplines);
    if denom <= 0.0 {
        return Some(0.0);
    }
    let h = -plogp_sum(counts.values().map(|&c| c as f64 / size as f64)) / denom;
    Some(h.max(0.0))
}

/// Mean cosine similarity over all member pairs. `None` for fewer than two members.
pub fn team_mean_cosine(vectors: &[&DisciplineVector]) -> Option<f64> {
    let n = vectors.len();
    if n < 2 {
        return None;
    }
    let mut sum = 0.0;
    for (a, x) in vectors.iter().enumerate() {
        for y in &vectors[a + 1..] {
            sum += cosine_similarity(x, y);
        }
    }
    Some(sum / (n * (n - 1) / 2) as f64)
}

/// Degree and number of edges among the neighbours of `node`, counting
/// only nodes marked alive when a mask is given.
pub(crate) fn neighborhood_ties(adjacency: &[Vec<usize>], alive: Option<&[bool]>, node: usize) -> (usize, usize) {
    let is_alive = |v: usize| alive.is_none_or(|m| m[v]);
    let nbrs: Vec<usize> = adjacency[node].iter().copied().filter(|&v| is_alive(v)).collect();
    let mut twice_ties = 0;
    for &j in &nbrs {
        // sorted-merge intersection of N(node) and N(j)
        let (mut a, mut b) = (0, 0);
        let other = &adjacency[j];
        while a < nbrs.len() && b < other.len() {
            match nbrs[a].cmp(&other[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    twice_ties += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
    }
    (nbrs.len(), twice_ties / 2)
}

pub(crate) fn transitivity_from_counts(degree: usize, ties: usize) -> f64 {
    if degree < 2 {
        1.0
    } else {
        2.0 * ties as f64 / (degree * (degree - 1)) as f64
    }
}

/// True when every pair of neighbours is linked (or degree ≤ 1).
pub(crate) fn is_closed(degree: usize, ties: usize) -> bool {
    degree < 2 || ties == degree * (degree - 1) / 2
}

/// Fraction of neighbour pairs that are themselves linked. Nodes with at
/// most one neighbour get 1.
pub fn local_transitivity(graph: &CollabGraph, node_id: &str) -> Result<f64> {
    let node = graph
        .node_index(node_id)
        .ok_or_else(|| Error::UnknownNode(node_id.to_string()))?;
    let (k, ties) = neighborhood_ties(graph.adjacency(), None, node);
    Ok(transitivity_from_counts(k, ties))
}

/// Local transitivity of every node, in node order.
pub fn transitivity_all(graph: &CollabGraph) -> Vec<f64> {
    crate::par::map_range(graph.node_count(), |i| {
        let (k, ties) = neighborhood_ties(graph.adjacency(), None, i);
        transitivity_from_counts(k, ties)
    })
}

/// Team-level measures for one paper with at least two authors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamMeasure {
    pub paper_id: String,
    pub size: usize,
    pub entropy: f64,
    pub mean_cosine: f64,
}

/// Within-team entropy and mean cosine for every team of two or more.
/// Solo teams are skipped; the second value counts them.
pub fn team_table(
    graph: &CollabGraph,
    profiles: &Profiles,
    n_disciplines: usize,
    norm: EntropyNorm,
) -> (Vec<TeamMeasure>, usize) {
    let mut rows = Vec::with_capacity(graph.teams().len());
    let mut skipped = 0;
    for (t, team) in graph.teams().iter().enumerate() {
        let members = graph.team_members(t);
        let primaries: Vec<usize> = members.iter().map(|&m| profiles.primary(m)).collect();
        let vectors: Vec<&DisciplineVector> = members.iter().map(|&m| profiles.vector(m)).collect();
        match (
            team_entropy(&primaries, n_disciplines, norm),
            team_mean_cosine(&vectors),
        ) {
            (Some(entropy), Some(mean_cosine)) => rows.push(TeamMeasure {
                paper_id: team.paper_id.clone(),
                size: members.len(),
                entropy,
                mean_cosine,
            }),
            _ => skipped += 1,
        }
    }
    (rows, skipped)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    EdgesOnly,
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub similarity: f64,
    pub is_edge: bool,
    pub same_primary: bool,
}

/// Per-pair similarity table, produced lazily so the all-pairs case never
/// holds `n²` records at once.
#[derive(Debug, Clone, Copy)]
pub struct PairwiseTable<'a> {
    graph: &'a CollabGraph,
    profiles: &'a Profiles,
    mode: PairMode,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub edges: u64,
    pub non_edges: u64,
    pub same_primary_edges: u64,
    pub same_primary_non_edges: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.edges + self.non_edges
    }
}

pub fn pairwise_table<'a>(
    graph: &'a CollabGraph,
    profiles: &'a Profiles,
    mode: PairMode,
) -> Result<PairwiseTable<'a>> {
    if profiles.len() < graph.node_count() {
        return Err(Error::MissingVector(graph.node_id(profiles.len()).to_string()));
    }
    Ok(PairwiseTable {
        graph,
        profiles,
        mode,
    })
}

impl<'a> PairwiseTable<'a> {
    pub fn mode(&self) -> PairMode {
        self.mode
    }

    fn record(&self, i: usize, j: usize, is_edge: bool) -> PairRecord {
        PairRecord {
            i,
            j,
            similarity: cosine_similarity(self.profiles.vector(i), self.profiles.vector(j)),
            is_edge,
            same_primary: self.profiles.primary(i) == self.profiles.primary(j),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = PairRecord> + 'a> {
        let this = *self;
        match self.mode {
            PairMode::EdgesOnly => Box::new(self.graph.edges().map(move |(i, j)| this.record(i, j, true))),
            PairMode::AllPairs => {
                let n = self.graph.node_count();
                Box::new((0..n).flat_map(move |i| {
                    let nbrs = this.graph.neighbors(i);
                    let mut cursor = nbrs.partition_point(|&v| v <= i);
                    (i + 1..n).map(move |j| {
                        let is_edge = cursor < nbrs.len() && nbrs[cursor] == j;
                        if is_edge {
                            cursor += 1;
                        }
                        this.record(i, j, is_edge)
                    })
                }))
            }
        }
    }

    /// Pair counts without computing similarities.
    pub fn counts(&self) -> PairCounts {
        let mut c = PairCounts::default();
        let p = self.profiles;
        for (i, j) in self.graph.edges() {
            c.edges += 1;
            c.same_primary_edges += u64::from(p.primary(i) == p.primary(j));
        }
        if self.mode == PairMode::AllPairs {
            let n = self.graph.node_count() as u64;
            c.non_edges = n * n.saturating_sub(1) / 2 - c.edges;
            let mut per_primary: BTreeMap<usize, u64> = BTreeMap::new();
            for &d in p.primaries().iter().take(self.graph.node_count()) {
                *per_primary.entry(d).or_default() += 1;
            }
            let same_all: u64 = per_primary.values().map(|&m| m * m.saturating_sub(1) / 2).sum();
            c.same_primary_non_edges = same_all - c.same_primary_edges;
        }
        c
    }

    /// Similarity values split into edges and non-edges (the latter empty in
    /// edges-only mode).
    pub fn split_similarities(&self) -> (Vec<f64>, Vec<f64>) {
        let mut edges = Vec::with_capacity(self.graph.edge_count());
        let mut non_edges = Vec::new();
        for r in self.iter() {
            if r.is_edge {
                edges.push(r.similarity);
            } else {
                non_edges.push(r.similarity);
            }
        }
        (edges, non_edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_graph, AuthorRecord, Team};

    fn v(xs: &[f64]) -> DisciplineVector {
        DisciplineVector::from_fractions(xs.to_vec()).unwrap()
    }

    fn padded(xs: &[f64], n: usize) -> DisciplineVector {
        let mut e = xs.to_vec();
        e.resize(n, 0.0);
        v(&e)
    }

    // Hand-computed: -(0.5 ln .5 + 0.3 ln .3 + 0.2 ln .2) / ln 27
    const H_EXAMPLE: f64 = 0.312_410_2;

    #[test]
    fn entropy_examples() {
        let h = individual_entropy(&padded(&[0.5, 0.3, 0.2], 27), 27).unwrap();
        assert!((h - H_EXAMPLE).abs() < 1e-5, "{h}");
        assert_eq!(individual_entropy(&padded(&[1.0], 27), 27).unwrap(), 0.0);
        let h = individual_entropy(&v(&[1.0 / 27.0; 27]), 27).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        assert!(matches!(individual_entropy(&v(&[1.0]), 1), Err(Error::SingleDiscipline)));
    }

    #[test]
    fn cosine_examples() {
        let x = v(&[0.5, 0.3, 0.2]);
        assert!((cosine_similarity(&x, &x) - 1.0).abs() < 1e-12);
        assert_eq!(cosine_similarity(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])), 0.0);
        let s = cosine_similarity(&x, &v(&[1.0, 0.0, 0.0]));
        assert!((s - 0.5 / 0.38f64.sqrt()).abs() < 1e-12);
        assert!((s - 0.81111).abs() < 1e-5);
    }

    #[test]
    fn team_entropy_examples() {
        assert_eq!(team_entropy(&["CS", "CS", "CS"], 27, EntropyNorm::Max), Some(0.0));
        let h = team_entropy(&["CS", "CS", "Math", "Edu"], 27, EntropyNorm::Max).unwrap();
        let oracle = -(0.5 * 0.5f64.ln() + 2.0 * 0.25 * 0.25f64.ln()) / 27f64.ln();
        assert!((h - oracle).abs() < 1e-12);
        assert!((h - 0.31547).abs() < 1e-5);
        let h = team_entropy(&["CS", "Math"], 27, EntropyNorm::Max).unwrap();
        assert!((h - 2f64.ln() / 27f64.ln()).abs() < 1e-15);
        assert!((h - 0.21031).abs() < 1e-5);
        assert_eq!(team_entropy(&["CS"], 27, EntropyNorm::Max), None);
    }

    #[test]
    fn min_norm_reaches_one_for_small_teams() {
        let h = team_entropy(&["CS", "Math"], 27, EntropyNorm::Min).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        let h = team_entropy(&["CS", "Math"], 27, EntropyNorm::Max).unwrap();
        assert!(h < 1.0);
    }

    #[test]
    fn team_cosine_examples() {
        let x = v(&[0.5, 0.5]);
        assert_eq!(team_mean_cosine(&[&x, &x, &x]), Some(1.0));
        assert_eq!(team_mean_cosine(&[&v(&[1.0, 0.0]), &v(&[0.0, 1.0])]), Some(0.0));
        assert_eq!(team_mean_cosine(&[&x]), None);

        // z = (√½, √½) is not a fraction vector, but cosine is scale-free so
        // the same direction (½, ½) gives the same pairs.
        let s = team_mean_cosine(&[&v(&[1.0, 0.0]), &v(&[0.0, 1.0]), &v(&[0.5, 0.5])]).unwrap();
        let oracle = (0.0 + 0.5f64.sqrt() + 0.5f64.sqrt()) / 3.0;
        assert!((s - oracle).abs() < 1e-12);
        assert!((s - 0.4714).abs() < 1e-4);
    }

    #[test]
    fn pair_team_equals_cosine() {
        let a = v(&[0.2, 0.3, 0.5]);
        let b = v(&[0.6, 0.4, 0.0]);
        assert_eq!(team_mean_cosine(&[&a, &b]), Some(cosine_similarity(&a, &b)));
    }

    fn records(ids: &[&str]) -> Vec<AuthorRecord> {
        ids.iter()
            .enumerate()
            .map(|(k, id)| AuthorRecord {
                author_id: id.to_string(),
                counts: [(if k % 2 == 0 { "A" } else { "B" }.to_string(), 1)].into(),
                h_index: 0,
                first_year: 2000,
                last_year: 2000,
            })
            .collect()
    }

    fn team(members: &[&str]) -> Team {
        Team::new("p", members.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn transitivity_examples() {
        let g = build_graph(&records(&["a", "b", "c", "d"]), &[team(&["a", "b", "c", "d"])]).unwrap();
        for id in ["a", "b", "c", "d"] {
            assert_eq!(local_transitivity(&g, id).unwrap(), 1.0);
        }
        let g = build_graph(&records(&["a", "b", "c"]), &[team(&["a", "b"]), team(&["b", "c"])]).unwrap();
        assert_eq!(local_transitivity(&g, "b").unwrap(), 0.0);
        assert_eq!(local_transitivity(&g, "a").unwrap(), 1.0);
        // hub with three neighbours, one tie among them
        let g = build_graph(
            &records(&["h", "x", "y", "z"]),
            &[team(&["h", "x", "y"]), team(&["h", "z"])],
        )
        .unwrap();
        assert!((local_transitivity(&g, "h").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(local_transitivity(&g, "nope"), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn pair_table_partition() {
        let recs = records(&["a", "b", "c", "d"]);
        let g = build_graph(&recs, &[team(&["a", "b", "c"])]).unwrap();
        let idx = crate::model::DisciplineIndex::from_records(&recs).unwrap();
        let prof = Profiles::from_records(&recs, &idx).unwrap();
        let t = pairwise_table(&g, &prof, PairMode::AllPairs).unwrap();
        let rows: Vec<_> = t.iter().collect();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows.iter().filter(|r| r.is_edge).count(), 3);
        let c = t.counts();
        assert_eq!((c.edges, c.non_edges), (3, 3));
        // primaries alternate A,B,A,B: same-primary pairs are (a,c) and (b,d)
        assert_eq!(c.same_primary_edges, 1);
        assert_eq!(c.same_primary_non_edges, 1);
        assert_eq!(
            rows.iter().filter(|r| !r.is_edge && r.same_primary).count() as u64,
            c.same_primary_non_edges
        );
        let t = pairwise_table(&g, &prof, PairMode::EdgesOnly).unwrap();
        assert_eq!(t.iter().count(), 3);
    }

    #[test]
    fn pair_table_needs_every_vector() {
        let recs = records(&["a", "b"]);
        let g = build_graph(&recs, &[]).unwrap();
        let idx = crate::model::DisciplineIndex::from_records(&recs).unwrap();
        let prof = Profiles::from_records(&recs[..1], &idx).unwrap();
        let err = pairwise_table(&g, &prof, PairMode::AllPairs).unwrap_err();
        assert!(matches!(err, Error::MissingVector(id) if id == "b"));
    }
}
