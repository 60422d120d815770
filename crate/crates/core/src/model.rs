//! Domain types and the immutable collaboration graph.
//!
//! Nodes are addressed by their position in the record sequence; ids are kept
//! alongside for lookups and output. Everything here is read-only once built.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Ordered set of discipline labels shared by every author vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisciplineIndex {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl DisciplineIndex {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Index("no disciplines".into()));
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Index("empty discipline label".into()));
            }
            if lookup.insert(name.clone(), i).is_some() {
                return Err(Error::Index(format!("duplicate label `{name}`")));
            }
        }
        Ok(Self { names, lookup })
    }

    /// Union of all labels with a count entry, sorted lexicographically.
    pub fn from_records(records: &[AuthorRecord]) -> Result<Self> {
        let labels: BTreeSet<&str> = records
            .iter()
            .flat_map(|r| r.counts.keys().map(String::as_str))
            .collect();
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, position: usize) -> &str {
        &self.names[position]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }
}

/// One author's bibliographic metadata as read from the input files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRecord {
    pub author_id: String,
    pub counts: BTreeMap<String, u64>,
    pub h_index: u32,
    pub first_year: i32,
    pub last_year: i32,
}

impl AuthorRecord {
    pub fn validate(&self) -> Result<()> {
        if !self.counts.values().any(|&c| c > 0) {
            return Err(Error::NoPublications(self.author_id.clone()));
        }
        if self.first_year > self.last_year {
            return Err(Error::YearOrder(self.author_id.clone()));
        }
        Ok(())
    }

    /// Number of disciplines with a positive count.
    pub fn field_count(&self) -> usize {
        self.counts.values().filter(|&&c| c > 0).count()
    }

    pub fn is_single_field(&self) -> bool {
        self.field_count() == 1
    }

    /// Years between first and latest publication.
    pub fn pub_years(&self) -> i32 {
        self.last_year - self.first_year
    }
}

/// Publication fractions over a [`DisciplineIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct DisciplineVector {
    entries: Vec<f64>,
    norm_sq: f64,
}

impl DisciplineVector {
    pub fn from_fractions(entries: Vec<f64>) -> Result<Self> {
        if entries
            .iter()
            .any(|x| !x.is_finite() || !(0.0..=1.0).contains(x))
        {
            return Err(Error::Invalid("fractions must lie in [0,1]".into()));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Invalid(format!("fractions sum to {sum}, not 1")));
        }
        let norm_sq = entries.iter().map(|x| x * x).sum::<f64>();
        Ok(Self { entries, norm_sq })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq.sqrt()
    }

    /// Squared Euclidean norm, cached at construction.
    pub fn norm_squared(&self) -> f64 {
        self.norm_sq
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|&&x| x > 0.0).count()
    }
}

/// Divide each count by the author's total.
pub fn normalize(record: &AuthorRecord, index: &DisciplineIndex) -> Result<DisciplineVector> {
    let total: u64 = record.counts.values().sum();
    if total == 0 {
        return Err(Error::NoPublications(record.author_id.clone()));
    }
    let mut entries = vec![0.0; index.len()];
    for (label, &count) in &record.counts {
        let pos = index
            .position(label)
            .ok_or_else(|| Error::UnknownDiscipline(label.clone()))?;
        entries[pos] = count as f64 / total as f64;
    }
    DisciplineVector::from_fractions(entries)
}

/// Position of the largest entry; ties go to the lexicographically smallest label.
pub fn primary_position(vector: &DisciplineVector, index: &DisciplineIndex) -> usize {
    let mut best = 0;
    for (pos, &x) in vector.entries.iter().enumerate().skip(1) {
        let current = vector.entries[best];
        if x > current || (x == current && index.name(pos) < index.name(best)) {
            best = pos;
        }
    }
    best
}

pub fn primary_discipline<'a>(vector: &DisciplineVector, index: &'a DisciplineIndex) -> &'a str {
    index.name(primary_position(vector, index))
}

/// The author set of one paper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Team {
    pub paper_id: String,
    pub members: Vec<String>,
}

impl Team {
    pub fn new(paper_id: impl Into<String>, members: Vec<String>) -> Result<Self> {
        let paper_id = paper_id.into();
        if members.is_empty() {
            return Err(Error::EmptyTeam(paper_id));
        }
        let distinct: BTreeSet<&String> = members.iter().collect();
        if distinct.len() != members.len() {
            return Err(Error::Invalid(format!(
                "team `{paper_id}` lists an author more than once"
            )));
        }
        Ok(Self { paper_id, members })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_solo(&self) -> bool {
        self.members.len() < 2
    }
}

/// Simple undirected coauthorship graph with the originating teams retained.
#[derive(Debug, Clone)]
pub struct CollabGraph {
    ids: Vec<String>,
    lookup: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    teams: Vec<Team>,
    team_members: Vec<Vec<usize>>,
}

/// Project teams onto a simple graph: every pair of coauthors gets one edge.
pub fn build_graph(records: &[AuthorRecord], teams: &[Team]) -> Result<CollabGraph> {
    let mut lookup = HashMap::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        if lookup.insert(r.author_id.clone(), i).is_some() {
            return Err(Error::DuplicateAuthor(r.author_id.clone()));
        }
    }

    let mut neighbor_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); records.len()];
    let mut team_members = Vec::with_capacity(teams.len());
    for team in teams {
        if team.members.is_empty() {
            return Err(Error::EmptyTeam(team.paper_id.clone()));
        }
        let members = team
            .members
            .iter()
            .map(|id| {
                lookup.get(id).copied().ok_or_else(|| Error::UnknownAuthor {
                    paper_id: team.paper_id.clone(),
                    author_id: id.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                if i != j {
                    neighbor_sets[i].insert(j);
                    neighbor_sets[j].insert(i);
                }
            }
        }
        team_members.push(members);
    }

    let adjacency: Vec<Vec<usize>> = neighbor_sets
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;

    Ok(CollabGraph {
        ids: records.iter().map(|r| r.author_id.clone()).collect(),
        lookup,
        adjacency,
        edge_count,
        teams: teams.to_vec(),
        team_members,
    })
}

impl CollabGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn node_id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.lookup.get(id).copied()
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn teams(&self) -> &[Team] {
        &self.teams
    }

    /// Node indices of each team, aligned with [`CollabGraph::teams`].
    pub fn team_members(&self, team: usize) -> &[usize] {
        &self.team_members[team]
    }

    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }
}

/// Discipline vectors and primary disciplines aligned with graph node order.
#[derive(Debug, Clone)]
pub struct Profiles {
    vectors: Vec<DisciplineVector>,
    primaries: Vec<usize>,
}

impl Profiles {
    pub fn from_records(records: &[AuthorRecord], index: &DisciplineIndex) -> Result<Self> {
        let vectors = records
            .iter()
            .map(|r| normalize(r, index))
            .collect::<Result<Vec<_>>>()?;
        let primaries = vectors.iter().map(|v| primary_position(v, index)).collect();
        Ok(Self { vectors, primaries })
    }

    /// Align id-keyed vectors to the graph; primaries are derived from the vectors.
    pub fn from_map(
        graph: &CollabGraph,
        vectors: &HashMap<String, DisciplineVector>,
        index: &DisciplineIndex,
    ) -> Result<Self> {
        let vectors = graph
            .ids()
            .iter()
            .map(|id| {
                vectors
                    .get(id)
                    .cloned()
                    .ok_or_else(|| Error::MissingVector(id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let primaries = vectors.iter().map(|v| primary_position(v, index)).collect();
        Ok(Self { vectors, primaries })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, node: usize) -> &DisciplineVector {
        &self.vectors[node]
    }

    pub fn primary(&self, node: usize) -> usize {
        self.primaries[node]
    }

    pub fn vectors(&self) -> &[DisciplineVector] {
        &self.vectors
    }

    pub fn primaries(&self) -> &[usize] {
        &self.primaries
    }
}
