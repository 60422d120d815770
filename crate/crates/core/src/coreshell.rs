//! Core-shell split by local transitivity, and iterative peeling.
//!
//! A node whose neighbours are all linked to each other (or who has at most
//! one neighbour) collaborates inside a single group and sits in the shell.
//! Every other node bridges groups and is core. Peeling removes the shell,
//! recomputes transitivity on what is left, and repeats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{is_closed, neighborhood_ties};
use crate::model::CollabGraph;
use crate::stats::{self, Alternative, MwuOptions, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Core,
    Shell,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Core => "core",
            Label::Shell => "shell",
        }
    }
}

/// Peel round in which a node was removed; `None` for nodes that survived.
pub type Coreness = Option<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreShellLabeling {
    pub labels: Vec<Label>,
    pub n_core: usize,
    pub n_shell: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coreness: Option<Vec<Coreness>>,
}

impl CoreShellLabeling {
    fn from_labels(labels: Vec<Label>) -> Self {
        let n_core = labels.iter().filter(|&&l| l == Label::Core).count();
        let n_shell = labels.len() - n_core;
        Self {
            labels,
            n_core,
            n_shell,
            coreness: None,
        }
    }

    pub fn core_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Label::Core)
            .map(|(i, _)| i)
    }

    /// `author_id,label,coreness_level` rows; survivors print `inf`, and the
    /// level column is empty when peeling was not run.
    pub fn to_csv(&self, graph: &CollabGraph) -> String {
        let mut out = String::from("author_id,label,coreness_level\n");
        for (i, label) in self.labels.iter().enumerate() {
            let level = match &self.coreness {
                None => String::new(),
                Some(levels) => levels[i].map_or_else(|| "inf".to_string(), |r| r.to_string()),
            };
            out.push_str(&format!("{},{},{}\n", graph.node_id(i), label.as_str(), level));
        }
        out
    }
}

fn shell_mask(graph: &CollabGraph, alive: Option<&[bool]>) -> Vec<bool> {
    let adjacency = graph.adjacency();
    crate::par::map_range(graph.node_count(), |i| {
        if alive.is_some_and(|m| !m[i]) {
            return false;
        }
        let (k, ties) = neighborhood_ties(adjacency, alive, i);
        is_closed(k, ties)
    })
}

/// Label every node core (transitivity < 1) or shell.
pub fn decompose(graph: &CollabGraph) -> CoreShellLabeling {
    let labels = shell_mask(graph, None)
        .into_iter()
        .map(|shell| if shell { Label::Shell } else { Label::Core })
        .collect();
    CoreShellLabeling::from_labels(labels)
}

/// Repeatedly remove every node with transitivity 1 on the residual graph,
/// all at once per round. Round-0 removals are exactly the shell.
pub fn peel(graph: &CollabGraph, max_rounds: Option<u32>) -> CoreShellLabeling {
    let mut labeling = decompose(graph);
    let n = graph.node_count();
    let mut alive = vec![true; n];
    let mut levels: Vec<Coreness> = vec![None; n];
    let mut remaining = n;
    let mut round = 0u32;
    while remaining > 0 && max_rounds.is_none_or(|m| round < m) {
        let removable = shell_mask(graph, Some(&alive));
        let mut removed = 0;
        for (i, r) in removable.into_iter().enumerate() {
            if r {
                alive[i] = false;
                levels[i] = Some(round);
                removed += 1;
            }
        }
        if removed == 0 {
            break;
        }
        remaining -= removed;
        round += 1;
    }
    labeling.coreness = Some(levels);
    labeling
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub attribute: String,
    pub core: Vec<f64>,
    pub shell: Vec<f64>,
    pub core_median: f64,
    pub shell_median: f64,
    /// One-tailed, alternative core > shell.
    pub mann_whitney: TestResult,
    pub ks: TestResult,
}

/// Compare a per-node attribute between core and shell.
pub fn group_compare(labeling: &CoreShellLabeling, attribute: &str, values: &[f64]) -> Result<ComparisonResult> {
    if values.len() != labeling.labels.len() {
        return Err(Error::Invalid(format!(
            "attribute `{attribute}` has {} values for {} nodes",
            values.len(),
            labeling.labels.len()
        )));
    }
    let (mut core, mut shell) = (Vec::new(), Vec::new());
    for (&label, &v) in labeling.labels.iter().zip(values) {
        match label {
            Label::Core => core.push(v),
            Label::Shell => shell.push(v),
        }
    }
    if core.is_empty() {
        return Err(Error::EmptyGroup("core"));
    }
    if shell.is_empty() {
        return Err(Error::EmptyGroup("shell"));
    }
    let mann_whitney = stats::mann_whitney_u(&core, &shell, Alternative::Greater, MwuOptions::default())?;
    let ks = stats::ks_two_sample(&core, &shell)?;
    Ok(ComparisonResult {
        attribute: attribute.to_string(),
        core_median: stats::median(&core),
        shell_median: stats::median(&shell),
        core,
        shell,
        mann_whitney,
        ks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_graph, AuthorRecord, Team};

    pub(crate) fn graph(ids: &[&str], teams: &[&[&str]]) -> CollabGraph {
        let records: Vec<AuthorRecord> = ids
            .iter()
            .map(|id| AuthorRecord {
                author_id: id.to_string(),
                counts: [("CS".to_string(), 1)].into(),
                h_index: 0,
                first_year: 2000,
                last_year: 2000,
            })
            .collect();
        let teams: Vec<Team> = teams
            .iter()
            .enumerate()
            .map(|(k, m)| Team::new(format!("p{k}"), m.iter().map(|s| s.to_string()).collect()).unwrap())
            .collect();
        build_graph(&records, &teams).unwrap()
    }

    fn bridge_fixture() -> CollabGraph {
        graph(
            &["a1", "a2", "a3", "b1", "b2", "b3", "c"],
            &[&["a1", "a2", "a3"], &["b1", "b2", "b3"], &["c", "a1"], &["c", "b1"]],
        )
    }

    fn label_of(g: &CollabGraph, l: &CoreShellLabeling, id: &str) -> Label {
        l.labels[g.node_index(id).unwrap()]
    }

    #[test]
    fn cliques_are_all_shell() {
        let g = graph(&["a", "b", "c", "d", "e"], &[&["a", "b", "c"], &["d", "e"]]);
        let l = decompose(&g);
        assert_eq!(l.n_shell, 5);
        assert_eq!(l.n_core, 0);
    }

    #[test]
    fn bridge_nodes_are_core() {
        let g = bridge_fixture();
        let l = decompose(&g);
        for id in ["c", "a1", "b1"] {
            assert_eq!(label_of(&g, &l, id), Label::Core, "{id}");
        }
        for id in ["a2", "a3", "b2", "b3"] {
            assert_eq!(label_of(&g, &l, id), Label::Shell, "{id}");
        }
        assert_eq!((l.n_core, l.n_shell), (3, 4));
    }

    #[test]
    fn star_center_is_core() {
        let g = graph(&["h", "l1", "l2", "l3", "l4"], &[&["h", "l1"], &["h", "l2"], &["h", "l3"], &["h", "l4"]]);
        let l = decompose(&g);
        assert_eq!(label_of(&g, &l, "h"), Label::Core);
        assert_eq!(l.n_shell, 4);
    }

    #[test]
    fn peel_bridge_fixture() {
        let g = bridge_fixture();
        let l = peel(&g, None);
        let levels = l.coreness.as_ref().unwrap();
        let level = |id: &str| levels[g.node_index(id).unwrap()];
        for id in ["a2", "a3", "b2", "b3"] {
            assert_eq!(level(id), Some(0), "{id}");
        }
        assert_eq!(level("a1"), Some(1));
        assert_eq!(level("b1"), Some(1));
        assert_eq!(level("c"), Some(2));
    }

    #[test]
    fn peel_single_clique() {
        let g = graph(&["a", "b", "c", "d"], &[&["a", "b", "c", "d"]]);
        let l = peel(&g, None);
        assert!(l.coreness.unwrap().iter().all(|&x| x == Some(0)));
    }

    #[test]
    fn peel_cycle_keeps_everyone() {
        let g = graph(
            &["a", "b", "c", "d", "e"],
            &[&["a", "b"], &["b", "c"], &["c", "d"], &["d", "e"], &["e", "a"]],
        );
        let l = peel(&g, None);
        assert_eq!(l.n_core, 5);
        assert!(l.coreness.unwrap().iter().all(Option::is_none));
    }

    #[test]
    fn peel_round_limit() {
        let g = bridge_fixture();
        let l = peel(&g, Some(1));
        let levels = l.coreness.unwrap();
        assert_eq!(levels.iter().filter(|x| x.is_none()).count(), 3);
    }

    #[test]
    fn compare_small_groups() {
        let labels = vec![Label::Core, Label::Core, Label::Core, Label::Shell, Label::Shell, Label::Shell];
        let l = CoreShellLabeling::from_labels(labels);
        let r = group_compare(&l, "h_index", &[10.0, 11.0, 12.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.mann_whitney.statistic, 9.0);
        assert_eq!(r.mann_whitney.p_value, 0.05);
        assert_eq!((r.core_median, r.shell_median), (11.0, 2.0));
        assert_eq!(r.ks.statistic, 1.0);
    }

    #[test]
    fn compare_needs_both_groups() {
        let l = CoreShellLabeling::from_labels(vec![Label::Shell, Label::Shell]);
        assert!(matches!(group_compare(&l, "h", &[1.0, 2.0]), Err(Error::EmptyGroup("core"))));
    }

    #[test]
    fn csv_output() {
        let g = bridge_fixture();
        let csv = peel(&g, None).to_csv(&g);
        assert!(csv.starts_with("author_id,label,coreness_level\na1,core,1\n"));
        let csv = decompose(&g).to_csv(&g);
        assert!(csv.contains("\nc,core,\n"));
    }
}
