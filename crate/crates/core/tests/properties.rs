use std::collections::{BTreeMap, BTreeSet};

use collabscope_core::coreshell::{decompose, peel};
use collabscope_core::measures::{cosine_similarity, team_entropy, transitivity_all, EntropyNorm};
use collabscope_core::model::{build_graph, normalize, AuthorRecord, DisciplineIndex, DisciplineVector, Team};
use collabscope_core::stats::{kde, ks_statistic, mann_whitney_u, Alternative, MwuOptions};
use proptest::prelude::*;

const LABELS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

fn record(id: &str, counts: &[u64]) -> AuthorRecord {
    AuthorRecord {
        author_id: id.to_string(),
        counts: LABELS
            .iter()
            .zip(counts)
            .filter(|(_, &c)| c > 0)
            .map(|(l, &c)| (l.to_string(), c))
            .collect(),
        h_index: 0,
        first_year: 2000,
        last_year: 2001,
    }
}

fn counts() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..40, 6).prop_filter("needs a positive count", |c| c.iter().any(|&x| x > 0))
}

fn fractions() -> impl Strategy<Value = DisciplineVector> {
    counts().prop_map(|c| {
        let total: u64 = c.iter().sum();
        DisciplineVector::from_fractions(c.iter().map(|&x| x as f64 / total as f64).collect()).unwrap()
    })
}

fn teams(n: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::btree_set(0..n, 1..=4.min(n)), 0..25)
        .prop_map(|ts| ts.into_iter().map(|s| s.into_iter().collect()).collect())
}

fn graph_of(n: usize, teams: &[Vec<usize>]) -> collabscope_core::model::CollabGraph {
    let records: Vec<AuthorRecord> = (0..n).map(|i| record(&format!("n{i}"), &[1])).collect();
    let teams: Vec<Team> = teams
        .iter()
        .enumerate()
        .map(|(k, m)| Team::new(format!("p{k}"), m.iter().map(|i| format!("n{i}")).collect()).unwrap())
        .collect();
    build_graph(&records, &teams).unwrap()
}

proptest! {
    #[test]
    fn normalize_is_scale_invariant(c in counts(), k in 1u64..9) {
        let index = DisciplineIndex::new(LABELS).unwrap();
        let scaled: Vec<u64> = c.iter().map(|x| x * k).collect();
        let a = normalize(&record("a", &c), &index).unwrap();
        let b = normalize(&record("a", &scaled), &index).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!((a.entries().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cosine_is_symmetric_and_bounded(x in fractions(), y in fractions()) {
        let s = cosine_similarity(&x, &y);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, cosine_similarity(&y, &x));
        prop_assert!((cosine_similarity(&x, &x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn team_entropy_ignores_member_order(mut labels in prop::collection::vec(0usize..5, 2..12), nd in 5usize..30) {
        let a = team_entropy(&labels, nd, EntropyNorm::Max).unwrap();
        labels.reverse();
        let b = team_entropy(&labels, nd, EntropyNorm::Max).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        let min = team_entropy(&labels, nd, EntropyNorm::Min).unwrap();
        prop_assert!(a <= min + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&min));
    }

    #[test]
    fn edges_match_team_pairs(n in 2usize..15, ts in teams(15)) {
        let ts: Vec<Vec<usize>> = ts.into_iter().map(|t| t.into_iter().filter(|&i| i < n).collect::<Vec<_>>()).filter(|t| !t.is_empty()).collect();
        let g = graph_of(n, &ts);
        let mut want = BTreeSet::new();
        for t in &ts {
            for &a in t {
                for &b in t {
                    if a < b {
                        want.insert((a, b));
                    }
                }
            }
        }
        let got: BTreeSet<(usize, usize)> = g.edges().collect();
        prop_assert_eq!(g.edge_count(), want.len());
        prop_assert_eq!(got, want);
    }

    #[test]
    fn first_peel_round_is_the_shell(n in 3usize..15, ts in teams(15)) {
        let ts: Vec<Vec<usize>> = ts.into_iter().map(|t| t.into_iter().filter(|&i| i < n).collect::<Vec<_>>()).filter(|t| !t.is_empty()).collect();
        let g = graph_of(n, &ts);
        let d = decompose(&g);
        let p = peel(&g, None);
        let c = transitivity_all(&g);
        let levels = p.coreness.unwrap();
        for i in 0..n {
            prop_assert_eq!(levels[i] == Some(0), c[i] >= 1.0);
            prop_assert_eq!(d.labels[i], p.labels[i]);
        }
        prop_assert_eq!(d.n_core + d.n_shell, n);
    }

    #[test]
    fn mwu_tails_complement_without_continuity(
        x in prop::collection::vec(0u32..20, 8..30),
        y in prop::collection::vec(0u32..20, 8..30),
    ) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let y: Vec<f64> = y.into_iter().map(f64::from).collect();
        let opts = MwuOptions { continuity: false, ..MwuOptions::default() };
        let g = mann_whitney_u(&x, &y, Alternative::Greater, opts).unwrap();
        let l = mann_whitney_u(&x, &y, Alternative::Less, opts).unwrap();
        let swapped = mann_whitney_u(&y, &x, Alternative::Greater, opts).unwrap();
        prop_assert!((g.p_value + l.p_value - 1.0).abs() < 1e-9);
        prop_assert!((l.p_value - swapped.p_value).abs() < 1e-9);
        prop_assert_eq!(g.statistic + swapped.statistic, (x.len() * y.len()) as f64);
    }

    #[test]
    fn ks_statistic_is_symmetric(
        x in prop::collection::vec(-50i32..50, 1..40),
        y in prop::collection::vec(-50i32..50, 1..40),
    ) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        let y: Vec<f64> = y.into_iter().map(f64::from).collect();
        let d = ks_statistic(&x, &y);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_statistic(&y, &x));
        prop_assert_eq!(ks_statistic(&x, &x), 0.0);
    }

    #[test]
    fn kde_integrates_to_one(xs in prop::collection::vec(-100.0f64..100.0, 2..200)) {
        prop_assume!(xs.iter().any(|&v| v != xs[0]));
        let c = kde(&xs, None, 256).unwrap();
        prop_assert!((c.integral() - 1.0).abs() < 1e-3);
        prop_assert!(c.density.iter().all(|&d| d >= 0.0));
    }
}

#[test]
fn null_calibration_of_team_entropy() {
    use collabscope_core::measures::team_table;
    use collabscope_core::model::Profiles;
    use collabscope_core::nullmodel::{build_ensemble, observed_sizes, z_scores};
    use collabscope_core::synth::{generate, SynthConfig};

    let mut means = BTreeMap::new();
    for seed in 0..3 {
        let data = generate(&SynthConfig {
            n_authors: 400,
            n_teams: Some(300),
            seed,
            ..SynthConfig::default()
        })
        .unwrap();
        let g = build_graph(&data.records, &data.teams).unwrap();
        let profiles = Profiles::from_records(&data.records, &data.index).unwrap();
        let (observed, _) = team_table(&g, &profiles, data.index.len(), EntropyNorm::Max);
        let ensemble =
            build_ensemble(&profiles, data.index.len(), &observed_sizes(&observed), 500, seed, EntropyNorm::Max).unwrap();
        let z: Vec<f64> = z_scores(&observed, &ensemble).unwrap().into_iter().filter_map(|t| t.z_entropy).collect();
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        assert!(mean.abs() < 3.0 / (z.len() as f64).sqrt(), "seed {seed}: mean {mean}");
        means.insert(seed, mean);
    }
    assert_eq!(means.len(), 3);
}
