//! Synthetic coauthorship datasets with a tunable homophily knob.
//!
//! Authors get a home discipline drawn from a skewed popularity profile plus a
//! few secondary fields, with Gamma-weighted fractions turned into integer
//! publication counts. Teams start from a seed author; every further member is,
//! with probability `homophily`, one of the seed's most similar authors and
//! otherwise a uniform draw. `homophily = 0` gives uniformly random teams.
//! h-index and career length grow with the number of papers an author ends up
//! on, so bridging authors look more senior.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::{index, IndexedRandom, SliceRandom};
use rand::Rng;
use rand::distr::weighted::WeightedIndex;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{self, AuthorFormat};
use crate::measures::cosine_similarity;
use crate::model::{normalize, AuthorRecord, DisciplineIndex, DisciplineVector, Team};
use crate::rng::{substream, Stream};

/// Scopus top-level subject area codes, most popular first for this field.
pub const SUBJECT_AREAS: [&str; 27] = [
    "COMP", "SOCI", "MATH", "PSYC", "ENGI", "DECI", "BUSI", "ARTS", "MEDI", "NEUR", "HEAL",
    "ECON", "PHYS", "BIOC", "MULT", "NURS", "ENVI", "EART", "AGRI", "CHEM", "MATE", "ENER",
    "CENG", "PHAR", "IMMU", "DENT", "VETE",
];

const SINGLE_FIELD_RATE: f64 = 0.012;
const LAST_YEAR: i32 = 2019;

/// Discrete team-size distribution as `(size, weight)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamSizeDist(pub Vec<(usize, f64)>);

impl Default for TeamSizeDist {
    fn default() -> Self {
        TeamSizeDist(vec![(2, 0.30), (3, 0.30), (4, 0.22), (5, 0.12), (6, 0.06)])
    }
}

impl TeamSizeDist {
    pub fn max_size(&self) -> usize {
        self.0.iter().map(|&(s, _)| s).max().unwrap_or(0)
    }
}

impl FromStr for TeamSizeDist {
    type Err = String;

    /// `SIZE:WEIGHT,SIZE:WEIGHT,...`
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (size, weight) = item
                .split_once(':')
                .ok_or_else(|| format!("`{item}` is not SIZE:WEIGHT"))?;
            let size: usize = size.trim().parse().map_err(|_| format!("bad size in `{item}`"))?;
            let weight: f64 = weight.trim().parse().map_err(|_| format!("bad weight in `{item}`"))?;
            if size < 1 || weight.is_nan() || weight < 0.0 {
                return Err(format!("`{item}`: size must be ≥ 1 and weight ≥ 0"));
            }
            out.push((size, weight));
        }
        if out.is_empty() || out.iter().all(|&(_, w)| w == 0.0) {
            return Err("team size distribution has no positive weight".into());
        }
        Ok(TeamSizeDist(out))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_authors: usize,
    pub n_disciplines: usize,
    pub homophily: f64,
    pub team_sizes: TeamSizeDist,
    /// Number of papers; ignored when `target_edges` is set.
    pub n_teams: Option<usize>,
    /// Keep adding papers until the graph has exactly this many edges.
    pub target_edges: Option<usize>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_authors: 300,
            n_disciplines: 27,
            homophily: 0.0,
            team_sizes: TeamSizeDist::default(),
            n_teams: None,
            target_edges: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthData {
    pub records: Vec<AuthorRecord>,
    pub teams: Vec<Team>,
    pub index: DisciplineIndex,
}

fn labels(n: usize) -> Vec<String> {
    if n <= SUBJECT_AREAS.len() {
        SUBJECT_AREAS[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|k| format!("D{k:03}")).collect()
    }
}

fn validate(config: &SynthConfig) -> Result<()> {
    if config.n_authors < 2 {
        return Err(Error::Invalid("need at least 2 authors".into()));
    }
    if config.n_disciplines < 2 {
        return Err(Error::Invalid("need at least 2 disciplines".into()));
    }
    if !(0.0..=1.0).contains(&config.homophily) {
        return Err(Error::Invalid(format!("homophily {} is outside [0,1]", config.homophily)));
    }
    let max = config.team_sizes.max_size();
    if max > config.n_authors {
        return Err(Error::TeamTooLarge {
            size: max,
            population: config.n_authors,
        });
    }
    if let Some(target) = config.target_edges {
        let n = config.n_authors;
        if target > n * (n - 1) / 2 {
            return Err(Error::Invalid(format!("{target} edges cannot fit among {n} authors")));
        }
    }
    Ok(())
}

fn make_authors<R: Rng>(rng: &mut R, config: &SynthConfig, names: &[String]) -> Vec<AuthorRecord> {
    let nd = config.n_disciplines;
    let popularity: Vec<f64> = (0..nd).map(|k| 1.0 / (k as f64 + 1.0).powf(1.3)).collect();
    let home_dist = WeightedIndex::new(&popularity).expect("positive weights");
    let home_weight = Gamma::new(4.0, 1.0).expect("valid gamma");
    let side_weight = Gamma::new(1.0, 1.0).expect("valid gamma");
    let volume = Gamma::new(2.0, 20.0).expect("valid gamma");

    (0..config.n_authors)
        .map(|i| {
            let home = home_dist.sample(rng);
            let n_fields = if rng.random_bool(SINGLE_FIELD_RATE) {
                1
            } else {
                rng.random_range(2..=5.min(nd))
            };
            let mut fields = vec![home];
            while fields.len() < n_fields {
                let f = home_dist.sample(rng);
                if !fields.contains(&f) {
                    fields.push(f);
                }
            }
            let weights: Vec<f64> = fields
                .iter()
                .enumerate()
                .map(|(k, _)| if k == 0 { home_weight.sample(rng) } else { side_weight.sample(rng) })
                .collect();
            let total_w: f64 = weights.iter().sum();
            let v: f64 = volume.sample(rng);
            let total = 5 + v.round() as u64;
            let counts: BTreeMap<String, u64> = fields
                .iter()
                .zip(&weights)
                .map(|(&f, &w)| {
                    let c = ((w / total_w) * total as f64).round().max(1.0) as u64;
                    (names[f].clone(), c)
                })
                .collect();
            AuthorRecord {
                author_id: format!("a{:05}", i + 1),
                counts,
                h_index: 0,
                first_year: LAST_YEAR,
                last_year: LAST_YEAR,
            }
        })
        .collect()
}

struct TeamBuilder<'a> {
    vectors: &'a [DisciplineVector],
    homophily: f64,
}

impl TeamBuilder<'_> {
    /// Authors most similar to `seed`, best first, excluding the seed itself.
    fn neighbours(&self, seed: usize, k: usize) -> Vec<usize> {
        let mut scored: Vec<(f64, usize)> = (0..self.vectors.len())
            .filter(|&j| j != seed)
            .map(|j| (cosine_similarity(&self.vectors[seed], &self.vectors[j]), j))
            .collect();
        let k = k.min(scored.len());
        scored.select_nth_unstable_by(k.saturating_sub(1), |a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.truncate(k);
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        scored.into_iter().map(|(_, j)| j).collect()
    }

    fn team<R: Rng>(&self, rng: &mut R, seed: usize, size: usize) -> Vec<usize> {
        let n = self.vectors.len();
        let mut members = vec![seed];
        let close = if self.homophily > 0.0 {
            self.neighbours(seed, 3 * size)
        } else {
            Vec::new()
        };
        while members.len() < size {
            let pick = if !close.is_empty() && rng.random_bool(self.homophily) {
                let free: Vec<usize> = close.iter().copied().filter(|c| !members.contains(c)).collect();
                free.choose(rng).copied()
            } else {
                None
            };
            let pick = pick.unwrap_or_else(|| loop {
                let c = rng.random_range(0..n);
                if !members.contains(&c) {
                    break c;
                }
            });
            members.push(pick);
        }
        members
    }
}

fn pair_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn generate(config: &SynthConfig) -> Result<SynthData> {
    validate(config)?;
    let names = labels(config.n_disciplines);
    let index = DisciplineIndex::new(names.clone())?;

    let mut rng = substream(config.seed, Stream::Synth, 0);
    let mut records = make_authors(&mut rng, config, &names);
    let vectors = records
        .iter()
        .map(|r| normalize(r, &index))
        .collect::<Result<Vec<_>>>()?;

    let n = config.n_authors;
    let mut rng = substream(config.seed, Stream::Synth, 1);
    let sizes: Vec<usize> = config.team_sizes.0.iter().map(|&(s, _)| s).collect();
    let size_dist = WeightedIndex::new(config.team_sizes.0.iter().map(|&(_, w)| w))
        .map_err(|e| Error::Invalid(format!("team size weights: {e}")))?;
    let builder = TeamBuilder {
        vectors: &vectors,
        homophily: config.homophily,
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut member_lists: Vec<Vec<usize>> = Vec::new();
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let n_teams = config.n_teams.unwrap_or(n / 2).max(1);
    let mut t = 0usize;
    loop {
        match config.target_edges {
            Some(target) if edges.len() >= target => break,
            None if t >= n_teams => break,
            _ => {}
        }
        let size = sizes[size_dist.sample(&mut rng)];
        let seed_author = order[t % n];
        t += 1;
        let members = builder.team(&mut rng, seed_author, size);
        let mut new_edges = Vec::new();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let e = pair_key(i, j);
                if !edges.contains(&e) {
                    new_edges.push(e);
                }
            }
        }
        if let Some(target) = config.target_edges {
            if edges.len() + new_edges.len() > target {
                // top up with two-author papers on fresh pairs
                while edges.len() < target {
                    let pair = index::sample(&mut rng, n, 2);
                    let e = pair_key(pair.index(0), pair.index(1));
                    if edges.insert(e) {
                        member_lists.push(vec![e.0, e.1]);
                    }
                }
                break;
            }
        }
        edges.extend(new_edges);
        member_lists.push(members);
    }

    // seniority follows activity
    let mut papers = vec![0u32; n];
    for m in &member_lists {
        for &i in m {
            papers[i] += 1;
        }
    }
    let mut rng = substream(config.seed, Stream::Synth, 2);
    let noise = Normal::new(0.0, 2.0).expect("valid normal");
    for (r, &k) in records.iter_mut().zip(&papers) {
        let k = f64::from(k);
        r.h_index = (2.0 + 2.0 * k + noise.sample(&mut rng)).round().max(0.0) as u32;
        let career = (4.0 + 1.5 * k + 1.5 * noise.sample(&mut rng)).round().clamp(0.0, 34.0) as i32;
        r.first_year = LAST_YEAR - career;
    }

    let teams = member_lists
        .into_iter()
        .enumerate()
        .map(|(k, m)| {
            Team::new(
                format!("p{:05}", k + 1),
                m.into_iter().map(|i| records[i].author_id.clone()).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SynthData {
        records,
        teams,
        index,
    })
}

/// Paths written by [`write`].
#[derive(Debug, Clone)]
pub struct SynthFiles {
    pub authors: PathBuf,
    pub teams: PathBuf,
    pub index: PathBuf,
}

/// Write `authors.{csv,json}`, `teams.{csv,json}` and `disciplines.txt`.
pub fn write(data: &SynthData, dir: &Path, format: AuthorFormat) -> Result<SynthFiles> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (ext, authors, teams) = match format {
        AuthorFormat::Csv => (
            "csv",
            ingest::authors_to_csv(&data.records),
            ingest::teams_to_csv(&data.teams),
        ),
        AuthorFormat::Json => (
            "json",
            ingest::authors_to_json(&data.records)?,
            ingest::teams_to_json(&data.teams)?,
        ),
    };
    let files = SynthFiles {
        authors: dir.join(format!("authors.{ext}")),
        teams: dir.join(format!("teams.{ext}")),
        index: dir.join("disciplines.txt"),
    };
    let mut index_text = data.index.names().join("\n");
    index_text.push('\n');
    for (path, text) in [
        (&files.authors, authors),
        (&files.teams, teams),
        (&files.index, index_text),
    ] {
        fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_graph;

    #[test]
    fn size_dist_parses() {
        let d: TeamSizeDist = "2:3, 3:1".parse().unwrap();
        assert_eq!(d.0, vec![(2, 3.0), (3, 1.0)]);
        assert!("2".parse::<TeamSizeDist>().is_err());
        assert!("2:0".parse::<TeamSizeDist>().is_err());
    }

    #[test]
    fn deterministic() {
        let c = SynthConfig {
            n_authors: 80,
            homophily: 0.5,
            seed: 11,
            ..Default::default()
        };
        let a = generate(&c).unwrap();
        let b = generate(&c).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.teams, b.teams);
    }

    #[test]
    fn exact_edge_target() {
        let c = SynthConfig {
            n_authors: 200,
            target_edges: Some(500),
            seed: 3,
            ..Default::default()
        };
        let d = generate(&c).unwrap();
        let g = build_graph(&d.records, &d.teams).unwrap();
        assert_eq!(g.edge_count(), 500);
        assert_eq!(g.node_count(), 200);
    }

    #[test]
    fn infeasible_sizes_rejected() {
        let c = SynthConfig {
            n_authors: 3,
            team_sizes: "4:1".parse().unwrap(),
            ..Default::default()
        };
        assert!(matches!(generate(&c), Err(Error::TeamTooLarge { size: 4, .. })));
        let c = SynthConfig {
            homophily: 1.5,
            ..Default::default()
        };
        assert!(generate(&c).is_err());
    }

    #[test]
    fn records_are_valid() {
        let d = generate(&SynthConfig {
            n_authors: 500,
            seed: 5,
            ..Default::default()
        })
        .unwrap();
        for r in &d.records {
            r.validate().unwrap();
        }
        let single = d.records.iter().filter(|r| r.is_single_field()).count();
        assert!(single < 30, "{single}");
    }
}
