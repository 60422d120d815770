//! Random-team null ensemble and team z-scores.
//!
//! For every observed team size, `n_sims` teams are drawn uniformly without
//! replacement from the whole author population and their team entropy and
//! mean cosine are recorded. Observed teams are then scored against the
//! ensemble for their size. Each size draws from its own substream, so the
//! result does not depend on evaluation order.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{team_entropy, team_mean_cosine, EntropyNorm, TeamMeasure};
use crate::model::{DisciplineVector, Profiles};
use crate::rng::{substream, Stream};

pub const DEFAULT_SIMULATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeEnsemble {
    pub size: usize,
    pub mean_entropy: f64,
    pub sd_entropy: f64,
    pub mean_cosine: f64,
    pub sd_cosine: f64,
    #[serde(skip)]
    pub entropy_samples: Vec<f64>,
    #[serde(skip)]
    pub cosine_samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullEnsemble {
    pub seed: u64,
    pub n_sims: usize,
    pub norm: EntropyNorm,
    pub sizes: BTreeMap<usize, SizeEnsemble>,
}

/// Mean and population standard deviation.
pub fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Distinct sizes among teams of two or more.
pub fn observed_sizes(teams: &[TeamMeasure]) -> BTreeSet<usize> {
    teams.iter().map(|t| t.size).filter(|&s| s >= 2).collect()
}

fn simulate_size(
    profiles: &Profiles,
    n_disciplines: usize,
    size: usize,
    n_sims: usize,
    seed: u64,
    norm: EntropyNorm,
) -> SizeEnsemble {
    let mut rng = substream(seed, Stream::NullModel, size as u64);
    let population = profiles.len();
    let mut entropy_samples = Vec::with_capacity(n_sims);
    let mut cosine_samples = Vec::with_capacity(n_sims);
    let mut primaries = Vec::with_capacity(size);
    let mut vectors: Vec<&DisciplineVector> = Vec::with_capacity(size);
    for _ in 0..n_sims {
        primaries.clear();
        vectors.clear();
        for m in index::sample(&mut rng, population, size) {
            primaries.push(profiles.primary(m));
            vectors.push(profiles.vector(m));
        }
        // size ≥ 2, so both measures are defined
        entropy_samples.push(team_entropy(&primaries, n_disciplines, norm).unwrap_or(0.0));
        cosine_samples.push(team_mean_cosine(&vectors).unwrap_or(1.0));
    }
    let (mean_entropy, sd_entropy) = mean_and_sd(&entropy_samples);
    let (mean_cosine, sd_cosine) = mean_and_sd(&cosine_samples);
    SizeEnsemble {
        size,
        mean_entropy,
        sd_entropy,
        mean_cosine,
        sd_cosine,
        entropy_samples,
        cosine_samples,
    }
}

/// Simulate random teams for each requested size.
pub fn build_ensemble(
    profiles: &Profiles,
    n_disciplines: usize,
    sizes: &BTreeSet<usize>,
    n_sims: usize,
    seed: u64,
    norm: EntropyNorm,
) -> Result<NullEnsemble> {
    if n_sims < 2 {
        return Err(Error::TooFewSimulations(n_sims));
    }
    let population = profiles.len();
    if population < 2 {
        return Err(Error::Invalid("null ensemble needs at least 2 authors".into()));
    }
    if let Some(&size) = sizes.iter().find(|&&s| s > population || s < 2) {
        if size < 2 {
            return Err(Error::Invalid(format!("team size {size} is below 2")));
        }
        return Err(Error::TeamTooLarge { size, population });
    }
    let sizes: Vec<usize> = sizes.iter().copied().collect();
    let ensembles = crate::par::map_range(sizes.len(), |k| {
        simulate_size(profiles, n_disciplines, sizes[k], n_sims, seed, norm)
    });
    Ok(NullEnsemble {
        seed,
        n_sims,
        norm,
        sizes: sizes.into_iter().zip(ensembles).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamZ {
    pub paper_id: String,
    pub size: usize,
    /// `None` when the ensemble spread for this size is zero.
    pub z_entropy: Option<f64>,
    pub z_cosine: Option<f64>,
}

fn zscore(value: f64, mean: f64, sd: f64) -> Option<f64> {
    (sd > 0.0).then(|| (value - mean) / sd)
}

pub fn z_scores(observed: &[TeamMeasure], ensemble: &NullEnsemble) -> Result<Vec<TeamZ>> {
    observed
        .iter()
        .map(|t| {
            let e = ensemble
                .sizes
                .get(&t.size)
                .ok_or(Error::MissingTeamSize(t.size))?;
            Ok(TeamZ {
                paper_id: t.paper_id.clone(),
                size: t.size,
                z_entropy: zscore(t.entropy, e.mean_entropy, e.sd_entropy),
                z_cosine: zscore(t.mean_cosine, e.mean_cosine, e.sd_cosine),
            })
        })
        .collect()
}
