//! Two-sample tests and kernel density estimation.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tails {
    One,
    Two,
}

/// Direction of the alternative hypothesis, stated for sample 1 relative to sample 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    Greater,
    Less,
    TwoSided,
}

impl Alternative {
    pub fn tails(self) -> Tails {
        match self {
            Alternative::TwoSided => Tails::Two,
            _ => Tails::One,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: String,
    pub statistic: f64,
    pub p_value: f64,
    pub tails: Tails,
    pub alternative: Alternative,
    pub n1: usize,
    pub n2: usize,
    /// True when the p-value came from exact enumeration.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub median1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub median2: Option<f64>,
}

fn std_normal() -> Normal {
    Normal::standard()
}

/// P-value of a standard-normal statistic under the given alternative.
fn normal_p(z: f64, alternative: Alternative) -> f64 {
    let n = std_normal();
    let p = match alternative {
        Alternative::Greater => n.sf(z),
        Alternative::Less => n.cdf(z),
        Alternative::TwoSided => 2.0 * n.sf(z.abs()),
    };
    p.clamp(0.0, 1.0)
}

/// Pooled two-proportion z-test of `x1/n1` against `x2/n2`.
pub fn two_proportion_z(x1: u64, n1: u64, x2: u64, n2: u64, alternative: Alternative) -> Result<TestResult> {
    if n1 == 0 || n2 == 0 || x1 > n1 || x2 > n2 {
        return Err(Error::Invalid("two-proportion z needs 0 ≤ x ≤ n and n ≥ 1".into()));
    }
    let (p1, p2) = (x1 as f64 / n1 as f64, x2 as f64 / n2 as f64);
    let pooled = (x1 + x2) as f64 / (n1 + n2) as f64;
    if pooled == 0.0 || pooled == 1.0 {
        return Err(Error::Degenerate("pooled proportion is 0 or 1; z is undefined".into()));
    }
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    let z = (p1 - p2) / se;
    Ok(TestResult {
        method: "two-proportion z".into(),
        statistic: z,
        p_value: normal_p(z, alternative),
        tails: alternative.tails(),
        alternative,
        n1: n1 as usize,
        n2: n2 as usize,
        exact: false,
        median1: None,
        median2: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwuOptions {
    /// Half-unit continuity correction on the normal approximation.
    pub continuity: bool,
    /// Use exact enumeration when `n1 + n2` is at most this and there are no ties.
    pub exact_max_n: usize,
}

impl Default for MwuOptions {
    fn default() -> Self {
        Self {
            continuity: true,
            exact_max_n: 12,
        }
    }
}

/// Midranks (1-based) of the pooled sample, plus the tie-group sizes.
fn midranks(pooled: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && pooled[order[j]] == pooled[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

/// Number of arrangements of `m` first-sample and `n` second-sample items
/// giving each value of U, for U = 0..=m·n.
pub(crate) fn mwu_exact_counts(m: usize, n: usize) -> Vec<u128> {
    // counts[a][b] over u, built up one sample size at a time:
    // f(a, b, u) = f(a-1, b, u-b) + f(a, b-1, u)
    let mut prev: Vec<Vec<u128>> = (0..=n).map(|_| vec![1]).collect();
    for a in 1..=m {
        let mut cur: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
        cur.push(vec![1]);
        for b in 1..=n {
            let mut f = vec![0u128; a * b + 1];
            for (u, &c) in prev[b].iter().enumerate() {
                f[u + b] += c;
            }
            for (u, &c) in cur[b - 1].iter().enumerate() {
                f[u] += c;
            }
            cur.push(f);
        }
        prev = cur;
    }
    prev.swap_remove(n)
}

/// Mann-Whitney U test. The reported statistic is U for sample 1.
pub fn mann_whitney_u(sample1: &[f64], sample2: &[f64], alternative: Alternative, options: MwuOptions) -> Result<TestResult> {
    let (n1, n2) = (sample1.len(), sample2.len());
    if n1 == 0 || n2 == 0 {
        return Err(Error::EmptyGroup(if n1 == 0 { "first" } else { "second" }));
    }
    let pooled: Vec<f64> = sample1.iter().chain(sample2).copied().collect();
    if pooled.iter().any(|x| x.is_nan()) {
        return Err(Error::Invalid("sample contains NaN".into()));
    }
    let (ranks, ties) = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let nn = n1 * n2;
    let mean = nn as f64 / 2.0;

    let exact = ties.is_empty() && n1 + n2 <= options.exact_max_n;
    let p_value = if exact {
        let counts = mwu_exact_counts(n1, n2);
        let total: u128 = counts.iter().sum();
        let u = u1.round() as usize;
        let ge: u128 = counts[u..].iter().sum();
        let le: u128 = counts[..=u].iter().sum();
        let p_ge = ge as f64 / total as f64;
        let p_le = le as f64 / total as f64;
        match alternative {
            Alternative::Greater => p_ge,
            Alternative::Less => p_le,
            Alternative::TwoSided => (2.0 * p_ge.min(p_le)).min(1.0),
        }
    } else {
        let n = (n1 + n2) as f64;
        let tie_term: f64 = ties.iter().map(|&t| (t as f64).powi(3) - t as f64).sum::<f64>() / (n * (n - 1.0));
        let var = nn as f64 / 12.0 * ((n + 1.0) - tie_term);
        if var <= 0.0 {
            1.0
        } else {
            let sd = var.sqrt();
            let cc = if options.continuity { 0.5 } else { 0.0 };
            let z = match alternative {
                Alternative::Greater => (u1 - mean - cc) / sd,
                Alternative::Less => (u1 - mean + cc) / sd,
                Alternative::TwoSided => ((u1 - mean).abs() - cc).max(0.0) / sd,
            };
            normal_p(z, alternative)
        }
    };

    Ok(TestResult {
        method: "Mann-Whitney U".into(),
        statistic: u1,
        p_value,
        tails: alternative.tails(),
        alternative,
        n1,
        n2,
        exact,
        median1: Some(median(sample1)),
        median2: Some(median(sample2)),
    })
}

/// Largest vertical distance between the two empirical CDFs.
pub fn ks_statistic(sample1: &[f64], sample2: &[f64]) -> f64 {
    let mut a = sample1.to_vec();
    let mut b = sample2.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    d
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        // Jacobi theta form, converges fast for small lambda
        let pi2 = std::f64::consts::PI.powi(2);
        let cdf: f64 = (1..=20)
            .map(|k| {
                let odd = (2 * k - 1) as f64;
                (-odd * odd * pi2 / (8.0 * lambda * lambda)).exp()
            })
            .sum::<f64>()
            * (2.0 * std::f64::consts::PI).sqrt()
            / lambda;
        1.0 - cdf
    } else {
        2.0 * (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as i64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * lambda * lambda).exp()
            })
            .sum::<f64>()
    };
    p.clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(sample1: &[f64], sample2: &[f64]) -> Result<TestResult> {
    let (n1, n2) = (sample1.len(), sample2.len());
    if n1 == 0 || n2 == 0 {
        return Err(Error::EmptyGroup(if n1 == 0 { "first" } else { "second" }));
    }
    let d = ks_statistic(sample1, sample2);
    let effective = (n1 * n2) as f64 / (n1 + n2) as f64;
    Ok(TestResult {
        method: "Kolmogorov-Smirnov".into(),
        statistic: d,
        p_value: kolmogorov_sf(effective.sqrt() * d),
        tails: Tails::Two,
        alternative: Alternative::TwoSided,
        n1,
        n2,
        exact: false,
        median1: None,
        median2: None,
    })
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Linear-interpolation quantile of sorted data.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    quantile_sorted(&s, 0.5)
}

/// Silverman's rule, `0.9 · min(sd, IQR/1.34) · n^(-1/5)`, falling back to
/// whichever spread is non-zero. `None` if the sample has no spread.
pub fn silverman_bandwidth(sample: &[f64]) -> Option<f64> {
    let n = sample.len();
    if n < 2 {
        return None;
    }
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let m = mean(&s);
    let sd = (s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let iqr = (quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25)) / 1.34;
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr),
        (true, false) => sd,
        (false, true) => iqr,
        (false, false) => return None,
    };
    Some(0.9 * spread * (n as f64).powf(-0.2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
    pub n: usize,
}

impl DensityCurve {
    /// Trapezoidal integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    /// `x,density` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,density\n");
        for (x, d) in self.grid.iter().zip(&self.density) {
            out.push_str(&format!("{x},{d}\n"));
        }
        out
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| (xw[1] - xw[0]) * (yw[0] + yw[1]) / 2.0)
        .sum()
}

pub const DEFAULT_GRID: usize = 512;

// Kernel contributions beyond this many bandwidths are below 1e-14.
const KERNEL_REACH: f64 = 8.0;

/// Gaussian kernel density estimate on `grid_size` evenly spaced points
/// over `[min − 3h, max + 3h]`. The curve is rescaled so its trapezoidal
/// integral over the grid is 1.
pub fn kde(sample: &[f64], bandwidth: Option<f64>, grid_size: usize) -> Result<DensityCurve> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::Invalid("density estimate needs at least 2 values".into()));
    }
    if grid_size < 2 {
        return Err(Error::Invalid("density grid needs at least 2 points".into()));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("sample contains non-finite values".into()));
    }
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(Error::Invalid(format!("bandwidth must be positive, got {h}"))),
        None => silverman_bandwidth(sample)
            .ok_or_else(|| Error::Degenerate("all sample values are identical; bandwidth would be 0".into()))?,
    };

    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let lo = sorted[0] - 3.0 * h;
    let hi = sorted[n - 1] + 3.0 * h;
    let step = (hi - lo) / (grid_size - 1) as f64;
    let grid: Vec<f64> = (0..grid_size).map(|k| lo + step * k as f64).collect();

    let norm = 1.0 / (n as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let raw = crate::par::map_range(grid_size, |k| {
        let x = grid[k];
        let start = sorted.partition_point(|&s| s < x - KERNEL_REACH * h);
        let end = sorted.partition_point(|&s| s <= x + KERNEL_REACH * h);
        sorted[start..end]
            .iter()
            .map(|&s| {
                let u = (x - s) / h;
                (-0.5 * u * u).exp()
            })
            .sum::<f64>()
            * norm
    });
    let area = trapezoid(&grid, &raw);
    let density = raw.into_iter().map(|d| d / area).collect();
    Ok(DensityCurve {
        grid,
        density,
        bandwidth: h,
        n,
    })
}
