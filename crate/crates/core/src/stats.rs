//! Goodness-of-fit tests and small estimator helpers used across modules.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
}

/// Mean and jackknife standard error. For the sample mean the leave-one-out
/// jackknife reduces to `s / √n`, which is what is computed here.
pub fn mean_stderr(xs: &[f64]) -> MeanEstimate {
    let n = xs.len();
    if n == 0 {
        return MeanEstimate { mean: f64::NAN, stderr: f64::NAN };
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return MeanEstimate { mean, stderr: 0.0 };
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    MeanEstimate { mean, stderr: (var / n as f64).sqrt() }
}

/// `ln Σ exp(x_i)`, robust to large magnitudes. Empty or all `-∞` input gives `-∞`.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + xs.into_iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    /// Critical value at the 1% significance level.
    pub critical_99: f64,
    pub p_value: f64,
    /// `statistic <= critical_99`.
    pub pass: bool,
}

/// Pearson chi-square test of observed counts against expected cell probabilities.
pub fn chi_square(observed: &[u64], expected_prob: &[f64]) -> ChiSquareTest {
    assert_eq!(observed.len(), expected_prob.len());
    assert!(observed.len() >= 2, "chi-square needs at least two cells");
    let total: u64 = observed.iter().sum();
    let total = total as f64;
    let statistic = observed
        .iter()
        .zip(expected_prob)
        .map(|(&o, &p)| {
            let e = total * p;
            (o as f64 - e).powi(2) / e
        })
        .sum::<f64>();
    let dof = observed.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    let critical_99 = dist.inverse_cdf(0.99);
    ChiSquareTest { statistic, dof, critical_99, p_value: dist.sf(statistic), pass: statistic <= critical_99 }
}

/// Chi-square test against equiprobable cells.
pub fn chi_square_uniform(observed: &[u64]) -> ChiSquareTest {
    let p = 1.0 / observed.len() as f64;
    chi_square(observed, &vec![p; observed.len()])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    /// Critical value at the 1% level (asymptotic Kolmogorov distribution).
    pub critical_99: f64,
    pub p_value: f64,
    pub pass: bool,
}

/// `c(α)` with `α = 0.01`: `√(-ln(α/2)/2)`.
fn kolmogorov_c99() -> f64 {
    (-(0.005f64).ln() / 2.0).sqrt()
}

/// Asymptotic Kolmogorov survival function `Q(λ) = 2 Σ (-1)^{k-1} e^{-2k²λ²}`.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> KsTest {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let statistic = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sqrt_n = n.sqrt();
    let critical_99 = kolmogorov_c99() / sqrt_n;
    let p_value = kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * statistic);
    KsTest { statistic, critical_99, p_value, pass: statistic <= critical_99 }
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsTest {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut statistic: f64 = 0.0;
    while i < n && j < m {
        let x = xs[i].min(ys[j]);
        while i < n && xs[i] <= x {
            i += 1;
        }
        while j < m && ys[j] <= x {
            j += 1;
        }
        statistic = statistic.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let eff = ((n * m) as f64 / (n + m) as f64).sqrt();
    let critical_99 = kolmogorov_c99() / eff;
    let p_value = kolmogorov_sf((eff + 0.12 + 0.11 / eff) * statistic);
    KsTest { statistic, critical_99, p_value, pass: statistic <= critical_99 }
}

/// Equal-measure cells of the probability simplex under a symmetric
/// Dirichlet(`concentration`) law.
///
/// A point `p` is mapped to the unit cube by stick breaking: the `i`-th
/// coordinate is the Beta(`a`, `(d-1-i)·a`) CDF of `p_i / (1 - p_1 - … - p_{i-1})`.
/// Under the Dirichlet law these coordinates are i.i.d. uniform, so a regular
/// `k^{d-1}` grid on the cube yields cells of equal probability.
///
/// `concentration = 1` is the flat (Lebesgue) measure on the simplex;
/// `concentration = 1/2` is the uniform surface measure on the γ-orthant.
#[derive(Debug, Clone)]
pub struct SimplexCells {
    dim: usize,
    per_axis: usize,
    marginals: Vec<Beta>,
}

impl SimplexCells {
    pub fn new(dim: usize, per_axis: usize, concentration: f64) -> Self {
        assert!(dim >= 2 && per_axis >= 1);
        let marginals = (0..dim - 1)
            .map(|i| {
                Beta::new(concentration, (dim - 1 - i) as f64 * concentration)
                    .expect("valid beta parameters")
            })
            .collect();
        Self { dim, per_axis, marginals }
    }

    /// Picks the per-axis resolution whose cell count is closest to `cells`.
    pub fn with_cell_count(dim: usize, cells: usize, concentration: f64) -> Self {
        let per_axis = (cells as f64).powf(1.0 / (dim - 1) as f64).round().max(1.0) as usize;
        Self::new(dim, per_axis, concentration)
    }

    pub fn len(&self) -> usize {
        self.per_axis.pow((self.dim - 1) as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cube_coordinates(&self, p: &[f64]) -> Vec<f64> {
        assert_eq!(p.len(), self.dim);
        let mut remaining = 1.0;
        self.marginals
            .iter()
            .zip(p)
            .map(|(beta, &pi)| {
                let x = if remaining > 0.0 { (pi / remaining).clamp(0.0, 1.0) } else { 0.0 };
                remaining -= pi;
                beta.cdf(x)
            })
            .collect()
    }

    pub fn index(&self, p: &[f64]) -> usize {
        let k = self.per_axis;
        self.cube_coordinates(p)
            .iter()
            .rev()
            .fold(0usize, |acc, &u| acc * k + ((u * k as f64) as usize).min(k - 1))
    }

    pub fn histogram<'a>(&self, points: impl IntoIterator<Item = &'a [f64]>) -> Vec<u64> {
        let mut counts = vec![0u64; self.len()];
        for p in points {
            counts[self.index(p)] += 1;
        }
        counts
    }
}
