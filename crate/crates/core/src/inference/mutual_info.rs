//! Mutual information `I = H(n) - H(n | γ)` between a prior on γ and the
//! counts from `N` trials.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma as GammaDist};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::likelihood::{ln_kernel, TrialCounts};
use crate::measures::PriorDensity;
use crate::quadrature::CompositeRule;
use crate::rng::{try_par_samples, RngSeed, StreamRng};
use crate::scalar::ln_gamma;
use crate::statespace::GammaVector;
use crate::stats::{log_sum_exp, mean_stderr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutualInfoMethod {
    Quadrature,
    NestedMonteCarlo,
}

/// Mutual information in nats at `n` trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutualInfoEstimate {
    pub value: f64,
    /// Quadrature: change between the last two refinements. Monte Carlo: outer standard error.
    pub stderr: f64,
    pub n: u64,
    pub method: MutualInfoMethod,
    /// Estimated upward bias of the nested estimator from its finite inner sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bias: Option<f64>,
}

/// Composite Gauss–Legendre settings for [`mutual_info_binary_exact`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub order: usize,
    /// Refinement stops once `Σ_n P(n)` moves by less than this.
    pub tolerance: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { panels: 512, order: 8, tolerance: 1e-9, max_panels: 1 << 16 }
    }
}

/// Inner sampling distribution of the nested estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InnerProposal {
    /// Draws from the prior itself.
    Prior,
    /// Mixture `λ K(γ) + (1-λ) q_n(γ)`, with `q_n` the Dirichlet(n + ½) law of
    /// `p = γ²` carried to the sphere. Needed once the likelihood is too narrow
    /// for prior draws to hit it.
    Defensive { prior_weight: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedMcConfig {
    pub outer: usize,
    pub inner: usize,
    pub proposal: InnerProposal,
}

impl Default for NestedMcConfig {
    fn default() -> Self {
        Self { outer: 20_000, inner: 2_000, proposal: InnerProposal::Defensive { prior_weight: 0.1 } }
    }
}

/// Binomial log-pmf table context: `ln C(N, k)` for `k = 0..=N`.
fn ln_binomial_table(n: u64) -> Vec<f64> {
    let ln_n = ln_gamma(n as f64 + 1.0);
    let lf: Vec<f64> = (0..=n).map(|k| ln_gamma(k as f64 + 1.0)).collect();
    (0..=n as usize).map(|k| ln_n - lf[k] - lf[n as usize - k]).collect()
}

/// Exact `I` for two outcomes by composite Gauss–Legendre quadrature over α,
/// doubling the panel count until `Σ_n P(n)` changes by less than the tolerance.
pub fn mutual_info_binary_exact<P: PriorDensity + ?Sized>(
    prior: &P,
    n_trials: u64,
    config: &QuadratureConfig,
) -> Result<MutualInfoEstimate> {
    if prior.dim() != 2 {
        return Err(Error::DimensionMismatch { left: prior.dim(), right: 2 });
    }
    let table = ln_binomial_table(n_trials);
    let mut panels = config.panels.max(1);
    let mut previous: Option<(f64, f64)> = None;
    loop {
        let (total, info) = binary_level(prior, n_trials, &table, panels, config.order);
        if let Some((prev_total, prev_info)) = previous {
            let change = (total - prev_total).abs();
            if change < config.tolerance {
                return Ok(MutualInfoEstimate {
                    value: info,
                    stderr: (info - prev_info).abs(),
                    n: n_trials,
                    method: MutualInfoMethod::Quadrature,
                    bias: None,
                });
            }
            if panels * 2 > config.max_panels {
                return Err(Error::QuadratureNonConvergence { panels, change });
            }
        }
        previous = Some((total, info));
        panels *= 2;
    }
}

const NODE_BLOCK: usize = 64;

/// One quadrature level: returns `(Σ_n P(n), I)`.
fn binary_level<P: PriorDensity + ?Sized>(prior: &P, n_trials: u64, table: &[f64], panels: usize, order: usize) -> (f64, f64) {
    let rule = CompositeRule::new(0.0, std::f64::consts::FRAC_PI_2, panels, order);
    let nf = n_trials as f64;
    let blocks: Vec<(Vec<f64>, f64)> = rule
        .nodes
        .par_chunks(NODE_BLOCK)
        .zip(rule.weights.par_chunks(NODE_BLOCK))
        .map(|(nodes, weights)| {
            let mut evidence = vec![0.0; table.len()];
            let mut conditional = 0.0;
            for (&a, &w) in nodes.iter().zip(weights) {
                let g = GammaVector::from_trusted(vec![a.cos().max(0.0), a.sin()]);
                let lk = prior.ln_density(&g);
                if lk == f64::NEG_INFINITY {
                    continue;
                }
                let mass = w * lk.exp();
                let p1 = g.entries()[0] * g.entries()[0];
                let p2 = g.entries()[1] * g.entries()[1];
                let (lp1, lp2) = (p1.ln(), p2.ln());
                // Terms beyond 12 standard deviations contribute below e^{-70}.
                let sd = (nf * p1 * p2).sqrt();
                let lo = (nf * p1 - 12.0 * sd - 12.0).floor().max(0.0) as usize;
                let hi = ((nf * p1 + 12.0 * sd + 12.0).ceil() as usize).min(n_trials as usize);
                let mut h = 0.0;
                for k in lo..=hi {
                    let kf = k as f64;
                    let mut l = table[k];
                    if k > 0 {
                        l += kf * lp1;
                    }
                    if k < n_trials as usize {
                        l += (nf - kf) * lp2;
                    }
                    if l == f64::NEG_INFINITY || l.is_nan() {
                        continue;
                    }
                    let pk = l.exp();
                    evidence[k] += mass * pk;
                    h -= pk * l;
                }
                conditional += mass * h;
            }
            (evidence, conditional)
        })
        .collect();
    let mut evidence = vec![0.0; table.len()];
    let mut conditional = 0.0;
    for (e, c) in blocks {
        for (acc, x) in evidence.iter_mut().zip(e) {
            *acc += x;
        }
        conditional += c;
    }
    let total: f64 = evidence.iter().sum();
    let marginal: f64 = -evidence.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>();
    (total, marginal - conditional)
}

/// Draws `p ~ Dirichlet(a)` through normalised Gamma variates.
fn sample_dirichlet(a: &[f64], rng: &mut StreamRng) -> Vec<f64> {
    let mut x: Vec<f64> = a.iter().map(|&ai| GammaDist::new(ai, 1.0).expect("positive shape").sample(rng)).collect();
    let s: f64 = x.iter().sum();
    for xi in &mut x {
        *xi /= s;
    }
    x
}

/// Log-density in `dγ` of the Dirichlet(a) law of `p = γ²`:
/// `ln Dir(p; a) + (d-1) ln 2 + Σ ln γ_i`.
fn ln_dirichlet_on_sphere(a: &[f64], ln_norm: f64, gamma: &[f64]) -> f64 {
    let d = a.len() as f64;
    let mut acc = ln_norm + (d - 1.0) * std::f64::consts::LN_2;
    for (&ai, &g) in a.iter().zip(gamma) {
        // (a-1) ln p + ln γ = (2a - 1) ln γ
        acc += (2.0 * ai - 1.0) * g.ln();
    }
    acc
}

pub const MIN_MC_SAMPLES: usize = 1000;

struct OuterTerm {
    value: f64,
    rel_var: f64,
}

/// Nested Monte Carlo estimate of `I` for any `d`:
/// `(1/M_o) Σ_k [ln P(n_k | γ_k) - ln P̂(n_k)]` with `γ_k ~ K`,
/// `n_k ~ Multinomial(N, γ_k²)` and `P̂` an inner importance-sampling average.
///
/// The finite inner sample biases the estimate upward by about
/// `E[Var(w)/w̄²] / (2 M_i)`; that estimate is reported as `bias`.
pub fn mutual_info_multinomial_mc<P: PriorDensity + ?Sized>(
    prior: &P,
    n_trials: u64,
    config: &NestedMcConfig,
    seed: RngSeed,
) -> Result<MutualInfoEstimate> {
    for got in [config.outer, config.inner] {
        if got < MIN_MC_SAMPLES {
            return Err(Error::TooFewSamples { min: MIN_MC_SAMPLES, got });
        }
    }
    let ln_inner = (config.inner as f64).ln();
    let terms = try_par_samples(seed, config.outer, |rng, _| -> Result<OuterTerm> {
        let g = prior.sample(rng as &mut dyn RngCore);
        let p: Vec<f64> = g.entries().iter().map(|x| x * x).collect();
        let counts = TrialCounts::sample(n_trials, &p, rng);
        let coefficient = counts.ln_multinomial_coefficient();
        let c = counts.counts();
        let ll = coefficient + ln_kernel(c, p.iter().copied());
        let alpha: Vec<f64> = c.iter().map(|&k| k as f64 + 0.5).collect();
        let dir_norm = ln_gamma(alpha.iter().sum::<f64>()) - alpha.iter().map(|&x| ln_gamma(x)).sum::<f64>();
        let mut ln_w = Vec::with_capacity(config.inner);
        for _ in 0..config.inner {
            let lw = match config.proposal {
                InnerProposal::Prior => {
                    let gj = prior.sample(rng as &mut dyn RngCore);
                    ln_kernel(c, gj.entries().iter().map(|x| x * x))
                }
                InnerProposal::Defensive { prior_weight } => {
                    let gj = if rng.random::<f64>() < prior_weight {
                        prior.sample(rng as &mut dyn RngCore)
                    } else {
                        let pj = sample_dirichlet(&alpha, rng);
                        GammaVector::from_trusted(pj.iter().map(|x| x.sqrt()).collect())
                    };
                    let lk = prior.ln_density(&gj);
                    if lk == f64::NEG_INFINITY {
                        f64::NEG_INFINITY
                    } else {
                        let lq_prior = prior_weight.ln() + lk;
                        let lq_dir = (1.0 - prior_weight).ln() + ln_dirichlet_on_sphere(&alpha, dir_norm, gj.entries());
                        let lq = log_sum_exp([lq_prior, lq_dir]);
                        ln_kernel(c, gj.entries().iter().map(|x| x * x)) + lk - lq
                    }
                }
            };
            ln_w.push(if lw.is_nan() { f64::NEG_INFINITY } else { lw });
        }
        let ln_sum = log_sum_exp(ln_w.iter().copied());
        if !ln_sum.is_finite() {
            return Err(Error::InnerUnderflow);
        }
        let ln_evidence = coefficient + ln_sum - ln_inner;
        // Relative variance of the normalised weights.
        let m = config.inner as f64;
        let sq: f64 = ln_w.iter().map(|&l| (2.0 * (l - ln_sum)).exp()).sum();
        let rel_var = (m * sq - 1.0).max(0.0);
        Ok(OuterTerm { value: ll - ln_evidence, rel_var })
    })?;
    let values: Vec<f64> = terms.iter().map(|t| t.value).collect();
    let est = mean_stderr(&values);
    let bias = terms.iter().map(|t| t.rel_var).sum::<f64>() / terms.len() as f64 / (2.0 * config.inner as f64);
    Ok(MutualInfoEstimate {
        value: est.mean,
        stderr: est.stderr,
        n: n_trials,
        method: MutualInfoMethod::NestedMonteCarlo,
        bias: Some(bias),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{AlphaPrior, OrthantUniform};

    #[test]
    fn binary_exact_small_n_by_hand() {
        // N = 1, uniform α prior: P(n=0) = P(n=1) = ½, so H(n) = ln 2 and
        // H(n|α) = (2/π) ∫ h(cos² α) dα = 2 ln 2 - 1 (checked by scipy quad),
        // so I = 1 - ln 2.
        let est = mutual_info_binary_exact(&AlphaPrior::uniform(), 1, &QuadratureConfig::default()).unwrap();
        assert!((est.value - (1.0 - 2f64.ln())).abs() < 1e-9, "{}", est.value);
    }

    #[test]
    fn binary_exact_zero_trials() {
        let est = mutual_info_binary_exact(&AlphaPrior::uniform(), 0, &QuadratureConfig::default()).unwrap();
        assert!(est.value.abs() < 1e-12);
    }

    #[test]
    fn binary_exact_reference_values() {
        // Exact I - ½ ln N for the uniform α prior, from an independent
        // quadrature of the binomial sums (scipy, 2·10⁴ nodes).
        for (n, target) in [(256u64, -0.24129), (1024, -0.25790)] {
            let est = mutual_info_binary_exact(&AlphaPrior::uniform(), n, &QuadratureConfig::default()).unwrap();
            let shifted = est.value - 0.5 * (n as f64).ln();
            assert!((shifted - target).abs() < 5e-5, "N={n}: {shifted}");
        }
    }

    #[test]
    fn nested_mc_matches_exact_binary() {
        let prior = AlphaPrior::Bloch;
        let exact = mutual_info_binary_exact(&prior, 64, &QuadratureConfig::default()).unwrap();
        for proposal in [InnerProposal::Prior, InnerProposal::Defensive { prior_weight: 0.1 }] {
            let config = NestedMcConfig { outer: 8000, inner: 2000, proposal };
            let mc = mutual_info_multinomial_mc(&prior, 64, &config, RngSeed::new(2, 0)).unwrap();
            let bias = mc.bias.unwrap();
            assert!((mc.value - bias - exact.value).abs() < 5.0 * mc.stderr + bias, "{proposal:?}: {} vs {}", mc.value, exact.value);
        }
    }

    #[test]
    fn nested_mc_one_dimension_is_zero() {
        let prior = OrthantUniform::new(1).unwrap();
        let mc = mutual_info_multinomial_mc(&prior, 100, &NestedMcConfig { outer: 1000, inner: 1000, ..Default::default() }, RngSeed::default()).unwrap();
        assert!(mc.value.abs() < 1e-12);
    }

    #[test]
    fn nested_mc_deterministic() {
        let prior = OrthantUniform::new(3).unwrap();
        let config = NestedMcConfig { outer: 1000, inner: 1000, ..Default::default() };
        let a = mutual_info_multinomial_mc(&prior, 50, &config, RngSeed::new(9, 1)).unwrap();
        let b = mutual_info_multinomial_mc(&prior, 50, &config, RngSeed::new(9, 1)).unwrap();
        assert_eq!(a, b);
    }
}
