//! Posterior densities `P(γ | n) = P(n | γ) K(γ) / P(n)`.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::likelihood::{ln_kernel, TrialCounts};
use crate::measures::PriorDensity;
use crate::quadrature::CompositeRule;
use crate::rng::{par_samples, RngSeed};
use crate::statespace::GammaVector;
use crate::stats::log_sum_exp;
use crate::Gamma;

/// Settings for [`posterior_density`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorConfig {
    /// Gauss–Legendre panels on `[0, π/2]` for binary normalisation.
    pub panels: usize,
    /// Cells in the tabulated inverse CDF used for binary sampling.
    pub table_cells: usize,
    /// Prior draws backing the particle approximation for `d > 2`.
    pub particles: usize,
    /// Smallest acceptable effective sample size of the particle weights.
    pub min_ess: f64,
    pub seed: RngSeed,
}

impl Default for PosteriorConfig {
    fn default() -> Self {
        Self { panels: 2048, table_cells: 1 << 15, particles: 100_000, min_ess: 100.0, seed: RngSeed::default() }
    }
}

/// Normalised posterior: a [`PriorDensity`] for the next round of inference.
#[derive(Debug, Clone)]
pub enum Posterior<P> {
    Binary(BinaryPosterior<P>),
    Particles(ParticlePosterior<P>),
}

/// Two outcomes: normalised by quadrature over α, sampled from a tabulated CDF.
#[derive(Debug, Clone)]
pub struct BinaryPosterior<P> {
    prior: P,
    counts: TrialCounts,
    ln_evidence: f64,
    lo: f64,
    width: f64,
    cdf: Vec<f64>,
    mean_alpha: f64,
    sd_alpha: f64,
}

/// General `d`: self-normalised importance sampling from the prior. The
/// density is exact up to the estimated evidence; sampling resamples particles.
#[derive(Debug, Clone)]
pub struct ParticlePosterior<P> {
    prior: P,
    counts: TrialCounts,
    ln_evidence: f64,
    particles: Vec<Gamma>,
    cumulative: Vec<f64>,
    ess: f64,
}

fn ln_likelihood(counts: &TrialCounts, coefficient: f64, gamma: &[f64]) -> f64 {
    coefficient + ln_kernel(counts.counts(), gamma.iter().map(|g| g * g))
}

/// Posterior of `prior` after observing `counts`.
///
/// With no trials the posterior equals the prior and the evidence is exactly 1.
pub fn posterior_density<P: PriorDensity + Clone>(prior: &P, counts: &TrialCounts, config: &PosteriorConfig) -> Result<Posterior<P>> {
    if prior.dim() != counts.dim() {
        return Err(Error::DimensionMismatch { left: prior.dim(), right: counts.dim() });
    }
    if prior.dim() == 2 {
        binary(prior, counts, config).map(Posterior::Binary)
    } else {
        particles(prior, counts, config).map(Posterior::Particles)
    }
}

fn binary<P: PriorDensity + Clone>(prior: &P, counts: &TrialCounts, config: &PosteriorConfig) -> Result<BinaryPosterior<P>> {
    use std::f64::consts::FRAC_PI_2;
    let coefficient = counts.ln_multinomial_coefficient();
    let ln_joint = |alpha: f64| {
        let g = [alpha.cos().max(0.0), alpha.sin()];
        let k = prior.ln_density(&GammaVector::from_trusted(g.to_vec()));
        if k == f64::NEG_INFINITY {
            k
        } else {
            k + ln_likelihood(counts, coefficient, &g)
        }
    };
    let ln_evidence = if counts.total() == 0 {
        0.0
    } else {
        let rule = CompositeRule::new(0.0, FRAC_PI_2, config.panels, 8);
        let terms: Vec<f64> = rule.nodes.iter().zip(&rule.weights).map(|(&a, &w)| w.ln() + ln_joint(a)).collect();
        log_sum_exp(terms.iter().copied())
    };
    if !ln_evidence.is_finite() {
        return Err(Error::NonFiniteLogDensity { value: ln_evidence });
    }
    // Tabulated CDF over the α-window holding the posterior mass.
    let cells = config.table_cells.max(16);
    let coarse = CompositeRule::new(0.0, FRAC_PI_2, cells, 1);
    let ln_mass: Vec<f64> = coarse.nodes.iter().map(|&a| ln_joint(a) - ln_evidence).collect();
    let peak = ln_mass.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let keep: Vec<usize> = (0..cells).filter(|&i| ln_mass[i] > peak - 60.0).collect();
    let (first, last) = (keep[0], *keep.last().expect("non-empty"));
    let lo = FRAC_PI_2 * first as f64 / cells as f64;
    let hi = FRAC_PI_2 * (last + 1) as f64 / cells as f64;
    let fine = CompositeRule::new(lo, hi, cells, 1);
    let mut cdf = Vec::with_capacity(cells);
    let (mut acc, mut m1, mut m2) = (0.0, 0.0, 0.0);
    for &a in &fine.nodes {
        let m = (ln_joint(a) - ln_evidence).exp();
        acc += m;
        m1 += m * a;
        m2 += m * a * a;
        cdf.push(acc);
    }
    for c in &mut cdf {
        *c /= acc;
    }
    let mean_alpha = m1 / acc;
    let sd_alpha = (m2 / acc - mean_alpha * mean_alpha).max(0.0).sqrt();
    Ok(BinaryPosterior {
        prior: prior.clone(),
        counts: counts.clone(),
        ln_evidence,
        lo,
        width: (hi - lo) / cells as f64,
        cdf,
        mean_alpha,
        sd_alpha,
    })
}

fn particles<P: PriorDensity + Clone>(prior: &P, counts: &TrialCounts, config: &PosteriorConfig) -> Result<ParticlePosterior<P>> {
    let coefficient = counts.ln_multinomial_coefficient();
    let draws: Vec<(Gamma, f64)> = par_samples(config.seed, config.particles, |rng, _| {
        let g = prior.sample(rng as &mut dyn RngCore);
        let l = ln_likelihood(counts, coefficient, g.entries());
        (g, l)
    });
    let ln_w: Vec<f64> = draws.iter().map(|(_, l)| *l).collect();
    let ln_sum = log_sum_exp(ln_w.iter().copied());
    if !ln_sum.is_finite() {
        return Err(Error::InnerUnderflow);
    }
    let ln_evidence = ln_sum - (config.particles as f64).ln();
    let mut cumulative = Vec::with_capacity(ln_w.len());
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for &l in &ln_w {
        let w = (l - ln_sum).exp();
        acc += w;
        acc_sq += w * w;
        cumulative.push(acc);
    }
    let ess = 1.0 / acc_sq;
    if ess < config.min_ess {
        return Err(Error::LowEffectiveSampleSize { ess, min: config.min_ess });
    }
    Ok(ParticlePosterior {
        prior: prior.clone(),
        counts: counts.clone(),
        ln_evidence,
        particles: draws.into_iter().map(|(g, _)| g).collect(),
        cumulative,
        ess,
    })
}

impl<P: PriorDensity> Posterior<P> {
    /// `ln P(n)`, the log evidence.
    pub fn ln_evidence(&self) -> f64 {
        match self {
            Posterior::Binary(b) => b.ln_evidence,
            Posterior::Particles(p) => p.ln_evidence,
        }
    }

    /// Effective sample size of the particle weights; `None` for binary posteriors.
    pub fn effective_sample_size(&self) -> Option<f64> {
        match self {
            Posterior::Binary(_) => None,
            Posterior::Particles(p) => Some(p.ess),
        }
    }

    /// Posterior mean and standard deviation of α; `None` unless `d = 2`.
    pub fn alpha_moments(&self) -> Option<(f64, f64)> {
        match self {
            Posterior::Binary(b) => Some((b.mean_alpha, b.sd_alpha)),
            Posterior::Particles(_) => None,
        }
    }

    fn parts(&self) -> (&P, &TrialCounts, f64) {
        match self {
            Posterior::Binary(b) => (&b.prior, &b.counts, b.ln_evidence),
            Posterior::Particles(p) => (&p.prior, &p.counts, p.ln_evidence),
        }
    }
}

impl<P: PriorDensity> PriorDensity for Posterior<P> {
    fn name(&self) -> &str {
        "posterior"
    }

    fn dim(&self) -> usize {
        self.parts().0.dim()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Gamma {
        match self {
            Posterior::Binary(b) => {
                let u: f64 = rng.random();
                let i = b.cdf.partition_point(|&c| c < u).min(b.cdf.len() - 1);
                let a = b.lo + b.width * (i as f64 + rng.random::<f64>());
                GammaVector::from_trusted(vec![a.cos().max(0.0), a.sin()])
            }
            Posterior::Particles(p) => {
                let u: f64 = rng.random::<f64>() * p.cumulative.last().copied().unwrap_or(1.0);
                let i = p.cumulative.partition_point(|&c| c < u).min(p.particles.len() - 1);
                p.particles[i].clone()
            }
        }
    }

    fn ln_density(&self, gamma: &Gamma) -> f64 {
        let (prior, counts, ln_evidence) = self.parts();
        let k = prior.ln_density(gamma);
        if k == f64::NEG_INFINITY {
            return k;
        }
        k + ln_likelihood(counts, counts.ln_multinomial_coefficient(), gamma.entries()) - ln_evidence
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{AlphaPrior, OrthantUniform};
    use std::f64::consts::FRAC_PI_2;

    fn counts(v: &[u64]) -> TrialCounts {
        TrialCounts::new(v.to_vec()).unwrap()
    }

    #[test]
    fn no_data_returns_prior() {
        let prior = AlphaPrior::ramp(0.5).unwrap();
        let post = posterior_density(&prior, &counts(&[0, 0]), &PosteriorConfig::default()).unwrap();
        for i in 1..50 {
            let g = GammaVector::from_alpha(FRAC_PI_2 * i as f64 / 50.0).unwrap();
            assert!((post.ln_density(&g).exp() - prior.ln_density(&g).exp()).abs() < 1e-12);
        }
        let prior = OrthantUniform::new(3).unwrap();
        let post = posterior_density(&prior, &counts(&[0, 0, 0]), &PosteriorConfig::default()).unwrap();
        let g = GammaVector::new(vec![0.6, 0.0, 0.8]).unwrap();
        assert!((post.ln_density(&g).exp() - prior.ln_density(&g).exp()).abs() < 1e-12);
    }

    #[test]
    fn binary_posterior_normalised() {
        let prior = AlphaPrior::uniform();
        let post = posterior_density(&prior, &counts(&[30, 70]), &PosteriorConfig::default()).unwrap();
        let rule = CompositeRule::new(0.0, FRAC_PI_2, 4096, 8);
        let total = rule.integrate(|a| post.ln_density(&GammaVector::from_alpha(a).unwrap()).exp());
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }

    #[test]
    fn uniform_prior_posterior_is_closed_form() {
        // Uniform α prior: P(α | n) ∝ cos^{2n₁} α sin^{2n₂} α, a Beta(n₁+½, n₂+½)
        // in p₁ = cos² α after the change of variables.
        let c = counts(&[3, 5]);
        let post = posterior_density(&AlphaPrior::uniform(), &c, &PosteriorConfig::default()).unwrap();
        let beta = statrs::function::beta::ln_beta(3.5, 5.5);
        for i in 1..20 {
            let a = FRAC_PI_2 * i as f64 / 20.0;
            let p1: f64 = a.cos().powi(2);
            // dp₁/dα = 2 cos α sin α
            let expected = (2.5 * p1.ln() + 4.5 * (1.0 - p1).ln() - beta).exp() * 2.0 * a.cos() * a.sin();
            let got = post.ln_density(&GammaVector::from_alpha(a).unwrap()).exp();
            assert!((got - expected).abs() < 1e-10 * expected.max(1.0), "{a}: {got} vs {expected}");
        }
    }

    #[test]
    fn posterior_mean_near_observed_angle() {
        let post = posterior_density(&AlphaPrior::uniform(), &counts(&[2500, 7500]), &PosteriorConfig::default()).unwrap();
        let (mean, sd) = post.alpha_moments().unwrap();
        assert!((mean - std::f64::consts::FRAC_PI_3).abs() < 3.0 * sd, "{mean} ± {sd}");
        assert!((sd - 0.005).abs() < 2e-4);
    }

    fn gaussian_sup_error(n1: u64, n2: u64) -> (f64, f64) {
        let n = (n1 + n2) as f64;
        let post = posterior_density(&AlphaPrior::uniform(), &counts(&[n1, n2]), &PosteriorConfig::default()).unwrap();
        let centre = (n1 as f64 / n).sqrt().acos();
        let peak = (2.0 * n / std::f64::consts::PI).sqrt();
        let sup = (0..=20_000)
            .map(|i| centre - 0.05 + 0.1 * i as f64 / 20_000.0)
            .map(|a| {
                let exact = post.ln_density(&GammaVector::from_alpha(a).unwrap()).exp();
                (exact - peak * (-2.0 * n * (a - centre).powi(2)).exp()).abs()
            })
            .fold(0.0, f64::max);
        (sup, sup / peak)
    }

    #[test]
    fn posterior_matches_narrow_gaussian() {
        // Sup-norm error in density units; scipy evaluation of the Beta form
        // gives 2.0e-3 at p = ½ and a relative error of 1.1e-3 at p = ¼.
        let (abs, _) = gaussian_sup_error(5000, 5000);
        assert!(abs < 1e-2, "{abs}");
        let (_, rel) = gaussian_sup_error(2500, 7500);
        assert!(rel < 1e-2, "{rel}");
    }

    #[test]
    fn binary_sampler_matches_mean() {
        let post = posterior_density(&AlphaPrior::Bloch, &counts(&[40, 60]), &PosteriorConfig::default()).unwrap();
        let rule = CompositeRule::new(0.0, FRAC_PI_2, 4096, 8);
        let mean = rule.integrate(|a| a * post.ln_density(&GammaVector::from_alpha(a).unwrap()).exp());
        let mut rng = RngSeed::new(4, 0).rng();
        let draws: Vec<f64> = (0..20_000).map(|_| post.sample(&mut rng).alpha()).collect();
        let est = crate::stats::mean_stderr(&draws);
        assert!((est.mean - mean).abs() < 4.0 * est.stderr, "{} vs {mean}", est.mean);
    }

    #[test]
    fn particle_posterior_agrees_with_dirichlet() {
        // Orthant-uniform prior pulls back to Dirichlet(½, …); its posterior is
        // Dirichlet(n + ½). Compare the evidence to the closed form.
        let c = counts(&[2, 5, 3]);
        let prior = OrthantUniform::new(3).unwrap();
        let post = posterior_density(&prior, &c, &PosteriorConfig::default()).unwrap();
        let ln_b = |a: &[f64]| {
            a.iter().map(|&x| statrs::function::gamma::ln_gamma(x)).sum::<f64>()
                - statrs::function::gamma::ln_gamma(a.iter().sum())
        };
        let exact = c.ln_multinomial_coefficient() + ln_b(&[2.5, 5.5, 3.5]) - ln_b(&[0.5, 0.5, 0.5]);
        assert!((post.ln_evidence() - exact).abs() < 0.02, "{} vs {exact}", post.ln_evidence());
        assert!(post.effective_sample_size().unwrap() > 100.0);
    }

    #[test]
    fn particle_posterior_reports_low_ess() {
        let c = counts(&[4000, 3000, 3000]);
        let prior = OrthantUniform::new(3).unwrap();
        let config = PosteriorConfig { particles: 5000, ..PosteriorConfig::default() };
        assert!(matches!(posterior_density(&prior, &c, &config), Err(Error::LowEffectiveSampleSize { .. })));
    }
}
