//! Outcome tallies and the multinomial likelihood with its Gaussian
//! approximation in square-root coordinates.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, ln_gamma, Scalar};
use crate::statespace::{GammaVector, ProbabilityVector};

/// Outcome counts `n = (n₁, …, n_d)` from `N = Σ n_i` trials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialCounts {
    counts: Vec<u64>,
}

impl TrialCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Dimension { min: 1, got: 0 });
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Draws `N` trials from the multinomial with cell probabilities `p`.
    pub fn sample<R: Rng + ?Sized>(trials: u64, p: &[f64], rng: &mut R) -> Self {
        let mut remaining = trials;
        let mut mass = 1.0f64;
        let mut counts = Vec::with_capacity(p.len());
        for (i, &pi) in p.iter().enumerate() {
            if i + 1 == p.len() {
                counts.push(remaining);
                break;
            }
            let q = if mass > 0.0 { (pi / mass).clamp(0.0, 1.0) } else { 0.0 };
            let k = if remaining == 0 || q == 0.0 {
                0
            } else if q >= 1.0 {
                remaining
            } else {
                Binomial::new(remaining, q).expect("valid binomial").sample(rng)
            };
            counts.push(k);
            remaining -= k;
            mass -= pi;
        }
        Self { counts }
    }

    /// `ln(N! / Π n_i!)`.
    pub fn ln_multinomial_coefficient(&self) -> f64 {
        let n = self.total() as f64;
        ln_gamma(n + 1.0) - self.counts.iter().map(|&k| ln_gamma(k as f64 + 1.0)).sum::<f64>()
    }
}

/// `Σ n_i ln p_i` with the convention `0 · ln 0 = 0`; `-∞` when some `p_i = 0`
/// has `n_i > 0`.
pub(crate) fn ln_kernel(counts: &[u64], p: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = 0.0;
    for (&k, pi) in counts.iter().zip(p) {
        if k > 0 {
            if pi <= 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += k as f64 * pi.ln();
        }
    }
    acc
}

/// Exact multinomial log-probability `ln P(n | p)`.
pub fn multinomial_log_pmf<T: Scalar>(counts: &TrialCounts, p: &ProbabilityVector<T>) -> Result<T> {
    if counts.dim() != p.dim() {
        return Err(Error::DimensionMismatch { left: counts.dim(), right: p.dim() });
    }
    let kernel = ln_kernel(&counts.counts, p.entries().iter().map(|&x| crate::scalar::to_f64(x)));
    Ok(lit(counts.ln_multinomial_coefficient() + kernel))
}

/// Square roots of the observed frequencies, `(√(n₁/N), …, √(n_d/N))`.
pub fn freq_sqrt<T: Scalar>(counts: &TrialCounts) -> Result<GammaVector<T>> {
    let n = counts.total();
    if n == 0 {
        return Err(Error::OutOfRange("frequencies undefined for zero trials".into()));
    }
    let n: T = lit(n as f64);
    let g: Vec<T> = counts.counts.iter().map(|&k| (lit::<T>(k as f64) / n).sqrt()).collect();
    Ok(GammaVector::from_trusted(g))
}

/// Log of the large-`N` Gaussian form of the multinomial in γ coordinates:
/// `-((d-1)/2) ln(2πN) - Σ ln γ_i - 2N |γ⁽ⁿ⁾ - γ|²`.
///
/// Invalid on the boundary of probability space, where some `γ_i = 0`.
pub fn gaussian_log_pmf<T: Scalar>(counts: &TrialCounts, gamma: &GammaVector<T>) -> Result<T> {
    if counts.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch { left: counts.dim(), right: gamma.dim() });
    }
    if gamma.entries().iter().any(|&g| g <= T::zero()) {
        return Err(Error::BoundaryPoint);
    }
    let observed: GammaVector<T> = freq_sqrt(counts)?;
    let n: T = lit(counts.total() as f64);
    let d: T = lit(counts.dim() as f64);
    let dist_sq: T = observed
        .entries()
        .iter()
        .zip(gamma.entries())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    let ln_prod: T = gamma.entries().iter().map(|g| g.ln()).sum();
    Ok(-(d - T::one()) / lit(2.0) * (T::TAU() * n).ln() - ln_prod - lit::<T>(2.0) * n * dist_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::gamma_of;
    use crate::rng::RngSeed;
    use approx::assert_abs_diff_eq;

    fn counts(v: &[u64]) -> TrialCounts {
        TrialCounts::new(v.to_vec()).unwrap()
    }

    fn probs(v: &[f64]) -> ProbabilityVector<f64> {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn multinomial_examples() {
        let l = multinomial_log_pmf(&counts(&[1, 1]), &probs(&[0.5, 0.5])).unwrap();
        assert_abs_diff_eq!(l, 0.5f64.ln(), epsilon = 1e-14);
        let l = multinomial_log_pmf(&counts(&[0, 1, 0]), &probs(&[0.2, 0.5, 0.3])).unwrap();
        assert_abs_diff_eq!(l, 0.5f64.ln(), epsilon = 1e-14);
        let l = multinomial_log_pmf(&counts(&[10, 0]), &probs(&[0.9, 0.1])).unwrap();
        assert_abs_diff_eq!(l, 10.0 * 0.9f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn multinomial_zero_probability_conventions() {
        let l = multinomial_log_pmf(&counts(&[3, 0]), &probs(&[1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(l, 0.0, epsilon = 1e-14);
        let l = multinomial_log_pmf(&counts(&[2, 1]), &probs(&[1.0, 0.0])).unwrap();
        assert_eq!(l, f64::NEG_INFINITY);
        assert!(multinomial_log_pmf(&counts(&[1, 1, 1]), &probs(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn freq_sqrt_examples() {
        let g: GammaVector<f64> = freq_sqrt(&counts(&[1, 3])).unwrap();
        assert_abs_diff_eq!(g.entries()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.entries()[1], 3f64.sqrt() / 2.0, epsilon = 1e-15);
        let g: GammaVector<f64> = freq_sqrt(&counts(&[7, 0, 0])).unwrap();
        assert_eq!(g.entries(), &[1.0, 0.0, 0.0]);
        let c = counts(&[3, 5, 11, 1]);
        let g: GammaVector<f64> = freq_sqrt(&c).unwrap();
        for (gi, &k) in g.entries().iter().zip(c.counts()) {
            assert_abs_diff_eq!(gi * gi, k as f64 / 20.0, epsilon = 1e-14);
        }
        assert!(freq_sqrt::<f64>(&counts(&[0, 0])).is_err());
    }

    #[test]
    fn gaussian_close_to_exact_at_centre() {
        let c = counts(&[5000, 5000]);
        let p = probs(&[0.5, 0.5]);
        let exact = multinomial_log_pmf(&c, &p).unwrap();
        let approx = gaussian_log_pmf(&c, &gamma_of(&p)).unwrap();
        assert!((exact - approx).abs() < 1e-3);
    }

    #[test]
    fn gaussian_quadratic_term_vanishes_at_observed_frequency() {
        let c = counts(&[300, 700]);
        let g: GammaVector<f64> = freq_sqrt(&c).unwrap();
        let l = gaussian_log_pmf(&c, &g).unwrap();
        let prefactor = -0.5 * (std::f64::consts::TAU * 1000.0).ln() - g.entries().iter().map(|x| x.ln()).sum::<f64>();
        assert_abs_diff_eq!(l, prefactor, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_rejects_boundary() {
        let g = GammaVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(gaussian_log_pmf(&counts(&[1, 0]), &g), Err(Error::BoundaryPoint));
    }

    #[test]
    fn gaussian_pointwise_error_scan() {
        // Exhaustive scan over n = 0..N of |G(n) - B(n)| at N = 10⁴, p = (0.3, 0.7).
        // A direct scan (independent numpy evaluation) gives a supremum of 2.79e-5.
        let n_trials = 10_000u64;
        let p = probs(&[0.3, 0.7]);
        let g = gamma_of(&p);
        let sup = (0..=n_trials)
            .map(|k| {
                let c = counts(&[k, n_trials - k]);
                let b = multinomial_log_pmf(&c, &p).unwrap().exp();
                let a = gaussian_log_pmf(&c, &g).unwrap().exp();
                (a - b).abs()
            })
            .fold(0.0, f64::max);
        assert!((sup - 2.79e-5).abs() < 1e-7, "{sup}");
    }

    #[test]
    fn multinomial_sampler_preserves_total() {
        let mut rng = RngSeed::new(3, 0).rng();
        for _ in 0..100 {
            let c = TrialCounts::sample(1000, &[0.2, 0.0, 0.5, 0.3], &mut rng);
            assert_eq!(c.total(), 1000);
            assert_eq!(c.counts()[1], 0);
        }
        let mut acc = 0u64;
        for _ in 0..2000 {
            acc += TrialCounts::sample(100, &[0.25, 0.75], &mut rng).counts()[0];
        }
        let mean = acc as f64 / 2000.0;
        assert!((mean - 25.0).abs() < 3.0 * (100.0f64 * 0.1875 / 2000.0).sqrt());
    }
}
