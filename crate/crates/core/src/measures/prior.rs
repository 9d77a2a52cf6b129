//! A priori measures on probability space.
//!
//! Densities are taken with respect to the surface element `dγ` on the positive
//! orthant of the unit sphere. For two outcomes `γ = (cos α, sin α)` and the
//! surface element is `dα`, so a binary prior is just a density over
//! `α ∈ [0, π/2]`.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use rand::{Rng, RngCore};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::measures::k_opt;
use crate::statespace::{sample_real_sphere, GammaVector};
use crate::Gamma;

/// A prior density on the γ-orthant together with a sampler for it.
pub trait PriorDensity: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn sample(&self, rng: &mut dyn RngCore) -> Gamma;

    /// Log-density with respect to `dγ`; `-∞` outside the support.
    fn ln_density(&self, gamma: &Gamma) -> f64;

    /// Closed-form differential entropy `-∫ K ln K dγ`, when known.
    fn exact_entropy(&self) -> Option<f64> {
        None
    }
}

impl<P: PriorDensity + ?Sized> PriorDensity for &P {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Gamma {
        (**self).sample(rng)
    }
    fn ln_density(&self, gamma: &Gamma) -> f64 {
        (**self).ln_density(gamma)
    }
    fn exact_entropy(&self) -> Option<f64> {
        (**self).exact_entropy()
    }
}

/// Uniform surface measure on the positive orthant of `S^{d-1}`: the optimal
/// prior, with constant density [`k_opt`].
#[derive(Debug, Clone)]
pub struct OrthantUniform {
    dim: usize,
    ln_k: f64,
}

impl OrthantUniform {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { min: 1, got: 0 });
        }
        Ok(Self { dim, ln_k: k_opt::<f64>(dim).ln() })
    }
}

impl PriorDensity for OrthantUniform {
    fn name(&self) -> &str {
        "orthant-uniform"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Gamma {
        let s = sample_real_sphere::<f64, _>(self.dim, rng).expect("dimension validated");
        GammaVector::from_trusted(s.components().iter().map(|x| x.abs()).collect())
    }

    fn ln_density(&self, _gamma: &Gamma) -> f64 {
        self.ln_k
    }

    fn exact_entropy(&self) -> Option<f64> {
        Some(-self.ln_k)
    }
}

/// Binary priors, given as densities over `α ∈ [0, π/2]`.
#[derive(Debug, Clone)]
pub enum AlphaPrior {
    /// Uniform on `[lo, hi] ⊆ [0, π/2]`.
    Interval { lo: f64, hi: f64 },
    /// `K(α) = 2 cos α sin α`: the measure induced by the uniform Bloch sphere.
    Bloch,
    /// Gaussian bump `∝ exp(-(α-c)²/2w²)` truncated to `[0, π/2]`.
    Bump { center: f64, width: f64, mass: f64 },
    /// `K(α) = (2/π)(1 + s(4α/π - 1))` with `|s| ≤ 1`.
    Ramp { slope: f64 },
}

impl AlphaPrior {
    pub fn uniform() -> Self {
        AlphaPrior::Interval { lo: 0.0, hi: FRAC_PI_2 }
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo < hi && hi <= FRAC_PI_2) {
            return Err(Error::OutOfRange(format!("interval [{lo}, {hi}] not inside [0, π/2]")));
        }
        Ok(AlphaPrior::Interval { lo, hi })
    }

    pub fn bump(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && (0.0..=FRAC_PI_2).contains(&center)) {
            return Err(Error::OutOfRange(format!("bump center {center}, width {width}")));
        }
        let n = Normal::new(center, width).expect("positive width");
        let mass = n.cdf(FRAC_PI_2) - n.cdf(0.0);
        Ok(AlphaPrior::Bump { center, width, mass })
    }

    pub fn ramp(slope: f64) -> Result<Self> {
        if slope.abs() > 1.0 {
            return Err(Error::OutOfRange(format!("ramp slope {slope} outside [-1, 1]")));
        }
        Ok(AlphaPrior::Ramp { slope })
    }

    /// `K(α)`, zero outside `[0, π/2]`.
    pub fn density(&self, alpha: f64) -> f64 {
        if !(0.0..=FRAC_PI_2).contains(&alpha) {
            return 0.0;
        }
        match *self {
            AlphaPrior::Interval { lo, hi } => {
                if (lo..=hi).contains(&alpha) {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            AlphaPrior::Bloch => (2.0 * alpha).sin(),
            AlphaPrior::Bump { center, width, mass } => {
                Normal::new(center, width).expect("positive width").pdf(alpha) / mass
            }
            AlphaPrior::Ramp { slope } => FRAC_2_PI * (1.0 + slope * (4.0 * alpha / PI - 1.0)),
        }
    }

    /// Cumulative distribution on `[0, π/2]`.
    pub fn cdf(&self, alpha: f64) -> f64 {
        let a = alpha.clamp(0.0, FRAC_PI_2);
        match *self {
            AlphaPrior::Interval { lo, hi } => ((a - lo) / (hi - lo)).clamp(0.0, 1.0),
            AlphaPrior::Bloch => a.sin().powi(2),
            AlphaPrior::Bump { center, width, mass } => {
                let n = Normal::new(center, width).expect("positive width");
                (n.cdf(a) - n.cdf(0.0)) / mass
            }
            AlphaPrior::Ramp { slope } => {
                let u = 4.0 * a / PI - 1.0;
                0.5 * ((u + 1.0) + 0.5 * slope * (u * u - 1.0))
            }
        }
    }

    pub fn sample_alpha(&self, rng: &mut dyn RngCore) -> f64 {
        match *self {
            AlphaPrior::Interval { lo, hi } => rng.random_range(lo..=hi),
            AlphaPrior::Bloch => {
                let p1: f64 = rng.random();
                p1.sqrt().acos()
            }
            // Normal proposal with truncation; the uniform envelope is used
            // only when little of the Gaussian lies inside the interval.
            AlphaPrior::Bump { center, width, mass } if mass > 0.05 => {
                let normal = rand_distr::Normal::new(center, width).expect("positive width");
                loop {
                    let a = rand_distr::Distribution::sample(&normal, rng);
                    if (0.0..=FRAC_PI_2).contains(&a) {
                        return a;
                    }
                }
            }
            AlphaPrior::Bump { .. } | AlphaPrior::Ramp { .. } => {
                let envelope = self.max_density();
                loop {
                    let a = rng.random_range(0.0..=FRAC_PI_2);
                    let u: f64 = rng.random();
                    if u * envelope <= self.density(a) {
                        return a;
                    }
                }
            }
        }
    }

    fn max_density(&self) -> f64 {
        match *self {
            AlphaPrior::Interval { lo, hi } => 1.0 / (hi - lo),
            AlphaPrior::Bloch => 1.0,
            AlphaPrior::Bump { center, .. } => self.density(center),
            AlphaPrior::Ramp { slope } => FRAC_2_PI * (1.0 + slope.abs()),
        }
    }
}

/// `∫ x ln x dx = x²/2 ln x − x²/4`.
fn xlogx_antiderivative(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        0.5 * x * x * x.ln() - 0.25 * x * x
    }
}

impl PriorDensity for AlphaPrior {
    fn name(&self) -> &str {
        match self {
            AlphaPrior::Interval { lo, hi } if *lo == 0.0 && *hi == FRAC_PI_2 => "uniform",
            AlphaPrior::Interval { .. } => "interval",
            AlphaPrior::Bloch => "bloch",
            AlphaPrior::Bump { .. } => "bump",
            AlphaPrior::Ramp { .. } => "ramp",
        }
    }

    fn dim(&self) -> usize {
        2
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Gamma {
        let a = self.sample_alpha(rng);
        GammaVector::from_trusted(vec![a.cos().max(0.0), a.sin()])
    }

    fn ln_density(&self, gamma: &Gamma) -> f64 {
        self.density(gamma.alpha()).ln()
    }

    fn exact_entropy(&self) -> Option<f64> {
        Some(match *self {
            AlphaPrior::Interval { lo, hi } => (hi - lo).ln(),
            AlphaPrior::Bloch => 1.0 - 2f64.ln(),
            AlphaPrior::Bump { center, width, mass } => {
                let std = Normal::standard();
                let a = (0.0 - center) / width;
                let b = (FRAC_PI_2 - center) / width;
                (2.0 * PI * std::f64::consts::E).sqrt().ln()
                    + (width * mass).ln()
                    + (a * std.pdf(a) - b * std.pdf(b)) / (2.0 * mass)
            }
            AlphaPrior::Ramp { slope } => {
                // h = ln(π/2) − ½ ∫_{-1}^{1} (1+su) ln(1+su) du
                let tail = if slope == 0.0 {
                    0.0
                } else {
                    (xlogx_antiderivative(1.0 + slope) - xlogx_antiderivative(1.0 - slope)) / slope
                };
                FRAC_PI_2.ln() - 0.5 * tail
            }
        })
    }
}

/// `K(α) = 2/π` on `[0, π/2]`.
pub fn uniform_alpha_density() -> AlphaPrior {
    AlphaPrior::uniform()
}

/// `K(α) = 2 cos α sin α`, sampled as `α = arccos √p₁` with `p₁` uniform.
pub fn bloch_alpha_density() -> AlphaPrior {
    AlphaPrior::Bloch
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::CompositeRule;
    use crate::rng::RngSeed;
    use approx::assert_abs_diff_eq;

    fn quadrature_entropy(prior: &AlphaPrior) -> f64 {
        let rule = CompositeRule::new(0.0, FRAC_PI_2, 2048, 8);
        rule.integrate(|a| {
            let k = prior.density(a);
            if k > 0.0 {
                -k * k.ln()
            } else {
                0.0
            }
        })
    }

    #[test]
    fn uniform_and_bloch_values() {
        let u = uniform_alpha_density();
        assert_abs_diff_eq!(u.density(0.3), 2.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(u.density(0.3), 2.0 / PI, epsilon = 1e-15);
        let b = bloch_alpha_density();
        assert_abs_diff_eq!(b.density(PI / 4.0), 1.0, epsilon = 1e-15);
        assert_eq!(b.density(0.0), 0.0);
        assert!(b.density(PI / 4.0) > b.density(PI / 8.0));
        assert_abs_diff_eq!(b.density(PI / 8.0), 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn densities_normalise_by_quadrature() {
        let rule = CompositeRule::new(0.0, FRAC_PI_2, 512, 8);
        for prior in [
            uniform_alpha_density(),
            bloch_alpha_density(),
            AlphaPrior::bump(PI / 4.0, 0.3).unwrap(),
            AlphaPrior::bump(0.2, 0.1).unwrap(),
            AlphaPrior::ramp(0.6).unwrap(),
        ] {
            assert_abs_diff_eq!(rule.integrate(|a| prior.density(a)), 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(prior.cdf(FRAC_PI_2), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(prior.cdf(0.7), rule.integrate(|a| if a < 0.7 { prior.density(a) } else { 0.0 }), epsilon = 2e-3);
        }
    }

    #[test]
    fn closed_form_entropies_match_quadrature() {
        for prior in [
            uniform_alpha_density(),
            bloch_alpha_density(),
            AlphaPrior::bump(PI / 4.0, 0.3).unwrap(),
            AlphaPrior::bump(0.2, 0.1).unwrap(),
            AlphaPrior::ramp(0.6).unwrap(),
            AlphaPrior::ramp(-1.0).unwrap(),
        ] {
            let exact = prior.exact_entropy().unwrap();
            assert_abs_diff_eq!(exact, quadrature_entropy(&prior), epsilon = 1e-6);
        }
    }

    #[test]
    fn samplers_stay_in_support() {
        let mut rng = RngSeed::new(1, 0).rng();
        let p = AlphaPrior::interval(0.5, 0.6).unwrap();
        for _ in 0..1000 {
            let g = p.sample(&mut rng);
            let a = g.alpha();
            assert!((0.5 - 1e-12..=0.6 + 1e-12).contains(&a));
            assert!(p.ln_density(&g).is_finite());
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(AlphaPrior::ramp(1.5).is_err());
        assert!(AlphaPrior::bump(0.3, 0.0).is_err());
        assert!(AlphaPrior::interval(1.0, 0.5).is_err());
        assert!(OrthantUniform::new(0).is_err());
    }
}
