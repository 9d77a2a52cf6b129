use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{PriorDensity, OrthantUniform};
use crate::rng::{par_samples, try_par_samples, RngSeed};
use crate::stats::{mean_stderr, MeanEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyMethod {
    ClosedForm,
    MonteCarlo,
}

/// Differential entropy in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub method: EntropyMethod,
}

const MIN_SAMPLES: usize = 1000;

/// `-∫ K ln K dγ`: the closed form when the prior provides one, otherwise
/// [`differential_entropy_mc`].
pub fn differential_entropy<P: PriorDensity + ?Sized>(prior: &P, samples: usize, seed: RngSeed) -> Result<EntropyEstimate> {
    match prior.exact_entropy() {
        Some(value) => Ok(EntropyEstimate { value, stderr: 0.0, samples: 0, method: EntropyMethod::ClosedForm }),
        None => differential_entropy_mc(prior, samples, seed),
    }
}

/// Monte Carlo estimate `-(1/M) Σ ln K(γ_k)` over draws from the prior.
pub fn differential_entropy_mc<P: PriorDensity + ?Sized>(
    prior: &P,
    samples: usize,
    seed: RngSeed,
) -> Result<EntropyEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: samples });
    }
    let logs = try_par_samples(seed, samples, |rng, _| {
        let g = prior.sample(rng as &mut dyn RngCore);
        let l = prior.ln_density(&g);
        if l.is_finite() {
            Ok(-l)
        } else {
            Err(Error::NonFiniteLogDensity { value: l })
        }
    })?;
    let MeanEstimate { mean, stderr } = mean_stderr(&logs);
    Ok(EntropyEstimate { value: mean, stderr, samples, method: EntropyMethod::MonteCarlo })
}

/// `∫ K dγ` estimated by importance sampling from the uniform orthant measure.
pub fn normalization_check<P: PriorDensity + ?Sized>(prior: &P, samples: usize, seed: RngSeed) -> Result<MeanEstimate> {
    let reference = OrthantUniform::new(prior.dim())?;
    let ln_ref = reference.exact_entropy().map(|h| -h).expect("orthant entropy is closed form");
    let ratios = par_samples(seed, samples, |rng, _| {
        let g = reference.sample(rng as &mut dyn RngCore);
        (prior.ln_density(&g) - ln_ref).exp()
    });
    Ok(mean_stderr(&ratios))
}
