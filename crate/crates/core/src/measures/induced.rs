use std::f64::consts::{FRAC_PI_2, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{par_samples, RngSeed, StreamRng};
use crate::statespace::{alpha_of, bloch_rule, sample_bloch_point};
use crate::Probabilities;

/// One histogram bin over `α`. Field names are the CSV column names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedBin {
    pub bin_low: f64,
    pub bin_high: f64,
    pub mass: f64,
    pub density: f64,
}

/// Histogram estimate of the measure a probability rule induces on `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedMeasureEstimate {
    pub bins: Vec<InducedBin>,
    pub counts: Vec<u64>,
    /// Plug-in differential entropy `-Σ m ln m + ln(bin width)`, in nats.
    pub entropy: f64,
    pub samples: usize,
}

impl InducedMeasureEstimate {
    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    /// Largest `|count - M q_b| / √(M q_b (1 - q_b))` over bins, where `q_b` is
    /// the mass that `cdf` assigns to bin `b`.
    pub fn max_z_score(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let m = self.samples as f64;
        self.bins
            .iter()
            .zip(&self.counts)
            .map(|(b, &c)| {
                let q = cdf(b.bin_high) - cdf(b.bin_low);
                let sd = (m * q * (1.0 - q)).sqrt();
                (c as f64 - m * q).abs() / sd
            })
            .fold(0.0, f64::max)
    }
}

const MIN_SAMPLES: usize = 10_000;

/// Pushes a uniform `θ ∈ [0, 2π)` through `rule` and histograms
/// `α = arccos √p₁` into `bins` equal bins of `[0, π/2]`.
pub fn induced_alpha_density<F>(rule: F, samples: usize, bins: usize, seed: RngSeed) -> Result<InducedMeasureEstimate>
where
    F: Fn(f64) -> Probabilities + Sync,
{
    induced_alpha_density_from(
        |rng| {
            let theta = rng.random_range(0.0..TAU);
            rule(theta)
        },
        samples,
        bins,
        seed,
    )
}

/// Same as [`induced_alpha_density`] for an arbitrary preparation sampler.
pub fn induced_alpha_density_from<F>(preparation: F, samples: usize, bins: usize, seed: RngSeed) -> Result<InducedMeasureEstimate>
where
    F: Fn(&mut StreamRng) -> Probabilities + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: samples });
    }
    if bins == 0 {
        return Err(Error::OutOfRange("bin count must be positive".into()));
    }
    let alphas = par_samples(seed, samples, |rng, _| {
        let p = preparation(rng);
        debug_assert_eq!(p.dim(), 2);
        alpha_of(&p)
    });
    let width = FRAC_PI_2 / bins as f64;
    let mut counts = vec![0u64; bins];
    for a in alphas {
        counts[((a / width) as usize).min(bins - 1)] += 1;
    }
    let m = samples as f64;
    let bins_out: Vec<InducedBin> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let mass = c as f64 / m;
            InducedBin { bin_low: i as f64 * width, bin_high: (i + 1) as f64 * width, mass, density: mass / width }
        })
        .collect();
    let entropy = -bins_out.iter().filter(|b| b.mass > 0.0).map(|b| b.mass * b.mass.ln()).sum::<f64>() + width.ln();
    Ok(InducedMeasureEstimate { bins: bins_out, counts, entropy, samples })
}

/// Bloch-sphere preparation with the invariant measure, measured in the
/// standard basis.
pub fn uniform_bloch_preparation(rng: &mut StreamRng) -> Probabilities {
    bloch_rule(sample_bloch_point::<f64, _>(rng))
}

/// Default bin count `⌈√M⌉`.
pub fn default_bins(samples: usize) -> usize {
    (samples as f64).sqrt().ceil() as usize
}
