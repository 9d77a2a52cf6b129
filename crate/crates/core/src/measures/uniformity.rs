use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{par_samples, RngSeed};
use crate::statespace::{born_complex, born_real, sample_haar_state, sample_real_sphere};
use crate::stats::{chi_square_uniform, ks_one_sample, ChiSquareTest, KsTest, SimplexCells};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateField {
    Real,
    Complex,
}

/// Chi-square tests of one sample of probability vectors against the flat
/// simplex measure and against the uniform γ-orthant measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub flat: ChiSquareTest,
    pub orthant: ChiSquareTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SykoraReport {
    pub dim: usize,
    pub samples: usize,
    pub cells: usize,
    pub complex: UniformityReport,
    pub real: UniformityReport,
    /// KS test of `p₁` against U[0, 1] for complex states (d = 2 only).
    pub complex_first_prob_ks: Option<KsTest>,
}

/// Tests a sample of probability vectors for uniformity on the flat simplex
/// (Dirichlet(1)) and on the γ-orthant (Dirichlet(1/2)) using equal-measure
/// cells.
pub fn orthant_uniformity(probs: &[Vec<f64>], dim: usize, cells: usize) -> UniformityReport {
    let flat = SimplexCells::with_cell_count(dim, cells, 1.0);
    let orthant = SimplexCells::with_cell_count(dim, cells, 0.5);
    UniformityReport {
        flat: chi_square_uniform(&flat.histogram(probs.iter().map(Vec::as_slice))),
        orthant: chi_square_uniform(&orthant.histogram(probs.iter().map(Vec::as_slice))),
    }
}

/// Haar-random complex states push forward to the flat measure on the
/// simplex; uniformly random real states push forward to the uniform measure
/// on the γ-orthant. Both samples are tested against both hypotheses.
pub fn sykora_test(dim: usize, samples: usize, cells: usize, seed: RngSeed) -> Result<SykoraReport> {
    if dim < 2 {
        return Err(Error::Dimension { min: 2, got: dim });
    }
    if samples < 10_000 {
        return Err(Error::TooFewSamples { min: 10_000, got: samples });
    }
    let complex: Vec<Vec<f64>> = par_samples(seed.derive(0), samples, |rng, _| {
        born_complex(&sample_haar_state::<f64, _>(dim, rng).expect("dim >= 2")).entries().to_vec()
    });
    let real: Vec<Vec<f64>> = par_samples(seed.derive(1), samples, |rng, _| {
        born_real(&sample_real_sphere::<f64, _>(dim, rng).expect("dim >= 2")).entries().to_vec()
    });
    let complex_first_prob_ks = (dim == 2).then(|| {
        let p1: Vec<f64> = complex.iter().map(|p| p[0]).collect();
        ks_one_sample(&p1, |x| x.clamp(0.0, 1.0))
    });
    let used_cells = SimplexCells::with_cell_count(dim, cells, 1.0).len();
    Ok(SykoraReport {
        dim,
        samples,
        cells: used_cells,
        complex: orthant_uniformity(&complex, dim, cells),
        real: orthant_uniformity(&real, dim, cells),
        complex_first_prob_ks,
    })
}
