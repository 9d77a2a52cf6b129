//! Symmetric informationally complete measurements for d = 2 and d = 3.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMat, Entry, Mat};
use crate::measures::OrthantUniform;
use crate::measures::PriorDensity;
use crate::rng::{par_samples, RngSeed};
use crate::scalar::{count, lit, Scalar};
use crate::statespace::{sample_haar_state, ComplexStateVector, ProbabilityVector};
use crate::stats::{mean_stderr, MeanEstimate};

/// `d²` unit vectors with `|⟨m_i|m_j⟩|² = 1/(d+1)` for `i ≠ j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SicFrame<T> {
    dim: usize,
    vectors: Vec<ComplexStateVector<T>>,
}

impl<T> SicFrame<T>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[ComplexStateVector<T>] {
        &self.vectors
    }

    /// `max_{i≠j} | |⟨m_i|m_j⟩|² - 1/(d+1) |`.
    pub fn equiangularity_defect(&self) -> T {
        let target = T::one() / count::<T>(self.dim + 1);
        let mut worst = T::zero();
        for (i, u) in self.vectors.iter().enumerate() {
            for v in &self.vectors[i + 1..] {
                worst = worst.max((inner(u.components(), v.components()).norm_sqr() - target).abs());
            }
        }
        worst
    }

    /// `max |(1/d) Σ |m_i⟩⟨m_i| - I|`.
    pub fn frame_operator_defect(&self) -> T {
        let mut sum = Mat::zeros(self.dim, self.dim);
        for v in &self.vectors {
            sum = &sum + &v.projector();
        }
        sum.scaled(T::one() / count::<T>(self.dim)).max_abs_diff(&Mat::identity(self.dim))
    }
}

/// Tetrahedral frame for `d = 2`, Weyl–Heisenberg orbit of `(0, 1, -1)/√2` for `d = 3`.
pub fn sic_frame<T>(d: usize) -> Result<SicFrame<T>>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let vectors = match d {
        2 => {
            let s = T::one() / lit::<T>(3.0).sqrt();
            [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
                .iter()
                .map(|r| bloch_state(lit::<T>(r[0]) * s, lit::<T>(r[1]) * s, lit::<T>(r[2]) * s))
                .collect()
        }
        3 => {
            let h = T::FRAC_1_SQRT_2();
            let zero = Complex::new(T::zero(), T::zero());
            let fiducial = [zero, Complex::new(h, T::zero()), Complex::new(-h, T::zero())];
            let mut out = Vec::with_capacity(9);
            for a in 0..3 {
                for b in 0..3 {
                    // (X^a Z^b ψ)_{j} = ω^{b(j-a)} ψ_{j-a}
                    let v = (0..3)
                        .map(|j| {
                            let src = (j + 3 - a) % 3;
                            let phase = Complex::from_polar(T::one(), T::TAU() * count::<T>(b * src % 3) / lit(3.0));
                            phase * fiducial[src]
                        })
                        .collect();
                    out.push(ComplexStateVector::new(v).expect("unit fiducial"));
                }
            }
            out
        }
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    Ok(SicFrame { dim: d, vectors })
}

/// Qubit state with Bloch vector `(x, y, z)`, `z > -1`.
fn bloch_state<T>(x: T, y: T, z: T) -> ComplexStateVector<T>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let two = lit::<T>(2.0);
    let up = ((T::one() + z) / two).sqrt();
    let down = Complex::new(x, y).scale(T::one() / (two * (T::one() + z)).sqrt());
    ComplexStateVector::normalized(vec![Complex::new(up, T::zero()), down]).expect("non-zero state")
}

/// `p_i = |⟨m_i|s⟩|² / d`.
pub fn sic_probs<T>(state: &ComplexStateVector<T>, frame: &SicFrame<T>) -> Result<ProbabilityVector<T>>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    if state.dim() != frame.dim {
        return Err(Error::DimensionMismatch { left: state.dim(), right: frame.dim });
    }
    let inv_d = T::one() / count::<T>(frame.dim);
    ProbabilityVector::new(
        frame.vectors.iter().map(|m| inner(m.components(), state.components()).norm_sqr() * inv_d).collect(),
    )
}

/// `ρ = Σ_i [(d+1) p_i - 1/d] |m_i⟩⟨m_i|`. Hermitian with unit trace for any
/// probability vector; positivity is not enforced.
pub fn sic_reconstruct<T>(probs: &ProbabilityVector<T>, frame: &SicFrame<T>) -> Result<ComplexMat<T>>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let d = frame.dim;
    if probs.dim() != d * d {
        return Err(Error::DimensionMismatch { left: probs.dim(), right: d * d });
    }
    let d_t = count::<T>(d);
    let mut rho = Mat::zeros(d, d);
    for (&p, m) in probs.entries().iter().zip(&frame.vectors) {
        let w = (d_t + T::one()) * p - T::one() / d_t;
        rho = &rho + &m.projector().scaled(w);
    }
    Ok(rho)
}

/// Outcome probabilities the SIC never produces, against the optimal measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SicInaccessibilityReport {
    pub dim: usize,
    pub epsilon: f64,
    /// `1/d + ε`.
    pub threshold: f64,
    pub samples: usize,
    /// Mass of `{max p_i > threshold}` under the uniform γ-orthant measure on `d²` outcomes.
    pub optimal_mass: MeanEstimate,
    /// Haar states whose SIC probabilities enter that cell.
    pub sic_hits: u64,
    /// Largest SIC probability seen.
    pub max_prob: f64,
}

pub fn sic_inaccessibility_report(d: usize, epsilon: f64, samples: usize, seed: RngSeed) -> Result<SicInaccessibilityReport> {
    let frame = sic_frame::<f64>(d)?;
    let threshold = 1.0 / d as f64 + epsilon;
    let uniform = OrthantUniform::new(d * d)?;
    let indicator: Vec<f64> = par_samples(seed.derive(0), samples, |rng, _| {
        let g = uniform.sample(rng);
        let max = g.entries().iter().map(|x| x * x).fold(0.0, f64::max);
        if max > threshold { 1.0 } else { 0.0 }
    });
    let sic_max: Vec<f64> = par_samples(seed.derive(1), samples, |rng, _| {
        let s = sample_haar_state::<f64, _>(d, rng).expect("d ≥ 2");
        sic_probs(&s, &frame).expect("matching dimension").max_entry()
    });
    Ok(SicInaccessibilityReport {
        dim: d,
        epsilon,
        threshold,
        samples,
        optimal_mass: mean_stderr(&indicator),
        sic_hits: sic_max.iter().filter(|&&m| m > threshold).count() as u64,
        max_prob: sic_max.iter().copied().fold(0.0, f64::max),
    })
}
