//! Entangled-pair experiment with SU(2): Alice applies `U` to her half of
//! `|Φ⁺⟩`, Bob measures both particles in the Bell basis.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::i_tilde_from_entropy;
use crate::linalg::{inner, ComplexMat, Entry, Mat};
use crate::measures::k_opt;
use crate::rng::{par_samples, RngSeed};
use crate::scalar::{invariant_tol, lit, to_f64, Scalar};
use crate::statespace::{sample_su, ProbabilityVector, RealStateVector, SpecialUnitary};
use crate::stats::{chi_square_uniform, ChiSquareTest, SimplexCells};

/// `|Φ⁺⟩, |Φ⁻⟩, |Ψ⁺⟩, |Ψ⁻⟩` in the product basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellBasis2<T> {
    vectors: Vec<Vec<Complex<T>>>,
}

impl<T> BellBasis2<T>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    pub fn new() -> Self {
        let h = T::FRAC_1_SQRT_2();
        let z = T::zero();
        let rows = [[h, z, z, h], [h, z, z, -h], [z, h, h, z], [z, h, -h, z]];
        Self { vectors: rows.iter().map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect()).collect() }
    }

    pub fn vectors(&self) -> &[Vec<Complex<T>>] {
        &self.vectors
    }

    /// `max |⟨B_i|B_j⟩ - δ_ij|`.
    pub fn gram_defect(&self) -> T {
        gram_defect(&self.vectors)
    }
}

impl<T> Default for BellBasis2<T>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    fn default() -> Self {
        Self::new()
    }
}

pub(crate) fn gram_defect<T>(vectors: &[Vec<Complex<T>>]) -> T
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let mut worst = T::zero();
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((inner(u, v) - Complex::new(target, T::zero())).norm());
        }
    }
    worst
}

/// Rotation `exp[i(θ/2) n̂·σ]` given by a unit axis and an angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle<T> {
    axis: [T; 3],
    angle: T,
}

impl<T: Scalar> AxisAngle<T> {
    pub fn new(axis: [T; 3], angle: T) -> Result<Self> {
        let norm_sq = axis.iter().map(|&x| x * x).sum::<T>();
        if (norm_sq - T::one()).abs() > invariant_tol::<T>() {
            return Err(Error::NotNormalized { norm_sq: to_f64(norm_sq) });
        }
        if angle < T::zero() || angle >= T::TAU() {
            return Err(Error::OutOfRange(format!("angle {} outside [0, 2π)", to_f64(angle))));
        }
        Ok(Self { axis, angle })
    }

    pub fn axis(&self) -> [T; 3] {
        self.axis
    }

    pub fn angle(&self) -> T {
        self.angle
    }
}

/// `cos(θ/2) I + i sin(θ/2) n̂·σ`.
pub fn su2_from_axis_angle<T>(a: &AxisAngle<T>) -> SpecialUnitary<T>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let half = a.angle / lit(2.0);
    let (c, s) = (half.cos(), half.sin());
    let [nx, ny, nz] = a.axis;
    let m = Mat::from_row_major(
        2,
        2,
        vec![Complex::new(c, s * nz), Complex::new(s * ny, s * nx), Complex::new(-s * ny, s * nx), Complex::new(c, -s * nz)],
    );
    SpecialUnitary::new(m).expect("closed form is special unitary")
}

/// `v_U = (cos(θ/2), n_x sin(θ/2), n_y sin(θ/2), n_z sin(θ/2))`.
pub fn v_u<T: Scalar>(a: &AxisAngle<T>) -> RealStateVector<T> {
    let half = a.angle / lit(2.0);
    let s = half.sin();
    RealStateVector::normalized(vec![half.cos(), a.axis[0] * s, a.axis[1] * s, a.axis[2] * s]).expect("unit 4-vector")
}

/// Inverse of [`su2_from_axis_angle`]: `θ = 2 atan2(|b|, a)` from the Pauli
/// expansion `U = a I + i b·σ`; θ = 0 is assigned the axis ẑ.
pub fn axis_angle_of<T>(u: &SpecialUnitary<T>) -> Result<AxisAngle<T>>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch { left: u.dim(), right: 2 });
    }
    let (a, b) = pauli_coefficients(u.matrix());
    let norm = b.iter().map(|&x| x * x).sum::<T>().sqrt();
    if norm <= T::epsilon() {
        return AxisAngle::new([T::zero(), T::zero(), T::one()], T::zero());
    }
    let axis = [b[0] / norm, b[1] / norm, b[2] / norm];
    let angle = (lit::<T>(2.0) * norm.atan2(a)).min(T::TAU() - T::epsilon());
    AxisAngle::new(axis, angle)
}

/// `(a, [b_x, b_y, b_z])` with `U = a I + i b·σ`.
fn pauli_coefficients<T>(m: &ComplexMat<T>) -> (T, [T; 3])
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let half = lit::<T>(0.5);
    let a = (m[(0, 0)].re + m[(1, 1)].re) * half;
    let bz = (m[(0, 0)].im - m[(1, 1)].im) * half;
    let bx = (m[(0, 1)].im + m[(1, 0)].im) * half;
    let by = (m[(0, 1)].re - m[(1, 0)].re) * half;
    (a, [bx, by, bz])
}

/// Bell-measurement outcome probabilities for `(U ⊗ I)|Φ⁺⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2BellProbs<T> {
    /// `|⟨B_i|(U ⊗ I)|Φ⁺⟩|²` from the basis vectors.
    pub direct: ProbabilityVector<T>,
    /// `(cos²(θ/2), n_z² sin²(θ/2), n_x² sin²(θ/2), n_y² sin²(θ/2))`.
    pub closed_form: ProbabilityVector<T>,
    pub axis_angle: AxisAngle<T>,
}

impl<T: Scalar> Su2BellProbs<T> {
    pub fn max_difference(&self) -> T {
        self.direct
            .entries()
            .iter()
            .zip(self.closed_form.entries())
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

pub fn su2_bell_probs<T>(u: &SpecialUnitary<T>) -> Result<Su2BellProbs<T>>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let axis_angle = axis_angle_of(u)?;
    let m = u.matrix();
    let h = T::FRAC_1_SQRT_2();
    let psi: Vec<Complex<T>> = (0..4).map(|k| m[(k / 2, k % 2)].scale(h)).collect();
    let basis = BellBasis2::<T>::new();
    let direct = basis.vectors().iter().map(|b| inner(b, &psi).norm_sqr()).collect();
    let v = v_u(&axis_angle);
    let c = v.components();
    let closed = vec![c[0] * c[0], c[3] * c[3], c[1] * c[1], c[2] * c[2]];
    Ok(Su2BellProbs {
        direct: ProbabilityVector::new(direct)?,
        closed_form: ProbabilityVector::new(closed)?,
        axis_angle,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Su2OptimalityReport {
    pub samples: usize,
    /// Largest `|direct - closed form|` over all samples.
    pub max_closed_form_error: f64,
    /// Chi-square of the Bell probabilities over equal-measure γ-orthant cells of `S³`.
    pub orthant_chi_square: ChiSquareTest,
    /// Sample means of the four Bell probabilities; each is 1/4 under the uniform measure.
    pub probability_means: [f64; 4],
    /// Plug-in Ĩ of the induced measure from the cell histogram.
    pub i_tilde_induced: f64,
    /// Ĩ of the uniform orthant measure for four outcomes.
    pub i_tilde_uniform: f64,
}

/// Cells per γ-orthant axis in [`su2_optimality_check`]: `4³ = 64` cells.
const CELLS_PER_AXIS: usize = 4;

/// Draws Haar SU(2) elements and tests that their Bell probabilities are the
/// uniform measure on the γ-orthant of `S³`.
pub fn su2_optimality_check(samples: usize, seed: RngSeed) -> Result<Su2OptimalityReport> {
    if samples < 10_000 {
        return Err(Error::TooFewSamples { min: 10_000, got: samples });
    }
    let draws: Vec<(Vec<f64>, f64)> = par_samples(seed, samples, |rng, _| {
        let u = sample_su::<f64, _>(2, rng).expect("d = 2");
        let p = su2_bell_probs(&u).expect("d = 2");
        (p.direct.entries().to_vec(), p.max_difference())
    });
    let cells = SimplexCells::new(4, CELLS_PER_AXIS, 0.5);
    let counts = cells.histogram(draws.iter().map(|(p, _)| p.as_slice()));
    let m = samples as f64;
    let k = cells.len() as f64;
    // Each cell carries 1/k of the orthant area 1/k_opt.
    let density_entropy = -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let mass = c as f64 / m;
            mass * (mass * k * k_opt::<f64>(4)).ln()
        })
        .sum::<f64>();
    let mut means = [0.0; 4];
    for (p, _) in &draws {
        for (acc, x) in means.iter_mut().zip(p) {
            *acc += x / m;
        }
    }
    Ok(Su2OptimalityReport {
        samples,
        max_closed_form_error: draws.iter().map(|(_, e)| *e).fold(0.0, f64::max),
        orthant_chi_square: chi_square_uniform(&counts),
        probability_means: means,
        i_tilde_induced: i_tilde_from_entropy(density_entropy, 4),
        i_tilde_uniform: i_tilde_from_entropy(-k_opt::<f64>(4).ln(), 4),
    })
}
