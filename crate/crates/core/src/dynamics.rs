//! Real-amplitude dynamics: `|s(t)⟩ = e^{St}|s(0)⟩` with `S` antisymmetric,
//! and the reflection that needs an ancillary rebit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, Entry, Mat, RealMat};
use crate::rng::{par_samples, RngSeed};
use crate::scalar::{invariant_tol, matrix_tol, to_f64, Scalar};

/// Real antisymmetric generator, `Sᵀ = -S`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricGenerator<T> {
    matrix: RealMat<T>,
}

impl<T: Scalar + Entry<Real = T>> AntisymmetricGenerator<T> {
    pub fn new(matrix: RealMat<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { left: matrix.rows(), right: matrix.cols() });
        }
        let defect = (&matrix + &matrix.transpose()).max_abs_diff(&Mat::zeros(matrix.rows(), matrix.cols()));
        if defect > invariant_tol::<T>() {
            return Err(Error::NotAntisymmetric { defect: to_f64(defect) });
        }
        Ok(Self { matrix })
    }

    /// `J = [[0, -1], [1, 0]]`.
    pub fn j() -> Self {
        Self { matrix: Mat::from_row_major(2, 2, vec![T::zero(), -T::one(), T::one(), T::zero()]) }
    }

    pub fn zero(d: usize) -> Self {
        Self { matrix: Mat::zeros(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RealMat<T> {
        &self.matrix
    }

    pub fn scaled(&self, c: T) -> Self {
        Self { matrix: self.matrix.scaled(c) }
    }
}

/// Real orthogonal matrix, `QᵀQ = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMatrix<T> {
    matrix: RealMat<T>,
    det: T,
}

impl<T: Scalar + Entry<Real = T>> OrthogonalMatrix<T> {
    pub fn new(matrix: RealMat<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { left: matrix.rows(), right: matrix.cols() });
        }
        let defect = matrix.unitarity_defect();
        if defect > matrix_tol::<T>() {
            return Err(Error::NotOrthogonal { defect: to_f64(defect) });
        }
        let det = matrix.det();
        Ok(Self { matrix, det })
    }

    pub fn matrix(&self) -> &RealMat<T> {
        &self.matrix
    }

    pub fn det(&self) -> T {
        self.det
    }

    /// `+1` for rotations, `-1` for reflections.
    pub fn det_sign(&self) -> i8 {
        if self.det >= T::zero() {
            1
        } else {
            -1
        }
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.matrix.mul_vec(v)
    }
}

/// `e^{St}` by scaling and squaring.
pub fn evolve<T: Scalar + Entry<Real = T>>(s: &AntisymmetricGenerator<T>, t: T) -> OrthogonalMatrix<T> {
    let q = s.matrix.scaled(t).expm();
    OrthogonalMatrix::new(q).expect("exponential of an antisymmetric matrix is orthogonal")
}

/// `R = diag(1, -1)`: maps `(s₁, s₂)` to `(s₁, -s₂)`; a reflection.
pub fn reflection<T: Scalar + Entry<Real = T>>() -> OrthogonalMatrix<T> {
    OrthogonalMatrix::new(Mat::from_diagonal(&[T::one(), -T::one()])).expect("diagonal ±1")
}

/// The reflection realised on a system rebit by a controlled half-cycle
/// rotation of an ancillary rebit.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaReflection<T> {
    /// `|e₁⟩⟨e₁| ⊗ I + |e₂⟩⟨e₂| ⊗ Rot(π)`, on `system ⊗ ancilla`.
    pub composite: OrthogonalMatrix<T>,
    /// `S_c = |e₂⟩⟨e₂| ⊗ J`.
    pub generator: AntisymmetricGenerator<T>,
    /// `max |e^{π S_c} - composite|`.
    pub path_defect: T,
}

impl<T: Scalar + Entry<Real = T>> AncillaReflection<T> {
    /// Applies the composite to `s ⊗ a`.
    pub fn apply(&self, s: &[T; 2], a: &[T; 2]) -> Vec<T> {
        let input = [s[0] * a[0], s[0] * a[1], s[1] * a[0], s[1] * a[1]];
        self.composite.apply(&input)
    }
}

pub fn reflection_via_ancilla<T: Scalar + Entry<Real = T>>() -> AncillaReflection<T> {
    let e2 = Mat::from_diagonal(&[T::zero(), T::one()]);
    let e1 = Mat::from_diagonal(&[T::one(), T::zero()]);
    let rot_pi = Mat::from_diagonal(&[-T::one(), -T::one()]);
    let composite = &e1.kron(&Mat::identity(2)) + &e2.kron(&rot_pi);
    let generator = AntisymmetricGenerator::new(e2.kron(AntisymmetricGenerator::<T>::j().matrix())).expect("antisymmetric");
    let path_defect = evolve(&generator, T::PI()).matrix().max_abs_diff(&composite);
    AncillaReflection { composite: OrthogonalMatrix::new(composite).expect("orthogonal"), generator, path_defect }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationOnlyReport {
    pub samples: usize,
    /// `max |det e^{St} - 1|` over random 2×2 generators and times.
    pub max_det_deviation: f64,
    /// Same over the sweep `S = cJ`, `c ∈ [-10, 10]`.
    pub sweep_max_det_deviation: f64,
    /// Smallest operator-norm distance from `R` to any generated matrix.
    pub min_distance_to_reflection: f64,
    pub all_rotations: bool,
}

/// Every `e^{St}` with 2×2 antisymmetric `S` is a rotation (`det = +1`), so
/// the reflection `R` is out of reach without an ancilla.
pub fn rotation_only_check(samples: usize, seed: RngSeed) -> Result<RotationOnlyReport> {
    if samples < 100 {
        return Err(Error::TooFewSamples { min: 100, got: samples });
    }
    let r = reflection::<f64>();
    let j = AntisymmetricGenerator::<f64>::j();
    let measure = |q: &OrthogonalMatrix<f64>| ((q.det() - 1.0).abs(), spectral_norm(&(q.matrix() - r.matrix())));
    let random: Vec<(f64, f64)> = par_samples(seed, samples, |rng, _| {
        let c: f64 = rng.random_range(-10.0..10.0);
        let t: f64 = rng.random_range(0.0..10.0);
        measure(&evolve(&j.scaled(c), t))
    });
    let sweep: Vec<(f64, f64)> = (0..=2000).map(|i| measure(&evolve(&j.scaled(-10.0 + 0.01 * i as f64), 1.0))).collect();
    let max_det_deviation = random.iter().map(|x| x.0).fold(0.0, f64::max);
    let sweep_max_det_deviation = sweep.iter().map(|x| x.0).fold(0.0, f64::max);
    let min_distance_to_reflection = random.iter().chain(&sweep).map(|x| x.1).fold(f64::INFINITY, f64::min);
    Ok(RotationOnlyReport {
        samples,
        max_det_deviation,
        sweep_max_det_deviation,
        min_distance_to_reflection,
        all_rotations: max_det_deviation < 1e-12 && sweep_max_det_deviation < 1e-12,
    })
}

/// Random antisymmetric `d × d` generator with standard normal entries above the diagonal.
pub fn random_generator<R: Rng + ?Sized>(d: usize, rng: &mut R) -> AntisymmetricGenerator<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut m = Mat::zeros(d, d);
    for i in 0..d {
        for k in i + 1..d {
            let x: f64 = StandardNormal.sample(rng);
            m[(i, k)] = x;
            m[(k, i)] = -x;
        }
    }
    AntisymmetricGenerator { matrix: m }
}
