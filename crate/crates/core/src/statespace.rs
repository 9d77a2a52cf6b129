//! Pure states, probability rules, the square-root embedding of the simplex,
//! and seeded samplers for the invariant measures used throughout.
//!
//! Measurements are always in the standard basis; a different orthonormal
//! basis is expressed by rotating the state.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMat, Mat};
use crate::scalar::{invariant_tol, lit, matrix_tol, to_f64, Scalar};

fn check_unit_norm<T: Scalar>(norm_sq: T) -> Result<()> {
    if (norm_sq - T::one()).abs() > invariant_tol::<T>() {
        return Err(Error::NotNormalized { norm_sq: to_f64(norm_sq) });
    }
    Ok(())
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::Dimension { min, got: d });
    }
    Ok(())
}

/// Unit vector in ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealStateVector<T> {
    components: Vec<T>,
}

impl<T: Scalar> RealStateVector<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        check_dim(components.len(), 1)?;
        check_unit_norm(components.iter().map(|&x| x * x).sum::<T>())?;
        Ok(Self { components })
    }

    /// Normalises an arbitrary non-zero vector.
    pub fn normalized(mut components: Vec<T>) -> Result<Self> {
        check_dim(components.len(), 1)?;
        let norm = components.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sq: to_f64(norm * norm) });
        }
        components.iter_mut().for_each(|x| *x /= norm);
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[T] {
        &self.components
    }
}

/// Unit vector in ℂ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexStateVector<T> {
    components: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexStateVector<T> {
    pub fn new(components: Vec<Complex<T>>) -> Result<Self> {
        check_dim(components.len(), 1)?;
        check_unit_norm(components.iter().map(|z| z.norm_sqr()).sum::<T>())?;
        Ok(Self { components })
    }

    pub fn normalized(mut components: Vec<Complex<T>>) -> Result<Self> {
        check_dim(components.len(), 1)?;
        let norm = components.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sq: to_f64(norm * norm) });
        }
        components.iter_mut().for_each(|z| *z = z.unscale(norm));
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Complex<T>] {
        &self.components
    }

    /// Projector `|s⟩⟨s|`.
    pub fn projector(&self) -> ComplexMat<T>
    where
        Complex<T>: crate::linalg::Entry<Real = T>,
    {
        Mat::outer(&self.components, &self.components)
    }
}

impl<T: Scalar> From<RealStateVector<T>> for ComplexStateVector<T> {
    fn from(s: RealStateVector<T>) -> Self {
        Self { components: s.components.into_iter().map(|x| Complex::new(x, T::zero())).collect() }
    }
}

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector<T> {
    entries: Vec<T>,
}

impl<T: Scalar> ProbabilityVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        check_dim(entries.len(), 1)?;
        let sum = entries.iter().copied().sum::<T>();
        let min = entries.iter().copied().fold(T::infinity(), T::min);
        if min < T::zero() || (sum - T::one()).abs() > invariant_tol::<T>() || !sum.is_finite() {
            return Err(Error::NotProbability { sum: to_f64(sum), min: to_f64(min) });
        }
        Ok(Self { entries })
    }

    /// Trusted constructor for values that are probabilities by construction.
    pub(crate) fn from_trusted(entries: Vec<T>) -> Self {
        debug_assert!(Self::new(entries.clone()).is_ok(), "not a probability vector: {entries:?}");
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn max_entry(&self) -> T {
        self.entries.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// True when every entry is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.entries.iter().all(|&p| p > T::zero())
    }
}

/// `(√p₁, …, √p_d)`: a point on the positive orthant of the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaVector<T> {
    entries: Vec<T>,
}

impl<T: Scalar> GammaVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        check_dim(entries.len(), 1)?;
        let min = entries.iter().copied().fold(T::infinity(), T::min);
        if min < T::zero() {
            return Err(Error::OutOfRange(format!("negative γ component {}", to_f64(min))));
        }
        check_unit_norm(entries.iter().map(|&g| g * g).sum::<T>())?;
        Ok(Self { entries })
    }

    pub(crate) fn from_trusted(entries: Vec<T>) -> Self {
        debug_assert!(Self::new(entries.clone()).is_ok(), "not a γ vector: {entries:?}");
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Binary angle `α = atan2(γ₂, γ₁)` with `γ = (cos α, sin α)`. Only meaningful for d = 2.
    pub fn alpha(&self) -> T {
        debug_assert_eq!(self.dim(), 2);
        self.entries[1].atan2(self.entries[0])
    }

    /// `γ = (cos α, sin α)` for `α ∈ [0, π/2]`.
    pub fn from_alpha(alpha: T) -> Result<Self> {
        if alpha < T::zero() || alpha > T::FRAC_PI_2() {
            return Err(Error::OutOfRange(format!("α = {} outside [0, π/2]", to_f64(alpha))));
        }
        Ok(Self { entries: vec![alpha.cos().max(T::zero()), alpha.sin()] })
    }
}

/// Polar and azimuthal angle on the Bloch sphere. The north pole (β = 0) is
/// the first measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint<T> {
    beta: T,
    phi: T,
}

impl<T: Scalar> BlochPoint<T> {
    /// `beta` must lie in `[0, π]`; `phi` is reduced modulo 2π.
    pub fn new(beta: T, phi: T) -> Result<Self> {
        if !(T::zero()..=T::PI()).contains(&beta) {
            return Err(Error::OutOfRange(format!("β = {} outside [0, π]", to_f64(beta))));
        }
        Ok(Self { beta, phi: reduce_angle(phi) })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// State `(cos(β/2), e^{iφ} sin(β/2))`.
    pub fn state(&self) -> ComplexStateVector<T> {
        let half = self.beta / lit(2.0);
        ComplexStateVector {
            components: vec![
                Complex::new(half.cos(), T::zero()),
                Complex::from_polar(half.sin(), self.phi),
            ],
        }
    }
}

/// Angle of a linear polariser together with the rule multiplier `m` of
/// `p(θ) = cos²(mθ/2)`; `m = 2` is the Born rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreparationAngle<T> {
    theta: T,
    multiplier: u32,
}

impl<T: Scalar> PreparationAngle<T> {
    pub fn new(theta: T, multiplier: u32) -> Self {
        Self { theta: reduce_angle(theta), multiplier }
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn multiplier(&self) -> u32 {
        self.multiplier
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn reduce_angle<T: Scalar>(theta: T) -> T {
    let tau = T::TAU();
    let r = theta % tau;
    let r = if r < T::zero() { r + tau } else { r };
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// Element of SU(d).
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialUnitary<T> {
    matrix: ComplexMat<T>,
}

impl<T> SpecialUnitary<T>
where
    T: Scalar,
    Complex<T>: crate::linalg::Entry<Real = T>,
{
    pub fn new(matrix: ComplexMat<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { left: matrix.rows(), right: matrix.cols() });
        }
        check_dim(matrix.rows(), 1)?;
        let unitarity = matrix.unitarity_defect();
        let det = (matrix.det() - Complex::new(T::one(), T::zero())).norm();
        if unitarity > matrix_tol::<T>() || det > matrix_tol::<T>() {
            return Err(Error::NotSpecialUnitary { unitarity: to_f64(unitarity), det: to_f64(det) });
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: Mat::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMat<T> {
        self.matrix
    }
}

fn normal_f64<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform point on the unit sphere of ℝ^d (normalised Gaussian vector).
pub fn sample_real_sphere<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<RealStateVector<T>> {
    check_dim(d, 1)?;
    loop {
        let v: Vec<f64> = (0..d).map(|_| normal_f64(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return RealStateVector::normalized(v.into_iter().map(|x| lit::<T>(x / norm)).collect());
        }
    }
}

/// Unitarily invariant random pure state in ℂ^d.
pub fn sample_haar_state<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<ComplexStateVector<T>> {
    check_dim(d, 1)?;
    loop {
        let v: Vec<(f64, f64)> = (0..d).map(|_| (normal_f64(rng), normal_f64(rng))).collect();
        let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return ComplexStateVector::normalized(
                v.into_iter().map(|(a, b)| Complex::new(lit::<T>(a / norm), lit::<T>(b / norm))).collect(),
            );
        }
    }
}

/// Haar-random element of SU(d).
///
/// A complex Gaussian matrix is orthonormalised by Gram–Schmidt, which fixes
/// the phases so that `R` has a positive diagonal (the Haar measure on U(d));
/// the result is then divided by the principal `d`-th root of its determinant.
pub fn sample_su<T, R>(d: usize, rng: &mut R) -> Result<SpecialUnitary<T>>
where
    T: Scalar,
    Complex<T>: crate::linalg::Entry<Real = T>,
    R: Rng + ?Sized,
{
    check_dim(d, 2)?;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let z = Mat::from_fn(d, d, |_, _| {
            Complex::new(lit::<T>(normal_f64(rng) * scale), lit::<T>(normal_f64(rng) * scale))
        });
        let Some((q, _)) = z.qr_gram_schmidt() else { continue };
        let det = q.det();
        let root = Complex::from_polar(T::one(), det.arg() / lit::<T>(d as f64));
        let u = q.map(|x| x / root);
        return SpecialUnitary::new(u);
    }
}

/// Uniform point on the Bloch sphere: `cos β` uniform on `[-1, 1]`, `φ` uniform on `[0, 2π)`.
pub fn sample_bloch_point<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> BlochPoint<T> {
    let cos_beta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    BlochPoint { beta: lit::<T>(cos_beta.acos()), phi: lit(phi) }
}

/// Real Born rule `p_i = s_i²`.
pub fn born_real<T: Scalar>(state: &RealStateVector<T>) -> ProbabilityVector<T> {
    ProbabilityVector::from_trusted(state.components.iter().map(|&s| s * s).collect())
}

/// Complex Born rule `p_i = |s_i|²`.
pub fn born_complex<T: Scalar>(state: &ComplexStateVector<T>) -> ProbabilityVector<T> {
    ProbabilityVector::from_trusted(state.components.iter().map(|z| z.norm_sqr()).collect())
}

/// Componentwise square root; rounding noise down to `-1e-15` is clamped to 0.
pub fn gamma_of<T: Scalar>(p: &ProbabilityVector<T>) -> GammaVector<T> {
    let floor = lit::<T>(-1e-15);
    GammaVector {
        entries: p
            .entries
            .iter()
            .map(|&x| {
                debug_assert!(x >= floor);
                x.max(T::zero()).sqrt()
            })
            .collect(),
    }
}

/// Componentwise square.
pub fn probs_of<T: Scalar>(g: &GammaVector<T>) -> ProbabilityVector<T> {
    ProbabilityVector::from_trusted(g.entries.iter().map(|&x| x * x).collect())
}

/// `(cos²(mθ/2), sin²(mθ/2))`.
pub fn polarization_rule<T: Scalar>(angle: PreparationAngle<T>) -> ProbabilityVector<T> {
    let x = T::from_u32(angle.multiplier).unwrap() * angle.theta / lit(2.0);
    let c = x.cos();
    let c2 = c * c;
    ProbabilityVector::from_trusted(vec![c2, T::one() - c2])
}

/// `((1 + cos β)/2, (1 − cos β)/2)`, independent of φ.
pub fn bloch_rule<T: Scalar>(point: BlochPoint<T>) -> ProbabilityVector<T> {
    let half = lit::<T>(0.5);
    let c = point.beta.cos();
    ProbabilityVector::from_trusted(vec![half * (T::one() + c), half * (T::one() - c)])
}

/// Binary angle `α = arccos √p₁ ∈ [0, π/2]`.
pub fn alpha_of<T: Scalar>(p: &ProbabilityVector<T>) -> T {
    debug_assert_eq!(p.dim(), 2);
    p.entries[0].clamp(T::zero(), T::one()).sqrt().acos()
}
