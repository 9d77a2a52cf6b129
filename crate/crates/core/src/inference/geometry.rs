//! Local geometry of the likelihood: frequency spread, the slope identity for
//! polarization data, and uncertainty regions in flat and spherical coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Entry, RealMat};
use crate::scalar::{count, lit, Scalar};
use crate::statespace::{gamma_of, ProbabilityVector};

/// Standard deviation of `n₁/N` for two outcomes, `√(p₁p₂/N)`.
pub fn delta_frequency<T: Scalar>(p: &ProbabilityVector<T>, n_trials: u64) -> Result<T> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch { left: p.dim(), right: 2 });
    }
    if n_trials == 0 {
        return Err(Error::OutOfRange("zero trials".into()));
    }
    let e = p.entries();
    Ok((e[0] * e[1] / lit(n_trials as f64)).sqrt())
}

/// Both sides of the slope identity for `p = cos² θ`:
/// `(|d(cos² θ)/dθ|, 2√(p(1-p)))`.
pub fn slope_compensation<T: Scalar>(theta: T) -> (T, T) {
    let slope = (lit::<T>(2.0) * theta.cos() * theta.sin()).abs();
    let p = theta.cos() * theta.cos();
    let rhs = lit::<T>(2.0) * (p * (T::one() - p)).max(T::zero()).sqrt();
    (slope, rhs)
}

/// `((d-1)/2) ln(2N/(πe))`: the large-`N` entropy of a posterior in dγ.
pub fn posterior_entropy_asymptote<T: Scalar>(n_trials: u64, d: usize) -> T {
    if d <= 1 {
        return T::zero();
    }
    let scale = lit::<T>(2.0 * n_trials as f64) / (T::PI() * T::E());
    count::<T>(d - 1) / lit(2.0) * scale.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coordinates {
    /// Probabilities `p`, on the simplex.
    Flat,
    /// Square roots `γ`, on the sphere.
    Spherical,
}

/// Ellipsoid `{x : exponent(x) ≤ 1}` in the tangent space at `center`.
/// Axes are unit vectors in ambient coordinates; radii are Euclidean lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyRegion<T> {
    pub coordinates: Coordinates,
    pub center: Vec<T>,
    pub axes: Vec<Vec<T>>,
    pub radii: Vec<T>,
}

impl<T: Scalar> UncertaintyRegion<T> {
    /// Boundary of a two-dimensional region, as `points` ambient vectors.
    pub fn boundary_2d(&self, points: usize) -> Result<Vec<Vec<T>>> {
        if self.axes.len() != 2 {
            return Err(Error::DimensionMismatch { left: self.axes.len() + 1, right: 3 });
        }
        Ok((0..points)
            .map(|k| {
                let t = T::TAU() * count::<T>(k) / count::<T>(points);
                let (c, s) = (t.cos() * self.radii[0], t.sin() * self.radii[1]);
                (0..self.center.len()).map(|i| self.center[i] + c * self.axes[0][i] + s * self.axes[1][i]).collect()
            })
            .collect())
    }
}

/// Orthonormal basis of the complement of the unit vector `normal`.
fn tangent_basis<T: Scalar>(normal: &[T]) -> Vec<Vec<T>> {
    let d = normal.len();
    let mut basis: Vec<Vec<T>> = vec![normal.to_vec()];
    for i in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = vec![T::zero(); d];
        v[i] = T::one();
        for b in &basis {
            let dot: T = v.iter().zip(b).map(|(&x, &y)| x * y).sum();
            for (x, &y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm > lit(1e-6) {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis.remove(0);
    basis
}

/// Ellipsoid of `xᵀ A x ≤ 1` restricted to the span of `basis`, with `A = diag(a)`.
fn restricted_ellipsoid<T: Scalar + Entry<Real = T>>(a: &[T], basis: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<T>) {
    let k = basis.len();
    let m: RealMat<T> = RealMat::from_fn(k, k, |r, c| basis[r].iter().zip(&basis[c]).zip(a).map(|((&x, &y), &w)| x * w * y).sum());
    let (values, vectors) = symmetric_eigen(&m);
    let d = a.len();
    let axes = (0..k)
        .map(|j| (0..d).map(|i| (0..k).map(|r| vectors[(r, j)] * basis[r][i]).sum()).collect())
        .collect();
    let radii = values.iter().map(|&l| T::one() / l.sqrt()).collect();
    (axes, radii)
}

/// Region where the Gaussian exponent of the likelihood has magnitude at most 1.
///
/// Flat: `(N/2) Σ Δp_i² / p_i ≤ 1` on `Σ Δp_i = 0`. Spherical: `2N |Δγ|² ≤ 1` on
/// the tangent plane at γ, a ball of radius `1/√(2N)`.
pub fn region_of_uncertainty<T: Scalar + Entry<Real = T>>(
    p: &ProbabilityVector<T>,
    n_trials: u64,
    coordinates: Coordinates,
) -> Result<UncertaintyRegion<T>> {
    if !p.is_interior() {
        return Err(Error::BoundaryPoint);
    }
    if n_trials == 0 {
        return Err(Error::OutOfRange("zero trials".into()));
    }
    let n: T = lit(n_trials as f64);
    let d = p.dim();
    match coordinates {
        Coordinates::Flat => {
            let normal = vec![T::one() / count::<T>(d).sqrt(); d];
            let a: Vec<T> = p.entries().iter().map(|&pi| n / (lit::<T>(2.0) * pi)).collect();
            let (axes, radii) = restricted_ellipsoid(&a, &tangent_basis(&normal));
            Ok(UncertaintyRegion { coordinates, center: p.entries().to_vec(), axes, radii })
        }
        Coordinates::Spherical => {
            let g = gamma_of(p);
            let axes = tangent_basis(g.entries());
            let radius = T::one() / (lit::<T>(2.0) * n).sqrt();
            Ok(UncertaintyRegion { coordinates, center: g.entries().to_vec(), radii: vec![radius; d - 1], axes })
        }
    }
}

/// Radii of the flat quadratic form pulled back to the tangent plane at γ
/// through `Δp = 2 γ Δγ`; equal to the spherical radii for every interior `p`.
pub fn pulled_back_radii<T: Scalar + Entry<Real = T>>(p: &ProbabilityVector<T>, n_trials: u64) -> Result<Vec<T>> {
    if !p.is_interior() {
        return Err(Error::BoundaryPoint);
    }
    let n: T = lit(n_trials as f64);
    let g = gamma_of(p);
    // Jᵀ diag(N / 2p) J with J = diag(2γ).
    let a: Vec<T> = g
        .entries()
        .iter()
        .zip(p.entries())
        .map(|(&gi, &pi)| lit::<T>(4.0) * gi * gi * n / (lit::<T>(2.0) * pi))
        .collect();
    let (_, radii) = restricted_ellipsoid(&a, &tangent_basis(g.entries()));
    Ok(radii)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn probs(v: &[f64]) -> ProbabilityVector<f64> {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn delta_frequency_examples() {
        assert_abs_diff_eq!(delta_frequency(&probs(&[0.5, 0.5]), 100).unwrap(), 0.05, epsilon = 1e-15);
        assert_eq!(delta_frequency(&probs(&[1.0, 0.0]), 17).unwrap(), 0.0);
        assert_abs_diff_eq!(delta_frequency(&probs(&[0.9, 0.1]), 900).unwrap(), 0.01, epsilon = 1e-15);
    }

    #[test]
    fn slope_examples() {
        let (a, b) = slope_compensation(std::f64::consts::FRAC_PI_4);
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-7);
        assert_eq!(slope_compensation(0.0f64), (0.0, 0.0));
        let mut rng = RngSeed::new(21, 0).rng();
        for _ in 0..1000 {
            let t: f64 = rng.random_range(-10.0..10.0);
            let (a, b) = slope_compensation(t);
            assert!((a - b).abs() < 1e-12, "{t}: {a} {b}");
        }
    }

    #[test]
    fn posterior_entropy_examples() {
        // ½ ln(2·10⁴/(πe)) evaluated directly.
        let v: f64 = posterior_entropy_asymptote(10_000, 2);
        assert_abs_diff_eq!(v, 3.879378833343364, epsilon = 1e-12);
        assert_eq!(posterior_entropy_asymptote::<f64>(500, 1), 0.0);
        assert_abs_diff_eq!(posterior_entropy_asymptote::<f64>(10_000, 4), 3.0 * v, epsilon = 1e-12);
    }

    #[test]
    fn spherical_region_is_isotropic() {
        for p in [vec![0.5, 0.5], vec![0.9, 0.1], vec![0.2, 0.3, 0.5], vec![0.05, 0.05, 0.1, 0.8]] {
            let r = region_of_uncertainty(&probs(&p), 200, Coordinates::Spherical).unwrap();
            assert_eq!(r.radii.len(), p.len() - 1);
            for &x in &r.radii {
                assert_abs_diff_eq!(x, 0.05, epsilon = 1e-15);
            }
            for (x, y) in r.radii.iter().zip(pulled_back_radii(&probs(&p), 200).unwrap()) {
                assert_abs_diff_eq!(*x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn flat_region_shrinks_near_edge() {
        let centre = region_of_uncertainty(&probs(&[0.5, 0.5]), 1000, Coordinates::Flat).unwrap();
        let edge = region_of_uncertainty(&probs(&[0.9, 0.1]), 1000, Coordinates::Flat).unwrap();
        let extent = |r: &UncertaintyRegion<f64>| r.radii[0] * r.axes[0][0].abs();
        assert!(extent(&edge) < extent(&centre));
    }

    #[test]
    fn flat_region_matches_frequency_spread() {
        for p in [[0.5, 0.5], [0.9, 0.1], [0.3, 0.7]] {
            let pv = probs(&p);
            let r = region_of_uncertainty(&pv, 400, Coordinates::Flat).unwrap();
            let along_p1 = r.radii[0] * r.axes[0][0].abs();
            assert_abs_diff_eq!(along_p1, 2f64.sqrt() * delta_frequency(&pv, 400).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn boundary_rejected() {
        assert_eq!(region_of_uncertainty(&probs(&[1.0, 0.0]), 10, Coordinates::Flat), Err(Error::BoundaryPoint));
    }

    #[test]
    fn boundary_curve_lies_on_ellipse() {
        let pv = probs(&[0.2, 0.3, 0.5]);
        let r = region_of_uncertainty(&pv, 500, Coordinates::Flat).unwrap();
        for x in r.boundary_2d(64).unwrap() {
            let exponent: f64 = x.iter().zip(pv.entries()).map(|(xi, pi)| 250.0 * (xi - pi).powi(2) / pi).sum();
            assert_abs_diff_eq!(exponent, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(x.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn spherical_equals_pullback(w in proptest::collection::vec(0.01f64..1.0, 2..6), n in 1u64..100_000) {
            let s: f64 = w.iter().sum();
            let pv = probs(&w.iter().map(|x| x / s).collect::<Vec<_>>());
            let sphere = region_of_uncertainty(&pv, n, Coordinates::Spherical).unwrap();
            for (x, y) in sphere.radii.iter().zip(pulled_back_radii(&pv, n).unwrap()) {
                prop_assert!((x - y).abs() < 1e-10 * x.max(1.0));
            }
        }
    }
}
