//! The SU(3) analogue: a generalized Bell measurement on `(U ⊗ I)|Φ⟩` with
//! `|Φ⟩ = (|00⟩ + |11⟩ + |22⟩)/√3`, and the bound `p₂ p₃ ≤ 16/81`.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMat, Entry, Mat};
use crate::rng::{par_samples, RngSeed};
use crate::scalar::{count, lit, Scalar};
use crate::scenarios::su2::gram_defect;
use crate::statespace::{sample_su, ProbabilityVector, SpecialUnitary};

/// `16/81`, the largest value of `p₂ p₃` under SU(3).
pub const PRODUCT_BOUND: f64 = 16.0 / 81.0;

fn omega<T: Scalar>(k: usize) -> Complex<T> {
    Complex::from_polar(T::one(), T::TAU() * count::<T>(k % 3) / lit(3.0))
}

/// Nine states `Σ_j ω^{cj} |j, j+r⟩ / √3`, listed row by row (`r`), then by
/// column (`c`). Index `3r + c`; product-basis index `3i + j` for `|i, j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenBellBasis3<T> {
    vectors: Vec<Vec<Complex<T>>>,
}

impl<T> GenBellBasis3<T>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    pub fn vectors(&self) -> &[Vec<Complex<T>>] {
        &self.vectors
    }

    pub fn gram_defect(&self) -> T {
        gram_defect(&self.vectors)
    }
}

pub fn gen_bell_basis3<T>() -> GenBellBasis3<T>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let norm = T::one() / lit::<T>(3.0).sqrt();
    let mut vectors = Vec::with_capacity(9);
    for r in 0..3 {
        for c in 0..3 {
            let mut v = vec![Complex::new(T::zero(), T::zero()); 9];
            for j in 0..3 {
                v[3 * j + (j + r) % 3] = omega::<T>(c * j).scale(norm);
            }
            vectors.push(v);
        }
    }
    GenBellBasis3 { vectors }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su3BellProbs<T> {
    pub probs: ProbabilityVector<T>,
    /// `|u₀₀ + ω² u₁₁ + ω u₂₂|² / 9`.
    pub p2_closed: T,
    /// `|u₀₀ + ω u₁₁ + ω² u₂₂|² / 9`.
    pub p3_closed: T,
}

pub fn su3_bell_probs<T>(u: &SpecialUnitary<T>) -> Result<Su3BellProbs<T>>
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    if u.dim() != 3 {
        return Err(Error::DimensionMismatch { left: u.dim(), right: 3 });
    }
    let m = u.matrix();
    let norm = T::one() / lit::<T>(3.0).sqrt();
    let psi: Vec<Complex<T>> = (0..9).map(|k| m[(k / 3, k % 3)].scale(norm)).collect();
    let basis = gen_bell_basis3::<T>();
    let probs = basis.vectors().iter().map(|b| inner(b, &psi).norm_sqr()).collect();
    let ninth = T::one() / lit(9.0);
    let (p2_closed, p3_closed) = closed_pair(m, ninth);
    Ok(Su3BellProbs { probs: ProbabilityVector::new(probs)?, p2_closed, p3_closed })
}

fn closed_pair<T>(m: &ComplexMat<T>, ninth: T) -> (T, T)
where
    T: Scalar,
    Complex<T>: Entry<Real = T>,
{
    let p2 = (m[(0, 0)] + omega::<T>(2) * m[(1, 1)] + omega::<T>(1) * m[(2, 2)]).norm_sqr() * ninth;
    let p3 = (m[(0, 0)] + omega::<T>(1) * m[(1, 1)] + omega::<T>(2) * m[(2, 2)]).norm_sqr() * ninth;
    (p2, p3)
}

fn product(m: &ComplexMat<f64>) -> f64 {
    let (p2, p3) = closed_pair(m, 1.0 / 9.0);
    p2 * p3
}

/// The eight Gell-Mann matrices.
pub fn gell_mann() -> [ComplexMat<f64>; 8] {
    let c = |re: f64, im: f64| Complex::new(re, im);
    let mut out: [ComplexMat<f64>; 8] = std::array::from_fn(|_| Mat::zeros(3, 3));
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        out[2 * k][(i, j)] = c(1.0, 0.0);
        out[2 * k][(j, i)] = c(1.0, 0.0);
        out[2 * k + 1][(i, j)] = c(0.0, -1.0);
        out[2 * k + 1][(j, i)] = c(0.0, 1.0);
    }
    out[6][(0, 0)] = c(1.0, 0.0);
    out[6][(1, 1)] = c(-1.0, 0.0);
    let s = 1.0 / 3f64.sqrt();
    out[7][(0, 0)] = c(s, 0.0);
    out[7][(1, 1)] = c(s, 0.0);
    out[7][(2, 2)] = c(-2.0 * s, 0.0);
    out
}

/// `exp(i Σ x_k λ_k)`.
fn lie_exp(x: &[f64; 8], basis: &[ComplexMat<f64>; 8]) -> ComplexMat<f64> {
    let mut h = Mat::zeros(3, 3);
    for (xk, l) in x.iter().zip(basis) {
        h = &h + &l.scaled(*xk);
    }
    h.map(|z| z * Complex::new(0.0, 1.0)).expm()
}

/// Random-restart hill climbing on `p₂ p₃` over `U₀ exp(i Σ x_k λ_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalSearchConfig {
    pub restarts: usize,
    pub initial_step: f64,
    pub step_decay: f64,
    pub min_step: f64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        Self { restarts: 50, initial_step: 0.5, step_decay: 0.5, min_step: 1e-9 }
    }
}

fn hill_climb(start: ComplexMat<f64>, config: &LocalSearchConfig, basis: &[ComplexMat<f64>; 8]) -> f64 {
    let mut current = start;
    let mut best = product(&current);
    let mut step = config.initial_step;
    while step > config.min_step {
        let mut improved = false;
        for k in 0..8 {
            for sign in [1.0, -1.0] {
                let mut x = [0.0; 8];
                x[k] = sign * step;
                let candidate = &current * &lie_exp(&x, basis);
                let value = product(&candidate);
                if value > best {
                    best = value;
                    current = candidate;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= config.step_decay;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Su3BoundReport {
    pub samples: usize,
    pub bound: f64,
    /// Largest `p₂ p₃` found by Haar sampling and local search together.
    pub max_product: f64,
    /// Largest `p₂ p₃` over the Haar sample alone.
    pub haar_max: f64,
    /// Best value of the local search; restart 0 starts at `diag(1, -1, -1)`.
    pub attained: f64,
    /// Largest `|direct - closed form|` for `p₂` and `p₃` over the sample.
    pub max_closed_form_error: f64,
    /// `max p₂ p₃ = 1/4` on the flat simplex, attained at `p₂ = p₃ = 1/2`.
    pub flat_simplex_max: f64,
    pub within_bound: bool,
    pub bound_attained: bool,
}

pub fn su3_product_bound(samples: usize, config: &LocalSearchConfig, seed: RngSeed) -> Result<Su3BoundReport> {
    if samples < 10_000 {
        return Err(Error::TooFewSamples { min: 10_000, got: samples });
    }
    let draws: Vec<(f64, f64)> = par_samples(seed.derive(0), samples, |rng, _| {
        let u = sample_su::<f64, _>(3, rng).expect("d = 3");
        let p = su3_bell_probs(&u).expect("d = 3");
        let e = p.probs.entries();
        let err = (e[1] - p.p2_closed).abs().max((e[2] - p.p3_closed).abs());
        (e[1] * e[2], err)
    });
    let haar_max = draws.iter().map(|d| d.0).fold(0.0, f64::max);
    let max_closed_form_error = draws.iter().map(|d| d.1).fold(0.0, f64::max);
    let basis = gell_mann();
    let starts: Vec<ComplexMat<f64>> = par_samples(seed.derive(1), config.restarts.max(1), |rng, i| {
        if i == 0 {
            extremal_unitary()
        } else {
            sample_su::<f64, _>(3, rng).expect("d = 3").into_matrix()
        }
    });
    let attained = starts
        .into_iter()
        .map(|s| hill_climb(s, config, &basis))
        .fold(0.0, f64::max);
    let tol = 1e-12;
    Ok(Su3BoundReport {
        samples,
        bound: PRODUCT_BOUND,
        max_product: haar_max.max(attained),
        haar_max,
        attained,
        max_closed_form_error,
        flat_simplex_max: flat_simplex_product_max(),
        within_bound: haar_max.max(attained) <= PRODUCT_BOUND + tol,
        bound_attained: attained >= PRODUCT_BOUND - 1e-6,
    })
}

/// `diag(1, -1, -1)`, where `p₂ = p₃ = 4/9`.
pub fn extremal_unitary() -> ComplexMat<f64> {
    Mat::from_diagonal(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0), Complex::new(-1.0, 0.0)])
}

/// `max p₂ p₃` subject to `p₂ + p₃ ≤ 1`, by a grid over `p₂`.
fn flat_simplex_product_max() -> f64 {
    (0..=1000).map(|i| i as f64 / 1000.0).map(|p| p * (1.0 - p)).fold(0.0, f64::max)
}

/// `|1 + a + b + a² + b² - ab|` for `|a|, |b| ≤ 1`, and whether it is `≤ 4 + 1e-12`.
pub fn footnote_inequality(a: Complex<f64>, b: Complex<f64>) -> Result<(f64, bool)> {
    if a.norm() > 1.0 + 1e-15 || b.norm() > 1.0 + 1e-15 {
        return Err(Error::OutOfRange(format!("|a| = {}, |b| = {} must be ≤ 1", a.norm(), b.norm())));
    }
    let lhs = footnote_lhs(a, b);
    Ok((lhs, lhs <= 4.0 + 1e-12))
}

fn footnote_lhs(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (1.0 + a + b + a * a + b * b - a * b).norm()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FootnoteSweep {
    pub points: u64,
    pub max: f64,
    pub argmax: [[f64; 2]; 2],
    pub all_within_bound: bool,
    /// Largest `|a - 1| + |b - 1|` among points with `lhs > 4 - near`.
    pub near_max_spread: f64,
    pub near: f64,
}

/// Polar grid over both unit disks: `radii` radii in `[0, 1]` times `angles`
/// angles for each of `a` and `b`. Includes the torus `|a| = |b| = 1`, where
/// the maximum of a polynomial on the bidisk lies.
pub fn footnote_sweep(radii: usize, angles: usize, near: f64) -> FootnoteSweep {
    use rayon::prelude::*;
    let disk: Vec<Complex<f64>> = (0..radii.max(2))
        .flat_map(|i| {
            let r = i as f64 / (radii.max(2) - 1) as f64;
            (0..angles).map(move |k| Complex::from_polar(r, std::f64::consts::TAU * k as f64 / angles as f64))
        })
        .collect();
    let rows: Vec<(f64, Complex<f64>, Complex<f64>, f64)> = disk
        .par_iter()
        .map(|&a| {
            let mut best = (f64::NEG_INFINITY, a, a, 0.0f64);
            for &b in &disk {
                let v = footnote_lhs(a, b);
                if v > best.0 {
                    best = (v, a, b, best.3);
                }
                if v > 4.0 - near {
                    best.3 = best.3.max((a - 1.0).norm() + (b - 1.0).norm());
                }
            }
            best
        })
        .collect();
    let mut out = rows[0];
    let mut spread = 0.0f64;
    for r in &rows {
        spread = spread.max(r.3);
        if r.0 > out.0 {
            out = *r;
        }
    }
    FootnoteSweep {
        points: (disk.len() as u64).pow(2),
        max: out.0,
        argmax: [[out.1.re, out.1.im], [out.2.re, out.2.im]],
        all_within_bound: out.0 <= 4.0 + 1e-12,
        near_max_spread: spread,
        near,
    }
}

/// Maximum of the footnote expression over `samples` uniform points of the bidisk.
pub fn footnote_random_search(samples: usize, seed: RngSeed) -> f64 {
    let disk = |rng: &mut crate::rng::StreamRng| {
        let r = rng.random::<f64>().sqrt();
        Complex::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
    };
    par_samples(seed, samples, |rng, _| {
        let a = disk(rng);
        let b = disk(rng);
        footnote_lhs(a, b)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn basis_orthonormal() {
        assert!(gen_bell_basis3::<f64>().gram_defect() < 1e-12);
    }

    #[test]
    fn identity_and_extremal() {
        let p = su3_bell_probs(&SpecialUnitary::<f64>::identity(3)).unwrap();
        assert_abs_diff_eq!(p.probs.entries()[0], 1.0, epsilon = 1e-15);
        assert!(p.probs.entries()[1..].iter().all(|&x| x < 1e-15));
        assert!(p.p2_closed < 1e-15 && p.p3_closed < 1e-15);
        let u = SpecialUnitary::new(extremal_unitary()).unwrap();
        let p = su3_bell_probs(&u).unwrap();
        assert_abs_diff_eq!(p.probs.entries()[1], 4.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.probs.entries()[2], 4.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.p2_closed * p.p3_closed, 16.0 / 81.0, epsilon = 1e-15);
    }

    #[test]
    fn haar_direct_matches_closed_form() {
        let mut rng = RngSeed::new(8, 0).rng();
        for _ in 0..10_000 {
            let u = sample_su::<f64, _>(3, &mut rng).unwrap();
            let p = su3_bell_probs(&u).unwrap();
            let e = p.probs.entries();
            assert!((e[1] - p.p2_closed).abs() < 1e-12 && (e[2] - p.p3_closed).abs() < 1e-12);
            assert!((e.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(e[1] * e[2] <= PRODUCT_BOUND + 1e-12);
        }
    }

    #[test]
    fn gell_mann_traceless_hermitian() {
        for l in gell_mann() {
            assert!(l.trace().norm() < 1e-15);
            assert!(l.max_abs_diff(&l.adjoint()) < 1e-15);
        }
        let x = [0.3, -0.2, 0.1, 0.5, -0.4, 0.2, 0.7, -0.1];
        let u = lie_exp(&x, &gell_mann());
        assert!(SpecialUnitary::new(u).is_ok());
    }

    #[test]
    fn bound_report() {
        let r = su3_product_bound(20_000, &LocalSearchConfig { restarts: 8, ..Default::default() }, RngSeed::new(3, 0)).unwrap();
        assert!(r.within_bound && r.bound_attained, "{r:?}");
        assert!(r.haar_max < PRODUCT_BOUND);
        assert_abs_diff_eq!(r.flat_simplex_max, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn footnote_examples() {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        assert_eq!(footnote_inequality(one, one).unwrap(), (4.0, true));
        assert_eq!(footnote_inequality(zero, zero).unwrap(), (1.0, true));
        assert!(footnote_inequality(Complex::new(1.1, 0.0), zero).is_err());
        assert!(footnote_random_search(100_000, RngSeed::new(1, 1)) <= 4.0 + 1e-12);
    }

    #[test]
    fn footnote_grid() {
        let s = footnote_sweep(6, 101, 1e-3);
        assert!(s.all_within_bound);
        assert_abs_diff_eq!(s.max, 4.0, epsilon = 1e-12);
        assert!(s.near_max_spread < 0.2, "{}", s.near_max_spread);
    }
}
