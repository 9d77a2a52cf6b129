//! Small dense matrices over real or complex scalars.
//!
//! Everything in the crate works with matrices of dimension ≤ 9, so a plain
//! row-major `Vec` with textbook algorithms is all that is needed.

use std::fmt::Debug;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, Num, NumAssign, ToPrimitive, Zero};

use crate::scalar::{count, lit, Scalar};

/// Matrix entry: a real scalar or a complex number over one.
pub trait Entry:
    Copy + Num + NumAssign + Neg<Output = Self> + Send + Sync + Debug + PartialEq + 'static
{
    type Real: Scalar;

    fn conj(self) -> Self;
    fn abs_sq(self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;
    fn scale(self, r: Self::Real) -> Self;

    fn abs(self) -> Self::Real {
        self.abs_sq().sqrt()
    }
}

macro_rules! real_entry {
    ($t:ty) => {
        impl Entry for $t {
            type Real = $t;
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn abs_sq(self) -> $t {
                self * self
            }
            #[inline]
            fn from_real(r: $t) -> Self {
                r
            }
            #[inline]
            fn scale(self, r: $t) -> Self {
                self * r
            }
        }

        impl Entry for Complex<$t> {
            type Real = $t;
            #[inline]
            fn conj(self) -> Self {
                Complex::conj(&self)
            }
            #[inline]
            fn abs_sq(self) -> $t {
                self.norm_sqr()
            }
            #[inline]
            fn from_real(r: $t) -> Self {
                Complex::new(r, 0.0)
            }
            #[inline]
            fn scale(self, r: $t) -> Self {
                self * r
            }
        }
    };
}

real_entry!(f32);
real_entry!(f64);

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type RealMat<T> = Mat<T>;
pub type ComplexMat<T> = Mat<Complex<T>>;

impl<E: Entry> Mat<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![E::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { E::one() } else { E::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[E]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { E::zero() })
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[E], v: &[E]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, r: E::Real) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn map(&self, f: impl Fn(E) -> E) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn trace(&self) -> E {
        (0..self.rows.min(self.cols)).fold(E::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn mul_vec(&self, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(E::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (other.rows, other.cols);
        Self::from_fn(self.rows * r, self.cols * c, |i, j| {
            self[(i / r, j / c)] * other[(i % r, j % c)]
        })
    }

    pub fn frobenius_norm(&self) -> E::Real {
        self.data.iter().map(|x| x.abs_sq()).sum::<E::Real>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> E::Real {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<E::Real>())
            .fold(E::Real::zero(), |a, b| a.max(b))
    }

    /// Largest entrywise deviation `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> E::Real {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(E::Real::zero(), |a, b| a.max(b))
    }

    /// `max |(A†A - I)_ij|`: zero for unitary / orthogonal matrices.
    pub fn unitarity_defect(&self) -> E::Real {
        let gram = &self.adjoint() * self;
        gram.max_abs_diff(&Self::identity(self.cols))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> E {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = E::one();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| {
                    a[i * n + k].abs_sq().partial_cmp(&a[j * n + k].abs_sq()).unwrap()
                })
                .unwrap();
            if a[pivot * n + k] == E::zero() {
                return E::zero();
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[k * n + k];
            det *= p;
            for i in k + 1..n {
                let f = a[i * n + k] / p;
                for j in k..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
        det
    }

    /// Matrix exponential by scaling and squaring with a Taylor kernel.
    ///
    /// The argument is scaled so its 1-norm is at most 1/2; the series is then
    /// summed until the next term is below machine precision relative to the
    /// partial sum.
    pub fn expm(&self) -> Self {
        assert!(self.is_square(), "exponential of non-square matrix");
        let n = self.rows;
        let norm = self.one_norm();
        let half = lit::<E::Real>(0.5);
        let mut squarings = 0u32;
        if norm > half {
            squarings = (norm / half).log2().ceil().to_u32().unwrap_or(0);
        }
        let a = self.scaled(lit::<E::Real>(2.0).powi(-(squarings as i32)));
        let mut sum = Self::identity(n);
        let mut term = Self::identity(n);
        let eps = E::Real::epsilon();
        for k in 1..=40usize {
            term = (&term * &a).scaled(count::<E::Real>(k).recip());
            sum = &sum + &term;
            if term.frobenius_norm() <= eps * sum.frobenius_norm() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    /// Thin QR factorisation by modified Gram–Schmidt (with one
    /// re-orthogonalisation pass). Returns `(Q, diag(R))`; `Q` has orthonormal
    /// columns and the returned diagonal of `R` is real and non-negative.
    ///
    /// Returns `None` when the columns are numerically dependent.
    pub fn qr_gram_schmidt(&self) -> Option<(Self, Vec<E::Real>)> {
        let (m, n) = (self.rows, self.cols);
        let mut q: Vec<Vec<E>> = (0..n).map(|j| self.column(j)).collect();
        let mut r_diag = Vec::with_capacity(n);
        let tiny = E::Real::epsilon() * lit(16.0);
        for j in 0..n {
            for _pass in 0..2 {
                for k in 0..j {
                    let proj = inner(&q[k], &q[j]);
                    let qk = q[k].clone();
                    for (x, &b) in q[j].iter_mut().zip(&qk) {
                        *x -= proj * b;
                    }
                }
            }
            let norm = q[j].iter().map(|x| x.abs_sq()).sum::<E::Real>().sqrt();
            if norm <= tiny {
                return None;
            }
            for x in q[j].iter_mut() {
                *x = x.scale(norm.recip());
            }
            r_diag.push(norm);
        }
        let qm = Self::from_fn(m, n, |i, j| q[j][i]);
        Some((qm, r_diag))
    }
}

/// `⟨u|v⟩ = Σ conj(u_i) v_i`.
pub fn inner<E: Entry>(u: &[E], v: &[E]) -> E {
    u.iter().zip(v).fold(E::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

impl<E> Index<(usize, usize)> for Mat<E> {
    type Output = E;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Mat<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

impl<E: Entry> Mul for &Mat<E> {
    type Output = Mat<E>;
    fn mul(self, rhs: &Mat<E>) -> Mat<E> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == E::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<E: Entry> Add for &Mat<E> {
    type Output = Mat<E>;
    fn add(self, rhs: &Mat<E>) -> Mat<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<E: Entry> Sub for &Mat<E> {
    type Output = Mat<E>;
    fn sub(self, rhs: &Mat<E>) -> Mat<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matrix whose columns are the
/// corresponding orthonormal eigenvectors.
pub fn symmetric_eigen<T: Scalar + Entry<Real = T>>(a: &Mat<T>) -> (Vec<T>, Mat<T>) {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Mat::<T>::identity(n);
    let two = lit::<T>(2.0);
    for _sweep in 0..64 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off <= T::epsilon() * T::epsilon() * m.frobenius_norm().powi(2).max(T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (two * apq);
                let t = theta.signum() / (Float::abs(theta) + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap());
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Largest singular value of a real matrix.
pub fn spectral_norm<T: Scalar + Entry<Real = T>>(a: &Mat<T>) -> T {
    let gram = &a.transpose() * a;
    let (values, _) = symmetric_eigen(&gram);
    values.last().copied().unwrap_or(T::zero()).max(T::zero()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type C = Complex<f64>;

    #[test]
    fn det_matches_hand_values() {
        let a = Mat::from_row_major(3, 3, vec![2.0, 0.0, 1.0, 1.0, 3.0, 2.0, 1.0, 1.0, 2.0]);
        assert_abs_diff_eq!(a.det(), 6.0, epsilon = 1e-12);
        let z = Mat::<f64>::zeros(2, 2);
        assert_eq!(z.det(), 0.0);
        let c = Mat::from_diagonal(&[C::i(), C::i()]);
        assert_abs_diff_eq!((c.det() - C::new(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let j = Mat::from_row_major(2, 2, vec![0.0, -1.0, 1.0, 0.0]);
        for &t in &[0.1, 1.0, 3.0, 10.0, -7.5] {
            let e = j.scaled(t).expm();
            let expected = Mat::from_row_major(2, 2, vec![t.cos(), -t.sin(), t.sin(), t.cos()]);
            assert!(e.max_abs_diff(&expected) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn expm_of_diagonal_complex() {
        let h = Mat::from_diagonal(&[C::new(0.0, 1.5), C::new(0.0, -0.25), C::new(0.3, 0.0)]);
        let e = h.expm();
        let expected = Mat::from_diagonal(&[
            C::new(0.0, 1.5).exp(),
            C::new(0.0, -0.25).exp(),
            C::new(0.3, 0.0).exp(),
        ]);
        assert!(e.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn qr_orthonormalises() {
        let a = Mat::from_row_major(
            3,
            3,
            vec![
                C::new(1.0, 0.5),
                C::new(0.2, 0.0),
                C::new(0.0, 1.0),
                C::new(0.3, -0.1),
                C::new(2.0, 0.0),
                C::new(0.5, 0.5),
                C::new(0.0, 0.0),
                C::new(1.0, 1.0),
                C::new(-1.0, 0.0),
            ],
        );
        let (q, r) = a.qr_gram_schmidt().unwrap();
        assert!(q.unitarity_defect() < 1e-14);
        assert!(r.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn jacobi_eigen() {
        let a = Mat::from_row_major(3, 3, vec![2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(&a);
        let s2 = 2f64.sqrt();
        assert_abs_diff_eq!(vals[0], 2.0 - s2, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[2], 2.0 + s2, epsilon = 1e-12);
        let recon = &(&vecs * &Mat::from_diagonal(&vals)) * &vecs.transpose();
        assert!(recon.max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn kron_shape_and_values() {
        let a = Mat::from_row_major(2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        let i = Mat::<f64>::identity(2);
        let k = a.kron(&i);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 0)], 1.0);
        assert_eq!(k[(1, 3)], 2.0);
        assert_eq!(k[(2, 0)], 3.0);
        assert_eq!(k[(3, 1)], 3.0);
        assert_eq!(k[(3, 0)], 0.0);
    }
}
