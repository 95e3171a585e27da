//! Two-component complex vectors and 2x2 complex matrices.
//!
//! These are the only linear-algebra objects the Darboux construction needs:
//! Lax matrices, dressing factors, rank-one projectors and boundary matrices
//! are all 2x2, and the auxiliary linear problems act on 2-vectors.  Keeping
//! them as flat structs of `Complex64` avoids any allocation in the hot
//! evaluation loops.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type C64 = Complex64;

/// Shorthand complex constructor.
#[inline(always)]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Column vector in C^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2Vector {
    pub first: C64,
    pub second: C64,
}

impl C2Vector {
    #[inline(always)]
    pub fn new(first: C64, second: C64) -> Self {
        Self { first, second }
    }

    pub fn zero() -> Self {
        Self::new(ZERO, ZERO)
    }

    /// Standard basis vector e1 = (1, 0).
    pub fn e1() -> Self {
        Self::new(ONE, ZERO)
    }

    /// Standard basis vector e2 = (0, 1).
    pub fn e2() -> Self {
        Self::new(ZERO, ONE)
    }

    /// Squared Euclidean norm |v1|^2 + |v2|^2.
    #[inline(always)]
    pub fn norm_sqr(&self) -> f64 {
        self.first.norm_sqr() + self.second.norm_sqr()
    }

    #[inline(always)]
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product <self, other> = conj(self) . other
    /// (antilinear in the first slot).
    #[inline(always)]
    pub fn inner(&self, other: &C2Vector) -> C64 {
        self.first.conj() * other.first + self.second.conj() * other.second
    }

    #[inline(always)]
    pub fn scale(&self, s: C64) -> C2Vector {
        C2Vector::new(s * self.first, s * self.second)
    }

    pub fn is_finite(&self) -> bool {
        self.first.is_finite() && self.second.is_finite()
    }
}

impl Add for C2Vector {
    type Output = C2Vector;
    fn add(self, rhs: C2Vector) -> C2Vector {
        C2Vector::new(self.first + rhs.first, self.second + rhs.second)
    }
}

impl Sub for C2Vector {
    type Output = C2Vector;
    fn sub(self, rhs: C2Vector) -> C2Vector {
        C2Vector::new(self.first - rhs.first, self.second - rhs.second)
    }
}

impl Neg for C2Vector {
    type Output = C2Vector;
    fn neg(self) -> C2Vector {
        C2Vector::new(-self.first, -self.second)
    }
}

/// 2x2 complex matrix, row-major entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2Matrix {
    pub m11: C64,
    pub m12: C64,
    pub m21: C64,
    pub m22: C64,
}

impl C2Matrix {
    #[inline(always)]
    pub fn new(m11: C64, m12: C64, m21: C64, m22: C64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn identity() -> Self {
        Self::diag(ONE, ONE)
    }

    pub fn diag(d1: C64, d2: C64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    /// Pauli matrix sigma_3 = diag(1, -1).
    pub fn sigma3() -> Self {
        Self::diag(ONE, -ONE)
    }

    /// Pauli matrix sigma_2 = [[0, -i], [i, 0]].
    pub fn sigma2() -> Self {
        Self::new(ZERO, -I, I, ZERO)
    }

    /// Outer product v w^dagger (rank one unless v or w vanishes).
    #[inline(always)]
    pub fn outer(v: &C2Vector, w: &C2Vector) -> Self {
        Self::new(
            v.first * w.first.conj(),
            v.first * w.second.conj(),
            v.second * w.first.conj(),
            v.second * w.second.conj(),
        )
    }

    #[inline(always)]
    pub fn det(&self) -> C64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    #[inline(always)]
    pub fn trace(&self) -> C64 {
        self.m11 + self.m22
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m11.conj(),
            self.m21.conj(),
            self.m12.conj(),
            self.m22.conj(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(s * self.m11, s * self.m12, s * self.m21, s * self.m22)
    }

    /// Matrix inverse; `None` when the determinant underflows to an
    /// unusable magnitude.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm_sqr() < f64::MIN_POSITIVE {
            return None;
        }
        let inv = ONE / d;
        Some(Self::new(
            inv * self.m22,
            -inv * self.m12,
            -inv * self.m21,
            inv * self.m11,
        ))
    }

    #[inline(always)]
    pub fn mul_vec(&self, v: &C2Vector) -> C2Vector {
        C2Vector::new(
            self.m11 * v.first + self.m12 * v.second,
            self.m21 * v.first + self.m22 * v.second,
        )
    }

    /// Largest entry modulus; the matrix norm used by all structural checks.
    pub fn max_norm(&self) -> f64 {
        self.m11
            .norm()
            .max(self.m12.norm())
            .max(self.m21.norm())
            .max(self.m22.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.m11.is_finite() && self.m12.is_finite() && self.m21.is_finite() && self.m22.is_finite()
    }
}

impl Add for C2Matrix {
    type Output = C2Matrix;
    fn add(self, rhs: C2Matrix) -> C2Matrix {
        C2Matrix::new(
            self.m11 + rhs.m11,
            self.m12 + rhs.m12,
            self.m21 + rhs.m21,
            self.m22 + rhs.m22,
        )
    }
}

impl Sub for C2Matrix {
    type Output = C2Matrix;
    fn sub(self, rhs: C2Matrix) -> C2Matrix {
        C2Matrix::new(
            self.m11 - rhs.m11,
            self.m12 - rhs.m12,
            self.m21 - rhs.m21,
            self.m22 - rhs.m22,
        )
    }
}

impl Mul for C2Matrix {
    type Output = C2Matrix;
    #[inline(always)]
    fn mul(self, rhs: C2Matrix) -> C2Matrix {
        C2Matrix::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn inverse_round_trip() {
        let m = C2Matrix::new(c64(1.0, 2.0), c64(-0.5, 0.3), c64(0.0, 1.0), c64(2.0, -1.0));
        let inv = m.inverse().unwrap();
        let prod = m * inv;
        assert_abs_diff_eq!((prod - C2Matrix::identity()).max_norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn outer_product_is_rank_one() {
        let v = C2Vector::new(c64(1.0, 1.0), c64(0.0, -2.0));
        let w = C2Vector::new(c64(0.5, 0.0), c64(1.0, 3.0));
        let m = C2Matrix::outer(&v, &w);
        assert_abs_diff_eq!(m.det().norm(), 0.0, epsilon = 1e-14);
        // trace of v v^dagger equals |v|^2
        let p = C2Matrix::outer(&v, &v);
        assert_abs_diff_eq!(p.trace().re, v.norm_sqr(), epsilon = 1e-14);
    }

    #[test]
    fn inner_product_conventions() {
        let v = C2Vector::new(c64(0.0, 1.0), ZERO);
        let w = C2Vector::new(c64(2.0, 0.0), ZERO);
        // antilinear in the first argument: <iv, w> = -i <v, w>
        assert_abs_diff_eq!(v.inner(&w).im, -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.inner(&v).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn pauli_identities() {
        let s2 = C2Matrix::sigma2();
        let s3 = C2Matrix::sigma3();
        assert_eq!(s2 * s2, C2Matrix::identity());
        assert_eq!(s3 * s3, C2Matrix::identity());
        // sigma2 sigma3 = -sigma3 sigma2
        let a = s2 * s3;
        let b = s3 * s2;
        assert_abs_diff_eq!((a + b).max_norm(), 0.0, epsilon = 1e-15);
    }
}
