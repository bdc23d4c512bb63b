// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// A 2×2 complex matrix, stored row-major as `[[a, b], [c, d]]`.
///
/// Quaternions are the real span of `1, 𝐢, 𝐣, 𝐤` with `𝐢 = -iσ₁`,
/// `𝐣 = -iσ₂`, `𝐤 = -iσ₃`; split-quaternions the real span of
/// `1, σ₁, σ₂, 𝐤`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Mat2C {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl fmt::Debug for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mat2C {
    pub const ZERO: Mat2C = Mat2C::new(c(0.0), c(0.0), c(0.0), c(0.0));
    pub const ONE: Mat2C = Mat2C::new(c(1.0), c(0.0), c(0.0), c(1.0));
    pub const SIGMA1: Mat2C = Mat2C::new(c(0.0), c(1.0), c(1.0), c(0.0));
    pub const SIGMA2: Mat2C = Mat2C::new(c(0.0), ci(-1.0), ci(1.0), c(0.0));
    pub const SIGMA3: Mat2C = Mat2C::new(c(1.0), c(0.0), c(0.0), c(-1.0));
    /// 𝐢 = -iσ₁
    pub const QI: Mat2C = Mat2C::new(c(0.0), ci(-1.0), ci(-1.0), c(0.0));
    /// 𝐣 = -iσ₂
    pub const QJ: Mat2C = Mat2C::new(c(0.0), c(-1.0), c(1.0), c(0.0));
    /// 𝐤 = -iσ₃
    pub const QK: Mat2C = Mat2C::new(ci(-1.0), c(0.0), c(0.0), ci(1.0));

    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2C { a, b, c, d }
    }

    pub fn from_rows(rows: [[Complex64; 2]; 2]) -> Self {
        Mat2C::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn scalar(s: Complex64) -> Self {
        Mat2C::new(s, c(0.0), c(0.0), s)
    }

    pub fn real(s: f64) -> Self {
        Mat2C::scalar(c(s))
    }

    /// `x0 + x1 𝐢 + x2 𝐣 + x3 𝐤`
    pub fn quaternion(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Mat2C::ONE * x0 + Mat2C::QI * x1 + Mat2C::QJ * x2 + Mat2C::QK * x3
    }

    /// `x0 + x1 σ₁ + x2 σ₂ + x3 𝐤`
    pub fn split_quaternion(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Mat2C::ONE * x0 + Mat2C::SIGMA1 * x1 + Mat2C::SIGMA2 * x2 + Mat2C::QK * x3
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Adjugate `F*`, so that `F F* = det F`.
    pub fn adj(&self) -> Self {
        Mat2C::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inv(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        Some(self.adj() * (1.0 / det))
    }

    /// Inverse, rejecting matrices with `|det| <= tol * |F|²`.
    pub fn inv_tol(&self, tol: f64) -> Option<Self> {
        let n = self.norm();
        if self.det().norm() <= tol * n * n {
            return None;
        }
        self.inv()
    }

    /// Trace-free part `M - ½ tr M`.
    pub fn tf(&self) -> Self {
        *self - Mat2C::scalar(self.trace() * 0.5)
    }

    /// `½ tr(F G*)`
    pub fn inner(&self, g: &Mat2C) -> Complex64 {
        (*self * g.adj()).trace() * 0.5
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.norm().max(self.b.norm()).max(self.c.norm()).max(self.d.norm())
    }

    pub fn dist(&self, g: &Mat2C) -> f64 {
        (*self - *g).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn conj_entries(&self) -> Self {
        Mat2C::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    /// Coordinates on `1, 𝐢, 𝐣, 𝐤`; exact for quaternions.
    pub fn quaternion_coords(&self) -> [f64; 4] {
        [self.inner(&Mat2C::ONE).re, self.inner(&Mat2C::QI).re, self.inner(&Mat2C::QJ).re, self.inner(&Mat2C::QK).re]
    }

    /// Coordinates on `1, σ₁, σ₂, 𝐤`; exact for split-quaternions.
    pub fn split_coords(&self) -> [f64; 4] {
        [
            self.inner(&Mat2C::ONE).re,
            -self.inner(&Mat2C::SIGMA1).re,
            -self.inner(&Mat2C::SIGMA2).re,
            self.inner(&Mat2C::QK).re,
        ]
    }

    /// Distance from the real span of `1, 𝐢, 𝐣, 𝐤`.
    pub fn quaternion_defect(&self) -> f64 {
        (self.a - self.d.conj()).norm().max((self.b + self.c.conj()).norm())
    }

    /// Distance from the real span of `1, σ₁, σ₂, 𝐤`.
    pub fn split_defect(&self) -> f64 {
        (self.a - self.d.conj()).norm().max((self.b - self.c.conj()).norm())
    }

    pub fn is_quaternion(&self, tol: f64) -> bool {
        self.quaternion_defect() <= tol * self.norm().max(1.0)
    }

    pub fn is_split_quaternion(&self, tol: f64) -> bool {
        self.split_defect() <= tol * self.norm().max(1.0)
    }

    /// Nearest quaternion (projection onto the real span).
    pub fn project_quaternion(&self) -> Self {
        let x = self.quaternion_coords();
        Mat2C::quaternion(x[0], x[1], x[2], x[3])
    }

    pub fn project_split(&self) -> Self {
        let x = self.split_coords();
        Mat2C::split_quaternion(x[0], x[1], x[2], x[3])
    }

    /// `self / sqrt(det self)` with the principal square root.
    pub fn normalize_det(&self) -> Self {
        *self * (1.0 / self.det().sqrt())
    }
}

const fn c(re: f64) -> Complex64 {
    Complex64 { re, im: 0.0 }
}

const fn ci(im: f64) -> Complex64 {
    Complex64 { re: 0.0, im }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl AddAssign for Mat2C {
    fn add_assign(&mut self, o: Mat2C) {
        *self = *self + o;
    }
}

impl SubAssign for Mat2C {
    fn sub_assign(&mut self, o: Mat2C) {
        *self = *self - o;
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, o: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Mul<Complex64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: Complex64) -> Mat2C {
        Mat2C::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Mul<f64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: f64) -> Mat2C {
        Mat2C::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Mul<Mat2C> for f64 {
    type Output = Mat2C;
    fn mul(self, m: Mat2C) -> Mat2C {
        m * self
    }
}

impl Mul<Mat2C> for Complex64 {
    type Output = Mat2C;
    fn mul(self, m: Mat2C) -> Mat2C {
        m * self
    }
}

impl std::iter::Sum for Mat2C {
    fn sum<It: Iterator<Item = Mat2C>>(iter: It) -> Mat2C {
        iter.fold(Mat2C::ZERO, |acc, m| acc + m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_units_multiply() {
        let (i, j, k) = (Mat2C::QI, Mat2C::QJ, Mat2C::QK);
        assert!((i * j).dist(&k) < 1e-15);
        assert!((j * k).dist(&i) < 1e-15);
        assert!((k * i).dist(&j) < 1e-15);
        assert!((i * i).dist(&Mat2C::real(-1.0)) < 1e-15);
    }

    #[test]
    fn inner_signatures() {
        assert_eq!(Mat2C::ONE.inner(&Mat2C::ONE), c(1.0));
        assert_eq!(Mat2C::QI.inner(&Mat2C::QI), c(1.0));
        assert_eq!(Mat2C::SIGMA1.inner(&Mat2C::SIGMA1), c(-1.0));
        assert_eq!(Mat2C::SIGMA2.inner(&Mat2C::SIGMA2), c(-1.0));
    }

    #[test]
    fn trace_free_examples() {
        assert_eq!(Mat2C::ONE.tf(), Mat2C::ZERO);
        assert_eq!(Mat2C::QK.tf(), Mat2C::QK);
        let m = Mat2C::ONE + Mat2C::QK * 2.0;
        assert!(m.tf().dist(&(Mat2C::QK * 2.0)) < 1e-15);
    }

    #[test]
    fn membership() {
        let q = Mat2C::quaternion(0.3, -1.0, 2.0, 0.5);
        assert!(q.is_quaternion(1e-12));
        assert!(!q.is_split_quaternion(1e-12));
        let s = Mat2C::split_quaternion(0.3, -1.0, 2.0, 0.5);
        assert!(s.is_split_quaternion(1e-12));
        assert_eq!(s.split_coords(), [0.3, -1.0, 2.0, 0.5]);
        assert!(q.det().re > 0.0);
        assert!(s.det().im.abs() < 1e-15);
    }
}
