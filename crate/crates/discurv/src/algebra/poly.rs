// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Polynomials in a commuting scalar `λ` with 2×2 complex coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AlgebraError, Mat2C};

/// `C⁰ + λC¹ + … + λⁿCⁿ`. Trailing zero coefficients are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatPoly {
    coeffs: Vec<Mat2C>,
}

impl QuatPoly {
    pub fn new(coeffs: Vec<Mat2C>) -> Self {
        if coeffs.is_empty() {
            return QuatPoly { coeffs: vec![Mat2C::ZERO] };
        }
        QuatPoly { coeffs }
    }

    pub fn constant(c: Mat2C) -> Self {
        QuatPoly { coeffs: vec![c] }
    }

    /// `1 + λq`
    pub fn linear(q: Mat2C) -> Self {
        QuatPoly { coeffs: vec![Mat2C::ONE, q] }
    }

    /// `e (1 + λv⁽ⁿ⁻¹⁾) ··· (1 + λv⁽⁰⁾)` for `vs = [v⁽⁰⁾, …, v⁽ⁿ⁻¹⁾]`.
    pub fn from_factors(e: Mat2C, vs: &[Mat2C]) -> Self {
        let mut p = QuatPoly::constant(e);
        for v in vs.iter().rev() {
            p = p.mul(&QuatPoly::linear(*v));
        }
        p
    }

    pub fn coeffs(&self) -> &[Mat2C] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Mat2C {
        self.coeffs.get(j).copied().unwrap_or(Mat2C::ZERO)
    }

    /// Nominal degree (number of coefficients minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &QuatPoly) -> QuatPoly {
        let mut out = vec![Mat2C::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += *a * *b;
            }
        }
        QuatPoly { coeffs: out }
    }

    pub fn left_mul(&self, m: &Mat2C) -> QuatPoly {
        QuatPoly { coeffs: self.coeffs.iter().map(|c| *m * *c).collect() }
    }

    pub fn right_mul(&self, m: &Mat2C) -> QuatPoly {
        QuatPoly { coeffs: self.coeffs.iter().map(|c| *c * *m).collect() }
    }

    pub fn add(&self, o: &QuatPoly) -> QuatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QuatPoly { coeffs: (0..n).map(|j| self.coeff(j) + o.coeff(j)).collect() }
    }

    pub fn eval(&self, lambda: Complex64) -> Mat2C {
        let mut acc = Mat2C::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * lambda + *c;
        }
        acc
    }

    /// Coefficients of `det P(λ)`, lowest first; length `2n + 1`.
    pub fn det(&self) -> Vec<Complex64> {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in self.coeffs.iter().enumerate() {
                out[i + j] += a.inner(b);
            }
        }
        out
    }

    /// `r_j = ½ tr C^j`
    pub fn half_trace(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.trace() * 0.5).collect()
    }

    /// Coefficientwise trace-free part `P⃗`.
    pub fn vector_part(&self) -> QuatPoly {
        QuatPoly { coeffs: self.coeffs.iter().map(Mat2C::tf).collect() }
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(Mat2C::norm).fold(0.0, f64::max)
    }

    /// Largest coefficient distance, padding the shorter polynomial with zeros.
    pub fn max_diff(&self, o: &QuatPoly) -> f64 {
        let n = self.coeffs.len().max(o.coeffs.len());
        (0..n).map(|j| self.coeff(j).dist(&o.coeff(j))).fold(0.0, f64::max)
    }

    /// Drops trailing coefficients with norm below `tol` (keeps `C⁰`).
    pub fn trimmed(&self, tol: f64) -> QuatPoly {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= tol) {
            coeffs.pop();
        }
        QuatPoly { coeffs }
    }

    /// Pads with zero coefficients up to nominal degree `n`.
    pub fn padded(&self, n: usize) -> QuatPoly {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() < n + 1 {
            coeffs.push(Mat2C::ZERO);
        }
        QuatPoly { coeffs }
    }

    /// Right division `P = Q (1 + λq) + R` with constant remainder `R`.
    pub fn divide_right(&self, q: &Mat2C) -> Result<(QuatPoly, Mat2C), AlgebraError> {
        let n = self.degree();
        if n == 0 {
            return Ok((QuatPoly::constant(Mat2C::ZERO), self.coeffs[0]));
        }
        if *q == Mat2C::ZERO {
            return Ok((self.clone(), Mat2C::ZERO));
        }
        let qi = q.inv().ok_or(AlgebraError::SingularDivisor)?;
        let mut d = vec![Mat2C::ZERO; n];
        d[n - 1] = self.coeffs[n] * qi;
        for j in (1..n).rev() {
            d[j - 1] = (self.coeffs[j] - d[j]) * qi;
        }
        let r = self.coeffs[0] - d[0];
        Ok((QuatPoly { coeffs: d }, r))
    }

    /// Largest distance of a coefficient from its parity class: even `j` in
    /// `span{1, 𝐤}`, odd `j` in `span{𝐢, 𝐣}`.
    pub fn special_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 0 { c.dist(&even_part(c)) } else { c.dist(&odd_part(c)) })
            .fold(0.0, f64::max)
    }

    pub fn is_special(&self, tol: f64) -> bool {
        self.special_defect() <= tol * self.max_coeff_norm().max(1.0)
    }
}

/// Projection onto `span{1, 𝐤}`.
pub fn even_part(c: &Mat2C) -> Mat2C {
    let x = c.quaternion_coords();
    Mat2C::quaternion(x[0], 0.0, 0.0, x[3])
}

/// Projection onto `span{𝐢, 𝐣}`.
pub fn odd_part(c: &Mat2C) -> Mat2C {
    let x = c.quaternion_coords();
    Mat2C::quaternion(0.0, x[1], x[2], 0.0)
}

/// Product of scalar polynomials (lowest coefficient first).
pub fn scalar_poly_mul(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Roots of a real polynomial (lowest coefficient first) via the
/// eigenvalues of its companion matrix. Leading zeros are ignored.
pub fn real_poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg <= 1 {
        return Vec::new();
    }
    let m = deg - 1;
    let lead = coeffs[m];
    let mut comp = DMatrix::<f64>::zeros(m, m);
    for i in 1..m {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..m {
        comp[(i, m - 1)] = -coeffs[i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Outcome of a factorization into special linear factors.
#[derive(Clone, Debug)]
pub struct Factorization {
    /// `v⁽⁰⁾ … v⁽ⁿ⁻¹⁾`, rightmost factor first.
    pub factors: Vec<Mat2C>,
    /// Leading coefficient `C⁰`.
    pub leading: Mat2C,
    /// Largest coefficient error of the re-multiplied product, relative to
    /// the largest coefficient of `(C⁰)⁻¹P`.
    pub residual: f64,
}

/// Root data of the determinant of a normalized special polynomial:
/// the values `s` with `det P(±is) = 0`, ascending.
pub fn special_radii(p: &QuatPoly, tol: f64) -> Result<Vec<f64>, AlgebraError> {
    let normalized = normalize_leading(p, tol)?;
    let trimmed = normalized.trimmed(tol * normalized.max_coeff_norm().max(1.0));
    radii_of_normalized(&trimmed, tol)
}

fn normalize_leading(p: &QuatPoly, tol: f64) -> Result<QuatPoly, AlgebraError> {
    let c0 = p.coeff(0);
    let inv = c0.inv_tol(tol).ok_or(AlgebraError::SingularLeading)?;
    let normalized = p.left_mul(&inv);
    if !normalized.is_special(tol.sqrt().max(tol)) {
        return Err(AlgebraError::NotSpecial { defect: normalized.special_defect() });
    }
    Ok(normalized)
}

fn radii_of_normalized(p: &QuatPoly, tol: f64) -> Result<Vec<f64>, AlgebraError> {
    let det = p.det();
    // det of a special polynomial is real and even in λ
    let mu_coeffs: Vec<f64> = det.iter().step_by(2).map(|c| c.re).collect();
    let roots = real_poly_roots(&mu_coeffs);
    // companion eigenvalues of a k-fold root are only accurate to ε^(1/k)
    let root_tol = tol.sqrt().max(tol);
    let mut radii = Vec::with_capacity(roots.len());
    for mu in &roots {
        if mu.im.abs() > root_tol * (1.0 + mu.norm()) || mu.re >= 0.0 {
            return Err(AlgebraError::NonImaginaryRoots { roots: roots.iter().map(|r| r.sqrt()).collect() });
        }
        radii.push((-mu.re).sqrt());
    }
    radii.sort_by(f64::total_cmp);
    Ok(radii)
}

/// Factorizes `P = C⁰ (1 + λv⁽ⁿ⁻¹⁾) ··· (1 + λv⁽⁰⁾)` with `v⁽ⁱ⁾ ∈ span{𝐢, 𝐣}`.
///
/// Missing degree up to `n` is filled with identity factors `v = 0` at the
/// high end.
pub fn poly_factor_special(p: &QuatPoly, n: Option<usize>, tol: f64) -> Result<Factorization, AlgebraError> {
    let radii = special_radii(p, tol)?;
    let mut order: Vec<Option<f64>> = radii.into_iter().map(Some).collect();
    let n = n.unwrap_or(p.degree());
    while order.len() < n {
        order.push(None);
    }
    poly_factor_with_radii(p, &order, tol)
}

/// Factorization with a prescribed order of root radii; `None` entries are
/// identity factors. Used to factor consistently along a curve.
pub fn poly_factor_with_radii(p: &QuatPoly, radii: &[Option<f64>], tol: f64) -> Result<Factorization, AlgebraError> {
    let c0 = p.coeff(0);
    let normalized = normalize_leading(p, tol)?;
    let scale = normalized.max_coeff_norm().max(1.0);
    let mut rest = normalized.trimmed(tol * scale);
    let mut factors = Vec::with_capacity(radii.len());
    for s in radii {
        let Some(s) = *s else {
            factors.push(Mat2C::ZERO);
            continue;
        };
        if rest.degree() == 0 {
            return Err(AlgebraError::FactorizationFailed { residual: f64::INFINITY });
        }
        let s2 = s * s;
        let mut r0 = Mat2C::ZERO;
        let mut r1 = Mat2C::ZERO;
        for (j, c) in rest.coeffs().iter().enumerate() {
            let w = (-s2).powi((j / 2) as i32);
            if j % 2 == 0 {
                r0 += *c * w;
            } else {
                r1 += *c * w;
            }
        }
        let local = rest.max_coeff_norm().max(1.0);
        let v = if r0.norm() <= 1e3 * tol * local && r1.norm() <= 1e3 * tol * local {
            // the real quadratic divides P; every member of the class works
            Mat2C::QI * (1.0 / s)
        } else {
            let r0i = r0.inv_tol(tol).ok_or(AlgebraError::FactorizationFailed { residual: f64::INFINITY })?;
            odd_part(&(r0i * r1))
        };
        let (q, _) = rest.divide_right(&v)?;
        factors.push(v);
        rest = q;
    }
    let rebuilt = QuatPoly::from_factors(Mat2C::ONE, &factors);
    let residual = rebuilt.max_diff(&normalized) / scale;
    if !(residual <= tol.sqrt().max(tol)) {
        return Err(AlgebraError::FactorizationFailed { residual });
    }
    Ok(Factorization { factors, leading: c0, residual })
}
