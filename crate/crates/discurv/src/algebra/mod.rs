// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Quaternions and split-quaternions as 2×2 complex matrices, and
//! polynomials over them.

mod mat2;
mod poly;

pub use mat2::Mat2C;
pub use poly::{
    even_part, odd_part, poly_factor_special, poly_factor_with_radii, real_poly_roots, scalar_poly_mul, special_radii,
    Factorization, QuatPoly,
};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("determinant has roots off the imaginary axis: {roots:?}")]
    NonImaginaryRoots { roots: Vec<Complex64> },
    #[error("leading coefficient is not invertible")]
    SingularLeading,
    #[error("normalized polynomial is not special (defect {defect:e})")]
    NotSpecial { defect: f64 },
    #[error("divisor 1 + λq with singular nonzero q")]
    SingularDivisor,
    #[error("re-multiplication check failed (relative error {residual:e})")]
    FactorizationFailed { residual: f64 },
}

/// `⟨F, G⟩ = ½ tr(F G*)`
pub fn mat_inner(f: &Mat2C, g: &Mat2C) -> Complex64 {
    f.inner(g)
}

/// `M − ½ tr M`
pub fn trace_free(m: &Mat2C) -> Mat2C {
    m.tf()
}

pub fn poly_mul(p: &QuatPoly, q: &QuatPoly) -> QuatPoly {
    p.mul(q)
}

pub fn poly_eval(p: &QuatPoly, lambda: Complex64) -> Mat2C {
    p.eval(lambda)
}

pub fn poly_det(p: &QuatPoly) -> Vec<Complex64> {
    p.det()
}

pub fn poly_divide_right(p: &QuatPoly, q: &Mat2C) -> Result<(QuatPoly, Mat2C), AlgebraError> {
    p.divide_right(q)
}
