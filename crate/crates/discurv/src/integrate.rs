// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Curves from curvature, and the constrained-elastic curvature equation
//! `(κ₋₁ + κ₁)(1 + ζ²κ₀²/4) = ξκ₀ + δ`.

use nalgebra::{DMatrix, DVector};

use crate::algebra::odd_part;
use crate::curve::CurveError;
use crate::{DiscreteCurve, Isometry, Mat2C, SpaceForm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrateError {
    #[error("seed points are not at distance η = {eta} (got {got})")]
    BadSeedDistance { eta: f64, got: f64 },
    #[error("η = {0} is not admissible for this space form")]
    InadmissibleEta(f64),
    #[error("curvature fit needs at least 4 interior vertices, got {0}")]
    TooShort(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Parameters `ξ`, `δ` of the curvature equation at arc-length `η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElasticParams {
    pub xi: f64,
    pub delta: f64,
    pub eta: f64,
}

impl ElasticParams {
    pub fn zeta(&self, space: SpaceForm) -> f64 {
        space.zeta(self.eta)
    }

    pub fn is_elastic(&self) -> bool {
        self.delta == 0.0
    }

    /// `ξ` for which constant curvature `c` solves the equation with `δ = 0`.
    pub fn circle_xi(space: SpaceForm, eta: f64, c: f64) -> f64 {
        let z = space.zeta(eta);
        2.0 * (1.0 + z * z * c * c / 4.0)
    }
}

pub fn check_eta(space: SpaceForm, eta: f64) -> Result<(), IntegrateError> {
    let ok = eta > 0.0 && eta.is_finite() && (space != SpaceForm::Spherical || eta < 2.0);
    if ok {
        Ok(())
    } else {
        Err(IntegrateError::InadmissibleEta(eta))
    }
}

/// `0, η𝐢` in 𝔼²; `𝐤` and a point in the `𝐢` direction otherwise.
pub fn default_seed(space: SpaceForm, eta: f64) -> [Mat2C; 2] {
    match space {
        SpaceForm::Euclidean => [Mat2C::ZERO, Mat2C::QI * eta],
        SpaceForm::Spherical => {
            let c = 1.0 - eta * eta / 2.0;
            let s = (1.0 - c * c).max(0.0).sqrt();
            [Mat2C::QK, space.point(&[s, 0.0, c])]
        }
        SpaceForm::Hyperbolic => {
            let c = 1.0 + eta * eta / 2.0;
            let s = (c * c - 1.0).sqrt();
            [Mat2C::QK, space.point(&[s, 0.0, c])]
        }
    }
}

/// Builds the curve with curvature `kappa[j]` at vertex `j + 1`.
///
/// Each step conjugates the transport by `H₀` and then re-projects transport
/// and point onto the model, which keeps η exact to round-off. Off 𝔼² the
/// step is taken in a frame with the current vertex at 𝐤.
pub fn integrate_curvature(
    space: SpaceForm,
    eta: f64,
    kappa: &[f64],
    seed: Option<[Mat2C; 2]>,
    tol: f64,
) -> Result<DiscreteCurve, IntegrateError> {
    check_eta(space, eta)?;
    let seed = seed.unwrap_or_else(|| default_seed(space, eta));
    for f in &seed {
        let defect = space.model_defect(f);
        if defect > tol.max(1e-12) * 10.0 {
            return Err(IntegrateError::Curve(CurveError::NotOnModel { index: 0, defect }));
        }
    }
    let got = space.chord(&seed[0], &seed[1]);
    if !((got - eta).abs() <= tol * eta.max(1.0)) {
        return Err(IntegrateError::BadSeedDistance { eta, got });
    }
    let mut pts = Vec::with_capacity(kappa.len() + 2);
    pts.extend_from_slice(&seed);
    if space == SpaceForm::Euclidean {
        let mut u = seed[1] - seed[0];
        for &k in kappa {
            let h = Mat2C::ONE + Mat2C::QK * (eta / 2.0 * k);
            u = h * u * h.inv().expect("1 + x𝐤 is invertible for real x");
            let w = odd_part(&u);
            u = w * (eta / w.det().re.sqrt());
            let f1 = *pts.last().expect("seeded") + u;
            pts.push(f1);
        }
    } else {
        // Steps are taken with the current vertex at 𝐤, where `1 + xF` is
        // well conditioned; `frame` carries the local picture back.
        let place = placement(space, &seed[1]);
        let mut frame = place.inverse();
        let mut prev = place.apply(&seed[0]);
        for &k in kappa {
            let f1 = step_at_k(space, eta, &prev, k);
            pts.push(space.project(&frame.apply(&f1)));
            let next = placement(space, &f1);
            prev = next.apply(&Mat2C::QK);
            let back = next.inverse();
            frame = Isometry {
                e: (back.e * frame.e).normalize_det(),
                translation: Mat2C::ZERO,
                sign: back.sign * frame.sign,
            };
        }
    }
    Ok(DiscreteCurve::new(space, pts, false, tol.max(1e-9))?)
}

/// Isometry taking `f` to `𝐤`.
fn placement(space: SpaceForm, f: &Mat2C) -> Isometry {
    crate::family::canonical_placement(&DiscreteCurve::from_parts(space, vec![*f], false, 0.0))
}

/// Next vertex after `prev → 𝐤` with curvature `k` at `𝐤`.
fn step_at_k(space: SpaceForm, eta: f64, prev: &Mat2C, k: f64) -> Mat2C {
    let (eps, zeta) = (space.epsilon(), space.zeta(eta));
    let f0 = Mat2C::QK;
    let h = Mat2C::ONE + f0 * (zeta / 2.0 * k);
    let u = h * space.transport(prev, &f0) * h.inv().expect("1 + x𝐤 is invertible for real x");
    let mut w = u.tf();
    w = w - f0 * (w.inner(&f0) / f0.inner(&f0));
    let n = (eps * w.det().re).sqrt();
    let w = w * (zeta / n);
    let v = Mat2C::real(1.0 - eps * eta * eta / 2.0) + w;
    space.project(&(v * f0))
}

/// Iterates `κ₁ = (ξκ₀ + δ)/(1 + ζ²κ₀²/4) − κ₋₁`; returns `n` values
/// starting with `κ₋₁, κ₀`.
pub fn kappa_recursion(space: SpaceForm, params: ElasticParams, k_m1: f64, k0: f64, n: usize) -> Vec<f64> {
    let z2 = params.zeta(space).powi(2);
    let mut ks = vec![k_m1, k0];
    while ks.len() < n {
        let (a, b) = (ks[ks.len() - 2], ks[ks.len() - 1]);
        ks.push((params.xi * b + params.delta) / (1.0 + z2 * b * b / 4.0) - a);
    }
    ks.truncate(n);
    ks
}

/// Least-squares `(ξ, δ)` of the curvature equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureFit {
    pub xi: f64,
    pub delta: f64,
    /// Largest absolute equation residual.
    pub residual: f64,
    /// Constant curvature: `(ξ, δ)` is not determined; the elastic choice
    /// `δ = 0` is returned.
    pub non_unique: bool,
}

pub fn curvature_equation_fit(curve: &DiscreteCurve) -> Result<CurvatureFit, IntegrateError> {
    let kappa = curve.curvature()?;
    let zeta = curve.zeta();
    let mut rows = Vec::new();
    for i in curve.interior() {
        let (p, n) = curve.neighbours(i).expect("interior");
        if let (Some(km), Some(k0), Some(kp)) = (kappa[p], kappa[i], kappa[n]) {
            rows.push((km, k0, kp));
        }
    }
    if rows.len() < 2 {
        return Err(IntegrateError::TooShort(curve.interior().len()));
    }
    let lhs = |&(km, k0, kp): &(f64, f64, f64)| (km + kp) * (1.0 + zeta * zeta * k0 * k0 / 4.0);
    let ks: Vec<f64> = kappa.iter().flatten().copied().collect();
    let (lo, hi) = ks.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &k| (l.min(k), h.max(k)));
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let (xi, delta, non_unique) = if hi - lo <= 1e-9 * mean.abs().max(1.0) {
        (ElasticParams::circle_xi(curve.space(), curve.eta(), mean), 0.0, true)
    } else {
        let a = DMatrix::from_fn(rows.len(), 2, |r, c| if c == 0 { rows[r].1 } else { 1.0 });
        let b = DVector::from_iterator(rows.len(), rows.iter().map(lhs));
        let sol = a.svd(true, true).solve(&b, 1e-14).expect("U and V requested");
        (sol[0], sol[1], false)
    };
    let residual = rows.iter().map(|r| (lhs(r) - xi * r.1 - delta).abs()).fold(0.0, f64::max);
    Ok(CurvatureFit { xi, delta, residual, non_unique })
}

/// Equally sampled geodesic with `n` vertices.
pub fn geodesic(space: SpaceForm, eta: f64, n: usize, tol: f64) -> Result<DiscreteCurve, IntegrateError> {
    integrate_curvature(space, eta, &vec![0.0; n.saturating_sub(2)], None, tol)
}

/// Constant curvature `kappa` with `n` vertices.
pub fn circle(space: SpaceForm, eta: f64, kappa: f64, n: usize, tol: f64) -> Result<DiscreteCurve, IntegrateError> {
    integrate_curvature(space, eta, &vec![kappa; n.saturating_sub(2)], None, tol)
}

/// Discrete clothoid `κ(tᵢ) = a·i`.
pub fn clothoid(space: SpaceForm, eta: f64, a: f64, n: usize, tol: f64) -> Result<DiscreteCurve, IntegrateError> {
    let ks: Vec<f64> = (1..n.saturating_sub(1)).map(|i| a * i as f64).collect();
    integrate_curvature(space, eta, &ks, None, tol)
}

/// Curve whose curvature follows [`kappa_recursion`] from `κ₋₁, κ₀`.
pub fn constrained_elastic(
    space: SpaceForm,
    params: ElasticParams,
    k_m1: f64,
    k0: f64,
    n: usize,
    tol: f64,
) -> Result<DiscreteCurve, IntegrateError> {
    let ks = kappa_recursion(space, params, k_m1, k0, n.saturating_sub(2));
    integrate_curvature(space, params.eta, &ks, None, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_has_zero_curvature() {
        for s in SpaceForm::ALL {
            let c = geodesic(s, 0.3, 20, 1e-9).unwrap();
            for k in c.interior_curvature().unwrap() {
                assert!(k.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn square_from_curvature() {
        let c = integrate_curvature(SpaceForm::Euclidean, 2.0, &[1.0, 1.0, 1.0], None, 1e-9).unwrap();
        // returns to the start after four edges
        assert!(c.vertex(4).dist(&c.vertex(0)) < 1e-14);
    }

    #[test]
    fn recursion_fixed_point() {
        let s = SpaceForm::Spherical;
        let eta = 0.4;
        let c = 1.3;
        let p = ElasticParams { xi: ElasticParams::circle_xi(s, eta, c), delta: 0.0, eta };
        for k in kappa_recursion(s, p, c, c, 30) {
            assert!((k - c).abs() < 1e-13);
        }
    }

    #[test]
    fn fit_recovers_parameters() {
        let p = ElasticParams { xi: 2.1, delta: 0.05, eta: 0.3 };
        let c = constrained_elastic(SpaceForm::Euclidean, p, 0.4, 0.8, 80, 1e-9).unwrap();
        let fit = curvature_equation_fit(&c).unwrap();
        assert!((fit.xi - 2.1).abs() < 1e-8 && (fit.delta - 0.05).abs() < 1e-8);
        assert!(!fit.non_unique);
    }

    #[test]
    fn bad_seed() {
        let seed = [Mat2C::ZERO, Mat2C::QI];
        assert!(matches!(
            integrate_curvature(SpaceForm::Euclidean, 0.5, &[0.0], Some(seed), 1e-9),
            Err(IntegrateError::BadSeedDistance { .. })
        ));
        assert!(matches!(geodesic(SpaceForm::Spherical, 2.5, 5, 1e-9), Err(IntegrateError::InadmissibleEta(_))));
    }
}
