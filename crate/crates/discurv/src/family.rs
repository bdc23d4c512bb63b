// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! The associated family `T^λ` between 𝔼² and 𝕊² / ℍ².
//!
//! Frames `Φ₁ = (1 + λu₀₁)Φ₀` with `Φ = 1` at the first vertex. From 𝔼²
//! the new points are `Φ⁻¹𝐤Φ`; from 𝕊² or ℍ² (with `λ = 1`) the new
//! transports are `Φ₁⁻¹(1 + u)⁻¹(1 − u)Φ₁`, times `i` for ℍ².

use num_complex::Complex64;

use crate::curve::{CurveError, Isometry};
use crate::{DiscreteCurve, Mat2C, SpaceForm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("λ = {lambda} is not admissible: {reason}")]
    InadmissibleLambda { lambda: Complex64, reason: &'static str },
    #[error("initial point is not in canonical position")]
    NonCanonicalInitialPoint,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Output of [`associated_transform`].
#[derive(Clone, Debug)]
pub struct AssociatedCurve {
    pub curve: DiscreteCurve,
    /// `Φ^λ` per vertex, normalized to `det Φ = 1`.
    pub frames: Vec<Mat2C>,
    /// Isometry that moved the source into canonical position.
    pub placement: Isometry,
    pub lambda: Complex64,
}

fn inadmissible(lambda: Complex64, reason: &'static str) -> FamilyError {
    FamilyError::InadmissibleLambda { lambda, reason }
}

/// Space form reached from `source` with parameter `λ`.
pub fn target_space(source: SpaceForm, eta: f64, lambda: Complex64, tol: f64) -> Result<SpaceForm, FamilyError> {
    match source {
        SpaceForm::Euclidean => {
            if lambda.norm() <= tol {
                Err(inadmissible(lambda, "λ = 0"))
            } else if lambda.im.abs() <= tol * lambda.norm() {
                Ok(SpaceForm::Spherical)
            } else if lambda.re.abs() <= tol * lambda.norm() {
                if lambda.norm() * eta < 1.0 - tol {
                    Ok(SpaceForm::Hyperbolic)
                } else {
                    Err(inadmissible(lambda, "needs |λ| < 1/η"))
                }
            } else {
                Err(inadmissible(lambda, "λ must be real or imaginary"))
            }
        }
        _ => {
            if (lambda - 1.0).norm() <= tol {
                Ok(SpaceForm::Euclidean)
            } else {
                Err(inadmissible(lambda, "non-Euclidean source needs λ = 1"))
            }
        }
    }
}

/// Isometry moving the first vertex to `0` (𝔼²) or `𝐤` (𝕊², ℍ²).
pub fn canonical_placement(curve: &DiscreteCurve) -> Isometry {
    let f0 = curve.vertex(0);
    match curve.space() {
        SpaceForm::Euclidean => Isometry { e: Mat2C::ONE, translation: -f0, sign: 1.0 },
        space => {
            let mut pre = Mat2C::ONE;
            let mut g = f0;
            let mut sign = 1.0;
            if space == SpaceForm::Spherical && f0.inner(&Mat2C::QK).re < 0.0 {
                // 𝐢⁻¹F𝐢 flips the 𝐤-component
                pre = Mat2C::QI;
                g = Mat2C::QI.inv().expect("unit") * f0 * Mat2C::QI;
            }
            if space == SpaceForm::Hyperbolic && f0.split_coords()[3] < 0.0 {
                sign = -1.0;
                g = -f0;
            }
            // (1 + u)G(1 + u)⁻¹ = 𝐤 for u = 𝐤G⁻¹
            let m = Mat2C::ONE + Mat2C::QK * g.inv().unwrap_or(-g);
            let e = pre * m.inv().expect("1 + 𝐤G⁻¹ is invertible off the antipode");
            Isometry { e: e.normalize_det(), translation: Mat2C::ZERO, sign }
        }
    }
}

/// Unnormalized frames `Φ₀ = 1`, `Φ_{k+1} = (1 + λu_k)Φ_k` along the open chain.
pub fn frames(curve: &DiscreteCurve, lambda: Complex64) -> Vec<Mat2C> {
    let mut out = vec![Mat2C::ONE];
    for k in 0..curve.len() - 1 {
        let u = curve.edge_transport(k);
        let last = *out.last().expect("nonempty");
        out.push((Mat2C::ONE + u * lambda) * last);
    }
    out
}

/// `T^λζ = 2|λ|η/(1 + λ²η²)` for a Euclidean source, `T¹η = η²/(2ζ)` otherwise.
pub fn expected_target_zeta(source: SpaceForm, eta: f64, lambda: Complex64) -> f64 {
    match source {
        SpaceForm::Euclidean => {
            let l2 = (lambda * lambda).re;
            2.0 * lambda.norm() * eta / (1.0 + l2 * eta * eta)
        }
        s => eta * eta / (2.0 * s.zeta(eta)),
    }
}

/// Curvature scale `c = ζ / T^λζ`.
pub fn curvature_scale(source: SpaceForm, eta: f64, lambda: Complex64) -> f64 {
    source.zeta(eta) / expected_target_zeta(source, eta, lambda)
}

pub fn associated_transform(
    curve: &DiscreteCurve,
    lambda: Complex64,
    tol: f64,
) -> Result<AssociatedCurve, FamilyError> {
    let target = target_space(curve.space(), curve.eta(), lambda, tol)?;
    let placement = canonical_placement(curve);
    let placed = curve.apply_isometry(&placement);
    let (frames, transports) = transform_edges(&placed, lambda, tol)?;
    let points = match curve.space() {
        SpaceForm::Euclidean => frames.iter().map(|phi| phi.inv().expect("det 1") * Mat2C::QK * *phi).collect(),
        _ => {
            let mut pts = vec![Mat2C::ZERO];
            for u in &transports {
                let last = *pts.last().expect("nonempty");
                pts.push(last + *u);
            }
            pts
        }
    };
    let out = DiscreteCurve::new(target, points, false, tol.max(1e-9))?;
    Ok(AssociatedCurve { curve: out, frames, placement, lambda })
}

/// Normalized frames and transformed transports `u^λ` (with the `i` factor
/// for an ℍ² source) along a curve in canonical position.
fn transform_edges(
    curve: &DiscreteCurve,
    lambda: Complex64,
    tol: f64,
) -> Result<(Vec<Mat2C>, Vec<Mat2C>), FamilyError> {
    let scale = match curve.space() {
        SpaceForm::Hyperbolic => Complex64::new(0.0, 1.0),
        _ => Complex64::new(1.0, 0.0),
    };
    let mut phi = Mat2C::ONE;
    let mut frames = vec![phi];
    let mut out = Vec::with_capacity(curve.len());
    for k in 0..curve.len() - 1 {
        let u = curve.edge_transport(k);
        let plus = Mat2C::ONE + u * lambda;
        let minus = Mat2C::ONE - u * lambda;
        if plus.det().norm() <= tol || minus.det().norm() <= tol {
            return Err(inadmissible(lambda, "1 ± λu is singular on some edge"));
        }
        phi = (plus * phi).normalize_det();
        frames.push(phi);
        let pi = phi.inv().expect("det 1");
        out.push(pi * plus.inv().expect("checked") * minus * phi * scale);
    }
    Ok((frames, out))
}

/// Result of applying the family twice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundTrip {
    /// Largest vertex distance to the (canonically placed, rescaled) source.
    pub deviation: f64,
    /// Scale `c` in `T¹∘T^λ = c·id` for a Euclidean source.
    pub scale: Option<f64>,
}

/// `T¹∘T¹` on 𝕊², `T^{−i}∘T¹` on ℍ², `T¹∘T^λ` on 𝔼² (default `λ = 1`).
pub fn family_roundtrip_check(
    curve: &DiscreteCurve,
    lambda: Option<Complex64>,
    tol: f64,
) -> Result<RoundTrip, FamilyError> {
    let placed = curve.apply_isometry(&canonical_placement(curve));
    match curve.space() {
        SpaceForm::Euclidean => {
            let lambda = lambda.unwrap_or(Complex64::new(1.0, 0.0));
            let there = associated_transform(&placed, lambda, tol)?;
            let back = associated_transform(&there.curve, Complex64::new(1.0, 0.0), tol)?;
            let (mut num, mut den) = (0.0, 0.0);
            for (g, f) in back.curve.vertices().iter().zip(placed.vertices()) {
                num += g.inner(f).re;
                den += f.inner(f).re;
            }
            let c = if den > 0.0 { num / den } else { 1.0 };
            let deviation =
                back.curve.vertices().iter().zip(placed.vertices()).map(|(g, f)| g.dist(&(*f * c))).fold(0.0, f64::max);
            Ok(RoundTrip { deviation, scale: Some(c) })
        }
        space => {
            let there = associated_transform(&placed, Complex64::new(1.0, 0.0), tol)?;
            let back_lambda =
                if space == SpaceForm::Spherical { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, -1.0) };
            let back = associated_transform(&there.curve, back_lambda, tol)?;
            let deviation =
                back.curve.vertices().iter().zip(placed.vertices()).map(|(g, f)| g.dist(f)).fold(0.0, f64::max);
            Ok(RoundTrip { deviation, scale: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_examples() {
        assert!((expected_target_zeta(SpaceForm::Euclidean, 1.0, c(1.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((curvature_scale(SpaceForm::Euclidean, 1.0, c(1.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn line_maps_to_geodesic() {
        let line = integrate::geodesic(SpaceForm::Euclidean, 0.4, 12, 1e-9).unwrap();
        for lambda in [c(1.0, 0.0), c(0.0, 0.5)] {
            let t = associated_transform(&line, lambda, 1e-9).unwrap();
            for k in t.curve.interior_curvature().unwrap() {
                assert!(k.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda_validation() {
        let line = integrate::geodesic(SpaceForm::Euclidean, 0.4, 5, 1e-9).unwrap();
        assert!(associated_transform(&line, c(0.0, 3.0), 1e-9).is_err());
        assert!(associated_transform(&line, c(1.0, 1.0), 1e-9).is_err());
        let s = integrate::geodesic(SpaceForm::Spherical, 0.4, 5, 1e-9).unwrap();
        assert!(associated_transform(&s, c(0.5, 0.0), 1e-9).is_err());
    }

    #[test]
    fn canonical_placement_moves_first_point() {
        let s = SpaceForm::Spherical;
        let seed = [s.point(&[0.0, 0.6, -0.8]), s.point(&[0.0, 0.8, -0.6])];
        let eta = s.chord(&seed[0], &seed[1]);
        let curve = integrate::integrate_curvature(s, eta, &[0.3, 0.2], Some(seed), 1e-9).unwrap();
        let placed = curve.apply_isometry(&canonical_placement(&curve));
        assert!(placed.vertex(0).dist(&Mat2C::QK) < 1e-14);
        let rt = family_roundtrip_check(&curve, None, 1e-9).unwrap();
        assert!(rt.deviation < 1e-12, "{rt:?}");
    }
}
