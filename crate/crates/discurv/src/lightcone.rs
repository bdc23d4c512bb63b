// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Light-cone model in ℝ³ʼ² with signature `(+, +, +, −, −)`.
//!
//! Oriented circles, lines and points of the plane are lightlike vectors.
//! The point-sphere complex is `𝔭 = (0, 0, 0, 0, 1)`; a space form is
//! selected by a vector `𝔮` orthogonal to `𝔭`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::{Mat2C, SpaceForm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LightconeError {
    #[error("vector is not lightlike (⟨v,v⟩ = {0:e})")]
    NotLightlike(f64),
    #[error("reflection in an isotropic vector")]
    IsotropicMirror,
    #[error("vector is a point, not a circle (⟨s,p⟩ = 0)")]
    PointNotCircle,
    #[error("circles do not intersect at a real angle (cos φ = {cos})")]
    ImaginaryAngle { cos: f64 },
    #[error("not a point of the model (defect {0:e})")]
    NotOnModel(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct LcVector(pub [f64; 5]);

/// The point-sphere complex.
pub const P: LcVector = LcVector([0.0, 0.0, 0.0, 0.0, 1.0]);

/// Vector identifying lines (infinity) in the Euclidean picture.
pub const Q0: LcVector = LcVector([0.0, 0.0, 1.0, -1.0, 0.0]);

impl LcVector {
    pub const ZERO: LcVector = LcVector([0.0; 5]);

    pub fn new(x: [f64; 5]) -> Self {
        LcVector(x)
    }

    pub fn inner(&self, o: &LcVector) -> f64 {
        let (a, b) = (&self.0, &o.0);
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3] - a[4] * b[4]
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Euclidean length of the coordinate vector.
    pub fn coord_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, o: &LcVector) -> f64 {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl Add for LcVector {
    type Output = LcVector;
    fn add(self, o: LcVector) -> LcVector {
        LcVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for LcVector {
    type Output = LcVector;
    fn sub(self, o: LcVector) -> LcVector {
        LcVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for LcVector {
    type Output = LcVector;
    fn neg(self) -> LcVector {
        LcVector(self.0.map(|x| -x))
    }
}

impl Mul<f64> for LcVector {
    type Output = LcVector;
    fn mul(self, s: f64) -> LcVector {
        LcVector(self.0.map(|x| x * s))
    }
}

impl Mul<LcVector> for f64 {
    type Output = LcVector;
    fn mul(self, v: LcVector) -> LcVector {
        v * self
    }
}

pub fn lc_inner(u: &LcVector, v: &LcVector) -> f64 {
    u.inner(v)
}

/// Space-form vector `𝔮`: 𝔼² `(0,0,−1,1,0)`, 𝕊² `(0,0,0,1,0)`, ℍ² `(0,0,−1,0,0)`.
pub fn space_form_vector(space: SpaceForm) -> LcVector {
    match space {
        SpaceForm::Euclidean => LcVector([0.0, 0.0, -1.0, 1.0, 0.0]),
        SpaceForm::Spherical => LcVector([0.0, 0.0, 0.0, 1.0, 0.0]),
        SpaceForm::Hyperbolic => LcVector([0.0, 0.0, -1.0, 0.0, 0.0]),
    }
}

pub fn lift_point(x: f64, y: f64) -> LcVector {
    let r2 = x * x + y * y;
    LcVector([x, y, 0.5 * (1.0 - r2), 0.5 * (1.0 + r2), 0.0])
}

/// Oriented circle with center `(x, y)` and signed radius `r`.
pub fn lift_circle(x: f64, y: f64, r: f64) -> LcVector {
    let r2 = x * x + y * y;
    LcVector([x, y, 0.5 * (1.0 - r2 + r * r), 0.5 * (1.0 + r2 - r * r), r])
}

/// Oriented line `{ p : ⟨n, p⟩ = d }` with unit normal `n`.
pub fn lift_line(nx: f64, ny: f64, d: f64) -> LcVector {
    LcVector([nx, ny, -d, d, 1.0])
}

/// Geometric object of the Euclidean picture represented by a lightlike vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LcObject {
    Point {
        x: f64,
        y: f64,
    },
    Circle {
        x: f64,
        y: f64,
        r: f64,
    },
    Line {
        nx: f64,
        ny: f64,
        d: f64,
    },
    /// The point at infinity `(0, 0, 1, −1, 0)`.
    Infinity,
}

pub fn identify(v: &LcVector, tol: f64) -> Result<LcObject, LightconeError> {
    let scale = v.coord_norm().max(f64::MIN_POSITIVE);
    let vv = v.norm_sq();
    if vv.abs() > tol * scale * scale {
        return Err(LightconeError::NotLightlike(vv));
    }
    let q = space_form_vector(SpaceForm::Euclidean);
    let vp = v.inner(&P);
    let vq = v.inner(&q);
    let x = &v.0;
    if vp.abs() <= tol * scale {
        if vq.abs() <= tol * scale {
            return Ok(LcObject::Infinity);
        }
        return Ok(LcObject::Point { x: -x[0] / vq, y: -x[1] / vq });
    }
    if vq.abs() <= tol * scale {
        return Ok(LcObject::Line { nx: x[0] / x[4], ny: x[1] / x[4], d: x[3] / x[4] });
    }
    Ok(LcObject::Circle { x: -x[0] / vq, y: -x[1] / vq, r: -x[4] / vq })
}

/// `σ_a(r) = r − 2⟨r,a⟩/⟨a,a⟩ a`
pub fn reflect(a: &LcVector, r: &LcVector) -> Result<LcVector, LightconeError> {
    let aa = a.norm_sq();
    if aa == 0.0 || aa.abs() <= 1e-300 {
        return Err(LightconeError::IsotropicMirror);
    }
    Ok(*r - *a * (2.0 * r.inner(a) / aa))
}

/// `⟨s, q⟩ / ⟨s, p⟩`
pub fn geodesic_curvature(s: &LcVector, q: &LcVector) -> Result<f64, LightconeError> {
    let sp = s.inner(&P);
    if sp == 0.0 {
        return Err(LightconeError::PointNotCircle);
    }
    Ok(s.inner(q) / sp)
}

/// Intersection angle of two circles, `cos φ = 1 + ⟨u,v⟩/(⟨u,p⟩⟨v,p⟩)`.
pub fn intersection_angle(u: &LcVector, v: &LcVector) -> Result<f64, LightconeError> {
    let (up, vp) = (u.inner(&P), v.inner(&P));
    if up == 0.0 || vp == 0.0 {
        return Err(LightconeError::PointNotCircle);
    }
    let cos = 1.0 + u.inner(v) / (up * vp);
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&cos) {
        return Err(LightconeError::ImaginaryAngle { cos });
    }
    Ok(cos.clamp(-1.0, 1.0).acos())
}

/// Directrix `a★ = a + λp`, `λ = ⟨a,p⟩ − √(⟨a,p⟩² + ⟨a,a⟩)`.
///
/// For a negative radicand `λ` is complex and `a★ = real + i·imag`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LcDirectrix {
    pub real: LcVector,
    pub imag: LcVector,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub imaginary: bool,
}

impl LcDirectrix {
    /// `⟨s, a★⟩ / (⟨s, p⟩⟨a★, p⟩)` for a real directrix.
    pub fn ratio(&self, s: &LcVector) -> f64 {
        s.inner(&self.real) / (s.inner(&P) * self.real.inner(&P))
    }
}

pub fn directrix(a: &LcVector) -> LcDirectrix {
    let ap = a.inner(&P);
    let rad = ap * ap + a.norm_sq();
    if rad >= 0.0 {
        let lambda = ap - rad.sqrt();
        LcDirectrix { real: *a + P * lambda, imag: LcVector::ZERO, lambda_re: lambda, lambda_im: 0.0, imaginary: false }
    } else {
        let im = -(-rad).sqrt();
        LcDirectrix { real: *a + P * ap, imag: P * im, lambda_re: ap, lambda_im: im, imaginary: true }
    }
}

/// Light-cone lift of a model point, normalized to `⟨f, q⟩ = −1`.
pub fn to_lightcone(space: SpaceForm, f: &Mat2C, tol: f64) -> Result<LcVector, LightconeError> {
    let defect = space.model_defect(f);
    if !(defect <= tol.max(1e-12) * f.norm().max(1.0)) {
        return Err(LightconeError::NotOnModel(defect));
    }
    Ok(point_lift(space, f))
}

/// Lift without model validation.
pub(crate) fn point_lift(space: SpaceForm, f: &Mat2C) -> LcVector {
    let x = space.coords(f);
    match space {
        SpaceForm::Euclidean => lift_point(x[0], x[1]),
        SpaceForm::Spherical => LcVector([x[0], x[1], x[2], 1.0, 0.0]),
        SpaceForm::Hyperbolic => LcVector([x[0], x[1], 1.0, x[2], 0.0]),
    }
}

pub fn from_lightcone(space: SpaceForm, f: &LcVector, tol: f64) -> Result<Mat2C, LightconeError> {
    let scale = f.coord_norm().max(f64::MIN_POSITIVE);
    let ff = f.norm_sq();
    let fp = f.inner(&P);
    if ff.abs() > tol * scale * scale || fp.abs() > tol * scale {
        return Err(LightconeError::NotOnModel(ff.abs().max(fp.abs())));
    }
    let fq = f.inner(&space_form_vector(space));
    if fq.abs() <= tol * scale {
        return Err(LightconeError::NotOnModel(fq.abs()));
    }
    let g = *f * (-1.0 / fq);
    let x = &g.0;
    let pt = match space {
        SpaceForm::Euclidean => space.point(&[x[0], x[1]]),
        SpaceForm::Spherical => space.point(&[x[0], x[1], x[2]]),
        SpaceForm::Hyperbolic => space.point(&[x[0], x[1], x[3]]),
    };
    Ok(pt)
}

/// Lift of an oriented geodesic with unit normal `N`; `d` is the signed
/// distance from the origin (𝔼² only, ignored otherwise).
pub fn geodesic_to_lightcone(space: SpaceForm, n: &Mat2C, d: f64) -> LcVector {
    let x = space.coords(n);
    match space {
        SpaceForm::Euclidean => LcVector([x[0], x[1], -d, d, 1.0]),
        SpaceForm::Spherical => LcVector([x[0], x[1], x[2], 0.0, 1.0]),
        SpaceForm::Hyperbolic => LcVector([x[0], x[1], 0.0, x[2], 1.0]),
    }
}

/// Inverse of [`geodesic_to_lightcone`]: normal and distance.
pub fn geodesic_from_lightcone(space: SpaceForm, t: &LcVector) -> Result<(Mat2C, f64), LightconeError> {
    let tp = t.inner(&P);
    if tp == 0.0 {
        return Err(LightconeError::PointNotCircle);
    }
    let g = *t * (-1.0 / tp);
    let x = &g.0;
    Ok(match space {
        SpaceForm::Euclidean => (space.point(&[x[0], x[1]]), x[3]),
        SpaceForm::Spherical => (space.point(&[x[0], x[1], x[2]]), 0.0),
        SpaceForm::Hyperbolic => (space.point(&[x[0], x[1], x[3]]), 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifts_from_tables() {
        assert_eq!(lift_point(0.0, 0.0), LcVector([0.0, 0.0, 0.5, 0.5, 0.0]));
        assert_eq!(lift_line(1.0, 0.0, 0.0), LcVector([1.0, 0.0, 0.0, 0.0, 1.0]));
        assert_eq!(P.norm_sq(), -1.0);
        assert_eq!(lift_point(0.0, 0.0).norm_sq(), 0.0);
        assert_eq!(lift_circle(0.0, 0.0, 1.0).inner(&P), -1.0);
    }

    #[test]
    fn identify_round_trip() {
        match identify(&lift_circle(1.0, 2.0, 3.0), 1e-12).unwrap() {
            LcObject::Circle { x, y, r } => {
                assert!((x - 1.0).abs() < 1e-14 && (y - 2.0).abs() < 1e-14 && (r - 3.0).abs() < 1e-14)
            }
            o => panic!("{o:?}"),
        }
        assert_eq!(identify(&lift_point(0.5, -2.0), 1e-12).unwrap(), LcObject::Point { x: 0.5, y: -2.0 });
        assert_eq!(identify(&lift_line(0.6, 0.8, 2.0), 1e-12).unwrap(), LcObject::Line { nx: 0.6, ny: 0.8, d: 2.0 });
        assert!(identify(&P, 1e-12).is_err());
    }

    #[test]
    fn curvature_examples() {
        let q = space_form_vector(SpaceForm::Euclidean);
        assert!((geodesic_curvature(&lift_circle(0.0, 0.0, 2.0), &q).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(geodesic_curvature(&lift_line(0.6, 0.8, 3.0), &q).unwrap(), 0.0);
        assert!(geodesic_curvature(&lift_point(1.0, 1.0), &q).is_err());
    }

    #[test]
    fn model_conversions() {
        let k = Mat2C::QK;
        assert_eq!(to_lightcone(SpaceForm::Spherical, &k, 1e-12).unwrap(), LcVector([0.0, 0.0, 1.0, 1.0, 0.0]));
        assert_eq!(to_lightcone(SpaceForm::Hyperbolic, &k, 1e-12).unwrap(), LcVector([0.0, 0.0, 1.0, 1.0, 0.0]));
        assert_eq!(to_lightcone(SpaceForm::Euclidean, &Mat2C::QI, 1e-12).unwrap(), LcVector([1.0, 0.0, 0.0, 1.0, 0.0]));
        assert!(to_lightcone(SpaceForm::Spherical, &(k * 2.0), 1e-12).is_err());
        for s in SpaceForm::ALL {
            let f = to_lightcone(s, &k, 1e-12);
            if let Ok(f) = f {
                assert!(from_lightcone(s, &(f * 3.0), 1e-12).unwrap().dist(&k) < 1e-15);
            }
        }
    }
}
