// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Discrete curves with constant arc-length in the matrix model.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::lightcone::{self, LcVector, P};
use crate::{Mat2C, SpaceForm};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("curve needs at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("vertex {index} is not a point of the model (defect {defect:e})")]
    NotOnModel { index: usize, defect: f64 },
    #[error("irregular curve at vertex {index}: {reason}")]
    IrregularCurve { index: usize, reason: &'static str },
    #[error("edge {edge} has arc-length parameter {eta}, expected {expected}")]
    NonConstantArcLength { edge: usize, eta: f64, expected: f64 },
    #[error("arc-length parameter η = {0} is not admissible")]
    InadmissibleEta(f64),
    #[error("cusp at vertex {0}")]
    CuspVertex(usize),
    #[error("vertex {0} has no neighbours on both sides")]
    BoundaryVertex(usize),
    #[error("curves have different shapes or lengths")]
    Mismatch,
}

/// Vertices `F₀, …, F_{m−1}` of a regular curve with constant arc-length η.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCurve {
    space: SpaceForm,
    vertices: Vec<Mat2C>,
    periodic: bool,
    eta: f64,
}

impl DiscreteCurve {
    /// Validates model membership, regularity and constant arc-length.
    pub fn new(space: SpaceForm, vertices: Vec<Mat2C>, periodic: bool, tol: f64) -> Result<Self, CurveError> {
        let min = if periodic { 3 } else { 2 };
        if vertices.len() < min {
            return Err(CurveError::TooFewVertices { min, got: vertices.len() });
        }
        for (index, f) in vertices.iter().enumerate() {
            let defect = space.model_defect(f);
            if !(defect <= tol.max(1e-12) * f.norm().max(1.0) * 10.0) {
                return Err(CurveError::NotOnModel { index, defect });
            }
        }
        if space == SpaceForm::Hyperbolic {
            let sheet = vertices[0].split_coords()[3].signum();
            if let Some(index) = vertices.iter().position(|f| f.split_coords()[3].signum() != sheet) {
                return Err(CurveError::IrregularCurve { index, reason: "points on both sheets" });
            }
        }
        let m = vertices.len();
        let edges = if periodic { m } else { m - 1 };
        let chord = |i: usize, j: usize| space.chord(&vertices[i % m], &vertices[j % m]);
        let eta = chord(0, 1);
        if !(eta > tol) || !eta.is_finite() {
            return Err(CurveError::IrregularCurve { index: 0, reason: "coincident consecutive points" });
        }
        if space == SpaceForm::Spherical && !(eta * eta < 4.0 - tol) {
            return Err(CurveError::IrregularCurve { index: 0, reason: "antipodal consecutive points" });
        }
        for e in 0..edges {
            let h = chord(e, e + 1);
            if !((h - eta).abs() <= tol * eta.max(1.0)) {
                return Err(CurveError::NonConstantArcLength { edge: e, eta: h, expected: eta });
            }
        }
        let stencils = if periodic { m } else { m.saturating_sub(2) };
        for s in 0..stencils {
            let d = chord(s, s + 2);
            if !(d > tol) {
                return Err(CurveError::IrregularCurve { index: (s + 1) % m, reason: "stencil end points coincide" });
            }
        }
        Ok(DiscreteCurve { space, vertices, periodic, eta })
    }

    pub fn from_coords(space: SpaceForm, coords: &[Vec<f64>], periodic: bool, tol: f64) -> Result<Self, CurveError> {
        for (index, c) in coords.iter().enumerate() {
            if c.len() != space.dim() {
                return Err(CurveError::NotOnModel { index, defect: f64::INFINITY });
            }
        }
        DiscreteCurve::new(space, coords.iter().map(|c| space.point(c)).collect(), periodic, tol)
    }

    pub fn space(&self) -> SpaceForm {
        self.space
    }

    pub fn vertices(&self) -> &[Mat2C] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Mat2C {
        self.vertices[i]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn zeta(&self) -> f64 {
        self.space.zeta(self.eta)
    }

    pub fn epsilon(&self) -> f64 {
        self.space.epsilon()
    }

    pub fn coords(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|f| self.space.coords(f)).collect()
    }

    pub fn edge_count(&self) -> usize {
        if self.periodic {
            self.len()
        } else {
            self.len() - 1
        }
    }

    /// Vertex indices with neighbours on both sides.
    pub fn interior(&self) -> Vec<usize> {
        if self.periodic {
            (0..self.len()).collect()
        } else {
            (1..self.len() - 1).collect()
        }
    }

    /// `(previous, next)` neighbour of vertex `i`.
    pub fn neighbours(&self, i: usize) -> Option<(usize, usize)> {
        let m = self.len();
        if self.periodic {
            Some(((i + m - 1) % m, (i + 1) % m))
        } else if i == 0 || i + 1 >= m {
            None
        } else {
            Some((i - 1, i + 1))
        }
    }

    fn edge_in(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Transport `u` of edge `e` (from vertex `e` to `e + 1`).
    pub fn edge_transport(&self, e: usize) -> Mat2C {
        let m = self.len();
        self.space.transport(&self.vertices[e], &self.vertices[(e + 1) % m])
    }

    pub fn transports(&self) -> Vec<Mat2C> {
        (0..self.edge_count()).map(|e| self.edge_transport(e)).collect()
    }

    /// Harmonic-mean tangent `T` and `H = u⃗₀₁⁻¹T` at an interior vertex.
    pub fn tangent_h(&self, i: usize) -> Result<(Mat2C, Mat2C), CurveError> {
        self.neighbours(i).ok_or(CurveError::BoundaryVertex(i))?;
        let a = self.edge_transport(self.edge_in(i)).tf();
        let b = self.edge_transport(i).tf();
        let ai = a.inv().ok_or(CurveError::CuspVertex(i))?;
        let bi = b.inv().ok_or(CurveError::CuspVertex(i))?;
        let t = (ai + bi).inv_tol(1e-14).ok_or(CurveError::CuspVertex(i))? * 2.0;
        Ok((t, bi * t))
    }

    /// `T` per vertex; `None` at boundary vertices.
    pub fn vertex_tangent(&self) -> Result<Vec<Option<Mat2C>>, CurveError> {
        self.per_interior(|i| self.tangent_h(i).map(|th| th.0))
    }

    pub fn vertex_h(&self) -> Result<Vec<Option<Mat2C>>, CurveError> {
        self.per_interior(|i| self.tangent_h(i).map(|th| th.1))
    }

    fn per_interior<T>(&self, f: impl Fn(usize) -> Result<T, CurveError>) -> Result<Vec<Option<T>>, CurveError> {
        let mut out: Vec<Option<T>> = (0..self.len()).map(|_| None).collect();
        for i in self.interior() {
            out[i] = Some(f(i)?);
        }
        Ok(out)
    }

    /// Curvature at an interior vertex from `H = 1 + (η/2)κ𝐤`
    /// resp. `H = 1 + (ζ/2)κF`, read off at `F = 𝐤` off 𝔼².
    pub fn curvature_at(&self, i: usize) -> Result<f64, CurveError> {
        match self.space {
            SpaceForm::Euclidean => self.curvature_raw(i),
            _ => {
                let (stencil, sign) = self.local_stencil(i)?;
                Ok(sign * stencil.curvature_raw(1)?)
            }
        }
    }

    fn curvature_raw(&self, i: usize) -> Result<f64, CurveError> {
        let (_, h) = self.tangent_h(i)?;
        Ok(match self.space {
            SpaceForm::Euclidean => 2.0 * h.inner(&Mat2C::QK).re / self.eta,
            _ => 2.0 * h.tf().inner(&self.vertices[i]).re / self.zeta(),
        })
    }

    pub fn curvature(&self) -> Result<Vec<Option<f64>>, CurveError> {
        self.per_interior(|i| self.curvature_at(i))
    }

    /// Curvature at the interior vertices, in order.
    pub fn interior_curvature(&self) -> Result<Vec<f64>, CurveError> {
        self.interior().into_iter().map(|i| self.curvature_at(i)).collect()
    }

    pub fn vertex_lift(&self, i: usize) -> LcVector {
        lightcone::point_lift(self.space, &self.vertices[i])
    }

    /// Unit normal `N` of the geodesic through edge `e`.
    pub fn edge_unit_normal(&self, e: usize) -> Mat2C {
        let u = self.edge_transport(e);
        match self.space {
            SpaceForm::Euclidean => Mat2C::QK * u * (1.0 / self.eta),
            _ => u.tf() * (1.0 / self.zeta()),
        }
    }

    /// Lift of the oriented geodesic through edge `e`.
    pub fn tangent_lift(&self, e: usize) -> LcVector {
        let n = self.edge_unit_normal(e);
        let d = match self.space {
            SpaceForm::Euclidean => n.inner(&self.vertices[e]).re,
            _ => 0.0,
        };
        lightcone::geodesic_to_lightcone(self.space, &n, d)
    }

    /// `𝔫₀₁ = (𝔣₀ − 𝔣₁)/η + 𝔭`
    pub fn edge_normal(&self, e: usize) -> LcVector {
        let f0 = self.vertex_lift(e);
        let f1 = self.vertex_lift((e + 1) % self.len());
        (f0 - f1) * (1.0 / self.eta) + P
    }

    /// `𝔠₀ = 𝔱₋₁₀ − (⟨𝔱₋₁₀, 𝔣₁⟩ / ⟨𝔣₋₁, 𝔣₁⟩) 𝔣₋₁`
    pub fn double_curvature_circle(&self, i: usize) -> Result<LcVector, CurveError> {
        let (prev, next) = self.neighbours(i).ok_or(CurveError::BoundaryVertex(i))?;
        let t = self.tangent_lift(self.edge_in(i));
        let fm = self.vertex_lift(prev);
        let fp = self.vertex_lift(next);
        Ok(t - fm * (t.inner(&fp) / fm.inner(&fp)))
    }

    /// Stencil `F₋₁, F₀, F₁` moved so that `F₀` is `0` (𝔼²) or `𝐤`, and the
    /// sign of the placement (`−1` from the lower ℍ² sheet, which flips
    /// curvature). Lifts grow like `|F|²`, so light-cone quantities are
    /// evaluated here.
    fn local_stencil(&self, i: usize) -> Result<(DiscreteCurve, f64), CurveError> {
        let (prev, next) = self.neighbours(i).ok_or(CurveError::BoundaryVertex(i))?;
        let center = DiscreteCurve::from_parts(self.space, vec![self.vertices[i]], false, self.eta);
        let iso = crate::family::canonical_placement(&center);
        let pts = [prev, i, next].iter().map(|&k| iso.apply(&self.vertices[k])).collect();
        Ok((DiscreteCurve::from_parts(self.space, pts, false, self.eta), iso.sign))
    }

    /// `2⟨𝔠, 𝔮⟩ / ⟨𝔠, 𝔭⟩` from the double-curvature circle.
    pub fn lightcone_curvature(&self, i: usize) -> Result<f64, CurveError> {
        let (stencil, sign) = self.local_stencil(i)?;
        let c = stencil.double_curvature_circle(1)?;
        let q = lightcone::space_form_vector(self.space);
        Ok(sign * 2.0 * c.inner(&q) / c.inner(&P))
    }

    /// Frenet-type residuals at each interior vertex.
    pub fn frenet_residuals(&self) -> Result<Vec<Option<FrenetResidual>>, CurveError> {
        self.per_interior(|i| self.local_stencil(i)?.0.frenet_at(1))
    }

    fn frenet_at(&self, i: usize) -> Result<FrenetResidual, CurveError> {
        let eta = self.eta;
        let zeta = self.zeta();
        let eps = self.epsilon();
        let q = lightcone::space_form_vector(self.space);
        let qq = q.norm_sq();
        {
            let (prev, next) = self.neighbours(i).ok_or(CurveError::BoundaryVertex(i))?;
            let (ein, eout) = (self.edge_in(i), i);
            let kappa = self.curvature_raw(i)?;
            let (fm, f0, fp) = (self.vertex_lift(prev), self.vertex_lift(i), self.vertex_lift(next));
            let (tm, tp) = (self.tangent_lift(ein), self.tangent_lift(eout));
            let (nm, np) = (self.edge_normal(ein), self.edge_normal(eout));
            let first = (tm - tp) * (1.0 / eta) + (nm + np - P * 2.0) * (kappa / 2.0);
            let first_alt = (tm - tp) * (1.0 / eta) + (fm - fp) * (kappa / (2.0 * eta));
            let second = (nm - np - (f0 * qq + q) * eta) * (1.0 / eta)
                - (tm + tp - P * 2.0) * (kappa / 2.0 * (1.0 + qq * eta * eta / 4.0));
            let (um, up) = (self.edge_transport(ein), self.edge_transport(eout));
            let (hm, hp) = match self.space {
                SpaceForm::Euclidean => (Mat2C::QK * um * (1.0 / eta), Mat2C::QK * up * (1.0 / eta)),
                _ => (
                    (self.vertices[prev] - self.vertices[i]) * (1.0 / eta),
                    (self.vertices[i] - self.vertices[next]) * (1.0 / eta),
                ),
            };
            let m1 = (um.tf() - up.tf()) * (1.0 / (eta * zeta)) + (hm + hp) * (kappa / 2.0);
            let m2 = (hm - hp + self.vertices[i] * (eps * eta)) * (eta / zeta) - (um.tf() + up.tf()) * (kappa / 2.0);
            let lc = |v: LcVector| v.0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            Ok(FrenetResidual {
                first: lc(first),
                first_alt: lc(first_alt),
                second: lc(second),
                matrix_first: m1.max_abs(),
                matrix_second: m2.max_abs(),
            })
        }
    }

    pub fn apply_isometry(&self, iso: &Isometry) -> DiscreteCurve {
        DiscreteCurve {
            space: self.space,
            vertices: self.vertices.iter().map(|f| iso.apply(f)).collect(),
            periodic: self.periodic,
            eta: self.eta,
        }
    }

    /// Same curve with vertices `range`, not periodic.
    pub fn slice(&self, range: std::ops::Range<usize>) -> DiscreteCurve {
        DiscreteCurve { space: self.space, vertices: self.vertices[range].to_vec(), periodic: false, eta: self.eta }
    }

    /// Unchecked constructor for internally produced vertex lists.
    pub(crate) fn from_parts(space: SpaceForm, vertices: Vec<Mat2C>, periodic: bool, eta: f64) -> DiscreteCurve {
        DiscreteCurve { space, vertices, periodic, eta }
    }
}

/// Residuals of the light-cone Frenet equations (`first`, `first_alt` for
/// the form with `𝔣₋₁ − 𝔣₁`, `second`) and of their matrix-model versions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrenetResidual {
    pub first: f64,
    pub first_alt: f64,
    pub second: f64,
    pub matrix_first: f64,
    pub matrix_second: f64,
}

impl FrenetResidual {
    pub fn max(&self) -> f64 {
        self.first.max(self.first_alt).max(self.second).max(self.matrix_first).max(self.matrix_second)
    }
}

/// Model isometry `F ↦ s·E⁻¹FE + T` (`s = ±1`, `T = 0` off 𝔼²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub e: Mat2C,
    pub translation: Mat2C,
    pub sign: f64,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { e: Mat2C::ONE, translation: Mat2C::ZERO, sign: 1.0 }
    }

    pub fn apply(&self, f: &Mat2C) -> Mat2C {
        let ei = self.e.inv().expect("isometry datum is invertible");
        (ei * *f * self.e) * self.sign + self.translation
    }

    /// Action on transports: `ũ = E⁻¹uE`.
    pub fn apply_transport(&self, u: &Mat2C) -> Mat2C {
        let ei = self.e.inv().expect("isometry datum is invertible");
        ei * *u * self.e
    }

    pub fn inverse(&self) -> Isometry {
        let ei = self.e.inv().expect("isometry datum is invertible");
        let t = (self.e * self.translation * ei) * (-self.sign);
        Isometry { e: ei, translation: t, sign: self.sign }
    }
}

/// Solves `E w = u E` for all pairs `(u, w)` in least squares; returns `E`
/// with `det E = 1` and the two smallest singular values.
pub fn conjugator(pairs: &[(Mat2C, Mat2C)]) -> (Mat2C, f64, f64) {
    let mut m = DMatrix::<Complex64>::zeros(4 * pairs.len().max(1), 4);
    for (p, (u, w)) in pairs.iter().enumerate() {
        for idx in 0..4 {
            let mut basis = [Complex64::new(0.0, 0.0); 4];
            basis[idx] = Complex64::new(1.0, 0.0);
            let b = Mat2C::new(basis[0], basis[1], basis[2], basis[3]);
            let col = b * *w - *u * b;
            let vals = [col.a, col.b, col.c, col.d];
            for r in 0..4 {
                m[(4 * p + r, idx)] = vals[r];
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let k = order[0];
    let x: Vec<Complex64> = (0..4).map(|j| v_t[(k, j)].conj()).collect();
    let e = Mat2C::new(x[0], x[1], x[2], x[3]);
    let e = if e.det().norm() > 1e-300 { e.normalize_det() } else { e };
    (e, svd.singular_values[order[0]], svd.singular_values[order[1]])
}

/// Fits an isometry mapping curve `a` onto curve `b` vertexwise; returns it
/// together with the largest vertex residual relative to `max(1, |F|)`.
pub fn isometry_fit(a: &DiscreteCurve, b: &DiscreteCurve) -> Result<(Isometry, f64), CurveError> {
    if a.space != b.space || a.len() != b.len() {
        return Err(CurveError::Mismatch);
    }
    let ua = a.transports();
    let ub = b.transports();
    let pairs: Vec<(Mat2C, Mat2C)> = ua.into_iter().zip(ub).collect();
    let (e, _, _) = conjugator(&pairs);
    if e.inv().is_none() {
        return Err(CurveError::Mismatch);
    }
    let mut best: Option<(Isometry, f64)> = None;
    let signs: &[f64] = if a.space == SpaceForm::Euclidean { &[1.0] } else { &[1.0, -1.0] };
    for &sign in signs {
        let mut iso = Isometry { e, translation: Mat2C::ZERO, sign };
        if a.space == SpaceForm::Euclidean {
            iso.translation = b.vertices[0] - iso.apply(&a.vertices[0]);
        }
        // relative to |F|: far out on the hyperboloid this tracks intrinsic distance
        let res = a
            .vertices
            .iter()
            .zip(&b.vertices)
            .map(|(f, g)| iso.apply(f).dist(g) / g.max_abs().max(1.0))
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(_, r)| res < *r) {
            best = Some((iso, res));
        }
    }
    Ok(best.expect("at least one sign"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> DiscreteCurve {
        let c = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
        let v: Vec<Vec<f64>> = c.iter().map(|p| p.to_vec()).collect();
        DiscreteCurve::from_coords(SpaceForm::Euclidean, &v, true, 1e-12).unwrap()
    }

    #[test]
    fn square_curvature() {
        let sq = square();
        assert_eq!(sq.eta(), 2.0);
        for i in 0..4 {
            let (_, h) = sq.tangent_h(i).unwrap();
            assert!(h.dist(&(Mat2C::ONE + Mat2C::QK)) < 1e-15);
            assert!((sq.curvature_at(i).unwrap() - 1.0).abs() < 1e-15);
            assert!((sq.lightcone_curvature(i).unwrap() - 1.0).abs() < 1e-15);
        }
        for r in sq.frenet_residuals().unwrap().into_iter().flatten() {
            assert!(r.max() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn square_double_curvature_circle() {
        let sq = square();
        let c = sq.double_curvature_circle(0).unwrap();
        match lightcone::identify(&c, 1e-12).unwrap() {
            lightcone::LcObject::Circle { x, y, r } => {
                // tangent to x = 1 at (1, −1) and to y = 1 at (−1, 1)
                assert!((x + 1.0).abs() < 1e-14 && (y + 1.0).abs() < 1e-14, "{x} {y}");
                assert!((r - 2.0).abs() < 1e-14, "{r}");
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn straight_segment() {
        let v: Vec<Vec<f64>> = (0..3).map(|k| vec![k as f64, 0.0]).collect();
        let c = DiscreteCurve::from_coords(SpaceForm::Euclidean, &v, false, 1e-12).unwrap();
        let (t, h) = c.tangent_h(1).unwrap();
        assert!(t.dist(&Mat2C::QI) < 1e-15);
        assert!(h.dist(&Mat2C::ONE) < 1e-15);
        assert_eq!(c.curvature().unwrap(), vec![None, Some(0.0), None]);
    }

    #[test]
    fn transport_examples() {
        let s = SpaceForm::Spherical;
        let u = s.transport(&Mat2C::QK, &Mat2C::QI);
        assert!((u.trace() * 0.5).norm() < 1e-15);
        let h = SpaceForm::Hyperbolic;
        let f1 = h.point(&[1f64.sinh(), 0.0, 1f64.cosh()]);
        let u = h.transport(&Mat2C::QK, &f1);
        assert!(((u.trace() * 0.5).re - 1f64.cosh()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_curves() {
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.5, 0.0]];
        assert!(matches!(
            DiscreteCurve::from_coords(SpaceForm::Euclidean, &v, false, 1e-9),
            Err(CurveError::NonConstantArcLength { edge: 1, .. })
        ));
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0]];
        assert!(matches!(
            DiscreteCurve::from_coords(SpaceForm::Euclidean, &v, false, 1e-9),
            Err(CurveError::IrregularCurve { .. })
        ));
        let v = vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 2.0]];
        assert!(matches!(
            DiscreteCurve::from_coords(SpaceForm::Spherical, &v, false, 1e-9),
            Err(CurveError::NotOnModel { index: 1, .. })
        ));
    }

    #[test]
    fn edge_normal_is_perpendicular_bisector() {
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let c = DiscreteCurve::from_coords(SpaceForm::Euclidean, &v, false, 1e-12).unwrap();
        let n = c.edge_normal(0);
        match lightcone::identify(&n, 1e-12).unwrap() {
            lightcone::LcObject::Line { nx, ny, d } => {
                assert!((nx.abs() - 1.0).abs() < 1e-15 && ny.abs() < 1e-15);
                assert!((d * nx - 0.5).abs() < 1e-15);
            }
            o => panic!("{o:?}"),
        }
        let mirror = c.vertex_lift(0) - c.vertex_lift(1);
        let r = lightcone::reflect(&mirror, &n).unwrap();
        // orientation reversal is the reflection in 𝔭, up to scale
        let reversed = n + P * (2.0 * n.inner(&P));
        assert!(r.max_abs_diff(&(-reversed)) < 1e-15);
    }
}
