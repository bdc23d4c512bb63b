// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Darboux butterflies, Bäcklund transformations and the polynomial
//! calculus of curves that are invariant under a sequence of them.
//!
//! A sequence `f⁽⁰⁾, …, f⁽ⁿ⁾` carries transports `u⁽ⁱ⁾` along each curve and
//! `v⁽ⁱ⁾` between consecutive curves. Its vertex polynomial is
//! `P = E(1 + λv⁽ⁿ⁻¹⁾)···(1 + λv⁽⁰⁾)`.

use num_complex::Complex64;

use crate::algebra::{poly_factor_with_radii, special_radii, AlgebraError};
use crate::curve::{isometry_fit, CurveError, Isometry};
use crate::family::{self, FamilyError};
use crate::{DiscreteCurve, Mat2C, QuatPoly, SpaceForm};

#[derive(Debug, Clone, thiserror::Error)]
pub enum BacklundError {
    #[error("quad has a vanishing diagonal")]
    DegenerateQuad,
    #[error("B and D coincide")]
    CoincidentBD,
    #[error("bad initial point: {0}")]
    BadInitialPoint(&'static str),
    #[error("sequence curves do not share combinatorics")]
    Mismatch,
    #[error("last curve is not an isometric image of the first (residual {residual:e})")]
    ShapeNotPreserved { residual: f64 },
    #[error("polynomial vector part vanishes at i/η; reduced by (1 + λ²η²)^{depth}")]
    ReduciblePolynomial { depth: usize, reduced: Vec<QuatPoly> },
    #[error("condition ({condition}) violated at vertex {vertex} (defect {defect:e})")]
    ConditionViolated { condition: u8, vertex: usize, defect: f64 },
    #[error("invariance synthesis is only available in the Euclidean plane")]
    NotEuclidean,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Defining equation of a butterfly `(A, B, C, D) = (f₀, f₁, f̃₁, f̃₀)`:
/// `(C−B)(B−A) = (C−D)(D−A)` in 𝔼², `CB + BA = CD + DA` otherwise.
/// Both sides are quadratic in the points, so the residual is taken
/// relative to `max(1, |F|)²`.
pub fn butterfly_residual(space: SpaceForm, q: &[Mat2C; 4]) -> f64 {
    let [a, b, c, d] = *q;
    let scale = q.iter().fold(1.0f64, |m, f| m.max(f.max_abs())).powi(2);
    let r = match space {
        SpaceForm::Euclidean => ((c - b) * (b - a) - (c - d) * (d - a)).max_abs(),
        _ => (c * b + b * a - c * d - d * a).max_abs(),
    };
    r / scale
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ButterflyCheck {
    pub holds: bool,
    pub residual: f64,
}

pub fn butterfly_check(space: SpaceForm, q: &[Mat2C; 4], tol: f64) -> Result<ButterflyCheck, BacklundError> {
    let [a, b, c, d] = *q;
    // f̃ = f is the identity transformation
    let identity = c == b && d == a;
    if !identity && (a.dist(&c) <= tol || b.dist(&d) <= tol) {
        return Err(BacklundError::DegenerateQuad);
    }
    let residual = butterfly_residual(space, q);
    Ok(ButterflyCheck { holds: residual < tol, residual })
}

/// Fourth point `C` of the butterfly on `A, B, D`.
pub fn butterfly_complete(space: SpaceForm, a: &Mat2C, b: &Mat2C, d: &Mat2C, tol: f64) -> Result<Mat2C, BacklundError> {
    let bd = *b - *d;
    let scale = b.norm().max(d.norm()).max(1.0);
    let bdi = match bd.inv() {
        Some(x) if bd.det().norm() > (tol * scale).powi(2) => x,
        _ => return Err(BacklundError::CoincidentBD),
    };
    Ok(match space {
        SpaceForm::Euclidean => (*b * *b - *d * *d - bd * *a) * bdi,
        _ => -(bd * *a * bdi),
    })
}

/// Bäcklund transform with initial point `initial` paired with vertex 0.
///
/// A periodic curve yields a periodic transform only when the propagation
/// closes up; otherwise the result is the open chain with one extra vertex.
pub fn backlund_transform(curve: &DiscreteCurve, initial: &Mat2C, tol: f64) -> Result<DiscreteCurve, BacklundError> {
    let space = curve.space();
    if space.model_defect(initial) > 10.0 * tol.max(1e-12) {
        return Err(BacklundError::BadInitialPoint("not on the model"));
    }
    let f0 = curve.vertex(0);
    let eta = curve.eta();
    if *initial != f0 && (space.chord(&f0, initial) - eta).abs() <= tol * eta.max(1.0) {
        return Err(BacklundError::BadInitialPoint("at distance η from the first vertex"));
    }
    if space == SpaceForm::Spherical && initial.dist(&-f0) <= tol {
        return Err(BacklundError::BadInitialPoint("antipodal to the first vertex"));
    }
    let m = curve.len();
    let steps = curve.edge_count();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(*initial);
    for k in 0..steps {
        let d = *out.last().expect("seeded");
        let (a, b) = (curve.vertex(k), curve.vertex((k + 1) % m));
        let c = if d == a {
            b
        } else {
            butterfly_complete(space, &a, &b, &d, tol)
                .map_err(|_| BacklundError::BadInitialPoint("propagation hits a degenerate quad"))?
        };
        out.push(if space == SpaceForm::Euclidean { c } else { space.project(&c) });
    }
    let periodic = curve.periodic() && out[steps].dist(&out[0]) <= tol.sqrt() * eta.max(1.0);
    if periodic {
        out.pop();
    }
    Ok(DiscreteCurve::from_parts(space, out, periodic, eta))
}

/// Curves `f⁽⁰⁾, …, f⁽ⁿ⁾` over the same vertex set.
#[derive(Clone, Debug)]
pub struct BacklundSequence {
    curves: Vec<DiscreteCurve>,
}

impl BacklundSequence {
    pub fn new(curves: Vec<DiscreteCurve>) -> Result<Self, BacklundError> {
        let first = curves.first().ok_or(BacklundError::Mismatch)?;
        for c in &curves {
            if c.space() != first.space() || c.len() != first.len() || c.periodic() != first.periodic() {
                return Err(BacklundError::Mismatch);
            }
        }
        Ok(BacklundSequence { curves })
    }

    pub fn curves(&self) -> &[DiscreteCurve] {
        &self.curves
    }

    pub fn into_curves(self) -> Vec<DiscreteCurve> {
        self.curves
    }

    /// Number of transformations.
    pub fn n(&self) -> usize {
        self.curves.len() - 1
    }

    pub fn space(&self) -> SpaceForm {
        self.curves[0].space()
    }

    pub fn first(&self) -> &DiscreteCurve {
        &self.curves[0]
    }

    pub fn last(&self) -> &DiscreteCurve {
        self.curves.last().expect("nonempty")
    }

    /// Transports along curve `i`.
    pub fn u(&self, i: usize) -> Vec<Mat2C> {
        self.curves[i].transports()
    }

    /// Transports `v⁽ⁱ⁾` from curve `i` to curve `i + 1`, per vertex.
    pub fn v(&self, i: usize) -> Vec<Mat2C> {
        let space = self.space();
        self.curves[i]
            .vertices()
            .iter()
            .zip(self.curves[i + 1].vertices())
            .map(|(f, g)| space.transport(f, g))
            .collect()
    }

    /// `v⁽⁰⁾, …, v⁽ⁿ⁻¹⁾` at vertex `k`.
    pub fn v_at(&self, k: usize) -> Vec<Mat2C> {
        let space = self.space();
        self.curves.windows(2).map(|w| space.transport(&w[0].vertex(k), &w[1].vertex(k))).collect()
    }
}

/// Applies one Bäcklund transformation per seed point.
pub fn backlund_sequence(curve: &DiscreteCurve, seeds: &[Mat2C], tol: f64) -> Result<BacklundSequence, BacklundError> {
    let mut curves = vec![curve.clone()];
    for s in seeds {
        let next = backlund_transform(curves.last().expect("nonempty"), s, tol)?;
        if next.len() != curve.len() {
            return Err(BacklundError::Mismatch);
        }
        curves.push(next);
    }
    BacklundSequence::new(curves)
}

/// One step of the discrete flow: `n = seeds.len()` transformations.
pub fn flow_step(curve: &DiscreteCurve, seeds: &[Mat2C], tol: f64) -> Result<DiscreteCurve, BacklundError> {
    Ok(backlund_sequence(curve, seeds, tol)?.into_curves().pop().expect("nonempty"))
}

/// Largest butterfly residual over all quads.
pub fn sequence_butterfly_residual(seq: &BacklundSequence) -> f64 {
    let space = seq.space();
    let mut worst = 0.0f64;
    for w in seq.curves.windows(2) {
        let m = w[0].len();
        for k in 0..w[0].edge_count() {
            let q = [w[0].vertex(k), w[0].vertex((k + 1) % m), w[1].vertex((k + 1) % m), w[1].vertex(k)];
            worst = worst.max(butterfly_residual(space, &q));
        }
    }
    worst
}

/// Quad residuals of a skew parallelogram net.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewNetReport {
    /// `u⁽ⁱ⁾ + v⁽ⁱ⁾₁ = v⁽ⁱ⁾₀ + u⁽ⁱ⁺¹⁾`
    pub additive: f64,
    /// `v⁽ⁱ⁾₁u⁽ⁱ⁾ = u⁽ⁱ⁺¹⁾v⁽ⁱ⁾₀`
    pub multiplicative: f64,
    /// `(1 + λv₁)(1 + λu) = (1 + λu′)(1 + λv₀)` at sample values of `λ`.
    pub compatibility: f64,
    /// Largest residual per quad, `[i][k]`.
    pub per_quad: Vec<Vec<f64>>,
}

impl SkewNetReport {
    pub fn max(&self) -> f64 {
        self.additive.max(self.multiplicative).max(self.compatibility)
    }
}

const SAMPLE_LAMBDAS: [(f64, f64); 3] = [(0.37, 0.21), (-1.3, 0.8), (0.0, 2.1)];

pub fn skew_net_check(seq: &BacklundSequence) -> SkewNetReport {
    let mut rep = SkewNetReport { additive: 0.0, multiplicative: 0.0, compatibility: 0.0, per_quad: Vec::new() };
    for i in 0..seq.n() {
        let (u, up, v) = (seq.u(i), seq.u(i + 1), seq.v(i));
        let m = v.len();
        let mut row = Vec::with_capacity(u.len());
        for k in 0..u.len() {
            let (v0, v1) = (v[k], v[(k + 1) % m]);
            // relative to the edge size, linear resp. quadratic
            let scale = [u[k], up[k], v0, v1].iter().fold(1.0f64, |m, e| m.max(e.max_abs()));
            let add = (u[k] + v1 - v0 - up[k]).max_abs() / scale;
            let mult = (v1 * u[k] - up[k] * v0).max_abs() / (scale * scale);
            let mut comp = 0.0f64;
            for (re, im) in SAMPLE_LAMBDAS {
                let l = Complex64::new(re, im);
                let lhs = (Mat2C::ONE + v1 * l) * (Mat2C::ONE + u[k] * l);
                let rhs = (Mat2C::ONE + up[k] * l) * (Mat2C::ONE + v0 * l);
                comp = comp.max((lhs - rhs).max_abs() / (scale * (1.0 + l.norm())).powi(2));
            }
            rep.additive = rep.additive.max(add);
            rep.multiplicative = rep.multiplicative.max(mult);
            rep.compatibility = rep.compatibility.max(comp);
            row.push(add.max(mult).max(comp));
        }
        rep.per_quad.push(row);
    }
    rep
}

/// Isometry relating the first and last curve, with `ũ = E⁻¹uE`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveredIsometry {
    pub isometry: Isometry,
    /// Largest vertex distance after applying the isometry.
    pub residual: f64,
    pub orientation_preserving: bool,
}

pub fn recover_isometry(seq: &BacklundSequence) -> Result<RecoveredIsometry, BacklundError> {
    let (iso, residual) = isometry_fit(seq.first(), seq.last())?;
    let orientation_preserving = match seq.space() {
        SpaceForm::Euclidean => {
            let x = iso.e.quaternion_coords();
            x[0] * x[0] + x[3] * x[3] >= x[1] * x[1] + x[2] * x[2]
        }
        _ => {
            let a = seq.first().interior_curvature()?;
            let b = seq.last().interior_curvature()?;
            let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            dot >= 0.0
        }
    };
    Ok(RecoveredIsometry { isometry: iso, residual, orientation_preserving })
}

/// `P = E(1 + λv⁽ⁿ⁻¹⁾)···(1 + λv⁽⁰⁾)` at every vertex.
///
/// Fails with `ShapeNotPreserved` unless `ũ = E⁻¹uE` on every edge.
pub fn build_polynomial(seq: &BacklundSequence, e: &Mat2C, tol: f64) -> Result<Vec<QuatPoly>, BacklundError> {
    let ei = e.inv().ok_or(BacklundError::ShapeNotPreserved { residual: f64::INFINITY })?;
    let u0 = seq.u(0);
    let un = seq.u(seq.n());
    let residual = u0.iter().zip(&un).map(|(u, w)| (ei * *u * *e).dist(w)).fold(0.0, f64::max);
    if residual > tol.sqrt().max(tol) * seq.first().eta().max(1.0) {
        return Err(BacklundError::ShapeNotPreserved { residual });
    }
    Ok((0..seq.first().len()).map(|k| QuatPoly::from_factors(*e, &seq.v_at(k))).collect())
}

/// Largest coefficient residual of `P₁(1 + λu) = (1 + λu)P₀` over all edges.
pub fn evolution_residual(curve: &DiscreteCurve, polys: &[QuatPoly]) -> f64 {
    let m = curve.len();
    let mut worst = 0.0f64;
    for e in 0..curve.edge_count() {
        let u = QuatPoly::linear(curve.edge_transport(e));
        let lhs = polys[(e + 1) % m].mul(&u);
        let rhs = u.mul(&polys[e]);
        worst = worst.max(lhs.max_diff(&rhs));
    }
    worst
}

/// `P` at the neighbour across an edge from the evolution relation.
pub fn evolve_forward(p0: &QuatPoly, u: &Mat2C) -> QuatPoly {
    let mut out = vec![p0.coeff(0)];
    for i in 1..=p0.degree() {
        let prev = out[i - 1];
        out.push(p0.coeff(i) + *u * p0.coeff(i - 1) - prev * *u);
    }
    QuatPoly::new(out)
}

pub fn evolve_backward(p1: &QuatPoly, u: &Mat2C) -> QuatPoly {
    let mut out = vec![p1.coeff(0)];
    for i in 1..=p1.degree() {
        let prev = out[i - 1];
        out.push(p1.coeff(i) + p1.coeff(i - 1) * *u - *u * prev);
    }
    QuatPoly::new(out)
}

/// Extends polynomials given at the interior vertices `1..m-1` of an open
/// curve to both end vertices.
pub fn extend_poly(curve: &DiscreteCurve, interior: &[QuatPoly]) -> Vec<QuatPoly> {
    let m = curve.len();
    let mut out = Vec::with_capacity(m);
    out.push(evolve_backward(&interior[0], &curve.edge_transport(0)));
    out.extend_from_slice(interior);
    out.push(evolve_forward(interior.last().expect("nonempty"), &curve.edge_transport(m - 2)));
    out
}

/// Vertex polynomials with the isometry datum `E = C⁰`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceCertificate {
    pub n: usize,
    pub e: Mat2C,
    pub polys: Vec<QuatPoly>,
}

impl InvarianceCertificate {
    pub fn new(polys: Vec<QuatPoly>, n: usize) -> Self {
        let e = polys.first().map(|p| p.coeff(0)).unwrap_or(Mat2C::ONE);
        InvarianceCertificate { n, e, polys: polys.into_iter().map(|p| p.padded(n)).collect() }
    }

    /// Same polynomials read as an `(n + 2)`-certificate: two identity
    /// transformations appended.
    pub fn promote(&self) -> InvarianceCertificate {
        InvarianceCertificate {
            n: self.n + 2,
            e: self.e,
            polys: self.polys.iter().map(|p| p.padded(self.n + 2)).collect(),
        }
    }
}

/// `θ_j = Σ ⟨C⃗ᵏ, C⃗ʲ⁻ᵏ⟩`, the coefficients of `det P⃗`.
pub fn theta(p: &QuatPoly) -> Vec<f64> {
    p.vector_part().det().iter().map(|c| c.re).collect()
}

/// `r_j = ½ tr Cʲ`.
pub fn half_traces(p: &QuatPoly) -> Vec<f64> {
    p.half_trace().iter().map(|c| c.re).collect()
}

/// `A = Cⁿ − η²Cⁿ⁻² + …` and `B = Cⁿ⁻¹ − η²Cⁿ⁻³ + …`.
pub fn a_b(p: &QuatPoly, n: usize, eta: f64) -> (Mat2C, Mat2C) {
    let mut a = Mat2C::ZERO;
    let mut b = Mat2C::ZERO;
    let mut w = 1.0;
    let mut j = n as isize;
    while j >= 0 {
        a += p.coeff(j as usize) * w;
        if j >= 1 {
            b += p.coeff(j as usize - 1) * w;
        }
        w *= -eta * eta;
        j -= 2;
    }
    (a, b)
}

/// `β² = −(−η²)ⁿ⁻¹ det P⃗(i/η)`.
pub fn beta_squared(p: &QuatPoly, n: usize, eta: f64) -> f64 {
    let d = p.vector_part().eval(Complex64::new(0.0, 1.0 / eta)).det();
    -(-eta * eta).powi(n as i32 - 1) * d.re
}

/// Divides `P⃗` by `1 + λ²η²` while it vanishes at `i/η`.
pub fn reduce_polynomial(p: &QuatPoly, eta: f64, tol: f64) -> (QuatPoly, usize) {
    let mut cur = p.vector_part();
    let mut depth = 0;
    let scale = p.max_coeff_norm().max(1.0);
    while cur.degree() >= 2
        && cur.eval(Complex64::new(0.0, 1.0 / eta)).max_abs()
            <= tol * scale * (1.0 / eta).max(1.0).powi(cur.degree() as i32)
    {
        let n = cur.degree();
        let mut q = vec![Mat2C::ZERO; n - 1];
        for j in 0..n - 1 {
            q[j] = cur.coeff(j) - if j >= 2 { q[j - 2] * (eta * eta) } else { Mat2C::ZERO };
        }
        cur = QuatPoly::new(q);
        depth += 1;
    }
    (cur, depth)
}

/// Per-vertex data of a Euclidean certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct AbBeta {
    pub a: Vec<Mat2C>,
    pub b: Vec<Mat2C>,
    pub beta: f64,
    /// `max |A − βT|` over interior vertices.
    pub tangent_residual: f64,
    /// `max |β − B⃗ − βH|` over interior vertices.
    pub curvature_residual: f64,
    /// `max |β² + (−η²)ⁿ⁻¹ det P⃗(i/η)|` relative to `β²`.
    pub beta_identity_residual: f64,
}

pub fn extract_ab_beta(curve: &DiscreteCurve, cert: &InvarianceCertificate, tol: f64) -> Result<AbBeta, BacklundError> {
    let eta = curve.eta();
    let n = cert.n;
    let b2 = beta_squared(&cert.polys[0], n, eta);
    let scale = cert.polys[0].max_coeff_norm().max(1.0).powi(2);
    if b2.abs() <= tol * scale {
        let mut depth = 0;
        let reduced = cert
            .polys
            .iter()
            .map(|p| {
                let (q, k) = reduce_polynomial(p, eta, tol.sqrt());
                depth = depth.max(k);
                q
            })
            .collect();
        return Err(BacklundError::ReduciblePolynomial { depth, reduced });
    }
    let (a, b): (Vec<Mat2C>, Vec<Mat2C>) = cert.polys.iter().map(|p| a_b(p, n, eta)).unzip();
    let mut beta = None;
    let mut tangent_residual = 0.0f64;
    let mut curvature_residual = 0.0f64;
    for i in curve.interior() {
        let (t, h) = curve.tangent_h(i)?;
        let bi = beta.get_or_insert_with(|| a[i].inner(&t).re / t.inner(&t).re);
        tangent_residual = tangent_residual.max((a[i] - t * *bi).max_abs());
        curvature_residual = curvature_residual.max((Mat2C::real(*bi) - b[i].tf() - h * *bi).max_abs());
    }
    let beta = beta.ok_or(CurveError::TooFewVertices { min: 3, got: curve.len() })?;
    let beta_identity_residual = cert
        .polys
        .iter()
        .map(|p| (beta * beta - beta_squared(p, n, eta)).abs() / (beta * beta).max(1.0))
        .fold(0.0, f64::max);
    Ok(AbBeta { a, b, beta, tangent_residual, curvature_residual, beta_identity_residual })
}

/// Distance from `span{𝐢, 𝐣}` (`odd`) or `span{1, 𝐤}` including the
/// quaternion defect.
fn parity_defect(c: &Mat2C, odd: bool) -> f64 {
    let x = c.quaternion_coords();
    let off = if odd { x[0].abs().max(x[3].abs()) } else { x[1].abs().max(x[2].abs()) };
    off.max(c.quaternion_defect())
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub n: usize,
    pub parity_defect: f64,
    pub evolution_residual: f64,
    /// `s` with `det P(±is) = 0`, ascending.
    pub radii: Vec<f64>,
    /// `max ‖P⃗‖` over vertices.
    pub vector_norm: f64,
    /// Flagged when `‖P⃗‖` is within ten tolerances of zero.
    pub near_singular: bool,
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
    /// Largest change along the curve of `θ_j`, `r_j`, `det P` coefficients.
    pub invariant_drift: f64,
}

/// Checks parity, the evolution relation, the determinant roots and
/// regularity, in that order; the first failure names its vertex.
pub fn verify_certificate(
    curve: &DiscreteCurve,
    cert: &InvarianceCertificate,
    tol: f64,
) -> Result<CertificateReport, BacklundError> {
    if curve.space() != SpaceForm::Euclidean {
        return Err(BacklundError::NotEuclidean);
    }
    if cert.polys.len() != curve.len() {
        return Err(BacklundError::Mismatch);
    }
    let n = cert.n;
    let eta = curve.eta();
    let mut parity = 0.0f64;
    for (k, p) in cert.polys.iter().enumerate() {
        let scale = p.max_coeff_norm().max(1.0);
        for j in 0..=n {
            let d = parity_defect(&p.coeff(j), (n - j).is_multiple_of(2));
            parity = parity.max(d / scale);
            if d > tol.sqrt() * scale {
                return Err(BacklundError::ConditionViolated { condition: 1, vertex: k, defect: d });
            }
        }
        if p.coeff(0).max_abs() <= tol {
            return Err(BacklundError::ConditionViolated { condition: 1, vertex: k, defect: 0.0 });
        }
    }
    let m = curve.len();
    let mut evo = 0.0f64;
    for e in 0..curve.edge_count() {
        let u = QuatPoly::linear(curve.edge_transport(e));
        let (p0, p1) = (&cert.polys[e], &cert.polys[(e + 1) % m]);
        let r = p1.mul(&u).max_diff(&u.mul(p0));
        let scale = p0.max_coeff_norm().max(1.0);
        evo = evo.max(r / scale);
        if r > tol.sqrt() * scale {
            return Err(BacklundError::ConditionViolated { condition: 2, vertex: e, defect: r });
        }
    }
    let radii = special_radii(&cert.polys[0], tol).map_err(|err| match err {
        AlgebraError::NonImaginaryRoots { .. } => {
            BacklundError::ConditionViolated { condition: 3, vertex: 0, defect: f64::NAN }
        }
        other => BacklundError::Algebra(other),
    })?;
    if let Some(s) = radii.iter().find(|s| (**s * eta - 1.0).abs() <= tol.sqrt()) {
        return Err(BacklundError::ConditionViolated { condition: 3, vertex: 0, defect: (s * eta - 1.0).abs() });
    }
    let vector_norm = cert.polys.iter().map(|p| p.vector_part().max_coeff_norm()).fold(0.0, f64::max);
    if vector_norm <= tol {
        return Err(BacklundError::ConditionViolated { condition: 0, vertex: 0, defect: vector_norm });
    }
    let th0 = theta(&cert.polys[0]);
    let r0 = half_traces(&cert.polys[0]);
    let d0: Vec<f64> = cert.polys[0].det().iter().map(|c| c.re).collect();
    let mut drift = 0.0f64;
    for p in &cert.polys {
        let diff = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        drift = drift.max(diff(&theta(p), &th0)).max(diff(&half_traces(p), &r0));
        drift = drift.max(diff(&p.det().iter().map(|c| c.re).collect::<Vec<_>>(), &d0));
    }
    Ok(CertificateReport {
        n,
        parity_defect: parity,
        evolution_residual: evo,
        radii,
        vector_norm,
        near_singular: vector_norm <= 10.0 * tol,
        theta: th0,
        r: r0,
        invariant_drift: drift,
    })
}

/// Factors the certificate at every vertex with one radius order and
/// builds the sequence `F⁽ⁱ⁺¹⁾ = F⁽ⁱ⁾ + v⁽ⁱ⁾`.
///
/// Where a vertex does not factor cleanly, its points are completed from
/// the previous vertex by butterflies.
pub fn synthesize_invariance(
    curve: &DiscreteCurve,
    cert: &InvarianceCertificate,
    tol: f64,
) -> Result<BacklundSequence, BacklundError> {
    verify_certificate(curve, cert, tol)?;
    let space = curve.space();
    let mut order: Vec<Option<f64>> = special_radii(&cert.polys[0], tol)?.into_iter().map(Some).collect();
    while order.len() < cert.n {
        order.push(None);
    }
    let n = order.len();
    let m = curve.len();
    let mut grid: Vec<Vec<Mat2C>> = vec![Vec::with_capacity(m); n + 1];
    for k in 0..m {
        let mut column = vec![curve.vertex(k)];
        match poly_factor_with_radii(&cert.polys[k], &order, tol) {
            Ok(f) => {
                for v in &f.factors {
                    let last = *column.last().expect("seeded");
                    column.push(last + *v);
                }
            }
            Err(err) if k == 0 => return Err(err.into()),
            Err(_) => {
                for i in 0..n {
                    let (a, b, d) = (grid[i][k - 1], column[i], grid[i + 1][k - 1]);
                    column.push(butterfly_complete(space, &a, &b, &d, tol)?);
                }
            }
        }
        for (i, f) in column.into_iter().enumerate() {
            grid[i].push(f);
        }
    }
    let curves =
        grid.into_iter().map(|pts| DiscreteCurve::from_parts(space, pts, curve.periodic(), curve.eta())).collect();
    BacklundSequence::new(curves)
}

/// Sequence data carried to another space form by the associated family.
#[derive(Clone, Debug)]
pub struct FamilySequence {
    pub sequence: BacklundSequence,
    /// `Φ[i][k]` for curve `i`, vertex `k`.
    pub frames: Vec<Vec<Mat2C>>,
    /// Isometry applied to every source curve before transforming.
    pub placement: Isometry,
    pub lambda: Complex64,
}

impl FamilySequence {
    /// `E^λ = (Φ⁽⁰⁾)⁻¹ E Φ⁽ⁿ⁾` per vertex for a datum `E` of the placed source.
    pub fn transferred_datum(&self, e: &Mat2C) -> Vec<Mat2C> {
        let n = self.frames.len() - 1;
        self.frames[0]
            .iter()
            .zip(&self.frames[n])
            .map(|(p0, pn)| (p0.inv().expect("det 1") * *e * *pn).normalize_det())
            .collect()
    }
}

/// Associated family applied to every curve of a sequence, with frames
/// propagated along the first curve and then across the transformations.
pub fn family_on_sequence(
    seq: &BacklundSequence,
    lambda: Complex64,
    tol: f64,
) -> Result<FamilySequence, BacklundError> {
    let src = seq.space();
    let target = family::target_space(src, seq.first().eta(), lambda, tol)?;
    let placement = family::canonical_placement(seq.first());
    let placed: Vec<DiscreteCurve> = seq.curves().iter().map(|c| c.apply_isometry(&placement)).collect();
    let placed = BacklundSequence::new(placed)?;
    let n = placed.n();
    let m = placed.first().len();
    let one = Mat2C::ONE;
    let check = |x: &Mat2C| -> Result<(), BacklundError> {
        let (p, q) = (one + *x * lambda, one - *x * lambda);
        if p.det().norm() <= tol || q.det().norm() <= tol {
            Err(FamilyError::InadmissibleLambda { lambda, reason: "1 ± λv is singular" }.into())
        } else {
            Ok(())
        }
    };
    let u0: Vec<Mat2C> = (0..m - 1).map(|k| placed.first().edge_transport(k)).collect();
    let vs: Vec<Vec<Mat2C>> = (0..n).map(|i| placed.v(i)).collect();
    for x in u0.iter().chain(vs.iter().flatten()) {
        check(x)?;
    }
    let mut frames = vec![vec![one; m]; n + 1];
    for k in 0..m - 1 {
        frames[0][k + 1] = ((one + u0[k] * lambda) * frames[0][k]).normalize_det();
    }
    for i in 0..n {
        for k in 0..m {
            frames[i + 1][k] = ((one + vs[i][k] * lambda) * frames[i][k]).normalize_det();
        }
    }
    let mut pts = vec![vec![Mat2C::ZERO; m]; n + 1];
    if src == SpaceForm::Euclidean {
        for i in 0..=n {
            for k in 0..m {
                let phi = frames[i][k];
                pts[i][k] = target.project(&(phi.inv().expect("det 1") * Mat2C::QK * phi));
            }
        }
    } else {
        let sc = if src == SpaceForm::Hyperbolic { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
        let sandwich = |x: &Mat2C, phi: &Mat2C| -> Mat2C {
            let pi = phi.inv().expect("det 1");
            pi * (one + *x * lambda).inv().expect("checked") * (one - *x * lambda) * *phi * sc
        };
        for k in 0..m - 1 {
            pts[0][k + 1] = pts[0][k] + sandwich(&u0[k], &frames[0][k + 1]);
        }
        for i in 0..n {
            for k in 0..m {
                pts[i + 1][k] = pts[i][k] + sandwich(&vs[i][k], &frames[i + 1][k]);
            }
        }
        for row in pts.iter_mut() {
            for f in row.iter_mut() {
                *f = target.project(f);
            }
        }
    }
    let eta = target.chord(&pts[0][0], &pts[0][1]);
    let periodic = seq.first().periodic();
    let curves = pts.into_iter().map(|p| DiscreteCurve::from_parts(target, p, periodic, eta)).collect();
    Ok(FamilySequence { sequence: BacklundSequence::new(curves)?, frames, placement, lambda })
}

/// Everything measured when checking that a sequence certifies invariance.
#[derive(Clone, Debug)]
pub struct SequenceReport {
    pub n: usize,
    pub butterfly: f64,
    pub skew_net: SkewNetReport,
    pub isometry: RecoveredIsometry,
    /// Isometry orientation matches the parity of `n`.
    pub orientation_ok: bool,
    /// `P₁(1 + λu) = (1 + λu)P₀` residual of the vertex polynomials.
    pub evolution_residual: f64,
    /// `max ‖P⃗‖`; zero for non-regular sequences.
    pub vector_norm: f64,
}

impl SequenceReport {
    /// All residuals below `tol` (isometry fit below `iso_tol`).
    pub fn passes(&self, tol: f64, iso_tol: f64) -> bool {
        self.butterfly < tol
            && self.skew_net.max() < tol
            && self.isometry.residual < iso_tol
            && self.orientation_ok
            && self.evolution_residual < iso_tol
            && self.vector_norm > 10.0 * tol
    }
}

/// Off 𝔼² the sequence is first moved so that the middle vertex of the
/// first curve is `𝐤`; all measured quantities are isometry invariant and
/// far-out vertices lose digits in the products. The recovered isometry
/// refers to that frame.
pub fn check_sequence(seq: &BacklundSequence, tol: f64) -> Result<SequenceReport, BacklundError> {
    let centered;
    let seq = if seq.space() == SpaceForm::Euclidean {
        seq
    } else {
        let first = seq.first();
        let mid = first.slice(first.len() / 2..first.len() / 2 + 1);
        let iso = family::canonical_placement(&mid);
        centered = BacklundSequence::new(seq.curves().iter().map(|c| c.apply_isometry(&iso)).collect())?;
        &centered
    };
    let isometry = recover_isometry(seq)?;
    let n = seq.n();
    let polys: Vec<QuatPoly> =
        (0..seq.first().len()).map(|k| QuatPoly::from_factors(isometry.isometry.e, &seq.v_at(k))).collect();
    let _ = tol;
    Ok(SequenceReport {
        n,
        butterfly: sequence_butterfly_residual(seq),
        skew_net: skew_net_check(seq),
        orientation_ok: isometry.orientation_preserving == (n % 2 == 1),
        isometry,
        evolution_residual: evolution_residual(seq.first(), &polys),
        vector_norm: polys.iter().map(|p| p.vector_part().max_coeff_norm()).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate;

    fn e2(x: f64, y: f64) -> Mat2C {
        SpaceForm::Euclidean.point(&[x, y])
    }

    #[test]
    fn butterfly_examples() {
        let s = SpaceForm::Euclidean;
        let q = [e2(0.0, 1.0), e2(2.0, 1.0), e2(0.0, -1.0), e2(2.0, -1.0)];
        assert!(butterfly_check(s, &q, 1e-12).unwrap().holds);
        let c = butterfly_complete(s, &q[0], &q[1], &q[3], 1e-12).unwrap();
        assert!(c.dist(&q[2]) < 1e-15);
        let par = [e2(0.0, 0.0), e2(1.0, 0.0), e2(1.0, 1.0), e2(0.0, 1.0)];
        assert!(!butterfly_check(s, &par, 1e-9).unwrap().holds);
        let id = [e2(0.0, 0.0), e2(1.0, 0.0), e2(1.0, 0.0), e2(0.0, 0.0)];
        assert!(butterfly_check(s, &id, 1e-9).unwrap().holds);
        assert!(matches!(butterfly_complete(s, &q[0], &q[1], &q[1], 1e-12), Err(BacklundError::CoincidentBD)));
    }

    #[test]
    fn identity_transformation() {
        let c = integrate::clothoid(SpaceForm::Spherical, 0.3, 0.1, 12, 1e-9).unwrap();
        let t = backlund_transform(&c, &c.vertex(0), 1e-9).unwrap();
        for (f, g) in c.vertices().iter().zip(t.vertices()) {
            assert!(f.dist(g) < 1e-12);
        }
    }

    #[test]
    fn circle_transform_is_rotation() {
        let c = integrate::circle(SpaceForm::Euclidean, 0.5, 1.0, 20, 1e-9).unwrap();
        let seq = backlund_sequence(&c, &[c.vertex(3)], 1e-9).unwrap();
        let rep = check_sequence(&seq, 1e-9).unwrap();
        assert!(rep.butterfly < 1e-12 && rep.skew_net.max() < 1e-12);
        // round-off grows geometrically along the propagation
        assert!(rep.isometry.residual < 1e-9 && rep.orientation_ok, "{rep:?}");
    }

    #[test]
    fn perturbed_vertex_spikes_locally() {
        let c = integrate::clothoid(SpaceForm::Euclidean, 0.3, 0.1, 12, 1e-9).unwrap();
        let seq = backlund_sequence(&c, &[e2(0.1, 0.7)], 1e-9).unwrap();
        assert!(skew_net_check(&seq).max() < 1e-12);
        let mut curves = seq.into_curves();
        let mut pts = curves[1].vertices().to_vec();
        pts[5] += e2(1e-3, 0.0);
        curves[1] = DiscreteCurve::from_parts(SpaceForm::Euclidean, pts, false, c.eta());
        let rep = skew_net_check(&BacklundSequence::new(curves).unwrap());
        let row = &rep.per_quad[0];
        assert!(row[4] > 1e-5 && row[5] > 1e-5 && row[2] < 1e-12 && row[8] < 1e-12);
    }

    #[test]
    fn evolution_roundtrip() {
        let c = integrate::clothoid(SpaceForm::Euclidean, 0.3, 0.1, 6, 1e-9).unwrap();
        let p = QuatPoly::new(vec![Mat2C::QI, Mat2C::ONE + Mat2C::QK, Mat2C::QJ]);
        let u = c.edge_transport(2);
        let q = evolve_forward(&p, &u);
        assert!(evolve_backward(&q, &u).max_diff(&p) < 1e-14);
    }

    #[test]
    fn reduce_divides_real_quadratic() {
        let eta = 0.5;
        let q = QuatPoly::new(vec![Mat2C::QI, Mat2C::QK]);
        let quad = QuatPoly::new(vec![Mat2C::ONE, Mat2C::ZERO, Mat2C::real(eta * eta)]);
        let (r, depth) = reduce_polynomial(&quad.mul(&q), eta, 1e-12);
        assert_eq!(depth, 1);
        assert!(r.max_diff(&q) < 1e-14);
    }
}
