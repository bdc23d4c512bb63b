// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Elastic and constrained elastic curves: the conserved vector `a` with
//! `κ = ⟨𝔣, a⟩`, the linear complex of double-curvature circles, the
//! directrix, invariance certificates and the mKdV decomposition.

use num_complex::Complex64;

use crate::algebra::real_poly_roots;
use crate::backlund::{
    self, check_sequence, extend_poly, family_on_sequence, synthesize_invariance, theta, verify_certificate, AbBeta,
    BacklundError, BacklundSequence, CertificateReport, InvarianceCertificate, SequenceReport,
};
use crate::curve::CurveError;
use crate::family::{self, FamilyError};
use crate::integrate::{curvature_equation_fit, CurvatureFit, IntegrateError};
use crate::lightcone::{self, LcDirectrix, P};
use crate::{DiscreteCurve, LcVector, Mat2C, QuatPoly, SpaceForm};

#[derive(Debug, Clone, thiserror::Error)]
pub enum ElasticError {
    #[error("curve is not (constrained) elastic: {0}")]
    NotElastic(String),
    #[error("no admissible free scalars found for |r| up to {max_scanned:e}")]
    SearchFailed { max_scanned: f64 },
    #[error("certificate is not a valid 3-invariance certificate: {0}")]
    NotCertified(String),
    #[error("{0} is not supported for this space form")]
    Unsupported(&'static str),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Backlund(#[from] BacklundError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Conserved vector `a` with `κ₀ = ω⟨𝔣₀, a⟩`, `ω = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Proportionality {
    pub a: LcVector,
    pub omega: f64,
    pub fit: CurvatureFit,
    /// Largest deviation of a per-vertex vector from the mean.
    pub spread: f64,
    /// `max |κ − ω⟨𝔣, a⟩|`.
    pub residual: f64,
}

/// Vertices with two neighbours on each side.
fn deep_interior(curve: &DiscreteCurve) -> Vec<usize> {
    if curve.periodic() {
        (0..curve.len()).collect()
    } else {
        (2..curve.len().saturating_sub(2)).collect()
    }
}

fn mean(vs: &[LcVector]) -> LcVector {
    let mut s = LcVector([0.0; 5]);
    for v in vs {
        s = s + *v;
    }
    s * (1.0 / vs.len() as f64)
}

/// Fits `(ξ, δ)` and evaluates
/// `a₀ = x₀𝔣₀ + y₀(𝔣₋₁ − 𝔣₁) + z₀(𝔱₋₁₀ + 𝔱₀₁ − 2𝔭) − κ₀𝔮 + α𝔭` at every
/// vertex with two neighbours on each side.
pub fn proportionality_vector(curve: &DiscreteCurve, tol: f64) -> Result<Proportionality, ElasticError> {
    let fit = curvature_equation_fit(curve)?;
    let kscale = curve.curvature()?.iter().flatten().fold(1.0f64, |m, k| m.max(k.abs()));
    if fit.residual > tol.sqrt() * kscale.powi(3) {
        return Err(ElasticError::NotElastic(format!("curvature equation residual {:e}", fit.residual)));
    }
    let eta = curve.eta();
    let zeta = curve.zeta();
    let q = lightcone::space_form_vector(curve.space());
    let qq = q.norm_sq();
    let kappa = curve.curvature()?;
    let alpha = -(2.0 - fit.xi + eta * eta * qq) / (zeta * zeta);
    let mut per_vertex = Vec::new();
    for i in deep_interior(curve) {
        let (prev, next) = curve.neighbours(i).ok_or(CurveError::BoundaryVertex(i))?;
        let (Some(km), Some(k0), Some(k1)) = (kappa[prev], kappa[i], kappa[next]) else {
            continue;
        };
        let (fm, f0, fp) = (curve.vertex_lift(prev), curve.vertex_lift(i), curve.vertex_lift(next));
        let (tm, tp) = (curve.tangent_lift(prev), curve.tangent_lift(i));
        let x0 = -fit.delta / (eta * eta) - k0 * qq;
        let y0 = -(km - k1) / (2.0 * fm.inner(&fp));
        let z0 = (2.0 * alpha - k0 * (km + k1) / 2.0) / (2.0 * tm.inner(&tp) + 4.0);
        per_vertex.push(f0 * x0 + (fm - fp) * y0 + (tm + tp - P * 2.0) * z0 - q * k0 + P * alpha);
    }
    if per_vertex.is_empty() {
        return Err(CurveError::TooFewVertices { min: 5, got: curve.len() }.into());
    }
    let a = mean(&per_vertex);
    let spread = per_vertex.iter().map(|v| v.max_abs_diff(&a)).fold(0.0, f64::max);
    let ascale = a.coord_norm().max(1.0);
    if spread > tol.sqrt() * ascale {
        return Err(ElasticError::NotElastic(format!("conserved vector drifts by {spread:e}")));
    }
    let mut residual = 0.0f64;
    for i in curve.interior() {
        if let Some(k) = kappa[i] {
            residual = residual.max((k - curve.vertex_lift(i).inner(&a)).abs());
        }
    }
    Ok(Proportionality { a, omega: 1.0, fit, spread, residual })
}

/// `χ = ⟨𝔠, a⟩` per interior vertex (`⟨𝔠, 𝔭⟩ = −1`).
pub fn complex_shift(curve: &DiscreteCurve, a: &LcVector) -> Result<Vec<f64>, ElasticError> {
    curve.interior().into_iter().map(|i| Ok(curve.double_curvature_circle(i)?.inner(a))).collect()
}

/// Linear complex `a + χ𝔭` containing every double-curvature circle.
pub fn linear_complex(curve: &DiscreteCurve, a: &LcVector) -> Result<LcVector, ElasticError> {
    let chi = complex_shift(curve, a)?;
    let c = chi.iter().sum::<f64>() / chi.len().max(1) as f64;
    Ok(*a + P * c)
}

/// `max |⟨𝔠, a⟩|` over the double-curvature circles.
pub fn complex_membership_check(curve: &DiscreteCurve, a: &LcVector) -> Result<f64, ElasticError> {
    Ok(complex_shift(curve, a)?.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DirectrixKind {
    /// Oriented line `⟨n, F⟩ = h`.
    Line { normal: [f64; 2], offset: f64 },
    /// Center and squared radius `r² > 0`.
    Circle { center: [f64; 2], radius_sq: f64 },
    /// Center and squared radius `r² ≤ 0`.
    ImaginaryCircle { center: [f64; 2], radius_sq: f64 },
    /// Only the light-cone data is available (𝕊², ℍ²).
    Lightcone,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Directrix {
    pub kind: DirectrixKind,
    /// The conserved vector `a` with `κ = ω⟨𝔣, a⟩`.
    pub vector: LcVector,
    /// The linear complex `a + χ𝔭`.
    pub complex: LcVector,
    pub star: LcDirectrix,
    pub omega: f64,
    /// Distance law constant: `d = cκ` (line) or `x² = cκ` (circle).
    pub c: f64,
    /// `β = 4c/η` as it appears in the certificate.
    pub beta: f64,
    /// Per interior vertex: signed distance (line) or squared tangential
    /// distance (circle).
    pub distances: Vec<f64>,
    pub distance_residual: f64,
    pub complex_residual: f64,
}

/// Directrix of a constrained elastic curve. In 𝔼² the distance law is
/// evaluated; elsewhere only the light-cone data is returned.
pub fn directrix(curve: &DiscreteCurve, tol: f64) -> Result<Directrix, ElasticError> {
    let prop = proportionality_vector(curve, tol)?;
    let a = prop.a;
    let complex = linear_complex(curve, &a)?;
    let complex_residual = complex_membership_check(curve, &complex)?;
    let star = lightcone::directrix(&complex);
    let eta = curve.eta();
    let mut out = Directrix {
        kind: DirectrixKind::Lightcone,
        vector: a,
        complex,
        star,
        omega: prop.omega,
        c: f64::NAN,
        beta: f64::NAN,
        distances: Vec::new(),
        distance_residual: f64::NAN,
        complex_residual,
    };
    if curve.space() != SpaceForm::Euclidean {
        return Ok(out);
    }
    let kappa = curve.interior_curvature()?;
    let points: Vec<[f64; 2]> = curve.interior().into_iter().map(|i| xy(&curve.vertex(i))).collect();
    let aq = a.inner(&lightcone::space_form_vector(SpaceForm::Euclidean));
    let x = a.0;
    if aq.abs() <= tol.sqrt() * a.coord_norm().max(1.0) {
        let s = x[0].hypot(x[1]);
        if s <= tol {
            return Err(ElasticError::NotElastic("directrix direction vanishes".into()));
        }
        let normal = [x[0] / s, x[1] / s];
        let offset = x[3] / s;
        out.kind = DirectrixKind::Line { normal, offset };
        out.c = 1.0 / s;
        out.distances = points.iter().map(|p| normal[0] * p[0] + normal[1] * p[1] - offset).collect();
    } else {
        let at = a * (-1.0 / aq);
        let center = [at.0[0], at.0[1]];
        let radius_sq = center[0] * center[0] + center[1] * center[1] - (at.0[3] - at.0[2]);
        out.kind = if radius_sq > 0.0 {
            DirectrixKind::Circle { center, radius_sq }
        } else {
            DirectrixKind::ImaginaryCircle { center, radius_sq }
        };
        out.c = 2.0 / aq;
        out.distances =
            points.iter().map(|p| (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2) - radius_sq).collect();
    }
    out.beta = 4.0 * out.c / eta;
    out.distance_residual = out.distances.iter().zip(&kappa).map(|(d, k)| (d - out.c * k).abs()).fold(0.0, f64::max);
    Ok(out)
}

/// Alias kept for callers that only deal with the Euclidean plane.
pub fn euclidean_directrix(curve: &DiscreteCurve, tol: f64) -> Result<Directrix, ElasticError> {
    if curve.space() != SpaceForm::Euclidean {
        return Err(ElasticError::Unsupported("euclidean_directrix"));
    }
    directrix(curve, tol)
}

fn xy(f: &Mat2C) -> [f64; 2] {
    let x = f.quaternion_coords();
    [x[1], x[2]]
}

/// Degree-2 polynomial `E, r₁ − βH⃗, βT + η²E` at the interior vertices,
/// extended to the ends by the evolution relation.
pub fn elastic_polynomial(curve: &DiscreteCurve, e: &Mat2C, beta: f64, r1: f64) -> Result<Vec<QuatPoly>, ElasticError> {
    let eta = curve.eta();
    let mut interior = Vec::new();
    for i in curve.interior() {
        let (t, h) = curve.tangent_h(i)?;
        interior.push(QuatPoly::new(vec![*e, Mat2C::real(r1) - h.tf() * beta, t * beta + *e * (eta * eta)]));
    }
    Ok(extend(curve, interior))
}

/// Degree-3 polynomial `r₀ + 𝐤, 2(F − X)𝐤, r₂ − βH⃗ + η²𝐤, βT + η²C¹`.
pub fn constrained_elastic_polynomial(
    curve: &DiscreteCurve,
    center: &Mat2C,
    beta: f64,
    r0: f64,
    r2: f64,
) -> Result<Vec<QuatPoly>, ElasticError> {
    let eta = curve.eta();
    let k = Mat2C::QK;
    let mut interior = Vec::new();
    for i in curve.interior() {
        let (t, h) = curve.tangent_h(i)?;
        let c1 = (curve.vertex(i) - *center) * k * 2.0;
        interior.push(QuatPoly::new(vec![
            Mat2C::real(r0) + k,
            c1,
            Mat2C::real(r2) - h.tf() * beta + k * (eta * eta),
            t * beta + c1 * (eta * eta),
        ]));
    }
    Ok(extend(curve, interior))
}

fn extend(curve: &DiscreteCurve, interior: Vec<QuatPoly>) -> Vec<QuatPoly> {
    if curve.periodic() {
        interior
    } else {
        extend_poly(curve, &interior)
    }
}

/// Relative distance kept between a root `μ` and `−1/η²`.
const MU_MARGIN: f64 = 1e-3;

/// Accepts `det P` (coefficients of `λ⁰, λ², …` as a polynomial in `μ = λ²`)
/// if its roots are real, negative and away from `μ = −1/η²`. Each
/// `(b, f)` in `avoid` further excludes roots with `μ/b ∈ (1/f, f)`.
fn admissible(mu_coeffs: &[f64], eta: f64, avoid: &[(f64, f64)]) -> bool {
    let roots = real_poly_roots(mu_coeffs);
    let bad = -1.0 / (eta * eta);
    roots.iter().all(|mu| {
        mu.im.abs() <= 1e-9 * (1.0 + mu.norm())
            && mu.re < 0.0
            && (mu.re - bad).abs() > MU_MARGIN * bad.abs()
            && avoid.iter().all(|&(b, f)| {
                let q = mu.re / b;
                q <= 1.0 / f || q >= f
            })
    }) && roots.len() + 1 == mu_coeffs.len()
}

/// Transverse edges `v` with root radius `s` become ℍ² edges of length
/// parameter `2s/|s² − 1|` under `T^{−i}`; roots with `s² ∈ (1/3, 3)`
/// would put the partner curves far out on the hyperboloid.
const HYPERBOLIC_AVOID: [(f64, f64); 1] = [(-1.0, 3.0)];

const SWEEP: i32 = 40;

/// Smallest `|r₁|` in the sweep `±2ᵉ·max(1, ‖θ‖^½)` making
/// `θ₀ + μ(r₁² + θ₂) + μ²θ₄` admissible.
pub fn search_r1(th: &[f64], eta: f64, avoid: &[(f64, f64)]) -> Result<f64, ElasticError> {
    let scale = th.iter().fold(1.0f64, |m, t| m.max(t.abs())).sqrt();
    for e in 0..SWEEP {
        let r1 = scale * 2f64.powi(e);
        let d = [th[0], th[2] + r1 * r1, th[4]];
        if admissible(&d, eta, avoid) {
            return Ok(r1);
        }
    }
    Err(ElasticError::SearchFailed { max_scanned: scale * 2f64.powi(SWEEP) })
}

/// `(r₀, r₂) = (R·r₂, r₂)` from a two-parameter sweep making
/// `r₀² + θ₀ + μ(2r₀r₂ + θ₂) + μ²(r₂² + θ₄) + μ³θ₆` admissible.
pub fn search_r0_r2(th: &[f64], eta: f64, avoid: &[(f64, f64)]) -> Result<(f64, f64), ElasticError> {
    let scale = th.iter().fold(1.0f64, |m, t| m.max(t.abs())).sqrt();
    let th = |j: usize| th.get(j).copied().unwrap_or(0.0);
    for e in 0..SWEEP {
        for j in 0..8 {
            let big_r = 2f64.powi(j);
            for sg in [1.0, -1.0] {
                let r2 = sg * scale * 2f64.powi(e);
                let r0 = big_r * r2;
                let d = [r0 * r0 + th(0), 2.0 * r0 * r2 + th(2), r2 * r2 + th(4), th(6)];
                if admissible(&d, eta, avoid) {
                    return Ok((r0, r2));
                }
            }
        }
    }
    Err(ElasticError::SearchFailed { max_scanned: scale * 2f64.powi(SWEEP) })
}

/// Certificate for a Euclidean curve together with its synthesized sequence.
#[derive(Clone, Debug)]
pub struct EuclideanCertificate {
    pub certificate: InvarianceCertificate,
    pub directrix: Directrix,
    /// `[r₁]` for `n = 2`, `[r₀, r₂]` for `n = 3`.
    pub scalars: Vec<f64>,
    pub report: CertificateReport,
    pub ab: AbBeta,
    pub sequence: BacklundSequence,
}

/// 2-invariance certificate of a Euclidean elastic curve.
pub fn certify_elastic_euclidean(curve: &DiscreteCurve, tol: f64) -> Result<EuclideanCertificate, ElasticError> {
    elastic_euclidean(curve, &[], tol)
}

/// 3-invariance certificate of a Euclidean constrained elastic curve.
pub fn certify_constrained_euclidean(curve: &DiscreteCurve, tol: f64) -> Result<EuclideanCertificate, ElasticError> {
    constrained_euclidean(curve, &[], tol)
}

fn elastic_euclidean(
    curve: &DiscreteCurve,
    avoid: &[(f64, f64)],
    tol: f64,
) -> Result<EuclideanCertificate, ElasticError> {
    let dir = euclidean_directrix(curve, tol)?;
    let DirectrixKind::Line { normal, .. } = dir.kind else {
        return Err(ElasticError::NotElastic("directrix is not a line".into()));
    };
    let e = -(Mat2C::QK * SpaceForm::Euclidean.point(&normal));
    let base = elastic_polynomial(curve, &e, dir.beta, 0.0)?;
    let r1 = search_r1(&theta(&base[0]), curve.eta(), avoid)?;
    let polys = elastic_polynomial(curve, &e, dir.beta, r1)?;
    finish(curve, InvarianceCertificate::new(polys, 2), dir, vec![r1], tol)
}

fn constrained_euclidean(
    curve: &DiscreteCurve,
    avoid: &[(f64, f64)],
    tol: f64,
) -> Result<EuclideanCertificate, ElasticError> {
    let dir = euclidean_directrix(curve, tol)?;
    let center = match dir.kind {
        DirectrixKind::Circle { center, .. } | DirectrixKind::ImaginaryCircle { center, .. } => center,
        _ => return Err(ElasticError::NotElastic("directrix is not a circle".into())),
    };
    let x = SpaceForm::Euclidean.point(&center);
    let base = constrained_elastic_polynomial(curve, &x, dir.beta, 0.0, 0.0)?;
    let (r0, r2) = search_r0_r2(&theta(&base[0]), curve.eta(), avoid)?;
    let polys = constrained_elastic_polynomial(curve, &x, dir.beta, r0, r2)?;
    finish(curve, InvarianceCertificate::new(polys, 3), dir, vec![r0, r2], tol)
}

/// 3-certificate `r₀ + r₂λ² + λP⃗` of an elastic curve from its 2-certificate;
/// the isometry is a translation.
pub fn elastic_three_certificate(
    curve: &DiscreteCurve,
    two: &EuclideanCertificate,
    tol: f64,
) -> Result<EuclideanCertificate, ElasticError> {
    let shifted = |r0: f64, r2: f64| -> Vec<QuatPoly> {
        two.certificate
            .polys
            .iter()
            .map(|p| {
                let v = p.vector_part();
                let mut c = vec![Mat2C::real(r0)];
                c.extend((0..=2).map(|j| v.coeff(j)));
                c[2] += Mat2C::real(r2);
                QuatPoly::new(c)
            })
            .collect()
    };
    let (r0, r2) = search_r0_r2(&theta(&shifted(0.0, 0.0)[0]), curve.eta(), &[])?;
    finish(curve, InvarianceCertificate::new(shifted(r0, r2), 3), two.directrix.clone(), vec![r0, r2], tol)
}

fn finish(
    curve: &DiscreteCurve,
    cert: InvarianceCertificate,
    directrix: Directrix,
    scalars: Vec<f64>,
    tol: f64,
) -> Result<EuclideanCertificate, ElasticError> {
    let report = verify_certificate(curve, &cert, tol)?;
    let ab = backlund::extract_ab_beta(curve, &cert, tol)?;
    let sequence = synthesize_invariance(curve, &cert, tol)?;
    Ok(EuclideanCertificate { certificate: cert, directrix, scalars, report, ab, sequence })
}

/// Outcome of [`certify`] in any space form.
#[derive(Clone, Debug)]
pub struct Certification {
    pub n: usize,
    pub sequence: BacklundSequence,
    pub report: SequenceReport,
    /// The Euclidean certificate (of `T¹f` off 𝔼²).
    pub euclidean: EuclideanCertificate,
    /// Largest vertex distance between the first curve of the returned
    /// sequence and the input.
    pub transfer_deviation: f64,
}

/// Certifies `n`-invariance (`n = 2` elastic, `n = 3` constrained elastic;
/// chosen from the fitted `δ` when `None`).
///
/// Off 𝔼² the curve goes to 𝔼² by `T¹`, is certified there and the
/// sequence is carried back by the associated family.
pub fn certify(curve: &DiscreteCurve, n: Option<usize>, tol: f64) -> Result<Certification, ElasticError> {
    let pick = |c: &DiscreteCurve| -> Result<usize, ElasticError> {
        Ok(match n {
            Some(n) => n,
            None => {
                let fit = curvature_equation_fit(c)?;
                if fit.delta.abs() <= tol.sqrt() * fit.xi.abs().max(1.0) {
                    2
                } else {
                    3
                }
            }
        })
    };
    let certify_e = |c: &DiscreteCurve, n: usize, avoid: &[(f64, f64)]| match n {
        2 => elastic_euclidean(c, avoid, tol),
        3 => constrained_euclidean(c, avoid, tol),
        _ => Err(ElasticError::Unsupported("invariance orders other than 2 and 3")),
    };
    let (n, sequence, euclidean) = match curve.space() {
        SpaceForm::Euclidean => {
            let n = pick(curve)?;
            let cert = certify_e(curve, n, &[])?;
            (n, cert.sequence.clone(), cert)
        }
        space => {
            let placement = family::canonical_placement(curve);
            let flat = family::associated_transform(curve, Complex64::new(1.0, 0.0), tol)?;
            let n = pick(&flat.curve)?;
            let avoid: &[(f64, f64)] = if space == SpaceForm::Hyperbolic { &HYPERBOLIC_AVOID } else { &[] };
            let cert = certify_e(&flat.curve, n, avoid)?;
            let back = if space == SpaceForm::Spherical { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, -1.0) };
            let moved = family_on_sequence(&cert.sequence, back, tol)?;
            let undo = placement.inverse();
            let curves = moved.sequence.curves().iter().map(|c| c.apply_isometry(&undo)).collect();
            (n, BacklundSequence::new(curves)?, cert)
        }
    };
    let transfer_deviation =
        sequence.first().vertices().iter().zip(curve.vertices()).map(|(a, b)| a.dist(b)).fold(0.0, f64::max);
    let report = check_sequence(&sequence, tol)?;
    Ok(Certification { n, sequence, report, euclidean, transfer_deviation })
}

/// Certificate of the moved curve `F ↦ ±E⁻¹FE + T`: transports and all
/// coefficients are conjugated by `E`.
fn moved_certificate(cert: &InvarianceCertificate, iso: &crate::Isometry) -> InvarianceCertificate {
    let conj = |m: &Mat2C| iso.apply_transport(m);
    InvarianceCertificate {
        n: cert.n,
        e: conj(&cert.e),
        polys: cert.polys.iter().map(|p| QuatPoly::new(p.coeffs().iter().map(conj).collect())).collect(),
    }
}

/// `steps` steps of the discrete flow of an `n`-invariant curve, each the
/// last curve of an `n`-step Bäcklund sequence.
///
/// The curve is certified once. Later certificates are the first one moved
/// by the step isometry and the sequences are synthesized vertex by vertex;
/// re-certifying each step would refit on round-off and amplify it. Off 𝔼²
/// the flow runs on the Euclidean picture and every step is carried back
/// through the associated family.
pub fn invariant_flow(
    curve: &DiscreteCurve,
    n: usize,
    steps: usize,
    tol: f64,
) -> Result<Vec<DiscreteCurve>, ElasticError> {
    let first = certify(curve, Some(n), tol)?;
    let mut flat_seq = first.euclidean.sequence.clone();
    let mut flat_cert = first.euclidean.certificate.clone();
    let mut current = curve.clone();
    let mut out = Vec::with_capacity(steps);
    for step in 0..steps {
        let next = match curve.space() {
            SpaceForm::Euclidean => flat_seq.last().clone(),
            space => {
                let back =
                    if space == SpaceForm::Spherical { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, -1.0) };
                let moved = family_on_sequence(&flat_seq, back, tol)?;
                let (undo, _) = crate::curve::isometry_fit(moved.sequence.first(), &current)?;
                moved.sequence.last().apply_isometry(&undo)
            }
        };
        out.push(next.clone());
        current = next;
        if step + 1 == steps {
            break;
        }
        let flat_next = flat_seq.last().clone();
        let (iso, _) = crate::curve::isometry_fit(flat_seq.first(), &flat_next)?;
        flat_cert = moved_certificate(&flat_cert, &iso);
        flat_seq = synthesize_invariance(&flat_next, &flat_cert, tol)?;
    }
    Ok(out)
}

/// Coefficients of `C¹ = μ F^mKdV + ν F^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct MkdvDecomposition {
    /// `μ = −β/(2η²)`
    pub mkdv: f64,
    /// `ν = a₀/(2βη⁴)`
    pub tangent: f64,
    /// `a₀ = θ₆ − η⁴θ₂ + 2η⁶θ₀` at the first vertex.
    pub a0: f64,
    /// Largest change of `a₀` along the curve.
    pub a0_drift: f64,
    /// Largest per-vertex residual of the decomposition.
    pub residual: f64,
}

/// Writes `C¹` of a 3-certificate as a constant combination of the mKdV
/// flow `½(S₋₁₀ + S₀₁)T` (`S₀₁ = H₁H₀*`) and the tangent flow `T`.
pub fn mkdv_decompose(
    curve: &DiscreteCurve,
    cert: &InvarianceCertificate,
    tol: f64,
) -> Result<MkdvDecomposition, ElasticError> {
    if curve.space() != SpaceForm::Euclidean {
        return Err(ElasticError::Unsupported("mkdv_decompose"));
    }
    if cert.n != 3 {
        return Err(ElasticError::NotCertified(format!("n = {}", cert.n)));
    }
    verify_certificate(curve, cert, tol).map_err(|e| ElasticError::NotCertified(e.to_string()))?;
    let ab = backlund::extract_ab_beta(curve, cert, tol).map_err(|e| ElasticError::NotCertified(e.to_string()))?;
    let eta = curve.eta();
    let beta = ab.beta;
    let a0_of = |p: &QuatPoly| {
        let th = theta(p);
        let t = |j: usize| th.get(j).copied().unwrap_or(0.0);
        t(6) - eta.powi(4) * t(2) + 2.0 * eta.powi(6) * t(0)
    };
    let a0 = a0_of(&cert.polys[0]);
    let a0_drift = cert.polys.iter().map(|p| (a0_of(p) - a0).abs()).fold(0.0, f64::max);
    let mkdv = -beta / (2.0 * eta * eta);
    let tangent = a0 / (2.0 * beta * eta.powi(4));
    let mut residual = 0.0f64;
    for i in deep_interior(curve) {
        let (prev, next) = curve.neighbours(i).ok_or(CurveError::BoundaryVertex(i))?;
        let (_, hm) = curve.tangent_h(prev)?;
        let (t0, h0) = curve.tangent_h(i)?;
        let (_, hp) = curve.tangent_h(next)?;
        let f_mkdv = (h0 * hm.adj() + hp * h0.adj()) * t0 * 0.5;
        let r = (cert.polys[i].coeff(1) - f_mkdv * mkdv - t0 * tangent).max_abs();
        residual = residual.max(r);
    }
    Ok(MkdvDecomposition { mkdv, tangent, a0, a0_drift, residual })
}
