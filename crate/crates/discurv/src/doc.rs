// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON curve documents, `schema_version` "1".
//!
//! ```json
//! { "schema_version": "1", "space_form": "E2", "eta": 0.5, "periodic": false,
//!   "vertices": [[0.0, 0.0], [0.5, 0.0]],
//!   "certificate": { "n": 2, "e": [[[re, im], [re, im]], [[re, im], [re, im]]],
//!                    "polys": [[C⁰, C¹, C²], ...] } }
//! ```
//!
//! Floats are printed shortest round-trip, so parse ∘ print is the identity
//! on finite doubles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::backlund::InvarianceCertificate;
use crate::curve::CurveError;
use crate::{DiscreteCurve, Mat2C, QuatPoly, SpaceForm};

pub const SCHEMA_VERSION: &str = "1";

/// Tolerance for model constraints on load.
pub const LOAD_TOL: f64 = 1e-9;

/// Row-major 2×2 complex matrix, entries `[re, im]`.
pub type MatrixDoc = [[[f64; 2]; 2]; 2];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("unsupported schema_version `{0}` (expected \"1\")")]
    SchemaVersion(String),
    #[error("vertex {index}: {reason}")]
    Vertex { index: usize, reason: String },
    #[error("eta = {stored} does not match the vertices ({actual})")]
    Eta { stored: f64, actual: f64 },
    #[error("certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub schema_version: String,
    pub space_form: SpaceForm,
    pub eta: f64,
    pub periodic: bool,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub n: usize,
    pub e: MatrixDoc,
    /// Per vertex, coefficients `C⁰ … Cⁿ`.
    pub polys: Vec<Vec<MatrixDoc>>,
}

pub fn matrix_doc(m: &Mat2C) -> MatrixDoc {
    m.rows().map(|row| row.map(|z| [z.re, z.im]))
}

pub fn matrix_from_doc(m: &MatrixDoc) -> Mat2C {
    Mat2C::from_rows(m.map(|row| row.map(|z| Complex64::new(z[0], z[1]))))
}

impl CertificateDoc {
    pub fn from_certificate(cert: &InvarianceCertificate) -> Self {
        CertificateDoc {
            n: cert.n,
            e: matrix_doc(&cert.e),
            polys: cert.polys.iter().map(|p| p.coeffs().iter().map(matrix_doc).collect()).collect(),
        }
    }

    pub fn to_certificate(&self) -> InvarianceCertificate {
        InvarianceCertificate {
            n: self.n,
            e: matrix_from_doc(&self.e),
            polys: self.polys.iter().map(|p| QuatPoly::new(p.iter().map(matrix_from_doc).collect())).collect(),
        }
    }
}

impl CurveDocument {
    pub fn from_curve(curve: &DiscreteCurve) -> Self {
        CurveDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            space_form: curve.space(),
            eta: curve.eta(),
            periodic: curve.periodic(),
            vertices: curve.coords(),
            certificate: None,
        }
    }

    pub fn with_certificate(mut self, cert: &InvarianceCertificate) -> Self {
        self.certificate = Some(CertificateDoc::from_certificate(cert));
        self
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, DocError> {
        let doc: CurveDocument = serde_json::from_slice(bytes).map_err(|e| DocError::Syntax(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocError::SchemaVersion(doc.schema_version));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite document");
        s.push('\n');
        s
    }

    /// Validated curve; errors name the offending vertex.
    pub fn curve(&self) -> Result<DiscreteCurve, DocError> {
        let space = self.space_form;
        for (index, v) in self.vertices.iter().enumerate() {
            if v.len() != space.dim() {
                return Err(DocError::Vertex {
                    index,
                    reason: format!("expected {} coordinates, got {}", space.dim(), v.len()),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(DocError::Vertex { index, reason: "non-finite coordinate".into() });
            }
            let defect = space.model_defect(&space.point(v));
            if defect > LOAD_TOL * v.iter().fold(1.0f64, |m, x| m.max(x.abs())) {
                return Err(DocError::Vertex { index, reason: format!("off the {space} model by {defect:e}") });
            }
        }
        let curve =
            DiscreteCurve::from_coords(space, &self.vertices, self.periodic, LOAD_TOL).map_err(|e| match e {
                CurveError::NotOnModel { index, defect } => {
                    DocError::Vertex { index, reason: format!("off the {space} model by {defect:e}") }
                }
                CurveError::NonConstantArcLength { edge, eta, expected } => DocError::Vertex {
                    index: edge + 1,
                    reason: format!("edge {edge} has length parameter {eta} instead of {expected}"),
                },
                CurveError::IrregularCurve { index, reason } => DocError::Vertex { index, reason: reason.to_string() },
                e => DocError::Curve(e),
            })?;
        if !((curve.eta() - self.eta).abs() <= LOAD_TOL * self.eta.abs().max(1.0)) {
            return Err(DocError::Eta { stored: self.eta, actual: curve.eta() });
        }
        Ok(curve)
    }

    /// Attached certificate, shape-checked against the curve.
    pub fn certificate(&self) -> Result<Option<InvarianceCertificate>, DocError> {
        let Some(c) = &self.certificate else { return Ok(None) };
        if c.n == 0 {
            return Err(DocError::Certificate("n must be positive".into()));
        }
        if c.polys.len() != self.vertices.len() {
            return Err(DocError::Certificate(format!(
                "{} polynomials for {} vertices",
                c.polys.len(),
                self.vertices.len()
            )));
        }
        let finite = |m: &MatrixDoc| m.iter().flatten().flatten().all(|x| x.is_finite());
        if !finite(&c.e) {
            return Err(DocError::Certificate("non-finite E".into()));
        }
        for (i, p) in c.polys.iter().enumerate() {
            if p.len() != c.n + 1 {
                return Err(DocError::Certificate(format!(
                    "vertex {i}: {} coefficients, expected {}",
                    p.len(),
                    c.n + 1
                )));
            }
            if !p.iter().all(finite) {
                return Err(DocError::Certificate(format!("vertex {i}: non-finite coefficient")));
            }
        }
        Ok(Some(c.to_certificate()))
    }
}

/// One document, or a JSON array of documents (sequences, flows).
pub fn parse_documents(bytes: &[u8]) -> Result<Vec<CurveDocument>, DocError> {
    let first = bytes.iter().find(|b| !b.is_ascii_whitespace());
    if first != Some(&b'[') {
        return Ok(vec![CurveDocument::parse(bytes)?]);
    }
    let docs: Vec<CurveDocument> = serde_json::from_slice(bytes).map_err(|e| DocError::Syntax(e.to_string()))?;
    if docs.is_empty() {
        return Err(DocError::Syntax("empty document list".into()));
    }
    if let Some(d) = docs.iter().find(|d| d.schema_version != SCHEMA_VERSION) {
        return Err(DocError::SchemaVersion(d.schema_version.clone()));
    }
    Ok(docs)
}

pub fn documents_to_json(docs: &[CurveDocument]) -> String {
    let mut s = serde_json::to_string_pretty(docs).expect("finite documents");
    s.push('\n');
    s
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse `{s}` as a complex number");
    if t.is_empty() {
        return Err(bad());
    }
    let finite = |z: Complex64| if z.re.is_finite() && z.im.is_finite() { Ok(z) } else { Err(bad()) };
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return finite(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coeff = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => x.parse::<f64>().map_err(|_| bad()),
    };
    let out = match split {
        Some(k) => Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, coeff(&body[k..])?),
        None => Complex64::new(0.0, coeff(body)?),
    };
    finite(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate;

    #[test]
    fn roundtrip_is_bit_stable() {
        let c = integrate::clothoid(SpaceForm::Hyperbolic, 0.3, 0.1, 20, 1e-9).unwrap();
        let doc = CurveDocument::from_curve(&c);
        let text = doc.to_json();
        let back = CurveDocument::parse(text.as_bytes()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.curve().unwrap().vertices(), c.vertices());
    }

    #[test]
    fn corrupted_vertex_is_named() {
        let c = integrate::circle(SpaceForm::Spherical, 0.3, 1.0, 10, 1e-9).unwrap();
        let mut doc = CurveDocument::from_curve(&c);
        doc.vertices[4][2] += 1e-3;
        match doc.curve() {
            Err(DocError::Vertex { index, .. }) => assert_eq!(index, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("-0.5i").unwrap(), Complex64::new(0.0, -0.5));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("2-3i").unwrap(), Complex64::new(2.0, -3.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1e400").is_err());
        assert!(parse_complex("nan").is_err());
    }
}
