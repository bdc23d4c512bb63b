// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! Discrete arc-length curves in the Euclidean plane, the sphere and the
//! hyperbolic plane.
//!
//! Points are 2×2 complex matrices ([`Mat2C`]): `x𝐢 + y𝐣` in 𝔼²,
//! `x𝐢 + y𝐣 + z𝐤` on 𝕊² and `xσ₁ + yσ₂ + z𝐤` on the hyperboloid model of
//! ℍ². Circles, lines and points also live in the light cone of ℝ³ʼ²
//! ([`LcVector`]).

// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod backlund;
pub mod curve;
pub mod doc;
pub mod elastic;
pub mod family;
pub mod integrate;
pub mod lightcone;

pub use algebra::{Mat2C, QuatPoly};
pub use curve::{DiscreteCurve, Isometry};
pub use lightcone::LcVector;

use serde::{Deserialize, Serialize};

/// Default absolute/relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// One of the three 2-dimensional space forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceForm {
    #[serde(rename = "E2")]
    Euclidean,
    #[serde(rename = "S2")]
    Spherical,
    #[serde(rename = "H2")]
    Hyperbolic,
}

impl SpaceForm {
    pub const ALL: [SpaceForm; 3] = [SpaceForm::Euclidean, SpaceForm::Spherical, SpaceForm::Hyperbolic];

    /// Sectional curvature ε ∈ {0, 1, −1}.
    pub fn epsilon(self) -> f64 {
        match self {
            SpaceForm::Euclidean => 0.0,
            SpaceForm::Spherical => 1.0,
            SpaceForm::Hyperbolic => -1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SpaceForm::Euclidean => "E2",
            SpaceForm::Spherical => "S2",
            SpaceForm::Hyperbolic => "H2",
        }
    }

    /// Number of coordinates of a point.
    pub fn dim(self) -> usize {
        match self {
            SpaceForm::Euclidean => 2,
            _ => 3,
        }
    }

    /// `ζ = η √(1 − εη²/4)`
    pub fn zeta(self, eta: f64) -> f64 {
        eta * (1.0 - self.epsilon() * eta * eta / 4.0).sqrt()
    }

    /// Model point from coordinates.
    pub fn point(self, x: &[f64]) -> Mat2C {
        match self {
            SpaceForm::Euclidean => Mat2C::quaternion(0.0, x[0], x[1], 0.0),
            SpaceForm::Spherical => Mat2C::quaternion(0.0, x[0], x[1], x[2]),
            SpaceForm::Hyperbolic => Mat2C::split_quaternion(0.0, x[0], x[1], x[2]),
        }
    }

    /// Coordinates of a model point.
    pub fn coords(self, f: &Mat2C) -> Vec<f64> {
        match self {
            SpaceForm::Euclidean => {
                let q = f.quaternion_coords();
                vec![q[1], q[2]]
            }
            SpaceForm::Spherical => f.quaternion_coords()[1..].to_vec(),
            SpaceForm::Hyperbolic => f.split_coords()[1..].to_vec(),
        }
    }

    /// Distance of `f` from the model surface.
    pub fn model_defect(self, f: &Mat2C) -> f64 {
        match self {
            SpaceForm::Euclidean => {
                let q = f.quaternion_coords();
                f.quaternion_defect().max(q[0].abs()).max(q[3].abs())
            }
            SpaceForm::Spherical => {
                let q = f.quaternion_coords();
                let r2 = q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
                f.quaternion_defect().max(q[0].abs()).max((r2 - 1.0).abs())
            }
            SpaceForm::Hyperbolic => {
                let q = f.split_coords();
                let r2 = q[3] * q[3] - q[1] * q[1] - q[2] * q[2];
                f.split_defect().max(q[0].abs()).max((r2 - 1.0).abs())
            }
        }
    }

    /// Projects onto the model (drift control).
    pub fn project(self, f: &Mat2C) -> Mat2C {
        let x = self.coords(f);
        match self {
            SpaceForm::Euclidean => self.point(&x),
            SpaceForm::Spherical => {
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                self.point(&[x[0] / r, x[1] / r, x[2] / r])
            }
            SpaceForm::Hyperbolic => {
                let z = x[2].signum() * (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt();
                self.point(&[x[0], x[1], z])
            }
        }
    }

    /// Transport carrying `f0` to `f1`: `F₁ − F₀` or `F₁F₀⁻¹`.
    pub fn transport(self, f0: &Mat2C, f1: &Mat2C) -> Mat2C {
        match self {
            SpaceForm::Euclidean => *f1 - *f0,
            // F⁻¹ = −F on the model, up to drift
            _ => *f1 * f0.inv().unwrap_or(-*f0),
        }
    }

    /// Applies a transport to a point.
    pub fn apply_transport(self, u: &Mat2C, f0: &Mat2C) -> Mat2C {
        match self {
            SpaceForm::Euclidean => *f0 + *u,
            _ => *u * *f0,
        }
    }

    /// Chord parameter η between two points (`√det(F₁ − F₀)` in 𝔼²,
    /// `η² = 2ε(1 − ⟨F₀, F₁⟩)` otherwise). NaN if not real.
    pub fn chord(self, f0: &Mat2C, f1: &Mat2C) -> f64 {
        let d = *f1 - *f0;
        match self {
            SpaceForm::Euclidean => d.det().re.sqrt(),
            // ε⟨d, d⟩ on the model; avoids cancellation far from 𝐤
            _ => (self.epsilon() * d.inner(&d).re).sqrt(),
        }
    }
}

impl std::str::FromStr for SpaceForm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "E2" | "e2" => Ok(SpaceForm::Euclidean),
            "S2" | "s2" => Ok(SpaceForm::Spherical),
            "H2" | "h2" => Ok(SpaceForm::Hyperbolic),
            _ => Err(format!("unknown space form `{s}` (expected E2, S2 or H2)")),
        }
    }
}

impl std::fmt::Display for SpaceForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}
