// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

use discurv::backlund::{backlund_sequence, check_sequence, verify_certificate};
use discurv::doc::CurveDocument;
use discurv::elastic::{self, DirectrixKind};
use discurv::integrate::{self, curvature_equation_fit, ElasticParams};
use discurv::lightcone::{self, LcObject};
use discurv::{DiscreteCurve, SpaceForm};

const TOL: f64 = 1e-9;

fn elastic_curve(space: SpaceForm, delta: f64) -> DiscreteCurve {
    let p = ElasticParams { xi: 2.1, delta, eta: 0.3 };
    integrate::constrained_elastic(space, p, 0.8, 0.8, 40, TOL).unwrap()
}

#[test]
fn elastic_curves_are_certified_in_every_space_form() {
    for space in SpaceForm::ALL {
        for (delta, n) in [(0.0, 2), (0.05, 3)] {
            let c = elastic_curve(space, delta);
            let cert = elastic::certify(&c, None, TOL).unwrap();
            assert_eq!(cert.n, n, "{space} δ = {delta}");
            assert!(cert.report.passes(TOL, 1e-8), "{space} n = {n}: {:?}", cert.report);
            assert!(cert.transfer_deviation < 1e-8);
            for s in &cert.sequence.curves()[1..] {
                let fit = curvature_equation_fit(s).unwrap();
                assert!(fit.residual < 1e-8, "{space} n = {n}: fit {}", fit.residual);
            }
        }
    }
}

#[test]
fn euclidean_elastica_has_a_line_directrix() {
    let c = elastic_curve(SpaceForm::Euclidean, 0.0);
    let cert = elastic::certify_elastic_euclidean(&c, TOL).unwrap();
    assert!(matches!(cert.directrix.kind, DirectrixKind::Line { .. }), "{:?}", cert.directrix.kind);
    assert!(cert.directrix.distance_residual < 1e-8);
    let report = verify_certificate(&c, &cert.certificate, TOL).unwrap();
    assert!(report.invariant_drift < 1e-9);
}

#[test]
fn constrained_elastica_has_a_circle_directrix() {
    let c = elastic_curve(SpaceForm::Euclidean, 0.05);
    let cert = elastic::certify_constrained_euclidean(&c, TOL).unwrap();
    assert!(
        matches!(cert.directrix.kind, DirectrixKind::Circle { .. } | DirectrixKind::ImaginaryCircle { .. }),
        "{:?}",
        cert.directrix.kind
    );
}

#[test]
fn clothoid_is_not_elastic() {
    let c = integrate::clothoid(SpaceForm::Euclidean, 0.3, 0.2, 40, TOL).unwrap();
    assert!(elastic::certify(&c, Some(2), TOL).is_err());
}

#[test]
fn certificate_survives_a_document_round_trip() {
    let c = elastic_curve(SpaceForm::Euclidean, 0.0);
    let cert = elastic::certify_elastic_euclidean(&c, TOL).unwrap();
    let text = CurveDocument::from_curve(&c).with_certificate(&cert.certificate).to_json();
    let doc = CurveDocument::parse(text.as_bytes()).unwrap();
    let loaded = doc.certificate().unwrap().unwrap();
    verify_certificate(&doc.curve().unwrap(), &loaded, TOL).unwrap();
}

#[test]
fn backlund_sequence_of_a_geodesic_is_consistent() {
    for space in SpaceForm::ALL {
        let c = integrate::geodesic(space, 0.25, 20, TOL).unwrap();
        // seeds off the geodesic, at the same side
        let seeds: Vec<_> = [0.4, 0.7]
            .iter()
            .map(|&y| match space {
                SpaceForm::Euclidean => space.point(&[0.0, y]),
                SpaceForm::Spherical => space.point(&[0.0, y.sin(), y.cos()]),
                SpaceForm::Hyperbolic => space.point(&[0.0, y.sinh(), y.cosh()]),
            })
            .collect();
        let seq = backlund_sequence(&c, &seeds, TOL).unwrap();
        let rep = check_sequence(&seq, TOL).unwrap();
        assert!(rep.butterfly < 1e-10 && rep.skew_net.max() < 1e-10, "{space}: {rep:?}");
    }
}

#[test]
fn lightcone_lifts_identify_their_objects() {
    let circle = lightcone::lift_circle(0.5, -1.0, 2.0);
    match lightcone::identify(&circle, TOL).unwrap() {
        LcObject::Circle { x, y, r } => {
            assert!((x - 0.5).abs() < 1e-12 && (y + 1.0).abs() < 1e-12 && (r.abs() - 2.0).abs() < 1e-12);
        }
        other => panic!("{other:?}"),
    }
    let point = lightcone::lift_point(3.0, 4.0);
    assert!(matches!(lightcone::identify(&point, TOL).unwrap(), LcObject::Point { .. }));
    let line = lightcone::lift_line(0.6, 0.8, 1.5);
    assert!(matches!(lightcone::identify(&line, TOL).unwrap(), LcObject::Line { .. }));
}

#[test]
fn constant_curvature_circle_closes_up() {
    // 12 turning angles of π/6: the discrete circle closes after one turn
    let eta = 0.5;
    let kappa = 2.0 * (std::f64::consts::PI / 12.0).tan() / eta;
    let c = integrate::circle(SpaceForm::Euclidean, eta, kappa, 13, TOL).unwrap();
    assert!(c.vertex(12).dist(&c.vertex(0)) < 1e-12);
}

#[test]
fn invariant_flow_stays_isometric() {
    for space in SpaceForm::ALL {
        for (delta, n) in [(0.0, 2), (0.05, 3)] {
            let c = elastic_curve(space, delta);
            let flow = elastic::invariant_flow(&c, n, 10, TOL).unwrap();
            assert_eq!(flow.len(), 10);
            for (k, f) in flow.iter().enumerate() {
                let (_, res) = discurv::curve::isometry_fit(&c, f).unwrap();
                assert!(res < 1e-10, "{space} n = {n} step {k}: {res}");
            }
        }
    }
}
