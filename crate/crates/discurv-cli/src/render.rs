// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! SVG output. 𝔼² is drawn as is, 𝕊² by stereographic projection from
//! the south pole, ℍ² in the Poincaré disc.

use std::fmt::Write;

use discurv::elastic::{self, DirectrixKind};
use discurv::lightcone::{self, LcObject};
use discurv::{DiscreteCurve, Mat2C, SpaceForm};

pub struct Options {
    pub tangents: bool,
    pub circles: bool,
    pub directrix: bool,
    pub tol: f64,
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 6] = ["#4e79a7", "#59a14f", "#edc948", "#b07aa1", "#76b7b2", "#ff9da7"];

fn project(space: SpaceForm, f: &Mat2C) -> [f64; 2] {
    let x = space.coords(f);
    match space {
        SpaceForm::Euclidean => [x[0], x[1]],
        SpaceForm::Spherical => [x[0] / (1.0 + x[2]), x[1] / (1.0 + x[2])],
        SpaceForm::Hyperbolic => [x[0] / (1.0 + x[2].abs()), x[1] / (1.0 + x[2].abs())],
    }
}

struct View {
    min: [f64; 2],
    max: [f64; 2],
    scale: f64,
}

impl View {
    fn new(points: &[[f64; 2]], space: SpaceForm) -> View {
        let (mut min, mut max) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points.iter().filter(|p| p[0].is_finite() && p[1].is_finite()) {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        if space != SpaceForm::Euclidean {
            for k in 0..2 {
                min[k] = min[k].min(-1.0);
                max[k] = max[k].max(1.0);
            }
        }
        if !min[0].is_finite() {
            (min, max) = ([-1.0; 2], [1.0; 2]);
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]).max(1e-9);
        View { min, max, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (MARGIN + (p[0] - self.min[0]) * self.scale, MARGIN + (self.max[1] - p[1]) * self.scale)
    }
}

fn polyline(out: &mut String, view: &View, pts: &[[f64; 2]], closed: bool, style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|p| {
            let (x, y) = view.map(*p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let tag = if closed { "polygon" } else { "polyline" };
    let _ = writeln!(out, r#"<{tag} points="{}" fill="none" {style}/>"#, coords.join(" "));
}

pub fn render(curves: &[DiscreteCurve], opts: &Options) -> Result<String, String> {
    let Some(first) = curves.first() else { return Err("nothing to render".into()) };
    let space = first.space();
    if curves.iter().any(|c| c.space() != space) {
        return Err("all documents must share a space form".into());
    }
    let projected: Vec<Vec<[f64; 2]>> =
        curves.iter().map(|c| c.vertices().iter().map(|f| project(space, f)).collect()).collect();
    let all: Vec<[f64; 2]> = projected.iter().flatten().copied().collect();
    let view = View::new(&all, space);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if space != SpaceForm::Euclidean {
        let (cx, cy) = view.map([0.0, 0.0]);
        let r = view.scale;
        let _ = writeln!(
            out,
            r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="#999" stroke-width="1"/>"##
        );
    }
    if opts.directrix {
        draw_directrix(&mut out, &view, first, opts.tol)?;
    }
    let last = curves.len() - 1;
    for (k, (c, pts)) in curves.iter().zip(&projected).enumerate() {
        let style = if curves.len() == 1 || k == 0 {
            r##"stroke="#000000" stroke-width="2""##.to_string()
        } else if k == last {
            r##"stroke="#e15759" stroke-width="2""##.to_string()
        } else {
            format!(r#"stroke="{}" stroke-width="1""#, PALETTE[(k - 1) % PALETTE.len()])
        };
        polyline(&mut out, &view, pts, c.periodic(), &style);
        if opts.circles {
            draw_circles(&mut out, &view, c, opts.tol)?;
        }
        if opts.tangents {
            draw_tangents(&mut out, &view, c, pts);
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn draw_tangents(out: &mut String, view: &View, c: &DiscreteCurve, pts: &[[f64; 2]]) {
    for i in c.interior() {
        let Some((a, b)) = c.neighbours(i) else { continue };
        let d = [pts[b][0] - pts[a][0], pts[b][1] - pts[a][1]];
        let (p0, p1) =
            ([pts[i][0] - d[0] / 2.0, pts[i][1] - d[1] / 2.0], [pts[i][0] + d[0] / 2.0, pts[i][1] + d[1] / 2.0]);
        polyline(out, view, &[p0, p1], false, r##"stroke="#f28e2b" stroke-width="0.8""##);
    }
}

fn draw_circles(out: &mut String, view: &View, c: &DiscreteCurve, tol: f64) -> Result<(), String> {
    if c.space() != SpaceForm::Euclidean {
        eprintln!("note: --circles is drawn in E2 only");
        return Ok(());
    }
    for i in c.interior() {
        let s = c.double_curvature_circle(i).map_err(|e| e.to_string())?;
        if let Ok(LcObject::Circle { x, y, r }) = lightcone::identify(&s, tol.sqrt()) {
            let (cx, cy) = view.map([x, y]);
            let r = r.abs() * view.scale;
            let _ = writeln!(
                out,
                r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="#bab0ac" stroke-width="0.5"/>"##
            );
        }
    }
    Ok(())
}

fn draw_directrix(out: &mut String, view: &View, c: &DiscreteCurve, tol: f64) -> Result<(), String> {
    if c.space() != SpaceForm::Euclidean {
        eprintln!("note: --directrix is drawn in E2 only");
        return Ok(());
    }
    let d = elastic::directrix(c, tol).map_err(|e| e.to_string())?;
    let style = r##"stroke="#555" stroke-width="1.2" stroke-dasharray="2,4""##;
    match d.kind {
        DirectrixKind::Line { normal, offset } => {
            let p0 = [normal[0] * offset, normal[1] * offset];
            let dir = [-normal[1], normal[0]];
            let reach = 4.0 * SIZE / view.scale + p0[0].abs() + p0[1].abs();
            let a = [p0[0] - reach * dir[0], p0[1] - reach * dir[1]];
            let b = [p0[0] + reach * dir[0], p0[1] + reach * dir[1]];
            polyline(out, view, &[a, b], false, style);
        }
        DirectrixKind::Circle { center, radius_sq } => {
            let (cx, cy) = view.map(center);
            let r = radius_sq.sqrt() * view.scale;
            let _ = writeln!(out, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" {style}/>"#);
        }
        DirectrixKind::ImaginaryCircle { center, .. } => {
            let (cx, cy) = view.map(center);
            let _ = writeln!(out, r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="3" fill="#555"/>"##);
        }
        DirectrixKind::Lightcone => {}
    }
    Ok(())
}
