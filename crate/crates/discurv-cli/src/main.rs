// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

//! `discurv`: generate, analyze, certify, transform and render discrete curves.
//!
//! Exit codes: 0 pass, 1 check failed, 2 usage, 3 I/O.

mod render;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use discurv::backlund::{self, verify_certificate};
use discurv::doc::{self, CurveDocument};
use discurv::elastic::{self, DirectrixKind};
use discurv::integrate::{self, ElasticParams};
use discurv::{family, DiscreteCurve, SpaceForm, DEFAULT_TOL};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "discurv", version, about = "Discrete arc-length curves in E2, S2 and H2")]
struct Cli {
    /// Tolerance used by every check.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a curve from its curvature.
    Generate(GenerateArgs),
    /// Report curvature, Frenet residuals, the curvature-equation fit, the
    /// directrix and any attached certificate.
    Analyze(AnalyzeArgs),
    /// Find and verify an n-invariance certificate.
    Certify(CertifyArgs),
    /// Associated family, Bäcklund transformation or discrete flow.
    Transform(TransformArgs),
    /// Draw documents as SVG.
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Geodesic,
    Circle,
    Clothoid,
    Elastic,
    ConstrainedElastic,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, default_value = "E2")]
    space: SpaceForm,
    #[arg(long, default_value_t = 0.3)]
    eta: f64,
    /// Number of vertices.
    #[arg(long, default_value_t = 40)]
    n: usize,
    /// Curvature of a circle.
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Clothoid slope, κᵢ = a·i.
    #[arg(long, default_value_t = 0.1)]
    a: f64,
    #[arg(long, default_value_t = 2.1)]
    xi: f64,
    /// Only used by constrained-elastic.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0.8)]
    k0: f64,
    /// κ₋₁; defaults to κ₀.
    #[arg(long)]
    km1: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    /// Print `vertex_index,kappa` rows instead of the report.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct CertifyArgs {
    input: PathBuf,
    /// 2 (elastic) or 3 (constrained elastic); picked from the fit when absent.
    #[arg(long)]
    n: Option<usize>,
    /// Write the input document with the certificate attached (E2 only).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the synthesized Bäcklund sequence as a document list.
    #[arg(long)]
    sequence: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    input: PathBuf,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    op: TransformOp,
}

#[derive(Subcommand)]
enum TransformOp {
    /// Associated family T^λ.
    Associated {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Bäcklund transformation with the given initial point.
    Backlund {
        #[arg(long, num_args = 2..=3, allow_negative_numbers = true)]
        init: Vec<f64>,
    },
    /// Repeats n-invariance: one document per step.
    Flow {
        /// Invariance order, 2 (elastic) or 3 (constrained elastic)
        #[arg(long)]
        n: usize,
        /// Number of steps; the input itself is not repeated
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Args)]
struct RenderArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    tangents: bool,
    /// Double-curvature circles (E2 only).
    #[arg(long)]
    circles: bool,
    /// Directrix of an elastic curve (E2 only).
    #[arg(long)]
    directrix: bool,
}

#[derive(Debug)]
enum CliError {
    Check(String),
    Usage(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Check(s) | CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
        }
    }
}

fn check<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Check(e.to_string())
}

type Result<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(2);
    }
    let out = match cli.command {
        Command::Generate(a) => generate(a, cli.tol),
        Command::Analyze(a) => analyze(a, cli.tol),
        Command::Certify(a) => certify(a, cli.tol),
        Command::Transform(a) => transform(a, cli.tol),
        Command::Render(a) => render_cmd(a, cli.tol),
    };
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_end(&mut buf).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    } else {
        buf = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(buf)
}

fn read_docs(path: &Path) -> Result<Vec<CurveDocument>> {
    doc::parse_documents(&read_input(path)?).map_err(|e| CliError::Check(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<CurveDocument> {
    let mut docs = read_docs(path)?;
    if docs.len() != 1 {
        return Err(CliError::Usage(format!("{}: expected a single document", path.display())));
    }
    Ok(docs.remove(0))
}

fn load_curve(d: &CurveDocument, path: &Path) -> Result<DiscreteCurve> {
    d.curve().map_err(|e| CliError::Check(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn generate(a: GenerateArgs, tol: f64) -> Result<bool> {
    if a.n < 3 {
        return Err(CliError::Usage("--n must be at least 3".into()));
    }
    integrate::check_eta(a.space, a.eta).map_err(|e| CliError::Usage(e.to_string()))?;
    let elastic = |delta: f64| {
        let p = ElasticParams { xi: a.xi, delta, eta: a.eta };
        integrate::constrained_elastic(a.space, p, a.km1.unwrap_or(a.k0), a.k0, a.n, tol)
    };
    let curve = match a.kind {
        Kind::Geodesic => integrate::geodesic(a.space, a.eta, a.n, tol),
        Kind::Circle => integrate::circle(a.space, a.eta, a.kappa, a.n, tol),
        Kind::Clothoid => integrate::clothoid(a.space, a.eta, a.a, a.n, tol),
        Kind::Elastic => elastic(0.0),
        Kind::ConstrainedElastic => elastic(a.delta),
    }
    .map_err(check)?;
    write_output(a.output.as_deref(), &CurveDocument::from_curve(&curve).to_json())?;
    Ok(true)
}

fn analyze(a: AnalyzeArgs, tol: f64) -> Result<bool> {
    let d = read_doc(&a.input)?;
    let curve = load_curve(&d, &a.input)?;
    let kappa = curve.curvature().map_err(check)?;
    if a.csv {
        let mut s = String::from("vertex_index,kappa\n");
        for (i, k) in kappa.iter().enumerate() {
            if let Some(k) = k {
                s.push_str(&format!("{i},{k:?}\n"));
            }
        }
        write_output(None, &s)?;
        return Ok(true);
    }
    let frenet = curve.frenet_residuals().map_err(check)?;
    let frenet_max = frenet.iter().flatten().map(|r| r.max()).fold(0.0, f64::max);
    let kscale = kappa.iter().flatten().fold(1.0f64, |m, k| m.max(k.abs()));
    let mut pass = frenet_max <= tol * kscale.powi(2).max(1.0);
    let fit = integrate::curvature_equation_fit(&curve).ok();
    let directrix = fit.as_ref().and_then(|_| elastic::directrix(&curve, tol).ok());
    let certificate = match d.certificate().map_err(check)? {
        None => Value::Null,
        Some(cert) => match verify_certificate(&curve, &cert, tol) {
            Ok(r) => json!({
                "valid": true,
                "n": r.n,
                "parity_defect": r.parity_defect,
                "evolution_residual": r.evolution_residual,
                "radii": r.radii,
                "near_singular": r.near_singular,
                "theta": r.theta,
                "r": r.r,
                "invariant_drift": r.invariant_drift,
            }),
            Err(e) => {
                pass = false;
                json!({ "valid": false, "error": e.to_string() })
            }
        },
    };
    let report = json!({
        "space_form": curve.space().tag(),
        "eta": curve.eta(),
        "zeta": curve.zeta(),
        "periodic": curve.periodic(),
        "vertex_count": curve.len(),
        "kappa": kappa,
        "frenet_max_residual": frenet_max,
        "curvature_fit": fit.map(|f| json!({
            "xi": f.xi, "delta": f.delta, "residual": f.residual, "non_unique": f.non_unique,
        })),
        "directrix": directrix.map(|d| directrix_json(&d)),
        "certificate": certificate,
        "pass": pass,
    });
    write_output(None, &pretty(&report))?;
    Ok(pass)
}

fn directrix_json(d: &elastic::Directrix) -> Value {
    let kind = match d.kind {
        DirectrixKind::Line { normal, offset } => json!({ "type": "line", "normal": normal, "offset": offset }),
        DirectrixKind::Circle { center, radius_sq } => {
            json!({ "type": "circle", "center": center, "radius": radius_sq.sqrt() })
        }
        DirectrixKind::ImaginaryCircle { center, radius_sq } => {
            json!({ "type": "imaginary_circle", "center": center, "radius_sq": radius_sq })
        }
        DirectrixKind::Lightcone => json!({ "type": "lightcone" }),
    };
    json!({
        "kind": kind,
        "vector": d.vector.0,
        "complex": d.complex.0,
        "star_real": d.star.real.0,
        "star_imaginary": d.star.imaginary,
        "c": finite(d.c),
        "beta": finite(d.beta),
        "distance_residual": finite(d.distance_residual),
        "complex_residual": d.complex_residual,
    })
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn certify(a: CertifyArgs, tol: f64) -> Result<bool> {
    let d = read_doc(&a.input)?;
    let curve = load_curve(&d, &a.input)?;
    let c = elastic::certify(&curve, a.n, tol).map_err(check)?;
    let r = &c.report;
    let pass = r.passes(tol, tol.sqrt() * 1e-3) && c.transfer_deviation <= tol.sqrt() * 1e-3;
    let e = &c.euclidean;
    let report = json!({
        "n": c.n,
        "space_form": curve.space().tag(),
        "scalars": e.scalars,
        "beta": e.ab.beta,
        "theta": e.report.theta,
        "r": e.report.r,
        "invariant_drift": e.report.invariant_drift,
        "evolution_residual": e.report.evolution_residual,
        "butterfly": r.butterfly,
        "skew_net": r.skew_net.max(),
        "isometry_residual": r.isometry.residual,
        "orientation_preserving": r.isometry.orientation_preserving,
        "orientation_ok": r.orientation_ok,
        "transfer_deviation": c.transfer_deviation,
        "directrix": directrix_json(&e.directrix),
        "pass": pass,
    });
    if let Some(out) = &a.output {
        if curve.space() != SpaceForm::Euclidean {
            return Err(CliError::Usage("certificates are attached to E2 documents only".into()));
        }
        write_output(Some(out), &d.clone().with_certificate(&e.certificate).to_json())?;
    }
    if let Some(out) = &a.sequence {
        let docs: Vec<CurveDocument> = c.sequence.curves().iter().map(CurveDocument::from_curve).collect();
        write_output(Some(out), &doc::documents_to_json(&docs))?;
    }
    write_output(None, &pretty(&report))?;
    Ok(pass)
}

fn transform(a: TransformArgs, tol: f64) -> Result<bool> {
    let d = read_doc(&a.input)?;
    let curve = load_curve(&d, &a.input)?;
    let out = a.output.as_deref();
    match a.op {
        TransformOp::Associated { lambda } => {
            let lambda = doc::parse_complex(&lambda).map_err(CliError::Usage)?;
            let t = family::associated_transform(&curve, lambda, tol).map_err(check)?;
            write_output(out, &CurveDocument::from_curve(&t.curve).to_json())?;
        }
        TransformOp::Backlund { init } => {
            let space = curve.space();
            if init.len() != space.dim() {
                return Err(CliError::Usage(format!("--init needs {} coordinates in {space}", space.dim())));
            }
            let next = backlund::backlund_transform(&curve, &space.point(&init), tol).map_err(check)?;
            write_output(out, &CurveDocument::from_curve(&next).to_json())?;
        }
        TransformOp::Flow { n, steps } => {
            if steps == 0 {
                return Err(CliError::Usage("--steps must be positive".into()));
            }
            let flow = elastic::invariant_flow(&curve, n, steps, tol).map_err(check)?;
            let mut docs = Vec::with_capacity(steps);
            let mut worst = 0.0f64;
            for (step, current) in flow.iter().enumerate() {
                let (_, residual) = discurv::curve::isometry_fit(&curve, current).map_err(check)?;
                worst = worst.max(residual);
                eprintln!("step {}: isometry residual {residual:e}", step + 1);
                docs.push(CurveDocument::from_curve(current));
            }
            write_output(out, &doc::documents_to_json(&docs))?;
            return Ok(worst <= tol.sqrt() * 1e-3);
        }
    }
    Ok(true)
}

fn render_cmd(a: RenderArgs, tol: f64) -> Result<bool> {
    let mut curves = Vec::new();
    for p in &a.inputs {
        for d in read_docs(p)? {
            curves.push(load_curve(&d, p)?);
        }
    }
    let opts = render::Options { tangents: a.tangents, circles: a.circles, directrix: a.directrix, tol };
    let svg = render::render(&curves, &opts).map_err(check)?;
    write_output(Some(&a.output), &svg)?;
    Ok(true)
}
