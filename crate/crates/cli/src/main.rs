//! `simplex-moments` command-line experiments.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use simplex_moments::bodies::{
    body_to_json, john_ellipse, load_body, max_inscribed_triangle, polar_dual, Body, Polygon,
};
use simplex_moments::derived::{
    busemann_formula_residual, centroid_body, intersection_body_area, petty_product, projection_body,
};
use simplex_moments::experiments::{
    sweep_ball, sweep_triangle, verify_corpus, SweepReport, VerifyRow, BALL_GRID, BALL_SAMPLES, DEFAULT_RESOLUTION,
    TRIANGLE_GRID, TRIANGLE_SAMPLES,
};
use simplex_moments::geom::Vec2;
use simplex_moments::moments::{estimate_moment, isotropy_constant, EstimateRecord, FunctionalKind, FunctionalSpec};
use simplex_moments::shadow::{
    basic_system, bm_triangle_bracket, convexity_profile, reduce_to_triangle, steiner_shadow, ShadowSystem,
};

#[derive(Parser)]
#[command(name = "simplex-moments", version, about = "Moments of random simplices in convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate one functional of one body.
    Estimate(EstimateArgs),
    /// Run every identity and inequality check over a corpus.
    Verify(VerifyArgs),
    /// Stability sweep over spindles against the disc.
    SweepBall(SweepBallArgs),
    /// Stability sweep over truncated triangles against the triangle.
    SweepTriangle(SweepTriangleArgs),
    /// Estimates along a linear shadow system.
    ShadowProfile(ProfileArgs),
    /// Reduce a polygon to a triangle through basic shadow systems.
    Reduce(ReduceArgs),
    /// Derived bodies and planar identities.
    Derive(DeriveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Full,
    Centroid,
    Fixed,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Functional {
    #[arg(long, value_enum, default_value = "full")]
    kind: Kind,
    /// Vertex count for `--kind full` (default d + 1).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Fixed vertex for `--kind fixed`, as "a,b".
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    body: PathBuf,
    #[command(flatten)]
    functional: Functional,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock seconds (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Corpus directory or a single body file.
    #[arg(long, default_value = "corpus")]
    body: PathBuf,
    /// Exponents, as "1,2".
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    p: Vec<f64>,
    #[arg(long, default_value_t = 400_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepBallArgs {
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Spindle parameters ε.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = BALL_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertex count of the polygonal disc.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepTriangleArgs {
    /// `full` (with n = 3) or `centroid`.
    #[arg(long, value_enum, default_value = "full")]
    kind: Kind,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Truncation parameters δ.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = TRIANGLE_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    body: PathBuf,
    /// Basic system moving this vertex.
    #[arg(long, conflicts_with = "direction")]
    vertex: Option<usize>,
    /// Steiner shadow system along this direction, as "a,b".
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    #[command(flatten)]
    functional: Functional,
    /// Parameters t; default 9 evenly spaced points over the system range.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    body: PathBuf,
    #[command(flatten)]
    functional: Functional,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Derived {
    CentroidBody,
    ProjectionBody,
    Polar,
    IntersectionArea,
    Petty,
    BusemannResidual,
    John,
    Isotropy,
    BmBracket,
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(long)]
    body: PathBuf,
    #[arg(long, value_enum)]
    what: Derived,
    /// Direction count for support-sampled bodies and quadratures.
    #[arg(long, default_value_t = 1024)]
    resolution: usize,
    /// Centre for the polar body and the intersection body, as "a,b"
    /// (default: the centroid).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in {s:?}")))
        .collect()
}

fn parse_point(s: &str) -> Result<Vec2> {
    match parse_list(s)?.as_slice() {
        [a, b] => Ok(Vec2::new(*a, *b)),
        _ => bail!("expected two coordinates \"a,b\", got {s:?}"),
    }
}

fn load(path: &Path) -> Result<Body> {
    load_body(path).with_context(|| format!("cannot load {}", path.display()))
}

fn polygon(body: &Body) -> Result<&Polygon> {
    body.as_polygon().context("this command needs a polygon body")
}

fn spec_of(f: &Functional, dim: usize) -> Result<FunctionalSpec> {
    let spec = match f.kind {
        Kind::Full => FunctionalSpec::full(f.n.unwrap_or(dim + 1), f.p, dim),
        Kind::Centroid => FunctionalSpec::centroid(f.p, dim),
        Kind::Fixed => {
            let x = parse_list(f.x.as_deref().context("--kind fixed needs --x")?)?;
            FunctionalSpec::fixed(&x, f.p)
        }
    };
    spec.validate()?;
    if spec.dim != dim {
        bail!("--x has {} coordinates for a {dim}-dimensional body", spec.dim);
    }
    Ok(spec)
}

fn emit(text: String, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn estimate(a: EstimateArgs) -> Result<bool> {
    let body = load(&a.body)?;
    let spec = spec_of(&a.functional, body.dim())?;
    let rec = estimate_moment(&body, &spec, a.samples, a.seed)?.record(a.timing);
    let text = match a.output.format {
        Format::Json => json(&rec)?,
        Format::Csv => {
            let x = rec.x.as_ref().map(|x| x.iter().map(f64::to_string).collect::<Vec<_>>().join(" "));
            #[derive(Serialize)]
            struct Row<'a> {
                functional: &'a str,
                p: f64,
                n: usize,
                x: Option<String>,
                value: f64,
                stderr: f64,
                samples: usize,
                seed: u64,
                seconds: Option<f64>,
            }
            csv(&[Row {
                functional: &rec.functional,
                p: rec.p,
                n: rec.n,
                x,
                value: rec.value,
                stderr: rec.stderr,
                samples: rec.samples,
                seed: rec.seed,
                seconds: rec.seconds,
            }])?
        }
    };
    emit(text, a.output.out.as_deref())?;
    Ok(true)
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let report = if a.body.is_dir() {
        verify_corpus(&a.body, &a.p, a.samples, a.seed)?
    } else {
        let dir = tempdir_with(&a.body)?;
        verify_corpus(dir.path(), &a.p, a.samples, a.seed)?
    };
    for (path, why) in &report.unreadable {
        eprintln!("unreadable: {path}: {why}");
    }
    let text = match a.format {
        Format::Json => json(&report)?,
        Format::Csv => csv::<VerifyRow>(&report.rows)?,
    };
    emit(text, a.out.as_deref())?;
    Ok(report.pass())
}

/// Directory holding a copy of a single body file, so one file can be
/// verified like a corpus.
fn tempdir_with(file: &Path) -> Result<tempfile::TempDir> {
    let dir = tempfile::tempdir()?;
    let name = file.file_name().context("--body must name a file or directory")?;
    std::fs::copy(file, dir.path().join(name)).with_context(|| format!("cannot read {}", file.display()))?;
    Ok(dir)
}

#[derive(Serialize)]
struct SweepRow {
    param: f64,
    estimate: f64,
    stderr: f64,
    gap: f64,
    gap_stderr: f64,
}

fn sweep_output(report: &SweepReport, out: &Output) -> Result<bool> {
    let text = match out.format {
        Format::Json => json(report)?,
        Format::Csv => {
            let rows: Vec<SweepRow> = std::iter::once(&report.sanity)
                .chain(&report.points)
                .map(|q| SweepRow {
                    param: q.param,
                    estimate: q.estimate,
                    stderr: q.stderr,
                    gap: q.gap,
                    gap_stderr: q.gap_stderr,
                })
                .collect();
            csv(&rows)?
        }
    };
    eprintln!(
        "slope {:.4} (95% CI {:.4}..{:.4}), band {:?}: {}",
        report.fit.slope,
        report.fit.ci[0],
        report.fit.ci[1],
        report.slope_band,
        if report.pass() { "pass" } else { "FAIL" }
    );
    emit(text, out.out.as_deref())?;
    Ok(report.pass())
}

fn sweep_ball_cmd(a: SweepBallArgs) -> Result<bool> {
    let grid = a.grid.as_deref().map(parse_list).transpose()?.unwrap_or(BALL_GRID.to_vec());
    let report = sweep_ball(a.p, &grid, a.samples, a.seed, a.resolution)?;
    sweep_output(&report, &a.output)
}

fn sweep_triangle_cmd(a: SweepTriangleArgs) -> Result<bool> {
    let grid = a.grid.as_deref().map(parse_list).transpose()?.unwrap_or(TRIANGLE_GRID.to_vec());
    let kind = match a.kind {
        Kind::Full => FunctionalKind::Full(a.n),
        Kind::Centroid => FunctionalKind::Centroid,
        Kind::Fixed => bail!("sweep-triangle takes --kind full or centroid"),
    };
    let report = sweep_triangle(&kind, a.p, &grid, a.samples, a.seed)?;
    sweep_output(&report, &a.output)
}

#[derive(Serialize)]
struct ProfileRow {
    t: f64,
    value: f64,
    stderr: f64,
    area: f64,
    vertices: usize,
    second_difference: Option<f64>,
    second_difference_stderr: Option<f64>,
}

#[derive(Serialize)]
struct ProfileReport {
    system: String,
    range: (f64, f64),
    estimate: EstimateRecord,
    rows: Vec<ProfileRow>,
    convex: bool,
}

fn shadow_profile(a: ProfileArgs) -> Result<bool> {
    let body = load(&a.body)?;
    let poly = polygon(&body)?;
    let (system, label): (ShadowSystem, String) = match (a.vertex, a.direction.as_deref()) {
        (Some(i), None) => (basic_system(poly, i)?.system, format!("basic vertex {i}")),
        (None, Some(v)) => (steiner_shadow(poly, parse_point(v)?)?, format!("steiner direction {v}")),
        _ => bail!("give exactly one of --vertex or --direction"),
    };
    let (lo, hi) = system.range();
    let grid = match a.grid.as_deref() {
        Some(g) => parse_list(g)?,
        None => (0..9).map(|j| lo + (hi - lo) * j as f64 / 8.0).collect(),
    };
    let spec = spec_of(&a.functional, 2)?;
    let prof = convexity_profile(&system, &spec, &grid, a.samples, a.seed)?;
    let rows: Vec<ProfileRow> = prof
        .points
        .iter()
        .map(|q| {
            let d = prof.second_differences.iter().find(|d| d.t == q.t);
            ProfileRow {
                t: q.t,
                value: q.estimate.value,
                stderr: q.estimate.stderr,
                area: q.area,
                vertices: q.vertices,
                second_difference: d.map(|d| d.value),
                second_difference_stderr: d.map(|d| d.stderr),
            }
        })
        .collect();
    let convex = prof.is_convex_within(4.0);
    let text = match a.output.format {
        Format::Json => json(&ProfileReport {
            system: label,
            range: (lo, hi),
            estimate: prof.points[0].estimate.record(false),
            rows,
            convex,
        })?,
        Format::Csv => csv(&rows)?,
    };
    emit(text, a.output.out.as_deref())?;
    Ok(convex)
}

#[derive(Serialize)]
struct ReduceRow {
    step: usize,
    vertex: Option<usize>,
    t: Option<f64>,
    vertices: usize,
    area: f64,
    value: f64,
    stderr: f64,
}

#[derive(Serialize)]
struct ReduceReport {
    estimate: EstimateRecord,
    steps: Vec<ReduceRow>,
    triangle: Vec<[f64; 2]>,
    monotone: bool,
}

fn reduce(a: ReduceArgs) -> Result<bool> {
    let body = load(&a.body)?;
    let poly = polygon(&body)?;
    let spec = spec_of(&a.functional, 2)?;
    let r = reduce_to_triangle(poly, &spec, a.samples, a.seed)?;
    let mut rows = vec![ReduceRow {
        step: 0,
        vertex: None,
        t: None,
        vertices: poly.len(),
        area: poly.area(),
        value: r.initial.value,
        stderr: r.initial.stderr,
    }];
    rows.extend(r.steps.iter().enumerate().map(|(k, s)| ReduceRow {
        step: k + 1,
        vertex: Some(s.vertex),
        t: Some(s.t),
        vertices: s.vertices.len(),
        area: s.area,
        value: s.estimate.value,
        stderr: s.estimate.stderr,
    }));
    let monotone = r.is_monotone_within(4.0);
    let text = match a.output.format {
        Format::Json => json(&ReduceReport {
            estimate: r.final_estimate().record(false),
            triangle: r
                .steps
                .last()
                .map(|s| s.vertices.clone())
                .unwrap_or_else(|| poly.vertices().iter().map(|v| [v.x, v.y]).collect()),
            steps: rows,
            monotone,
        })?,
        Format::Csv => csv(&rows)?,
    };
    emit(text, a.output.out.as_deref())?;
    Ok(monotone)
}

#[derive(Serialize)]
struct Scalar {
    quantity: &'static str,
    value: f64,
    error: f64,
    pass: Option<bool>,
}

fn derive(a: DeriveArgs) -> Result<bool> {
    let body = load(&a.body)?;
    let source = a.body.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let centre = || -> Result<Vec2> {
        let poly = polygon(&body)?;
        a.x.as_deref().map(parse_point).transpose().map(|x| x.unwrap_or_else(|| poly.centroid()))
    };
    let body_out = |p: Polygon, op: &str| -> Result<bool> {
        emit(body_to_json(&Body::Polygon(p), Some(&format!("{op}({source})"))) + "\n", a.out.as_deref())?;
        Ok(true)
    };
    let scalar = |s: Scalar| -> Result<bool> {
        let pass = s.pass.unwrap_or(true);
        emit(json(&s)?, a.out.as_deref())?;
        Ok(pass)
    };
    match a.what {
        Derived::CentroidBody => {
            let poly = polygon(&body)?;
            let c = poly.centroid();
            body_out(centroid_body(&poly.translate(-c), a.resolution)?.outer, "centroid_body")
        }
        Derived::ProjectionBody => body_out(projection_body(polygon(&body)?), "projection_body"),
        Derived::Polar => {
            let c = centre()?;
            body_out(polar_dual(&polygon(&body)?.translate(-c))?, "polar")
        }
        Derived::IntersectionArea => {
            let q = intersection_body_area(polygon(&body)?, centre()?, a.resolution)?;
            scalar(Scalar { quantity: "intersection_body_area", value: q.value, error: q.error, pass: None })
        }
        Derived::Petty => {
            let poly = polygon(&body)?;
            let v = petty_product(&poly.translate(-poly.centroid()))?;
            let pass = v <= std::f64::consts::PI.powi(2) / 4.0 + 1e-6;
            scalar(Scalar { quantity: "petty_product", value: v, error: 0.0, pass: Some(pass) })
        }
        Derived::BusemannResidual => {
            let poly = polygon(&body)?;
            let centred = poly.translate(-poly.centroid());
            let q = busemann_formula_residual(&centred, a.resolution)?;
            let pass = q.value.abs() <= 1e-4 * centred.area();
            scalar(Scalar { quantity: "busemann_formula_residual", value: q.value, error: q.error, pass: Some(pass) })
        }
        Derived::John => {
            let j = john_ellipse(polygon(&body)?)?;
            #[derive(Serialize)]
            struct John {
                center: [f64; 2],
                shape: [[f64; 2]; 2],
                area: f64,
                bm_disc_upper: f64,
                gap: f64,
            }
            let s = j.ellipse.shape;
            emit(
                json(&John {
                    center: [j.ellipse.center.x, j.ellipse.center.y],
                    shape: [[s[(0, 0)], s[(0, 1)]], [s[(1, 0)], s[(1, 1)]]],
                    area: j.ellipse.area(),
                    bm_disc_upper: j.bm_disc_upper,
                    gap: j.gap,
                })?,
                a.out.as_deref(),
            )?;
            Ok(true)
        }
        Derived::Isotropy => {
            let l = isotropy_constant(&body, a.samples, a.seed)?;
            emit(json(&l)?, a.out.as_deref())?;
            Ok(true)
        }
        Derived::BmBracket => {
            let poly = polygon(&body)?;
            #[derive(Serialize)]
            struct Bracket {
                #[serde(flatten)]
                bracket: simplex_moments::shadow::BMBracket,
                inscribed_triangle: [[f64; 2]; 3],
            }
            let t = max_inscribed_triangle(poly);
            emit(
                json(&Bracket {
                    bracket: bm_triangle_bracket(poly),
                    inscribed_triangle: t.inner.map(|v| [v.x, v.y]),
                })?,
                a.out.as_deref(),
            )?;
            Ok(true)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Verify(a) => verify(a),
        Command::SweepBall(a) => sweep_ball_cmd(a),
        Command::SweepTriangle(a) => sweep_triangle_cmd(a),
        Command::ShadowProfile(a) => shadow_profile(a),
        Command::Reduce(a) => reduce(a),
        Command::Derive(a) => derive(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
