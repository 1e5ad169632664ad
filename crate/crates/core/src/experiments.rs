//! Stability sweeps over the spindle and truncated-triangle families, and
//! the corpus-wide verification matrix.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bodies::{load_body, Body, Polygon};
use crate::derived::{
    busemann_formula_residual, centroid_body, intersection_body_area, origin_moment_exact, petty_product,
};
use crate::error::{Error, Result};
use crate::geom::{extent, Vec2};
use crate::moments::{
    ball_moment, estimate_moment, estimate_origin_moment_polar, identity_report, reed_moment, BallMomentKind,
    FunctionalKind, FunctionalSpec, MomentEstimate, Slack,
};
use crate::sampling::sub_seed;
use crate::shadow::{family_generator, Family};
use crate::stats::{weighted_loglog_fit, LogLogFit};

pub const BALL_GRID: [f64; 5] = [0.05, 0.1, 0.2, 0.3, 0.4];
pub const TRIANGLE_GRID: [f64; 5] = [0.05, 0.1, 0.15, 0.2, 0.3];
pub const BALL_SLOPE_BAND: [f64; 2] = [1.3, 2.6];
pub const TRIANGLE_SLOPE_BAND: [f64; 2] = [1.6, 2.4];
pub const DEFAULT_RESOLUTION: usize = 512;
pub const BALL_SAMPLES: usize = 4_000_000;
pub const TRIANGLE_SAMPLES: usize = 12_000_000;
const MIN_GRID: usize = 5;
const QUAD_PANELS: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub param: f64,
    pub estimate: f64,
    pub stderr: f64,
    /// Relative gap to the extremal value, signed so that it is positive
    /// away from the extremum.
    pub gap: f64,
    pub gap_stderr: f64,
}

impl SweepPoint {
    fn new(param: f64, e: &MomentEstimate, extremal: f64, minimum: bool) -> SweepPoint {
        let gap = if minimum { e.value / extremal - 1.0 } else { 1.0 - e.value / extremal };
        SweepPoint { param, estimate: e.value, stderr: e.stderr, gap, gap_stderr: e.stderr / extremal }
    }

    /// `gap > 4σ`.
    pub fn positive(&self) -> bool {
        self.gap > 4.0 * self.gap_stderr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub functional: String,
    pub p: f64,
    /// Value at the extremal body (disc or triangle).
    pub extremal: f64,
    pub points: Vec<SweepPoint>,
    /// The family member at parameter 0.
    pub sanity: SweepPoint,
    /// `|gap(res) − gap(2·res)|` at the smallest parameter; spindles only.
    pub resolution_bias: Option<f64>,
    pub fit: LogLogFit,
    pub slope_band: [f64; 2],
    pub gaps_positive: bool,
    pub sanity_ok: bool,
    pub slope_in_band: bool,
    pub seed: u64,
    pub samples: usize,
    pub resolution: Option<usize>,
}

impl SweepReport {
    pub fn pass(&self) -> bool {
        self.gaps_positive && self.sanity_ok && self.slope_in_band
    }
}

fn check_grid(grid: &[f64], hi: f64) -> Result<()> {
    if grid.len() < MIN_GRID {
        return Err(Error::GridTooSparse { needed: MIN_GRID, got: grid.len() });
    }
    if let Some(g) = grid.iter().find(|&&g| !(g > 0.0 && g <= hi)) {
        return Err(Error::InvalidParameter(format!("grid value {g} outside (0, {hi}]")));
    }
    Ok(())
}

fn fit(points: &[SweepPoint]) -> Result<LogLogFit> {
    let x: Vec<f64> = points.iter().map(|q| q.param).collect();
    let y: Vec<f64> = points.iter().map(|q| q.gap).collect();
    let s: Vec<f64> = points.iter().map(|q| q.gap_stderr).collect();
    weighted_loglog_fit(&x, &y, &s)
}

fn spindle(eps: f64, resolution: usize) -> Result<Polygon> {
    Ok(family_generator(Family::Spindle(eps), resolution)?.as_polygon().expect("spindles are polygons").clone())
}

/// Every grid point and the sanity row use independent sub-seeds, so the
/// fit sees independent errors.
///
/// `E^p_o` over the spindle family against the disc: `gap(ε) = E/E(B²) − 1`.
/// The spindles are centrally symmetric, so `o` is their centroid.
pub fn sweep_ball(p: f64, grid: &[f64], samples: usize, seed: u64, resolution: usize) -> Result<SweepReport> {
    check_grid(grid, 0.5)?;
    let extremal = ball_moment(2, p, BallMomentKind::Centroid)?;
    let o = Vec2::zeros();
    let run = |eps: f64, res: usize, k: usize| -> Result<SweepPoint> {
        let e = estimate_origin_moment_polar(&spindle(eps, res)?, o, p, samples, sub_seed(seed, k as u64))?;
        Ok(SweepPoint::new(eps, &e, extremal, true))
    };
    let points: Vec<SweepPoint> =
        grid.iter().enumerate().map(|(k, &eps)| run(eps, resolution, k)).collect::<Result<_>>()?;
    let sanity = run(0.0, resolution, grid.len())?;
    // same seed at both resolutions so the difference is the polygonal bias
    let k_min = (0..grid.len()).min_by(|&a, &b| grid[a].total_cmp(&grid[b])).expect("grid is non-empty");
    let bias = (run(grid[k_min], 2 * resolution, k_min)?.gap - points[k_min].gap).abs();
    let fit = fit(&points)?;
    let slope_in_band = fit.slope >= BALL_SLOPE_BAND[0] && fit.slope <= BALL_SLOPE_BAND[1];
    Ok(SweepReport {
        family: "spindle".into(),
        functional: "origin".into(),
        p,
        extremal,
        gaps_positive: points.iter().all(SweepPoint::positive),
        sanity_ok: sanity.gap.abs() <= 4.0 * sanity.gap_stderr + bias,
        slope_in_band,
        points,
        sanity,
        resolution_bias: Some(bias),
        fit,
        slope_band: BALL_SLOPE_BAND,
        seed,
        samples,
        resolution: Some(resolution),
    })
}

fn unit_triangle() -> Polygon {
    Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).expect("triangle")
}

/// `E^p(T²)` for `full(3)` (exact rational) or the centroid kind
/// (quadrature at `p = 1`, `E²_3/3` at `p = 2`).
pub fn triangle_value(kind: &FunctionalKind, p: f64) -> Result<f64> {
    match kind {
        FunctionalKind::Full(3) => Ok(reed_moment(p)?.value),
        FunctionalKind::Centroid if p == 1.0 => {
            let t = unit_triangle();
            Ok(origin_moment_exact(&t, t.centroid(), QUAD_PANELS)?.value)
        }
        FunctionalKind::Centroid if p == 2.0 => Ok(reed_moment(2.0)?.value / 3.0),
        FunctionalKind::Centroid => Err(Error::InvalidExponent(p)),
        _ => Err(Error::InvalidFunctional("triangle sweep needs full(3) or centroid".into())),
    }
}

/// Truncated triangles against the triangle: `gap(δ) = 1 − E/E(T²)`.
pub fn sweep_triangle(kind: &FunctionalKind, p: f64, grid: &[f64], samples: usize, seed: u64) -> Result<SweepReport> {
    check_grid(grid, 0.4)?;
    let extremal = triangle_value(kind, p)?;
    let spec = FunctionalSpec { kind: kind.clone(), p, dim: 2 };
    let run = |delta: f64, k: usize| -> Result<SweepPoint> {
        let body = family_generator(Family::TruncatedTriangle(delta), 0)?;
        let e = estimate_moment(&body, &spec, samples, sub_seed(seed, k as u64))?;
        Ok(SweepPoint::new(delta, &e, extremal, false))
    };
    let points: Vec<SweepPoint> = grid.iter().enumerate().map(|(k, &d)| run(d, k)).collect::<Result<_>>()?;
    let sanity = run(0.0, grid.len())?;
    let fit = fit(&points)?;
    let slope_in_band = fit.slope >= TRIANGLE_SLOPE_BAND[0] && fit.slope <= TRIANGLE_SLOPE_BAND[1];
    Ok(SweepReport {
        family: "truncated_triangle".into(),
        functional: spec.label().into(),
        p,
        extremal,
        gaps_positive: points.iter().all(SweepPoint::positive),
        sanity_ok: sanity.gap.abs() <= 4.0 * sanity.gap_stderr,
        slope_in_band,
        points,
        sanity,
        resolution_bias: None,
        fit,
        slope_band: TRIANGLE_SLOPE_BAND,
        seed,
        samples,
        resolution: None,
    })
}

/// One line of the verification matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub body: String,
    pub check: String,
    pub slack: f64,
    pub stderr: f64,
    pub pass: bool,
}

impl VerifyRow {
    fn from_slack(body: &str, check: String, s: &Slack) -> VerifyRow {
        VerifyRow { body: body.into(), check, slack: s.slack, stderr: s.stderr, pass: s.pass }
    }

    /// Deterministic check: passes when `slack ≥ 0`.
    fn exact(body: &str, check: &str, slack: f64) -> VerifyRow {
        VerifyRow { body: body.into(), check: check.into(), slack, stderr: 0.0, pass: slack >= 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    /// Entries that could not be loaded, with the reason.
    pub unreadable: Vec<(String, String)>,
    pub samples: usize,
    pub seed: u64,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass) && self.unreadable.is_empty()
    }
}

/// Body files (`*.json`) in `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn is_centrally_symmetric(poly: &Polygon) -> bool {
    let c = poly.centroid();
    let flipped = poly.transform(&-nalgebra::Matrix2::identity(), 2.0 * c);
    flipped.is_ok_and(|f| f.vertex_distance(poly).is_some_and(|d| d <= 1e-9 * extent(poly.vertices())))
}

/// Moment checks for one body at exponent `p`: the identity report
/// (Hölder against `2p`) and the ball/triangle extremal bounds for `full(3)`
/// and the centroid kind.
pub fn moment_checks(name: &str, body: &Body, p: f64, samples: usize, seed: u64) -> Result<Vec<VerifyRow>> {
    let mut rows = Vec::new();
    let rep = identity_report(body, p, 2.0 * p, samples, seed)?;
    for s in &rep.slacks {
        let check = if s.name == "(2*)" { s.name.clone() } else { format!("{} p={p}", s.name) };
        rows.push(VerifyRow::from_slack(name, check, s));
    }
    if body.dim() != 2 {
        return Ok(rows);
    }
    for (kind, ball) in [
        (FunctionalKind::Full(3), BallMomentKind::FullSimplex),
        (FunctionalKind::Centroid, BallMomentKind::Centroid),
    ] {
        let spec = FunctionalSpec { kind: kind.clone(), p, dim: 2 };
        let e = estimate_moment(body, &spec, samples, seed)?;
        let lo = ball_moment(2, p, ball)?;
        let label = if matches!(kind, FunctionalKind::Full(_)) { "full(3)" } else { "centroid" };
        rows.push(VerifyRow::from_slack(
            name,
            format!("min-at-ball {label} p={p}"),
            &Slack::new("", e.value - lo, e.stderr, false),
        ));
        if let Ok(hi) = triangle_value(&kind, p) {
            rows.push(VerifyRow::from_slack(
                name,
                format!("max-at-triangle {label} p={p}"),
                &Slack::new("", hi - e.value, e.stderr, false),
            ));
        }
    }
    Ok(rows)
}

/// Derived-body checks for a polygon: centroid-body volume formula,
/// Busemann–Petty, Busemann's section formula, the Petty product, and for
/// symmetric bodies `A(IP) = 4A(P)`.
pub fn derived_checks(name: &str, poly: &Polygon, samples: usize, seed: u64) -> Result<Vec<VerifyRow>> {
    let centred = poly.translate(-poly.centroid());
    let v = centred.area();
    let mut rows = Vec::new();
    let gamma = centroid_body(&centred, 1024)?;
    let e = estimate_moment(&Body::Polygon(centred.clone()), &FunctionalSpec::centroid(1.0, 2), samples, seed)?;
    let diff = (gamma.area() - 4.0 * v * e.value).abs();
    let sd = 4.0 * v * e.stderr;
    rows.push(VerifyRow {
        body: name.into(),
        check: "centroid-body".into(),
        slack: 4.0 * sd + gamma.area_bound() - diff,
        stderr: sd,
        pass: diff <= 4.0 * sd + gamma.area_bound(),
    });
    let bp = (4.0 / (3.0 * std::f64::consts::PI)).powi(2);
    rows.push(VerifyRow::exact(name, "busemann-petty", (gamma.area() + gamma.area_bound()) / v - bp));
    let r = busemann_formula_residual(&centred, 1024)?;
    rows.push(VerifyRow::exact(name, "busemann-formula", 1e-4 * v - r.value.abs()));
    let petty = petty_product(&centred)?;
    rows.push(VerifyRow::exact(name, "petty", std::f64::consts::PI.powi(2) / 4.0 + 1e-6 - petty));
    if is_centrally_symmetric(&centred) {
        let ib = intersection_body_area(&centred, Vec2::zeros(), 1024)?;
        rows.push(VerifyRow::exact(name, "intersection-body", 1e-4 - (ib.value / (4.0 * v) - 1.0).abs()));
    }
    Ok(rows)
}

/// Runs every check on every body file in `dir`. Unreadable entries are
/// listed and skipped.
pub fn verify_corpus(dir: &Path, ps: &[f64], samples: usize, seed: u64) -> Result<VerifyReport> {
    let mut rows = Vec::new();
    let mut unreadable = Vec::new();
    for path in corpus_files(dir)? {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let body = match load_body(&path) {
            Ok(b) => b,
            Err(e) => {
                unreadable.push((path.display().to_string(), e.to_string()));
                continue;
            }
        };
        for &p in ps {
            for row in moment_checks(&name, &body, p, samples, seed)? {
                // (2*) does not depend on p
                if !rows.iter().any(|r: &VerifyRow| r.body == row.body && r.check == row.check) {
                    rows.push(row);
                }
            }
        }
        if let Some(poly) = body.as_polygon() {
            rows.extend(derived_checks(&name, poly, samples, seed)?);
        }
    }
    Ok(VerifyReport { rows, unreadable, samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grids_are_checked() {
        assert!(sweep_ball(1.0, &[0.1, 0.2], 10_000, 1, 64).is_err());
        assert!(sweep_ball(1.0, &[0.1, 0.2, 0.3, 0.4, 0.6], 10_000, 1, 64).is_err());
        assert!(sweep_triangle(&FunctionalKind::Full(3), 1.0, &[0.1, 0.2, 0.3, 0.4, 0.5], 10_000, 1).is_err());
        assert!(sweep_triangle(&FunctionalKind::Full(4), 1.0, &TRIANGLE_GRID, 10_000, 1).is_err());
    }

    #[test]
    fn small_ball_sweep_has_positive_gaps() {
        let r = sweep_ball(1.0, &[0.2, 0.25, 0.3, 0.35, 0.4], 200_000, 3, 128).unwrap();
        assert!(r.gaps_positive, "{r:?}");
        assert!(r.sanity_ok);
        assert!(r.fit.slope > 1.0 && r.fit.slope < 3.0);
    }

    #[test]
    fn triangle_reference_values() {
        assert_eq!(triangle_value(&FunctionalKind::Full(3), 1.0).unwrap(), 1.0 / 12.0);
        let c = triangle_value(&FunctionalKind::Centroid, 1.0).unwrap();
        assert!((c - 0.05171026743896301).abs() < 1e-12);
        assert!((triangle_value(&FunctionalKind::Centroid, 2.0).unwrap() - 1.0 / 216.0).abs() < 1e-16);
        assert!(triangle_value(&FunctionalKind::Centroid, 3.0).is_err());
    }

    #[test]
    fn symmetry_detection() {
        assert!(is_centrally_symmetric(&Polygon::regular(6, 1.0).unwrap()));
        assert!(!is_centrally_symmetric(&Polygon::regular(5, 1.0).unwrap()));
        assert!(!is_centrally_symmetric(&unit_triangle()));
    }

    #[test]
    fn square_checks_pass() {
        let sq = Polygon::regular(4, 1.0).unwrap();
        let mut rows = moment_checks("square", &Body::Polygon(sq.clone()), 1.0, 100_000, 5).unwrap();
        rows.extend(derived_checks("square", &sq, 100_000, 5).unwrap());
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
        assert!(rows.iter().any(|r| r.check == "intersection-body"));
    }
}
