//! Bodies derived from a polygon (centroid, projection and intersection
//! bodies) and the planar identities tying them to `E¹_o`.
//!
//! Angular integrals are split at the directions where the integrand has a
//! kink (a chord or split line passing through a vertex) and evaluated with
//! Gauss–Legendre panels. The reported error bound is the change between
//! the panel count used and half of it.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{polar_dual, Polygon};
use crate::error::{Error, Result};
use crate::geom::{clip_halfplane, extent, raw_moments, Vec2};

/// Relative tolerance on `|γ(P)|` for operations that need the centroid at
/// the origin.
pub const CENTROID_TOL: f64 = 1e-9;

const GAUSS_ORDER: usize = 8;

/// An integral together with an estimate of its quadrature error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `∫_0^period f`, for `f` smooth between the `events` (taken mod `period`).
/// Roughly `panels` Gauss panels are spread over the period in proportion to
/// segment length, with at least one per segment.
fn angular_integral<F>(events: &[f64], period: f64, panels: usize, f: F) -> Quadrature
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut cuts: Vec<f64> = events.iter().map(|e| e.rem_euclid(period)).collect();
    cuts.push(0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * period);
    let segments: Vec<(f64, f64)> = (0..cuts.len())
        .map(|i| (cuts[i], if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + period }))
        .filter(|(a, b)| b > a)
        .collect();
    let rule = gauss_legendre(GAUSS_ORDER);
    let integrate = |scale: usize| -> f64 {
        let parts: Vec<f64> = segments
            .par_iter()
            .map(|&(a, b)| {
                let k = (((b - a) / period) * (panels * scale) as f64 / 2.0).ceil().max(1.0) as usize;
                let h = (b - a) / k as f64;
                let mut s = 0.0;
                for j in 0..k {
                    let mid = a + (j as f64 + 0.5) * h;
                    for &(x, w) in &rule {
                        s += w * f(mid + 0.5 * h * x);
                    }
                }
                0.5 * h * s
            })
            .collect();
        parts.iter().sum()
    };
    let fine = integrate(2);
    let coarse = integrate(1);
    Quadrature { value: fine, error: (fine - coarse).abs() }
}

fn angle(v: Vec2) -> f64 {
    v.y.atan2(v.x)
}

fn unit(theta: f64) -> Vec2 {
    let (s, c) = theta.sin_cos();
    Vec2::new(c, s)
}

fn require_centroid_at_origin(poly: &Polygon) -> Result<()> {
    let off = poly.centroid().norm();
    if off > CENTROID_TOL * extent(poly.vertices()) {
        return Err(Error::CentroidNotAtOrigin(off));
    }
    Ok(())
}

/// `∫_P |⟨n, y − o⟩| dy` and `∫_P sign⟨n, y − o⟩ (y − o) dy`, by splitting
/// `P` along the line `⟨n, y − o⟩ = 0`.
fn absolute_moment(poly: &Polygon, o: Vec2, n: Vec2) -> (f64, Vec2) {
    let c = n.dot(&o);
    let mut abs = 0.0;
    let mut grad = Vec2::zeros();
    for (normal, sign) in [(n, -1.0), (-n, 1.0)] {
        let piece = clip_halfplane(poly.vertices(), normal, normal.dot(&o));
        if piece.len() < 3 {
            continue;
        }
        let (a, g, _) = raw_moments(&piece);
        if a > 0.0 {
            abs += a * (n.dot(&g) - c).abs();
            grad += sign * a * (g - o);
        }
    }
    (abs, grad)
}

/// Exact `E¹_o(P)` up to quadrature error:
/// `E¹_o = (1 / 2V³) ∫ ρ(θ)³/3 · ∫_P |det(u_θ, y − o)| dy dθ`.
pub fn origin_moment_exact(poly: &Polygon, o: Vec2, panels: usize) -> Result<Quadrature> {
    if !poly.contains_interior(o) {
        return Err(Error::OriginNotInterior);
    }
    let v = poly.area();
    let events: Vec<f64> = poly.vertices().iter().flat_map(|&q| [angle(q - o), angle(q - o) + PI]).collect();
    let q = angular_integral(&events, TAU, panels.max(64), |t| {
        let u = unit(t);
        let r = poly.radial_unchecked(u, o);
        let (h, _) = absolute_moment(poly, o, Vec2::new(-u.y, u.x));
        h * r * r * r / 3.0
    });
    let s = 1.0 / (2.0 * v * v * v);
    Ok(Quadrature { value: s * q.value, error: s * q.error })
}

/// Convex body known through exact support values on a direction grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSampledBody {
    /// Unit directions, sorted by angle: the uniform grid plus event
    /// directions.
    pub directions: Vec<[f64; 2]>,
    pub support: Vec<f64>,
    /// Boundary points touching the supporting line in each direction.
    pub boundary: Vec<[f64; 2]>,
    /// Intersection of the supporting half-planes (contains the body).
    pub outer: Polygon,
    /// Hull of the boundary points (contained in the body).
    pub inner: Polygon,
}

impl SupportSampledBody {
    /// Midpoint of the inner and outer areas.
    pub fn area(&self) -> f64 {
        0.5 * (self.outer.area() + self.inner.area())
    }

    /// Half the gap between outer and inner areas; the true area is within
    /// this of [`Self::area`].
    pub fn area_bound(&self) -> f64 {
        0.5 * (self.outer.area() - self.inner.area())
    }
}

/// Centroid body `ΓP`, `h(u) = (1/V) ∫_P |⟨u, x⟩| dx`, for `P` with its
/// centroid at the origin.
pub fn centroid_body(poly: &Polygon, n_dirs: usize) -> Result<SupportSampledBody> {
    if n_dirs < 64 {
        return Err(Error::GridTooSparse { needed: 64, got: n_dirs });
    }
    require_centroid_at_origin(poly)?;
    let v = poly.area();
    let mut thetas: Vec<f64> = (0..n_dirs).map(|k| TAU * k as f64 / n_dirs as f64).collect();
    for q in poly.vertices() {
        let a = angle(*q) + 0.5 * PI;
        thetas.extend([a.rem_euclid(TAU), (a + PI).rem_euclid(TAU)]);
    }
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
    let evals: Vec<(Vec2, f64, Vec2)> = thetas
        .par_iter()
        .map(|&t| {
            let u = unit(t);
            let (h, g) = absolute_moment(poly, Vec2::zeros(), u);
            (u, h / v, g / v)
        })
        .collect();
    let h_max = evals.iter().map(|e| e.1).fold(0.0, f64::max);
    let big = 4.0 * h_max;
    let mut outer = vec![Vec2::new(-big, -big), Vec2::new(big, -big), Vec2::new(big, big), Vec2::new(-big, big)];
    for (u, h, _) in &evals {
        outer = clip_halfplane(&outer, *u, *h);
    }
    let boundary: Vec<Vec2> = evals.iter().map(|e| e.2).collect();
    Ok(SupportSampledBody {
        directions: evals.iter().map(|e| [e.0.x, e.0.y]).collect(),
        support: evals.iter().map(|e| e.1).collect(),
        boundary: boundary.iter().map(|b| [b.x, b.y]).collect(),
        outer: Polygon::new(&outer)?,
        inner: Polygon::new(&boundary)?,
    })
}

/// Projection body `ΠP`: the difference body `P + (−P)` turned by 90°.
pub fn projection_body(poly: &Polygon) -> Polygon {
    let vs = poly.vertices();
    let mut pts = Vec::with_capacity(vs.len() * vs.len());
    for a in vs {
        for b in vs {
            let d = a - b;
            pts.push(Vec2::new(-d.y, d.x));
        }
    }
    Polygon::new(&pts).expect("difference body of a polygon is a polygon")
}

/// `V(P) · V((ΠP)*)`. `ΠP` is origin-symmetric, so the polar is taken about
/// its centre.
pub fn petty_product(poly: &Polygon) -> Result<f64> {
    Ok(poly.area() * polar_dual(&projection_body(poly))?.area())
}

fn chord_events(poly: &Polygon, o: Vec2) -> Vec<f64> {
    poly.vertices().iter().map(|&q| angle(q - o) - 0.5 * PI).collect()
}

/// Area of the intersection body `IP` about `o`: `ρ_{IP}(u)` is the length
/// of the chord through `o` perpendicular to `u`, and the area is
/// `(1/2) ∫ ρ_{IP}² dθ`.
pub fn intersection_body_area(poly: &Polygon, o: Vec2, n_dirs: usize) -> Result<Quadrature> {
    if n_dirs < 128 {
        return Err(Error::GridTooSparse { needed: 128, got: n_dirs });
    }
    if !poly.contains_interior(o) {
        return Err(Error::OriginNotInterior);
    }
    // ρ_{IP} has period π
    let q = angular_integral(&chord_events(poly, o), PI, n_dirs / 2, |t| {
        let w = unit(t + 0.5 * PI);
        let l = poly.radial_unchecked(w, o) + poly.radial_unchecked(-w, o);
        l * l
    });
    Ok(Quadrature { value: q.value, error: q.error })
}

/// `(1/2) ∫ V₁(P ∩ u⊥)² E¹_o(P ∩ u⊥) dσ(u) − V(P)` for `P` with its
/// centroid at the origin. A chord split by `o` into `a` and `b` has
/// `E¹_o = (a² + b²) / (2(a + b)²)`.
pub fn busemann_formula_residual(poly: &Polygon, n_dirs: usize) -> Result<Quadrature> {
    if n_dirs < 128 {
        return Err(Error::GridTooSparse { needed: 128, got: n_dirs });
    }
    require_centroid_at_origin(poly)?;
    let o = Vec2::zeros();
    let q = angular_integral(&chord_events(poly, o), PI, n_dirs / 2, |t| {
        let w = unit(t + 0.5 * PI);
        let (a, b) = (poly.radial_unchecked(w, o), poly.radial_unchecked(-w, o));
        let l = a + b;
        // two antipodal u per period
        l * l * (a * a + b * b) / (2.0 * l * l)
    });
    Ok(Quadrature { value: q.value - poly.area(), error: q.error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::polygonal_disc;
    use approx::assert_relative_eq;

    fn square() -> Polygon {
        Polygon::new(&[Vec2::new(-1.0, -1.0), Vec2::new(1.0, -1.0), Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)])
            .unwrap()
    }

    fn centered_triangle() -> Polygon {
        let t = Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.1), Vec2::new(0.4, 1.3)]).unwrap();
        t.translate(-t.centroid())
    }

    #[test]
    fn gauss_rule_is_exact_on_polynomials() {
        let r = gauss_legendre(GAUSS_ORDER);
        let s: f64 = r.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert_relative_eq!(s, 2.0 / 15.0, max_relative = 1e-14);
        assert_relative_eq!(r.iter().map(|p| p.1).sum::<f64>(), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn square_centroid_body_support() {
        let g = centroid_body(&square(), 64).unwrap();
        let i = g.directions.iter().position(|d| (d[0] - 1.0).abs() < 1e-15).unwrap();
        assert_relative_eq!(g.support[i], 0.5, max_relative = 1e-14);
        assert!(g.outer.contains_interior(Vec2::zeros()));
        assert!(g.support.iter().all(|&h| h > 0.0));
    }

    #[test]
    fn centroid_body_area_matches_exact_moment() {
        for p in [square(), centered_triangle(), Polygon::regular(5, 1.0).unwrap()] {
            let g = centroid_body(&p, 1024).unwrap();
            let e = origin_moment_exact(&p, Vec2::zeros(), 256).unwrap();
            let target = 4.0 * p.area() * e.value;
            assert!((g.area() - target).abs() <= g.area_bound() + 1e-10, "{} vs {target}", g.area());
            assert!(g.area_bound() < 1e-4 * target);
        }
    }

    #[test]
    fn centroid_body_converges_quadratically() {
        let t = centered_triangle();
        let b1 = centroid_body(&t, 256).unwrap().area_bound();
        let b2 = centroid_body(&t, 512).unwrap().area_bound();
        assert!(b2 < 0.3 * b1, "{b1} {b2}");
    }

    #[test]
    fn disc_centroid_body_is_round() {
        let g = centroid_body(&polygonal_disc(512).unwrap(), 256).unwrap();
        let lo = g.support.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = g.support.iter().cloned().fold(0.0, f64::max);
        assert!(hi / lo - 1.0 < 1e-3);
        assert_relative_eq!(hi, 4.0 / (3.0 * PI), max_relative = 1e-3);
    }

    #[test]
    fn off_centre_is_rejected() {
        let p = square().translate(Vec2::new(0.1, 0.0));
        assert!(matches!(centroid_body(&p, 64), Err(Error::CentroidNotAtOrigin(_))));
        assert!(busemann_formula_residual(&p, 128).is_err());
        assert!(intersection_body_area(&p, Vec2::new(5.0, 0.0), 128).is_err());
    }

    #[test]
    fn exact_moment_of_disc_and_triangle() {
        let e = origin_moment_exact(&polygonal_disc(512).unwrap(), Vec2::zeros(), 512).unwrap();
        assert_relative_eq!(e.value, 4.0 / (9.0 * PI * PI), max_relative = 1e-4);
        let t = Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
        let e = origin_moment_exact(&t, t.centroid(), 256).unwrap();
        assert_relative_eq!(e.value, 0.05171026743896301, max_relative = 1e-11);
        assert!(e.error < 1e-12);
    }

    #[test]
    fn square_projection_body() {
        let pi = projection_body(&square());
        assert_eq!(pi.len(), 4);
        assert_relative_eq!(pi.area(), 16.0, max_relative = 1e-15);
        assert_relative_eq!(pi.support(Vec2::new(1.0, 0.0)), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn projection_body_support_is_width() {
        let t = centered_triangle();
        let pi = projection_body(&t);
        for k in 0..12 {
            let u = unit(0.37 + k as f64 * 0.5);
            assert_relative_eq!(pi.support(u), t.width(Vec2::new(-u.y, u.x)), max_relative = 1e-13);
        }
    }

    #[test]
    fn disc_projection_body_has_radius_two() {
        let pi = projection_body(&polygonal_disc(512).unwrap());
        assert!(pi.vertices().iter().all(|v| (v.norm() - 2.0).abs() < 1e-4));
    }

    #[test]
    fn projection_body_rotates_with_the_polygon() {
        let t = centered_triangle();
        let (s, c) = 0.7f64.sin_cos();
        let r = nalgebra::Matrix2::new(c, -s, s, c);
        let a = projection_body(&t.transform(&r, Vec2::zeros()).unwrap());
        let b = projection_body(&t).transform(&r, Vec2::zeros()).unwrap();
        assert!(a.vertex_distance(&b).unwrap() < 1e-10);
    }

    #[test]
    fn petty_products() {
        assert_relative_eq!(petty_product(&square()).unwrap(), 2.0, max_relative = 1e-14);
        let d = petty_product(&polygonal_disc(512).unwrap()).unwrap();
        assert!(d <= PI * PI / 4.0 + 1e-6 && d > PI * PI / 4.0 - 1e-3);
        assert!(petty_product(&centered_triangle()).unwrap() < PI * PI / 4.0);
    }

    #[test]
    fn intersection_body_areas() {
        let q = intersection_body_area(&square(), Vec2::zeros(), 128).unwrap();
        assert_relative_eq!(q.value, 16.0, max_relative = 1e-10);
        let hex = Polygon::regular(6, 1.0).unwrap();
        let q = intersection_body_area(&hex, Vec2::zeros(), 128).unwrap();
        assert_relative_eq!(q.value, 4.0 * hex.area(), max_relative = 1e-10);
        let t = centered_triangle();
        let q = intersection_body_area(&t, Vec2::new(0.05, -0.02), 256).unwrap();
        assert!(q.value < 4.0 * t.area());
    }

    #[test]
    fn busemann_formula_holds() {
        for p in [square(), centered_triangle(), polygonal_disc(512).unwrap()] {
            let r = busemann_formula_residual(&p, 256).unwrap();
            assert!(r.value.abs() <= 1e-10 * p.area(), "{r:?}");
        }
    }

    #[test]
    fn doubling_changes_less_than_bound() {
        let t = centered_triangle();
        let a = intersection_body_area(&t, Vec2::new(0.1, 0.05), 128).unwrap();
        let b = intersection_body_area(&t, Vec2::new(0.1, 0.05), 256).unwrap();
        assert!((a.value - b.value).abs() <= a.error.max(1e-13 * a.value));
    }
}
