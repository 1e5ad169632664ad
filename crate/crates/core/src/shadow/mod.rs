//! Linear shadow systems of polygons.
//!
//! A linear shadow system moves every point `x` of a base polygon `K` to
//! `x + t·φ(x)·v`, where the speed `φ` is constant along chords parallel to
//! `v`. Here `φ` is a piecewise-linear function of the coordinate
//! `s = ⟨x, w⟩` across those chords, given by its values at a set of
//! generator points. `K_t` is the convex hull of the moved generators; the
//! map is a shear, so areas are preserved and uniform samples of `K`
//! push forward to uniform samples of `K_t`.

mod families;
mod profile;
mod reduce;

pub use families::{bm_triangle_bracket, family_generator, polygonal_disc, BMBracket, Family};
pub use profile::{convexity_profile, ConvexityProfile, ProfilePoint, SecondDifference};
pub use reduce::{reduce_to_triangle, Reduction, ReductionStep};

use crate::bodies::{steiner_symmetral, Polygon};
use crate::error::{Error, Result};
use crate::geom::{self, line_intersection_param, Vec2};

/// Relative tolerance for area constancy checks on construction.
const AREA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ShadowSystem {
    base: Polygon,
    direction: Vec2,
    generators: Vec<Vec2>,
    speeds: Vec<f64>,
    /// Breakpoints `(s, φ(s))` sorted by `s`.
    profile: Vec<(f64, f64)>,
    t_min: f64,
    t_max: f64,
    recentred: bool,
}

impl ShadowSystem {
    /// System moving `generators[i]` with speed `speeds[i]` along `v`, for
    /// `t ∈ [t_min, t_max]`. Generators with equal projection onto `v⊥` must
    /// share a speed, and `K_t` must have the area of `K_0` at both ends
    /// and the midpoint of the range.
    pub fn new(generators: Vec<Vec2>, speeds: Vec<f64>, v: Vec2, t_min: f64, t_max: f64) -> Result<ShadowSystem> {
        if generators.len() != speeds.len() {
            return Err(Error::InvalidParameter("one speed per generator".into()));
        }
        if v.norm() == 0.0 {
            return Err(Error::ZeroDirection);
        }
        if !(t_min <= 0.0 && 0.0 <= t_max) {
            return Err(Error::InvalidParameter(format!("range [{t_min}, {t_max}] must contain 0")));
        }
        let v = v / v.norm();
        let base = Polygon::new(&generators)?;
        let w = Vec2::new(v.y, -v.x);
        let tol = 1e-9 * geom::extent(&generators);
        let mut pairs: Vec<(f64, f64)> = generators.iter().zip(&speeds).map(|(g, &sp)| (g.dot(&w), sp)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut profile: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (s, sp) in pairs {
            match profile.last() {
                Some(&(ls, lsp)) if s - ls <= tol => {
                    if (sp - lsp).abs() > 1e-9 * (1.0 + lsp.abs()) {
                        return Err(Error::InvalidParameter(
                            "speeds differ on a chord parallel to the direction".into(),
                        ));
                    }
                }
                _ => profile.push((s, sp)),
            }
        }
        let sys = ShadowSystem { base, direction: v, generators, speeds, profile, t_min, t_max, recentred: false };
        let area = sys.base.area();
        for t in [t_min, 0.5 * (t_min + t_max), t_max] {
            let a = sys.eval(t)?.area();
            if (a - area).abs() > AREA_TOL * area {
                return Err(Error::InvalidParameter(format!("area not preserved at t = {t}: {a} vs {area}")));
            }
        }
        Ok(sys)
    }

    /// `K_0`.
    pub fn base(&self) -> &Polygon {
        &self.base
    }

    pub fn direction(&self) -> Vec2 {
        self.direction
    }

    pub fn generators(&self) -> &[Vec2] {
        &self.generators
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn range(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    pub fn is_recentred(&self) -> bool {
        self.recentred
    }

    /// Speed `φ(x)` of a point of `K_0`.
    pub fn speed_at(&self, x: Vec2) -> f64 {
        let w = Vec2::new(self.direction.y, -self.direction.x);
        let s = x.dot(&w);
        let pr = &self.profile;
        let k = pr.partition_point(|p| p.0 <= s);
        if k == 0 {
            return pr[0].1;
        }
        if k == pr.len() {
            return pr[pr.len() - 1].1;
        }
        let (s0, f0) = pr[k - 1];
        let (s1, f1) = pr[k];
        f0 + (f1 - f0) * (s - s0) / (s1 - s0)
    }

    /// `K_t`.
    pub fn eval(&self, t: f64) -> Result<Polygon> {
        let slack = 1e-12 * (self.t_max - self.t_min).abs().max(1.0);
        if !(t >= self.t_min - slack && t <= self.t_max + slack) {
            return Err(Error::ParameterOutOfRange { t, min: self.t_min, max: self.t_max });
        }
        let pts: Vec<Vec2> =
            self.generators.iter().zip(&self.speeds).map(|(g, sp)| g + t * sp * self.direction).collect();
        Polygon::new(&pts)
    }

    /// Rate `ω` with `γ(K_t) = γ(K_0) + t·ω·v`.
    pub fn centroid_drift(&self) -> f64 {
        let t = if self.t_max > 0.0 { self.t_max } else { self.t_min };
        if t == 0.0 {
            return 0.0;
        }
        let moved = self.eval(t).expect("range endpoint").centroid();
        (moved - self.base.centroid()).dot(&self.direction) / t
    }

    /// The same system with the centroid held fixed: every speed is reduced
    /// by the drift `ω`.
    pub fn recentred(&self) -> ShadowSystem {
        let omega = self.centroid_drift();
        let mut out = self.clone();
        out.speeds.iter_mut().for_each(|s| *s -= omega);
        out.profile.iter_mut().for_each(|p| p.1 -= omega);
        out.recentred = true;
        out
    }
}

/// `K_t` of `system`.
pub fn shadow_eval(system: &ShadowSystem, t: f64) -> Result<Polygon> {
    system.eval(t)
}

/// The shadow system through the Steiner symmetral of `poly` in direction
/// `v`: `K_1 = poly`, `K_0` is the symmetral and `K_{-1}` the mirror image
/// of `poly` in the line `v⊥`.
pub fn steiner_shadow(poly: &Polygon, v: Vec2) -> Result<ShadowSystem> {
    if v.norm() == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let v = v / v.norm();
    let w = Vec2::new(v.y, -v.x);
    let sym = steiner_symmetral(poly, v)?;
    let tol = 1e-12 * geom::extent(poly.vertices());
    let st: Vec<(f64, f64)> = poly.vertices().iter().map(|p| (p.dot(&w), p.dot(&v))).collect();
    let mut generators = Vec::new();
    let mut speeds = Vec::new();
    for s in crate::bodies::steiner_breakpoints(&st, tol) {
        if let Some((lo, hi)) = crate::bodies::steiner_chord_at(&st, s, tol) {
            let (half, mid) = (0.5 * (hi - lo), 0.5 * (hi + lo));
            generators.push(s * w + half * v);
            speeds.push(mid);
            if half > tol {
                generators.push(s * w - half * v);
                speeds.push(mid);
            }
        }
    }
    let sys = ShadowSystem::new(generators, speeds, v, -1.0, 1.0)?;
    debug_assert_eq!(sys.base.len(), sym.len());
    Ok(sys)
}

/// Basic shadow system at a polygon vertex together with its end positions.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicSystem {
    pub system: ShadowSystem,
    pub vertex: usize,
    /// End position of the vertex at `t = α`.
    pub q_prime: Vec2,
    /// End position of the vertex at `t = −β`.
    pub q_second: Vec2,
    pub alpha: f64,
    pub beta: f64,
    /// `Π_α` and `Π_{−β}`.
    pub endpoints: (Polygon, Polygon),
    /// Whether the `α` / `β` side was capped because the vertex can move
    /// without bound in that direction.
    pub capped: (bool, bool),
}

/// Largest displacement of a basic-system vertex, in units of the polygon's
/// extent, when nothing blocks it.
pub const DEFAULT_CAP: f64 = 4.0;

/// Basic shadow system moving vertex `i` parallel to the diagonal through
/// its two neighbours.
pub fn basic_system(poly: &Polygon, i: usize) -> Result<BasicSystem> {
    basic_system_with_cap(poly, i, DEFAULT_CAP)
}

pub fn basic_system_with_cap(poly: &Polygon, i: usize, cap: f64) -> Result<BasicSystem> {
    let k = poly.len();
    if k < 4 {
        return Err(Error::TriangleHasNoBasicSystem);
    }
    if i >= k {
        return Err(Error::VertexIndex { index: i, len: k });
    }
    let q = |j: usize| poly.vertex((i + j) % k);
    let (q1, q2, q3) = (q(0), q(1), q(2));
    let (qk, qk1) = (q(k - 1), q(k - 2));
    let u = q2 - qk;
    let limit = cap * geom::extent(poly.vertices()) / u.norm();
    let mut capped = (false, false);
    // q1' on the line through q_{k-1}, q_k (reached moving towards q_k, s < 0)
    let s1 = match line_intersection_param(q1, u, qk1, qk - qk1) {
        Some(s) if s < 0.0 => s,
        _ => {
            capped.0 = true;
            -limit
        }
    };
    let s2 = match line_intersection_param(q1, u, q2, q3 - q2) {
        Some(s) if s > 0.0 => s,
        _ => {
            capped.1 = true;
            limit
        }
    };
    let q_prime = q1 + s1 * u;
    let q_second = q1 + s2 * u;
    let span = q_prime - q_second;
    let alpha = -s1 / (s2 - s1);
    let beta = 1.0 - alpha;
    let mut speeds = vec![0.0; k];
    speeds[i] = span.norm();
    let system = ShadowSystem::new(poly.vertices().to_vec(), speeds, span, -beta, alpha)?;
    let endpoints = (system.eval(alpha)?, system.eval(-beta)?);
    Ok(BasicSystem { system, vertex: i, q_prime, q_second, alpha, beta, endpoints, capped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn unit_square() -> Polygon {
        Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn steiner_shadow_endpoints() {
        let p = Polygon::new(&[v(0.1, 0.0), v(1.3, 0.2), v(1.0, 1.1), v(0.2, 0.9), v(-0.4, 0.5)]).unwrap();
        let dir = v(0.3, 1.0).normalize();
        let s = steiner_shadow(&p, dir).unwrap();
        let sym = steiner_symmetral(&p, dir).unwrap();
        assert!(s.eval(0.0).unwrap().vertex_distance(&sym).unwrap() < 1e-10);
        assert!(s.eval(1.0).unwrap().vertex_distance(&p).unwrap() < 1e-10);
        // reflection in the line v⊥ through the origin
        let refl: Vec<Vec2> = p.vertices().iter().map(|x| x - 2.0 * x.dot(&dir) * dir).collect();
        let refl = Polygon::new(&refl).unwrap();
        assert!(s.eval(-1.0).unwrap().vertex_distance(&refl).unwrap() < 1e-10);
        for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            assert_relative_eq!(s.eval(t).unwrap().area(), p.area(), max_relative = 1e-12);
        }
    }

    #[test]
    fn basic_system_on_square() {
        let sq = unit_square();
        let i = sq.vertices().iter().position(|x| *x == v(0.0, 1.0)).unwrap();
        let b = basic_system(&sq, i).unwrap();
        assert_relative_eq!(b.q_prime, v(1.0, 2.0), epsilon = 1e-14);
        assert_relative_eq!(b.q_second, v(-1.0, 0.0), epsilon = 1e-14);
        assert_relative_eq!(b.alpha, 0.5, epsilon = 1e-14);
        assert_relative_eq!(b.beta, 0.5, epsilon = 1e-14);
        assert_eq!(b.capped, (false, false));
        let (p1, p2) = &b.endpoints;
        assert_eq!((p1.len(), p2.len()), (3, 3));
        assert_relative_eq!(p1.area(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(p2.area(), 1.0, max_relative = 1e-14);
        let expected = Polygon::new(&[v(1.0, 2.0), v(1.0, 0.0), v(0.0, 0.0)]).unwrap();
        assert!(p1.vertex_distance(&expected).unwrap() < 1e-14);
        assert!(b.system.eval(0.0).unwrap().vertex_distance(&sq).unwrap() < 1e-15);
    }

    // the endpoint lands on the line through two other vertices up to rounding
    #[test]
    fn basic_system_on_pentagon() {
        let pent = Polygon::regular(5, 1.0).unwrap();
        for i in 0..5 {
            let b = basic_system(&pent, i).unwrap();
            assert_eq!(b.endpoints.0.len(), 4);
            assert_eq!(b.endpoints.1.len(), 4);
        }
    }

    #[test]
    fn basic_system_rejects_triangle_and_bad_index() {
        let t = Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)]).unwrap();
        assert_eq!(basic_system(&t, 0), Err(Error::TriangleHasNoBasicSystem));
        assert_eq!(basic_system(&unit_square(), 4), Err(Error::VertexIndex { index: 4, len: 4 }));
    }

    #[test]
    fn centroid_moves_linearly() {
        let hex = Polygon::regular(6, 1.0).unwrap();
        let b = basic_system(&hex, 2).unwrap();
        let s = &b.system;
        let g0 = s.base().centroid();
        let omega = s.centroid_drift();
        for j in 0..5 {
            let t = -b.beta + (b.alpha + b.beta) * j as f64 / 4.0;
            let g = s.eval(t).unwrap().centroid();
            assert_relative_eq!(g, g0 + t * omega * s.direction(), epsilon = 1e-10);
        }
        let r = s.recentred();
        assert!(r.is_recentred());
        for t in [-b.beta, b.alpha] {
            assert_relative_eq!(r.eval(t).unwrap().centroid(), g0, epsilon = 1e-10);
        }
    }

    #[test]
    fn out_of_range() {
        let s = steiner_shadow(&unit_square(), v(0.0, 1.0)).unwrap();
        assert!(matches!(s.eval(1.5), Err(Error::ParameterOutOfRange { .. })));
    }

    #[test]
    fn inconsistent_speeds_rejected() {
        // two generators on the same vertical chord with different speeds
        let g = vec![v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)];
        let r = ShadowSystem::new(g, vec![0.0, 1.0, 0.0, 0.0], v(0.0, 1.0), -0.1, 0.1);
        assert!(r.is_err());
    }

    #[test]
    fn speed_interpolates_along_chords() {
        let sq = unit_square();
        let i = sq.vertices().iter().position(|x| *x == v(0.0, 1.0)).unwrap();
        let b = basic_system(&sq, i).unwrap();
        let s = &b.system;
        // the moving vertex has full speed; the diagonal through its neighbours is at rest
        assert_relative_eq!(s.speed_at(v(0.0, 1.0)), s.speeds()[i], max_relative = 1e-14);
        assert_relative_eq!(s.speed_at(v(0.5, 0.5)), 0.0, epsilon = 1e-14);
        assert_relative_eq!(s.speed_at(v(0.25, 0.75)), 0.5 * s.speeds()[i], max_relative = 1e-12);
    }
}
