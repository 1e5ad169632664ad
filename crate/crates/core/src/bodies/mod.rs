//! Exact convex bodies: planar polygons, balls, ellipsoids and simplices,
//! together with the deterministic geometry the estimators build on.

mod chord;
mod io;
mod john;
mod polar;
mod steiner;
mod triangle;

pub use chord::{chord, chord_extent, Chord};
pub use io::{body_from_json, body_to_json, load_body, save_body, BodyFile};
pub use john::{john_ellipse, Ellipse, JohnEllipse};
pub use polar::polar_dual;
pub use steiner::steiner_symmetral;
pub(crate) use steiner::{breakpoints as steiner_breakpoints, chord_at as steiner_chord_at};
pub use triangle::{max_inscribed_triangle, InscribedTriangle};

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::error::{Error, Result};
use crate::geom::{self, Vec2};
use crate::moments::kappa;

/// A strictly convex polygon with vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

/// Area, centroid and inertia matrix (second moments about the centroid).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonMeasures {
    pub area: f64,
    pub centroid: Vec2,
    pub inertia: Matrix2<f64>,
}

impl Polygon {
    /// Canonical polygon spanned by `points`: convex hull, CCW, collinear and
    /// interior points removed.
    pub fn new(points: &[Vec2]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: points.len() });
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        let hull = geom::convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::DegenerateHull);
        }
        let ext = geom::extent(&hull);
        if geom::signed_area(&hull) <= geom::REL_TOL * ext * ext {
            return Err(Error::DegenerateHull);
        }
        Ok(Polygon { vertices: hull })
    }

    /// Like [`Polygon::new`], but every input point must survive as a hull
    /// vertex.
    pub fn from_extreme_points(points: &[Vec2]) -> Result<Self> {
        let poly = Self::new(points)?;
        let scale = geom::extent(points);
        for (i, p) in points.iter().enumerate() {
            if !poly.vertices.iter().any(|v| (v - p).norm() <= 1e-12 * scale) {
                return Err(Error::NonExtremePoint(i));
            }
        }
        Ok(poly)
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius` about the
    /// origin; vertex `k` sits at angle `(2k + 1)π/n`.
    pub fn regular(n: usize, radius: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: n });
        }
        let pts: Vec<Vec2> = (0..n)
            .map(|k| {
                let a = std::f64::consts::PI * (2 * k + 1) as f64 / n as f64;
                Vec2::new(radius * a.cos(), radius * a.sin())
            })
            .collect();
        Self::new(&pts)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        let n = self.vertices.len();
        self.vertices[i % n]
    }

    pub fn area(&self) -> f64 {
        geom::signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Vec2 {
        geom::raw_moments(&self.vertices).1
    }

    /// Exact area, centroid and centred inertia matrix `∫ (x-γ)(x-γ)ᵀ dx`.
    pub fn measures(&self) -> PolygonMeasures {
        let (area, c, [sxx, sxy, syy]) = geom::raw_moments(&self.vertices);
        let inertia = Matrix2::new(
            sxx - area * c.x * c.x,
            sxy - area * c.x * c.y,
            sxy - area * c.x * c.y,
            syy - area * c.y * c.y,
        );
        PolygonMeasures { area, centroid: c, inertia }
    }

    pub fn translate(&self, shift: Vec2) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|v| v + shift).collect() }
    }

    /// Image under `x ↦ Ax + b`, re-oriented counterclockwise.
    pub fn transform(&self, linear: &Matrix2<f64>, shift: Vec2) -> Result<Polygon> {
        let det = linear.determinant();
        let scale = linear.abs().max();
        if !(det.abs() > 1e-14 * scale * scale) {
            return Err(Error::SingularMap);
        }
        let mut verts: Vec<Vec2> = self.vertices.iter().map(|v| linear * v + shift).collect();
        if det < 0.0 {
            verts.reverse();
        }
        Ok(Polygon { vertices: verts })
    }

    /// Edges as outward normals `n_i` with offsets `c_i`, so that the polygon
    /// is `{x : ⟨n_i, x⟩ ≤ c_i}`. Normals are unit length.
    pub fn halfplanes(&self) -> Vec<(Vec2, f64)> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                let e = b - a;
                let normal = Vec2::new(e.y, -e.x) / e.norm();
                (normal, normal.dot(&a))
            })
            .collect()
    }

    pub fn support(&self, u: Vec2) -> f64 {
        self.vertices.iter().map(|v| v.dot(&u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Width in direction `u` (unit): `h(u) + h(-u)`.
    pub fn width(&self, u: Vec2) -> f64 {
        self.support(u) + self.support(-u)
    }

    /// Whether `o` lies in the interior, with a relative margin.
    pub fn contains_interior(&self, o: Vec2) -> bool {
        let scale = geom::extent(&self.vertices);
        self.halfplanes().iter().all(|(n, c)| c - n.dot(&o) > 1e-12 * scale)
    }

    pub fn contains(&self, x: Vec2, tol: f64) -> bool {
        self.halfplanes().iter().all(|(n, c)| n.dot(&x) <= c + tol)
    }

    /// Radial function about `o`: `max{t ≥ 0 : o + t·u ∈ P}`.
    pub fn radial(&self, u: Vec2, o: Vec2) -> Result<f64> {
        if !self.contains_interior(o) {
            return Err(Error::OriginNotInterior);
        }
        Ok(self.radial_unchecked(u, o))
    }

    pub(crate) fn radial_unchecked(&self, u: Vec2, o: Vec2) -> f64 {
        let n = self.vertices.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = self.vertices[i] - o;
            let b = self.vertices[(i + 1) % n] - o;
            // outward (unnormalized) edge normal; the ray exits where ⟨n, t·u⟩ = ⟨n, a⟩
            let e = b - a;
            let normal = Vec2::new(e.y, -e.x);
            let den = normal.dot(&u);
            if den > 0.0 {
                let t = normal.dot(&a) / den;
                if t >= 0.0 {
                    best = best.min(t);
                }
            }
        }
        best
    }

    /// Vertex list rotated so that the lexicographically smallest vertex
    /// comes first. Two canonical polygons with equal vertex sets compare
    /// equal after this.
    pub fn normalized_start(&self) -> Vec<Vec2> {
        let k = (0..self.vertices.len())
            .min_by(|&i, &j| {
                let (a, b) = (self.vertices[i], self.vertices[j]);
                a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y))
            })
            .unwrap_or(0);
        let mut v = self.vertices.clone();
        v.rotate_left(k);
        v
    }

    /// Maximum distance between corresponding vertices, after aligning the
    /// start vertex. `None` when the vertex counts differ.
    pub fn vertex_distance(&self, other: &Polygon) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let a = &self.vertices;
        let b = &other.vertices;
        let n = a.len();
        (0..n)
            .map(|shift| (0..n).map(|i| (a[i] - b[(i + shift) % n]).norm()).fold(0.0, f64::max))
            .min_by(f64::total_cmp)
    }

    /// Strict convexity and orientation check used by tests and loaders.
    pub fn is_strictly_convex_ccw(&self) -> bool {
        let n = self.vertices.len();
        n >= 3
            && (0..n).all(|i| {
                geom::orient(self.vertices[i], self.vertices[(i + 1) % n], self.vertices[(i + 2) % n]) > 0.0
            })
    }
}

/// A `d`-dimensional ellipsoid `c + L·B^d` for a non-singular `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    linear: DMatrix<f64>,
    center: DVector<f64>,
}

impl Ellipsoid {
    /// Ellipsoid with symmetric positive-definite shape matrix `shape`,
    /// i.e. the image of the unit ball under `shape`.
    pub fn new(shape: DMatrix<f64>, center: DVector<f64>) -> Result<Self> {
        let d = shape.nrows();
        if d == 0 || shape.ncols() != d {
            return Err(Error::InvalidDimension(d));
        }
        if center.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: center.len() });
        }
        let asym = (&shape - shape.transpose()).abs().max();
        if asym > 1e-12 * shape.abs().max().max(1.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let eig = shape.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Ellipsoid { linear: shape, center })
    }

    pub(crate) fn from_linear(linear: DMatrix<f64>, center: DVector<f64>) -> Self {
        Ellipsoid { linear, center }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    /// The generating linear map `L` (the sampler pushes ball points through it).
    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    /// Symmetric positive-definite shape matrix `(L Lᵀ)^{1/2}`.
    pub fn shape_matrix(&self) -> DMatrix<f64> {
        let g = &self.linear * self.linear.transpose();
        let eig = g.symmetric_eigen();
        let sq = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        &eig.eigenvectors * DMatrix::from_diagonal(&sq) * eig.eigenvectors.transpose()
    }

    pub fn volume(&self) -> f64 {
        kappa(self.dim()) * self.linear.determinant().abs()
    }
}

/// A non-degenerate simplex given by its `d + 1` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<DVector<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Self> {
        let d = vertices.len().saturating_sub(1);
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        let s = Simplex { vertices };
        let scale = s.vertices.iter().map(|v| v.amax()).fold(0.0, f64::max).max(1e-300);
        if !(s.volume() > 1e-12 * scale.powi(d as i32)) {
            return Err(Error::DegenerateHull);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn volume(&self) -> f64 {
        crate::sampling::simplex_volume(&self.vertices)
    }

    pub fn centroid(&self) -> DVector<f64> {
        let mut c = DVector::zeros(self.dim());
        for v in &self.vertices {
            c += v;
        }
        c / self.vertices.len() as f64
    }

    /// Barycentric coordinates of `x`.
    pub fn barycentric(&self, x: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let base = &self.vertices[0];
        let m = DMatrix::from_fn(d, d, |r, c| self.vertices[c + 1][r] - base[r]);
        let lam = m.lu().solve(&(x - base)).unwrap_or_else(|| DVector::from_element(d, f64::NAN));
        let mut out = DVector::zeros(d + 1);
        out[0] = 1.0 - lam.sum();
        for i in 0..d {
            out[i + 1] = lam[i];
        }
        out
    }
}

/// A convex body.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Polygon(Polygon),
    Ball { dim: usize, radius: f64, center: DVector<f64> },
    Ellipsoid(Ellipsoid),
    Simplex(Simplex),
}

/// Which standard body to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    /// Unit ball `B^d`.
    Ball,
    /// `conv{0, e_1, …, e_d}`.
    Simplex,
    /// `[-1, 1]²`.
    Square,
    /// Regular `n`-gon inscribed in the unit circle.
    RegularPolygon,
}

/// Support and radial function values in one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Directional {
    pub support: f64,
    pub radial: f64,
}

/// Standard bodies; `param` is the dimension, or the side count for
/// [`StandardKind::RegularPolygon`] (ignored for the square).
pub fn standard_body(kind: StandardKind, param: usize) -> Result<Body> {
    match kind {
        StandardKind::Ball => {
            if param == 0 {
                return Err(Error::InvalidDimension(0));
            }
            Body::ball(param, 1.0, DVector::zeros(param))
        }
        StandardKind::Simplex => {
            if param == 0 {
                return Err(Error::InvalidDimension(0));
            }
            if param == 2 {
                return Ok(Body::Polygon(Polygon::new(&[
                    Vec2::new(0.0, 0.0),
                    Vec2::new(1.0, 0.0),
                    Vec2::new(0.0, 1.0),
                ])?));
            }
            let mut verts = vec![DVector::zeros(param)];
            for i in 0..param {
                let mut e = DVector::zeros(param);
                e[i] = 1.0;
                verts.push(e);
            }
            Ok(Body::Simplex(Simplex::new(verts)?))
        }
        StandardKind::Square => Ok(Body::Polygon(Polygon::new(&[
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
        ])?)),
        StandardKind::RegularPolygon => Ok(Body::Polygon(Polygon::regular(param, 1.0)?)),
    }
}

/// Canonical polygon from raw points (see [`Polygon::new`]).
pub fn make_polygon(points: &[Vec2]) -> Result<Body> {
    Ok(Body::Polygon(Polygon::new(points)?))
}

impl Body {
    pub fn ball(dim: usize, radius: f64, center: DVector<f64>) -> Result<Body> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        if center.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: center.len() });
        }
        Ok(Body::Ball { dim, radius, center })
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::Polygon(_) => 2,
            Body::Ball { dim, .. } => *dim,
            Body::Ellipsoid(e) => e.dim(),
            Body::Simplex(s) => s.dim(),
        }
    }

    pub fn as_polygon(&self) -> Option<&Polygon> {
        match self {
            Body::Polygon(p) => Some(p),
            _ => None,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Body::Polygon(p) => p.area(),
            Body::Ball { dim, radius, .. } => kappa(*dim) * radius.powi(*dim as i32),
            Body::Ellipsoid(e) => e.volume(),
            Body::Simplex(s) => s.volume(),
        }
    }

    /// Exact centroid.
    pub fn centroid(&self) -> DVector<f64> {
        match self {
            Body::Polygon(p) => {
                let c = p.centroid();
                DVector::from_vec(vec![c.x, c.y])
            }
            Body::Ball { center, .. } => center.clone(),
            Body::Ellipsoid(e) => e.center.clone(),
            Body::Simplex(s) => s.centroid(),
        }
    }

    /// Image under `x ↦ Ax + b`, staying in the same family (balls become
    /// ellipsoids).
    pub fn affine_apply(&self, linear: &DMatrix<f64>, shift: &DVector<f64>) -> Result<Body> {
        let d = self.dim();
        if linear.nrows() != d || linear.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: linear.nrows() });
        }
        if shift.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: shift.len() });
        }
        let det = linear.determinant();
        let scale = linear.amax().max(f64::MIN_POSITIVE);
        if !(det.abs() > 1e-14 * scale.powi(d as i32)) {
            return Err(Error::SingularMap);
        }
        Ok(match self {
            Body::Polygon(p) => {
                let a = Matrix2::new(linear[(0, 0)], linear[(0, 1)], linear[(1, 0)], linear[(1, 1)]);
                Body::Polygon(p.transform(&a, Vec2::new(shift[0], shift[1]))?)
            }
            Body::Ball { radius, center, .. } => Body::Ellipsoid(Ellipsoid::from_linear(
                linear * *radius,
                linear * center + shift,
            )),
            Body::Ellipsoid(e) => {
                Body::Ellipsoid(Ellipsoid::from_linear(linear * &e.linear, linear * &e.center + shift))
            }
            Body::Simplex(s) => Body::Simplex(Simplex {
                vertices: s.vertices.iter().map(|v| linear * v + shift).collect(),
            }),
        })
    }

    /// Support function `h_K(u)` and radial function `ρ_K(u)` about `o`.
    /// `u` need not be normalized; both values refer to the unit vector.
    pub fn directional(&self, u: &DVector<f64>, o: &DVector<f64>) -> Result<Directional> {
        let d = self.dim();
        if u.len() != d || o.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: u.len() });
        }
        let norm = u.norm();
        if norm == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let u = u / norm;
        match self {
            Body::Polygon(p) => {
                let (uu, oo) = (Vec2::new(u[0], u[1]), Vec2::new(o[0], o[1]));
                Ok(Directional { support: p.support(uu), radial: p.radial(uu, oo)? })
            }
            Body::Ball { radius, center, .. } => {
                let e = Ellipsoid::from_linear(DMatrix::identity(d, d) * *radius, center.clone());
                ellipsoid_directional(&e, &u, o)
            }
            Body::Ellipsoid(e) => ellipsoid_directional(e, &u, o),
            Body::Simplex(s) => {
                let support = s.vertices.iter().map(|v| v.dot(&u)).fold(f64::NEG_INFINITY, f64::max);
                let b0 = s.barycentric(o);
                if b0.iter().any(|&l| !(l > 1e-12)) {
                    return Err(Error::OriginNotInterior);
                }
                let b1 = s.barycentric(&(o + &u));
                let mut t = f64::INFINITY;
                for (l0, l1) in b0.iter().zip(b1.iter()) {
                    let rate = l1 - l0;
                    if rate < 0.0 {
                        t = t.min(-l0 / rate);
                    }
                }
                Ok(Directional { support, radial: t })
            }
        }
    }
}

fn ellipsoid_directional(e: &Ellipsoid, u: &DVector<f64>, o: &DVector<f64>) -> Result<Directional> {
    let support = e.center.dot(u) + (e.linear.transpose() * u).norm();
    let inv = e.linear.clone().try_inverse().ok_or(Error::SingularMap)?;
    let a = &inv * (o - &e.center);
    let b = &inv * u;
    // |a + t b|² = 1
    let (aa, ab, bb) = (a.dot(&a), a.dot(&b), b.dot(&b));
    if aa >= 1.0 - 1e-12 {
        return Err(Error::OriginNotInterior);
    }
    let t = (-ab + (ab * ab - bb * (aa - 1.0)).sqrt()) / bb;
    Ok(Directional { support, radial: t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn make_polygon_examples() {
        let t = Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)]).unwrap();
        assert_relative_eq!(t.area(), 0.5);
        let sq = Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0), v(0.5, 0.5)]).unwrap();
        assert_eq!(sq.len(), 4);
        assert_relative_eq!(sq.area(), 1.0);
        assert_eq!(Polygon::new(&[v(0.0, 0.0), v(1.0, 1.0), v(2.0, 2.0)]), Err(Error::DegenerateHull));
        assert_eq!(Polygon::new(&[v(0.0, 0.0), v(1.0, 1.0)]), Err(Error::TooFewPoints { needed: 3, got: 2 }));
    }

    #[test]
    fn flagged_interior_point_rejected() {
        let pts = [v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0), v(0.5, 0.5)];
        assert_eq!(Polygon::from_extreme_points(&pts), Err(Error::NonExtremePoint(4)));
        assert!(Polygon::from_extreme_points(&pts[..4]).is_ok());
    }

    #[test]
    fn standard_bodies() {
        let t = standard_body(StandardKind::Simplex, 2).unwrap();
        assert_relative_eq!(t.volume(), 0.5);
        let b = standard_body(StandardKind::Ball, 3).unwrap();
        assert_relative_eq!(b.volume(), 4.0 * std::f64::consts::PI / 3.0, max_relative = 1e-13);
        let sq = standard_body(StandardKind::RegularPolygon, 4).unwrap();
        let p = sq.as_polygon().unwrap();
        assert_relative_eq!(p.area(), 2.0, max_relative = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(p.vertices().iter().all(|q| (q.x.abs() - h).abs() < 1e-15 && (q.y.abs() - h).abs() < 1e-15));
        let s3 = standard_body(StandardKind::Simplex, 3).unwrap();
        assert_relative_eq!(s3.volume(), 1.0 / 6.0, max_relative = 1e-14);
        assert_eq!(standard_body(StandardKind::Ball, 0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn measures_of_square_and_triangle() {
        let sq = Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]).unwrap();
        let m = sq.measures();
        assert_relative_eq!(m.area, 1.0);
        assert_relative_eq!(m.centroid, v(0.5, 0.5), epsilon = 1e-15);
        assert_relative_eq!(m.inertia, Matrix2::new(1.0 / 12.0, 0.0, 0.0, 1.0 / 12.0), epsilon = 1e-15);
        let t = Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)]).unwrap();
        let m = t.measures();
        assert_relative_eq!(m.area, 0.5);
        assert_relative_eq!(m.centroid, v(1.0 / 3.0, 1.0 / 3.0), epsilon = 1e-15);
    }

    #[test]
    fn measures_affine_equivariance() {
        let p = Polygon::regular(7, 1.3).unwrap().translate(v(0.2, -0.4));
        let a = Matrix2::new(1.7, -0.3, 0.4, 0.9);
        let b = v(-2.0, 0.5);
        let q = p.transform(&a, b).unwrap();
        let (mp, mq) = (p.measures(), q.measures());
        assert_relative_eq!(mq.area, mp.area * a.determinant().abs(), max_relative = 1e-12);
        assert_relative_eq!(mq.centroid, a * mp.centroid + b, epsilon = 1e-12);
        assert_relative_eq!(mq.inertia, a * mp.inertia * a.transpose() * a.determinant().abs(), epsilon = 1e-12);
    }

    #[test]
    fn affine_apply_examples() {
        let sq = standard_body(StandardKind::Square, 0).unwrap();
        let moved = sq.affine_apply(&DMatrix::identity(2, 2), &DVector::from_vec(vec![1.0, 0.0])).unwrap();
        let p = moved.as_polygon().unwrap();
        assert!(p.vertices().iter().any(|q| (q - v(2.0, 1.0)).norm() < 1e-15));

        let disc = standard_body(StandardKind::Ball, 2).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let e = disc.affine_apply(&a, &DVector::zeros(2)).unwrap();
        assert!(matches!(e, Body::Ellipsoid(_)));
        assert_relative_eq!(e.volume(), std::f64::consts::PI, max_relative = 1e-14);

        let refl = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let r = sq.affine_apply(&refl, &DVector::zeros(2)).unwrap();
        assert!(r.as_polygon().unwrap().is_strictly_convex_ccw());

        let sing = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(sq.affine_apply(&sing, &DVector::zeros(2)), Err(Error::SingularMap));
    }

    #[test]
    fn ellipsoid_shape_matrix_is_spd() {
        let ball = Body::ball(2, 1.0, DVector::zeros(2)).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -0.5, 0.3]);
        let Body::Ellipsoid(e) = ball.affine_apply(&a, &DVector::zeros(2)).unwrap() else { panic!() };
        let s = e.shape_matrix();
        assert_relative_eq!(s.clone(), s.transpose(), epsilon = 1e-14);
        assert_relative_eq!(&s * &s, &a * a.transpose(), epsilon = 1e-12);
        assert!(Ellipsoid::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]), DVector::zeros(2)).is_err());
    }

    #[test]
    fn directional_examples() {
        let sq = standard_body(StandardKind::Square, 0).unwrap();
        let o = DVector::zeros(2);
        let d = sq.directional(&DVector::from_vec(vec![1.0, 0.0]), &o).unwrap();
        assert_relative_eq!(d.support, 1.0);
        assert_relative_eq!(d.radial, 1.0);
        let d = sq.directional(&DVector::from_vec(vec![1.0, 1.0]), &o).unwrap();
        assert_relative_eq!(d.support, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(d.radial, 2f64.sqrt(), max_relative = 1e-15);
        let disc = standard_body(StandardKind::Ball, 2).unwrap();
        let d = disc.directional(&DVector::from_vec(vec![0.3, -0.7]), &o).unwrap();
        assert_relative_eq!(d.support, 1.0, max_relative = 1e-15);
        assert_relative_eq!(d.radial, 1.0, max_relative = 1e-15);
        let far = DVector::from_vec(vec![3.0, 0.0]);
        assert_eq!(sq.directional(&DVector::from_vec(vec![1.0, 0.0]), &far), Err(Error::OriginNotInterior));
        assert_eq!(disc.directional(&DVector::from_vec(vec![1.0, 0.0]), &far), Err(Error::OriginNotInterior));
    }

    #[test]
    fn simplex_directional() {
        let s = standard_body(StandardKind::Simplex, 3).unwrap();
        let c = s.centroid();
        let d = s.directional(&DVector::from_vec(vec![-1.0, 0.0, 0.0]), &c).unwrap();
        assert_relative_eq!(d.radial, 0.25, max_relative = 1e-12);
        assert_relative_eq!(d.support, 0.0);
    }
}
