//! Planar primitives shared by the polygon code: orientation tests, the
//! monotone-chain hull, shoelace moments and half-plane clipping.

use nalgebra::Vector2;

pub type Vec2 = Vector2<f64>;

/// Relative tolerance for orientation predicates, scaled by the squared
/// extent of the point set.
pub const REL_TOL: f64 = 1e-12;

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Twice the signed area of the triangle `abc` (positive when CCW).
#[inline]
pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    cross(b - a, c - a)
}

/// Rotation by +90 degrees.
#[inline]
pub fn perp(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// Largest absolute coordinate, used to scale tolerances.
pub fn extent(points: &[Vec2]) -> f64 {
    points
        .iter()
        .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
        .max(f64::MIN_POSITIVE)
}

/// Strictly convex CCW hull (Andrew's monotone chain). Collinear and
/// duplicate points are dropped. Returns fewer than three points when the
/// input is degenerate.
///
/// The chains use the plain orientation sign; nearly collinear vertices are
/// removed afterwards on the closed polygon. Applying the tolerance inside
/// the chains can drop a true extreme point when several points share an
/// x-coordinate up to rounding.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let scale = extent(&pts);
    let tol = REL_TOL * scale * scale;
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let mut i = 0;
    while hull.len() >= 3 && i < hull.len() {
        let n = hull.len();
        let (a, b, c) = (hull[(i + n - 1) % n], hull[i], hull[(i + 1) % n]);
        if orient(a, b, c) <= tol {
            hull.remove(i);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    hull
}

/// Signed shoelace area.
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        s += cross(poly[i], poly[(i + 1) % n]);
    }
    0.5 * s
}

/// Area, centroid and second moments `∫ x xᵀ` about the origin of a simple
/// CCW polygon, by summing signed triangles `[o, p_i, p_{i+1}]`.
pub fn raw_moments(poly: &[Vec2]) -> (f64, Vec2, [f64; 3]) {
    let n = poly.len();
    let mut area = 0.0;
    let mut first = Vec2::zeros();
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = cross(a, b);
        area += c;
        first += c * (a + b);
        sxx += c * (a.x * a.x + a.x * b.x + b.x * b.x);
        syy += c * (a.y * a.y + a.y * b.y + b.y * b.y);
        sxy += c * (2.0 * a.x * a.y + a.x * b.y + b.x * a.y + 2.0 * b.x * b.y);
    }
    let area = 0.5 * area;
    let centroid = first / (6.0 * area);
    (area, centroid, [sxx / 12.0, sxy / 24.0, syy / 12.0])
}

/// Clip a convex polygon to the half-plane `⟨normal, x⟩ ≤ offset`.
pub fn clip_halfplane(poly: &[Vec2], normal: Vec2, offset: f64) -> Vec<Vec2> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let fa = normal.dot(&a) - offset;
        let fb = normal.dot(&b) - offset;
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let s = fa / (fa - fb);
            out.push(a + s * (b - a));
        }
    }
    out
}

/// Intersection of the lines `p + s·u` and `q + r·w`; returns `s`, or `None`
/// for (near-)parallel lines.
pub fn line_intersection_param(p: Vec2, u: Vec2, q: Vec2, w: Vec2) -> Option<f64> {
    let den = cross(u, w);
    let scale = u.norm() * w.norm();
    if den.abs() <= 1e-14 * scale {
        return None;
    }
    Some(cross(q - p, w) / den)
}

/// Area of the convex hull of a handful of points, without allocation
/// beyond the supplied scratch buffer. Used in the inner Monte Carlo loop.
pub fn hull_area_flat(xy: &[f64], scratch: &mut Vec<Vec2>, hull: &mut Vec<Vec2>) -> f64 {
    let n = xy.len() / 2;
    if n == 3 {
        let (ax, ay) = (xy[0], xy[1]);
        return 0.5 * ((xy[2] - ax) * (xy[5] - ay) - (xy[3] - ay) * (xy[4] - ax)).abs();
    }
    scratch.clear();
    scratch.extend((0..n).map(|i| Vec2::new(xy[2 * i], xy[2 * i + 1])));
    scratch.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    hull.clear();
    for pass in 0..2 {
        let start = hull.len();
        for k in 0..n {
            let p = if pass == 0 { scratch[k] } else { scratch[n - 1 - k] };
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    signed_area(hull).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_keeps_extreme_point_on_near_vertical_edge() {
        let x = 0.8090169943749475;
        let pts = [
            Vec2::new(0.0, 1.0),
            Vec2::new(-0.95, 0.31),
            Vec2::new(x, 0.5877852522924731),
            Vec2::new(x - 1e-16, -1.3143277802978343),
            Vec2::new(x, -0.5877852522924731),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!(h.contains(&pts[3]));
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = [
            Vec2::new(0.0, 0.0),
            Vec2::new(0.5, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.5, 0.5),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((signed_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_moments() {
        let sq = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let (a, c, m) = raw_moments(&sq);
        assert!((a - 1.0).abs() < 1e-15);
        assert!((c - Vec2::new(0.5, 0.5)).norm() < 1e-15);
        assert!((m[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((m[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn flat_hull_area_matches_shoelace() {
        let xy = [0.0, 0.0, 2.0, 0.0, 1.0, 0.2, 2.0, 2.0, 0.0, 2.0];
        let mut s = Vec::new();
        let mut h = Vec::new();
        assert!((hull_area_flat(&xy, &mut s, &mut h) - 4.0).abs() < 1e-14);
    }
}
