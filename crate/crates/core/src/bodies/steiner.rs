use super::Polygon;
use crate::error::Result;
use crate::geom::{self, Vec2};

/// Chord endpoints of `poly` along the line `{s·w + t·v}` expressed in the
/// `(s, t)` frame, evaluated from the boundary chains rather than by
/// clipping so that the extreme projections stay exact.
pub(crate) fn chord_at(st: &[(f64, f64)], s: f64, tol: f64) -> Option<(f64, f64)> {
    let n = st.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let (sa, ta) = st[i];
        let (sb, tb) = st[(i + 1) % n];
        if (sa - s).abs() <= tol {
            lo = lo.min(ta);
            hi = hi.max(ta);
        }
        let (smin, smax) = if sa < sb { (sa, sb) } else { (sb, sa) };
        if smax - smin > tol && s > smin && s < smax {
            let t = ta + (tb - ta) * (s - sa) / (sb - sa);
            lo = lo.min(t);
            hi = hi.max(t);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Frame `(w, v)` with `w = (v_y, -v_x)` spanning the symmetry line `H`.
pub(crate) fn frame(v: Vec2) -> (Vec2, Vec2) {
    let v = v / v.norm();
    (Vec2::new(v.y, -v.x), v)
}

/// Distinct projections of the vertices onto `H`, ascending, merged within `tol`.
pub(crate) fn breakpoints(st: &[(f64, f64)], tol: f64) -> Vec<f64> {
    let mut s: Vec<f64> = st.iter().map(|p| p.0).collect();
    s.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(s.len());
    for x in s {
        if out.last().is_none_or(|&l| x - l > tol) {
            out.push(x);
        }
    }
    out
}

/// Steiner symmetral of `poly` with respect to the line `H` through the
/// origin with normal `v`: every chord parallel to `v` is translated so its
/// midpoint lies on `H`.
pub fn steiner_symmetral(poly: &Polygon, v: Vec2) -> Result<Polygon> {
    if v.norm() == 0.0 {
        return Err(crate::error::Error::ZeroDirection);
    }
    let (w, v) = frame(v);
    let tol = 1e-12 * geom::extent(poly.vertices());
    let st: Vec<(f64, f64)> = poly.vertices().iter().map(|p| (p.dot(&w), p.dot(&v))).collect();
    let mut pts = Vec::with_capacity(2 * st.len());
    for s in breakpoints(&st, tol) {
        if let Some((lo, hi)) = chord_at(&st, s, tol) {
            let half = 0.5 * (hi - lo);
            pts.push(s * w + half * v);
            pts.push(s * w - half * v);
        }
    }
    Polygon::new(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn triangle_symmetral() {
        let t = Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)]).unwrap();
        let s = steiner_symmetral(&t, v(0.0, 1.0)).unwrap();
        let expected = Polygon::new(&[v(0.0, 0.5), v(0.0, -0.5), v(1.0, 0.0)]).unwrap();
        assert!(s.vertex_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn square_symmetral() {
        let sq = Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]).unwrap();
        let s = steiner_symmetral(&sq, v(0.0, 1.0)).unwrap();
        let expected = Polygon::new(&[v(0.0, -0.5), v(1.0, -0.5), v(1.0, 0.5), v(0.0, 0.5)]).unwrap();
        assert!(s.vertex_distance(&expected).unwrap() < 1e-15);
        assert_relative_eq!(s.area(), 1.0);
    }

    #[test]
    fn centered_symmetric_polygon_is_fixed() {
        let oct = Polygon::regular(8, 1.0).unwrap();
        let s = steiner_symmetral(&oct, v(0.0, 1.0)).unwrap();
        assert!(s.vertex_distance(&oct).unwrap() < 1e-14);
    }
}
