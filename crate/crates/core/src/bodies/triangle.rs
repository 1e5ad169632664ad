use super::Polygon;
use crate::geom::{self, Vec2};

/// A maximum-area triangle `T_K` inscribed in a polygon, with the outer
/// triangle whose side midpoints are the vertices of `T_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct InscribedTriangle {
    pub inner: [Vec2; 3],
    /// Indices of the inner triangle's vertices in the polygon.
    pub indices: [usize; 3],
    pub outer: [Vec2; 3],
    pub inner_area: f64,
    /// `A(K) / A(T_K)`, in `[1, 4)`.
    pub ratio: f64,
    /// Whether every vertex of `K` lies in the outer triangle (to 1e-12 relative).
    pub outer_contains: bool,
}

impl InscribedTriangle {
    pub fn outer_area(&self) -> f64 {
        geom::orient(self.outer[0], self.outer[1], self.outer[2]).abs() * 0.5
    }
}

/// Exhaustive search over vertex triples for a maximum-area inscribed
/// triangle. Ties keep the lexicographically first triple.
pub fn max_inscribed_triangle(poly: &Polygon) -> InscribedTriangle {
    let v = poly.vertices();
    let n = v.len();
    let mut best = (0.0, [0, 1, 2]);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = geom::orient(v[i], v[j], v[k]);
                if a > best.0 {
                    best = (a, [i, j, k]);
                }
            }
        }
    }
    let [i, j, k] = best.1;
    let inner = [v[i], v[j], v[k]];
    let inner_area = 0.5 * best.0;
    // q_i = p_j + p_k - p_i, so p_i is the midpoint of the side opposite q_i
    let outer = [inner[1] + inner[2] - inner[0], inner[0] + inner[2] - inner[1], inner[0] + inner[1] - inner[2]];
    let scale = geom::extent(v);
    let tol = 1e-12 * scale * scale;
    let outer_contains = v.iter().all(|&p| {
        (0..3).all(|e| geom::orient(outer[e], outer[(e + 1) % 3], p) >= -tol)
    });
    InscribedTriangle { inner, indices: best.1, outer, inner_area, ratio: poly.area() / inner_area, outer_contains }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn triangle_is_its_own_maximum() {
        let t = Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(0.3, 1.0)]).unwrap();
        let it = max_inscribed_triangle(&t);
        assert_relative_eq!(it.ratio, 1.0);
        assert!(it.outer_contains);
        assert_relative_eq!(it.outer_area(), 4.0 * it.inner_area, max_relative = 1e-12);
    }

    /// Independent brute force over all vertex triples, checking the value
    /// against the square's half and the hexagon's half area.
    #[test]
    fn square_and_hexagon_ratios() {
        let sq = Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]).unwrap();
        let it = max_inscribed_triangle(&sq);
        assert_relative_eq!(it.inner_area, 0.5);
        assert_relative_eq!(it.ratio, 2.0);
        let hex = Polygon::regular(6, 1.0).unwrap();
        let it = max_inscribed_triangle(&hex);
        assert_relative_eq!(it.inner_area, 3.0 * 3f64.sqrt() / 4.0, max_relative = 1e-14);
        assert_relative_eq!(it.ratio, 2.0, max_relative = 1e-14);
        assert!(it.outer_contains);
    }
}
