use super::Polygon;
use crate::error::{Error, Result};

/// Polar body `{y : ⟨x, y⟩ ≤ 1 for all x ∈ P}` about the origin. Each edge
/// `⟨n, x⟩ ≤ c` of `P` becomes the vertex `n / c`.
pub fn polar_dual(poly: &Polygon) -> Result<Polygon> {
    if !poly.contains_interior(crate::geom::Vec2::zeros()) {
        return Err(Error::OriginNotInterior);
    }
    let pts: Vec<_> = poly.halfplanes().into_iter().map(|(n, c)| n / c).collect();
    Polygon::new(&pts)
}
