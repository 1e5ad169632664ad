use serde::{Deserialize, Serialize};

use crate::bodies::{max_inscribed_triangle, Body, Polygon};
use crate::error::{Error, Result};
use crate::geom::Vec2;

/// Bracket `lower ≤ δ_BM ≤ upper` on a Banach–Mazur distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BMBracket {
    pub lower: f64,
    pub upper: f64,
    /// Whether the lower end is excluded.
    pub lower_open: bool,
    pub upper_closed: bool,
    pub lower_method: String,
    pub upper_method: String,
}

/// Bracket on `δ_BM(P, T²)` from the area ratio `ρ = A(P)/A(T_P)` of the
/// largest inscribed triangle: `δ_BM ∈ (√ρ, ρ]`, collapsing to `[1, 1]`
/// for triangles.
pub fn bm_triangle_bracket(poly: &Polygon) -> BMBracket {
    let ins = max_inscribed_triangle(poly);
    let rho = ins.ratio.max(1.0);
    let triangle = poly.len() == 3 || rho - 1.0 <= 1e-12;
    let rho = if triangle { 1.0 } else { rho };
    BMBracket {
        lower: rho.sqrt(),
        upper: rho,
        lower_open: !triangle,
        upper_closed: true,
        lower_method: "sqrt of area ratio to largest inscribed triangle".into(),
        upper_method: "area ratio to largest inscribed triangle".into(),
    }
}

/// Parametric families used by the stability sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "param")]
pub enum Family {
    /// `conv(D ∪ {±(1+ε)e₁})` for the polygonal unit disc `D`.
    Spindle(f64),
    /// The triangle `conv{0, e₁, e₂}` with the corner `δ·T` at the origin
    /// cut off.
    TruncatedTriangle(f64),
}

/// Polygonal unit disc with `resolution` vertices at angles `2πk/resolution`
/// (so `±e₁` are vertices for even counts).
pub fn polygonal_disc(resolution: usize) -> Result<Polygon> {
    if resolution < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: resolution });
    }
    // lower half mirrored from the upper half, ±e₁ exact
    let pts: Vec<Vec2> = (0..resolution)
        .map(|k| {
            let j = k.min(resolution - k);
            if 2 * j == resolution {
                return Vec2::new(-1.0, 0.0);
            }
            let (sin, cos) = (std::f64::consts::TAU * j as f64 / resolution as f64).sin_cos();
            let y = if j == 0 { 0.0 } else { sin };
            Vec2::new(cos, if k > resolution / 2 { -y } else { y })
        })
        .collect();
    Polygon::new(&pts)
}

/// Member of a sweep family. `resolution` is the vertex count of the disc
/// approximation (even, at least 8) and is ignored for truncated triangles.
pub fn family_generator(family: Family, resolution: usize) -> Result<Body> {
    match family {
        Family::Spindle(eps) => {
            if !(0.0..1.0).contains(&eps) {
                return Err(Error::InvalidParameter(format!("spindle parameter {eps} outside [0, 1)")));
            }
            if resolution < 8 || resolution % 2 == 1 {
                return Err(Error::InvalidParameter(format!("disc resolution {resolution} must be even and ≥ 8")));
            }
            let disc = polygonal_disc(resolution)?;
            let mut pts = disc.vertices().to_vec();
            pts.push(Vec2::new(1.0 + eps, 0.0));
            pts.push(Vec2::new(-1.0 - eps, 0.0));
            Ok(Body::Polygon(Polygon::new(&pts)?))
        }
        Family::TruncatedTriangle(delta) => {
            if !(0.0..1.0).contains(&delta) {
                return Err(Error::InvalidParameter(format!("truncation {delta} outside [0, 1)")));
            }
            let pts = if delta == 0.0 {
                vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]
            } else {
                vec![Vec2::new(delta, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(0.0, delta)]
            };
            Ok(Body::Polygon(Polygon::new(&pts)?))
        }
    }
}
