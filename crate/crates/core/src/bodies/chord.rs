use super::Polygon;
use crate::error::{Error, Result};
use crate::geom::{self, Vec2};

/// The secant of a polygon through a base point `x` in direction `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub base: Vec2,
    pub direction: Vec2,
    /// Endpoint with the smaller coordinate along `direction`.
    pub a: Vec2,
    pub b: Vec2,
    pub midpoint: Vec2,
    /// Signed offset `⟨M(x) − x, v⟩` of the midpoint from the base point.
    pub offset: f64,
}

impl Chord {
    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }
}

/// Parameter interval `[s0, s1]` of `{x + s·v} ∩ P`, or `None` on a miss.
pub fn chord_extent(poly: &Polygon, x: Vec2, v: Vec2) -> Option<(f64, f64)> {
    let scale = geom::extent(poly.vertices()).max(x.norm());
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (n, c) in poly.halfplanes() {
        let rate = n.dot(&v);
        let slack = c - n.dot(&x);
        if rate.abs() <= 1e-15 {
            if slack < -1e-12 * scale {
                return None;
            }
            continue;
        }
        let s = slack / rate;
        if rate > 0.0 {
            hi = hi.min(s);
        } else {
            lo = lo.max(s);
        }
    }
    if lo > hi + 1e-12 * scale {
        None
    } else {
        Some((lo, hi.max(lo)))
    }
}

/// Chord `σ(x)` through `x` parallel to `v`, with midpoint `M(x)` and signed
/// offset `m(x)`.
pub fn chord(poly: &Polygon, x: Vec2, v: Vec2) -> Result<Chord> {
    let len = v.norm();
    if len == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let v = v / len;
    let (s0, s1) = chord_extent(poly, x, v).ok_or(Error::ChordMiss)?;
    let scale = geom::extent(poly.vertices());
    if s1 - s0 <= 1e-12 * scale {
        return Err(Error::ChordTangent);
    }
    let a = x + s0 * v;
    let b = x + s1 * v;
    let midpoint = 0.5 * (a + b);
    Ok(Chord { base: x, direction: v, a, b, midpoint, offset: 0.5 * (s0 + s1) })
}
