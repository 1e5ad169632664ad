//! Maximum-area inscribed ellipse of a polygon.
//!
//! The ellipse is `{B u + c : |u| ≤ 1}` with `B` symmetric positive
//! definite. Containment in the half-plane `⟨n, x⟩ ≤ b` is the second-order
//! constraint `|B n| + ⟨n, c⟩ ≤ b`, and the area is `π det B`, so the
//! problem is to maximize `log det B` under one cone constraint per edge.
//! We solve it with a standard log-barrier path-following method.

use nalgebra::{Matrix2, SMatrix, SVector};

use super::Polygon;
use crate::error::{Error, Result};
use crate::geom::Vec2;

type V5 = SVector<f64, 5>;
type M5 = SMatrix<f64, 5, 5>;

/// Total Newton-step budget across all barrier stages.
pub const NEWTON_BUDGET: usize = 200;
const GAP_TARGET: f64 = 1e-8;
const BARRIER_GROWTH: f64 = 16.0;

/// An ellipse `c + S·B²` with symmetric positive-definite `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: Vec2,
    pub shape: Matrix2<f64>,
}

impl Ellipse {
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.shape.determinant()
    }

    /// Affine map sending this ellipse onto the unit disc.
    pub fn normalize(&self, x: Vec2) -> Vec2 {
        self.shape.try_inverse().map(|inv| inv * (x - self.center)).unwrap_or(Vec2::repeat(f64::NAN))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JohnEllipse {
    pub ellipse: Ellipse,
    /// Smallest `λ` with `P ⊆ λ·E` after mapping the ellipse to the unit
    /// disc; an upper bound on the Banach–Mazur distance to the disc.
    pub bm_disc_upper: f64,
    /// Duality-gap bound of the returned point (`m / t`).
    pub gap: f64,
    pub newton_steps: usize,
}

struct Problem {
    planes: Vec<(Vec2, f64)>,
}

impl Problem {
    fn slacks(&self, z: &V5) -> Option<Vec<f64>> {
        let det = z[0] * z[2] - z[1] * z[1];
        if !(z[0] > 0.0 && det > 0.0) {
            return None;
        }
        let mut out = Vec::with_capacity(self.planes.len());
        for (n, b) in &self.planes {
            let w = Vec2::new(z[0] * n.x + z[1] * n.y, z[1] * n.x + z[2] * n.y);
            let s = b - n.x * z[3] - n.y * z[4] - w.norm();
            if !(s > 0.0) {
                return None;
            }
            out.push(s);
        }
        Some(out)
    }

    /// Value of `t·(−log det B) − Σ log s_i`.
    fn value(&self, z: &V5, t: f64) -> Option<f64> {
        let s = self.slacks(z)?;
        let det = z[0] * z[2] - z[1] * z[1];
        Some(-t * det.ln() - s.iter().map(|x| x.ln()).sum::<f64>())
    }

    fn grad_hess(&self, z: &V5, t: f64) -> (V5, M5) {
        let det = z[0] * z[2] - z[1] * z[1];
        let gd = V5::new(z[2], -2.0 * z[1], z[0], 0.0, 0.0) / det;
        let mut d2 = M5::zeros();
        d2[(0, 2)] = 1.0;
        d2[(2, 0)] = 1.0;
        d2[(1, 1)] = -2.0;
        // ∇²log det = ∇²det/det − g gᵀ
        let hd = d2 / det - gd * gd.transpose();
        let mut g = -t * gd;
        let mut h = -t * hd;
        for (n, b) in &self.planes {
            let mut m = SMatrix::<f64, 2, 5>::zeros();
            m[(0, 0)] = n.x;
            m[(0, 1)] = n.y;
            m[(1, 1)] = n.x;
            m[(1, 2)] = n.y;
            let w = m * z;
            let w = Vec2::new(w[0], w[1]);
            let r = w.norm();
            let s = b - n.x * z[3] - n.y * z[4] - r;
            let mut ds = -(m.transpose() * w) / r;
            ds[3] -= n.x;
            ds[4] -= n.y;
            let proj = Matrix2::identity() / r - w * w.transpose() / (r * r * r);
            let d2s = -(m.transpose() * proj * m);
            g -= ds / s;
            h += ds * ds.transpose() / (s * s) - d2s / s;
        }
        (g, h)
    }
}

/// Maximum-area inscribed ellipse of `poly`, with the induced upper bound
/// on `δ_BM(P, B²)`.
pub fn john_ellipse(poly: &Polygon) -> Result<JohnEllipse> {
    // Rescale so the working problem is well conditioned, and start from a
    // disc around the centroid.
    let c0 = poly.centroid();
    let scale = poly.vertices().iter().map(|v| (v - c0).norm()).fold(0.0, f64::max);
    let work = poly.translate(-c0);
    let planes: Vec<(Vec2, f64)> = work.halfplanes().into_iter().map(|(n, c)| (n, c / scale)).collect();
    let m = planes.len() as f64;
    let r0 = 0.5 * planes.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let prob = Problem { planes };
    let mut z = V5::new(r0, 0.0, r0, 0.0, 0.0);
    let mut t = 1.0;
    let mut steps = 0;
    loop {
        // centering
        loop {
            let (g, h) = prob.grad_hess(&z, t);
            let dz = match h.cholesky() {
                Some(ch) => -ch.solve(&g),
                None => h.lu().solve(&(-g)).ok_or(Error::NoConvergence { gap: m / t })?,
            };
            let decrement = -g.dot(&dz);
            if decrement / 2.0 <= 1e-12 {
                break;
            }
            steps += 1;
            if steps > NEWTON_BUDGET {
                return Err(Error::NoConvergence { gap: m / t });
            }
            let f0 = prob.value(&z, t).expect("iterate stays feasible");
            let mut step = 1.0;
            loop {
                let cand = z + step * dz;
                if let Some(f) = prob.value(&cand, t) {
                    if f <= f0 - 0.25 * step * decrement {
                        z = cand;
                        break;
                    }
                }
                step *= 0.5;
                if step < 1e-14 {
                    return Err(Error::NoConvergence { gap: m / t });
                }
            }
        }
        if m / t <= GAP_TARGET {
            break;
        }
        t *= BARRIER_GROWTH;
    }
    let shape = Matrix2::new(z[0], z[1], z[1], z[2]) * scale;
    let center = Vec2::new(z[3], z[4]) * scale + c0;
    let ellipse = Ellipse { center, shape };
    let bm = poly.vertices().iter().map(|&v| ellipse.normalize(v).norm()).fold(0.0, f64::max);
    Ok(JohnEllipse { ellipse, bm_disc_upper: bm, gap: m / t, newton_steps: steps })
}
