//! Polar-coordinate estimator for `E^p_o` of a polygon.
//!
//! Writing `x = r(cos a, sin a)`, `y = s(cos b, sin b)` and integrating the
//! radii out gives
//!
//! ```text
//! ∫_K∫_K |x∧y|^p dx dy = ∫∫ |sin(a−b)|^p ρ(a)^{p+2} ρ(b)^{p+2} / (p+2)² da db,
//! ```
//!
//! a two-dimensional integral over angle pairs. We estimate it by plain Monte
//! Carlo over uniform `(a, b)`, using the disc of equal area (whose integral
//! is known in closed form) as a control variate. For near-round bodies the
//! per-sample difference is tiny, which is what the ball stability sweep
//! needs.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use rayon::prelude::*;

use super::{FunctionalSpec, MomentEstimate, CHUNK, MIN_SAMPLES};
use crate::bodies::Polygon;
use crate::error::{Error, Result};
use crate::geom::{cross, Vec2};
use crate::moments::ln_gamma;
use crate::sampling::Uniforms;
use crate::stats::Accumulator;

/// Radial function of a polygon about an interior point, with `O(log n)`
/// lookup by angle.
#[derive(Debug, Clone)]
pub struct RadialTable {
    angles: Vec<f64>,
    rel: Vec<Vec2>,
}

impl RadialTable {
    pub fn new(poly: &Polygon, o: Vec2) -> Result<RadialTable> {
        if !poly.contains_interior(o) {
            return Err(Error::OriginNotInterior);
        }
        let mut rel: Vec<Vec2> = poly.vertices().iter().map(|v| v - o).collect();
        let start = (0..rel.len())
            .min_by(|&i, &j| angle(rel[i]).total_cmp(&angle(rel[j])))
            .unwrap_or(0);
        rel.rotate_left(start);
        let angles = rel.iter().map(|&v| angle(v)).collect();
        Ok(RadialTable { angles, rel })
    }

    /// `ρ(θ)`: distance from the centre to the boundary in direction `θ`.
    #[inline]
    pub fn radial(&self, theta: f64) -> f64 {
        let a = theta.rem_euclid(TAU);
        let n = self.rel.len();
        let k = self.angles.partition_point(|&x| x <= a);
        let i = if k == 0 { n - 1 } else { k - 1 };
        let (vi, vj) = (self.rel[i], self.rel[(i + 1) % n]);
        let e = vj - vi;
        let u = Vec2::new(a.cos(), a.sin());
        cross(vi, e) / cross(u, e)
    }
}

fn angle(v: Vec2) -> f64 {
    v.y.atan2(v.x).rem_euclid(TAU)
}

/// `∫_0^{2π} |sin t|^p dt`.
fn sine_power_integral(p: f64) -> f64 {
    2.0 * PI.sqrt() * (ln_gamma(0.5 * (p + 1.0)) - ln_gamma(0.5 * p + 1.0)).exp()
}

/// `E^p_o(P)` for the point `o` of `poly`, estimated over `samples` angle
/// pairs. Same reporting conventions as
/// [`estimate_moment`](super::estimate_moment).
pub fn estimate_origin_moment_polar(
    poly: &Polygon,
    o: Vec2,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    let spec = FunctionalSpec::fixed(&[o.x, o.y], p);
    spec.validate()?;
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: samples });
    }
    let clock = Instant::now();
    let table = RadialTable::new(poly, o)?;
    let area = poly.area();
    let r0 = (area / PI).sqrt();
    let ref_power = r0.powf(2.0 * p + 4.0);
    let c = TAU * TAU / ((p + 2.0) * (p + 2.0));
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let (start, end) = (k * CHUNK, ((k + 1) * CHUNK).min(samples));
            let mut u = Uniforms::new(seed, start as u64, 2);
            let mut acc = Accumulator::new(1);
            for _ in start..end {
                let a = TAU * u.next_f64();
                let b = TAU * u.next_f64();
                let s = (a - b).sin().abs().powf(p);
                let rr = (table.radial(a) * table.radial(b)).powf(p + 2.0);
                acc.push(&[c * s * (rr - ref_power)]);
            }
            acc
        })
        .collect();
    let acc = parts.iter().fold(Accumulator::new(1), |mut a, b| {
        a.merge(b);
        a
    });
    let disc_part = TAU * sine_power_integral(p) * ref_power / ((p + 2.0) * (p + 2.0));
    let norm = 1.0 / (2f64.powf(p) * area.powf(2.0 + p));
    Ok(MomentEstimate {
        spec,
        value: (disc_part + acc.mean(0)) * norm,
        stderr: acc.stderr(0) * norm,
        samples,
        seed,
        seconds: clock.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;
    use crate::moments::{ball_moment, estimate_moment, BallMomentKind};
    use approx::assert_relative_eq;

    #[test]
    fn sine_integrals() {
        assert_relative_eq!(sine_power_integral(1.0), 4.0, max_relative = 1e-14);
        assert_relative_eq!(sine_power_integral(2.0), PI, max_relative = 1e-14);
    }

    #[test]
    fn radial_of_square() {
        let sq = Polygon::new(&[Vec2::new(-1.0, -1.0), Vec2::new(1.0, -1.0), Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0)])
            .unwrap();
        let t = RadialTable::new(&sq, Vec2::zeros()).unwrap();
        for k in 0..64 {
            let th = k as f64 * TAU / 64.0 + 0.01;
            let u = Vec2::new(th.cos(), th.sin());
            assert_relative_eq!(t.radial(th), sq.radial(u, Vec2::zeros()).unwrap(), max_relative = 1e-12);
        }
        assert!(RadialTable::new(&sq, Vec2::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn fine_polygon_matches_disc_value() {
        let disc = Polygon::regular(4096, 1.0).unwrap();
        for p in [1.0, 2.0] {
            let e = estimate_origin_moment_polar(&disc, Vec2::zeros(), p, 20_000, 1).unwrap();
            let exact = ball_moment(2, p, BallMomentKind::Centroid).unwrap();
            assert!((e.value - exact).abs() <= 4.0 * e.stderr + 1e-5 * exact, "{e:?} vs {exact}");
        }
    }

    #[test]
    fn agrees_with_point_sampling() {
        let tri = Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
        let o = tri.centroid();
        let a = estimate_origin_moment_polar(&tri, o, 1.0, 400_000, 2).unwrap();
        let b = estimate_moment(&Body::Polygon(tri), &FunctionalSpec::centroid(1.0, 2), 400_000, 2).unwrap();
        let s = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.value - b.value).abs() <= 4.0 * s, "{a:?} {b:?}");
    }
}
