use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::ShadowSystem;
use crate::bodies::{Body, Polygon};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::moments::{pow, run_trials, FunctionalKind, FunctionalSpec, MomentEstimate, TrialVolume, MIN_SAMPLES};
use crate::sampling::Sampler;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub t: f64,
    pub estimate: MomentEstimate,
    pub area: f64,
    pub vertices: usize,
}

/// Centered second difference of the estimates around grid point `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondDifference {
    pub t: f64,
    pub value: f64,
    pub stderr: f64,
    /// Floating-point rounding scale of `value`.
    pub rounding: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityProfile {
    pub points: Vec<ProfilePoint>,
    pub second_differences: Vec<SecondDifference>,
}

impl ConvexityProfile {
    /// Whether every second difference is at least `−k` standard errors
    /// (less rounding).
    pub fn is_convex_within(&self, k: f64) -> bool {
        self.second_differences.iter().all(|d| d.value >= -k * d.stderr - d.rounding)
    }
}

/// Estimates `t ↦ E^p(K_t)` on `grid`.
///
/// All grid points share one set of random numbers: every trial samples
/// points of `K_0` and pushes them through the shear onto each `K_t`, so the
/// per-trial statistic is itself a function of `t` and the second
/// differences are not swamped by independent noise. A fixed point stays
/// put; the centroid moves with the system.
pub fn convexity_profile(
    system: &ShadowSystem,
    spec: &FunctionalSpec,
    grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ConvexityProfile> {
    spec.validate()?;
    if spec.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: spec.dim });
    }
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: samples });
    }
    if grid.is_empty() {
        return Err(Error::GridTooSparse { needed: 1, got: 0 });
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("grid must be strictly increasing".into()));
    }
    let polys: Vec<Polygon> = grid.iter().map(|&t| system.eval(t)).collect::<Result<_>>()?;
    let clock = Instant::now();
    let base = system.base();
    let area = base.area();
    let v = system.direction();
    let g0 = base.centroid();
    let omega = system.centroid_drift();
    let p = spec.p;
    let k = spec.points_per_trial();
    let fixed = match &spec.kind {
        FunctionalKind::FixedPoint(x) => Some(Vec2::new(x[0], x[1])),
        _ => None,
    };
    let centroid = matches!(spec.kind, FunctionalKind::Centroid);
    let sampler = Sampler::new(&Body::Polygon(base.clone()));
    let m = grid.len();
    let acc = run_trials(&sampler, seed, samples, k, m, || {
        let mut tv = TrialVolume::new(2, area, None);
        let mut speed = vec![0.0; k];
        let anchored = fixed.is_some() || centroid;
        let mut buf = vec![0.0; 2 * (k + usize::from(anchored))];
        move |pts: &[f64], out: &mut [f64]| {
            for j in 0..k {
                speed[j] = system.speed_at(Vec2::new(pts[2 * j], pts[2 * j + 1]));
            }
            for (idx, &t) in grid.iter().enumerate() {
                let mut off = 0;
                if anchored {
                    let a = fixed.unwrap_or(g0 + t * omega * v);
                    buf[0] = a.x;
                    buf[1] = a.y;
                    off = 2;
                }
                for j in 0..k {
                    let shift = t * speed[j];
                    buf[off + 2 * j] = pts[2 * j] + shift * v.x;
                    buf[off + 2 * j + 1] = pts[2 * j + 1] + shift * v.y;
                }
                out[idx] = pow(tv.eval(&buf), p);
            }
        }
    });
    let seconds = clock.elapsed().as_secs_f64();
    let points = grid
        .iter()
        .zip(&polys)
        .enumerate()
        .map(|(j, (&t, poly))| ProfilePoint {
            t,
            estimate: MomentEstimate {
                spec: spec.clone(),
                value: acc.mean(j),
                stderr: acc.stderr(j),
                samples,
                seed,
                seconds,
            },
            area: poly.area(),
            vertices: poly.len(),
        })
        .collect();
    let second_differences = (1..m.saturating_sub(1))
        .map(|j| {
            let (h1, h2) = (grid[j] - grid[j - 1], grid[j + 1] - grid[j]);
            let mut c = vec![0.0; m];
            c[j - 1] = 2.0 / (h1 * (h1 + h2));
            c[j] = -2.0 / (h1 * h2);
            c[j + 1] = 2.0 / (h2 * (h1 + h2));
            let value = c[j - 1] * acc.mean(j - 1) + c[j] * acc.mean(j) + c[j + 1] * acc.mean(j + 1);
            let rounding = 1e-12 * (j - 1..=j + 1).map(|i| (c[i] * acc.mean(i)).abs()).sum::<f64>();
            SecondDifference { t: grid[j], value, stderr: acc.stderr_of(&c), rounding }
        })
        .collect();
    Ok(ConvexityProfile { points, second_differences })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::estimate_moment;
    use crate::shadow::{basic_system, steiner_shadow};

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn steiner_profile_is_even_and_convex() {
        let p = Polygon::new(&[
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.3),
            Vec2::new(1.5, 1.4),
            Vec2::new(0.2, 1.0),
        ])
        .unwrap();
        let s = steiner_shadow(&p, Vec2::new(0.0, 1.0)).unwrap();
        let spec = FunctionalSpec::full(3, 1.0, 2);
        let prof = convexity_profile(&s, &spec, &grid(-1.0, 1.0, 9), 50_000, 3).unwrap();
        assert!(prof.is_convex_within(0.0), "{:?}", prof.second_differences);
        let v: Vec<f64> = prof.points.iter().map(|q| q.estimate.value).collect();
        // K_t and K_{-t} are mirror images, but pushforward samples differ; compare in noise
        for j in 0..4 {
            let (a, b) = (&prof.points[j].estimate, &prof.points[8 - j].estimate);
            assert!((a.value - b.value).abs() <= 4.0 * (a.stderr + b.stderr), "{v:?}");
        }
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(v[4] <= min + 4.0 * prof.points[4].estimate.stderr);
        assert!(prof.points.iter().all(|q| (q.area - p.area()).abs() < 1e-12 * p.area()));
    }

    #[test]
    fn basic_profile_matches_direct_estimates() {
        let hex = Polygon::regular(6, 1.0).unwrap();
        let b = basic_system(&hex, 1).unwrap();
        let g = grid(-b.beta, b.alpha, 5);
        let spec = FunctionalSpec::centroid(2.0, 2);
        let prof = convexity_profile(&b.system, &spec, &g, 100_000, 5).unwrap();
        assert!(prof.is_convex_within(0.0));
        for q in &prof.points {
            let direct = estimate_moment(&Body::Polygon(b.system.eval(q.t).unwrap()), &spec, 100_000, 11).unwrap();
            let s = (q.estimate.stderr.powi(2) + direct.stderr.powi(2)).sqrt();
            assert!((q.estimate.value - direct.value).abs() <= 4.0 * s, "{q:?} vs {direct:?}");
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let hex = Polygon::regular(6, 1.0).unwrap();
        let b = basic_system(&hex, 0).unwrap();
        let spec = FunctionalSpec::full(3, 1.0, 2);
        assert!(convexity_profile(&b.system, &spec, &[0.1, 0.0], 1000, 0).is_err());
        assert!(convexity_profile(&b.system, &spec, &[0.0, 5.0], 1000, 0).is_err());
    }
}
