//! Moment functionals of random simplex volumes: closed forms, Monte Carlo
//! estimators and the identities tying them together.

mod closed_form;
mod identities;
mod polar;

pub use closed_form::{
    ball_centroid_moment_unnormalized, ball_moment, kappa, ln_gamma, ln_kappa, reed_moment,
    simplex_second_moment_bound, BallMomentKind, RationalValue,
};
pub use identities::{identity_report, isotropy_constant, IdentityReport, IsotropyEstimate, Slack};
pub use polar::{estimate_origin_moment_polar, RadialTable};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::geom::{hull_area_flat, Vec2};
use crate::sampling::{simplex_volume_flat, Sampler};
use crate::stats::Accumulator;

/// Trials per chunk. Chunks are the unit of parallel work and are always
/// reduced in index order.
pub const CHUNK: usize = 8192;

/// Smallest sample count [`estimate_moment`] accepts.
pub const MIN_SAMPLES: usize = 1000;

/// Which random polytope the functional measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalKind {
    /// Hull of `n` uniform points.
    Full(usize),
    /// Simplex with one vertex fixed at the given point, `d` uniform points.
    FixedPoint(Vec<f64>),
    /// Simplex with one vertex at the centroid.
    Centroid,
}

/// A moment functional `E^p` in dimension `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSpec {
    pub kind: FunctionalKind,
    pub p: f64,
    pub dim: usize,
}

impl FunctionalSpec {
    pub fn full(n: usize, p: f64, dim: usize) -> FunctionalSpec {
        FunctionalSpec { kind: FunctionalKind::Full(n), p, dim }
    }

    pub fn fixed(x: &[f64], p: f64) -> FunctionalSpec {
        FunctionalSpec { kind: FunctionalKind::FixedPoint(x.to_vec()), p, dim: x.len() }
    }

    pub fn centroid(p: f64, dim: usize) -> FunctionalSpec {
        FunctionalSpec { kind: FunctionalKind::Centroid, p, dim }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(self.p >= 1.0) || !self.p.is_finite() {
            return Err(Error::InvalidExponent(self.p));
        }
        match &self.kind {
            FunctionalKind::Full(n) if *n < self.dim + 1 => {
                Err(Error::InvalidFunctional(format!("full({n}) needs n ≥ d + 1 = {}", self.dim + 1)))
            }
            FunctionalKind::Full(n) if *n > self.dim + 1 && self.dim != 2 => Err(Error::InvalidFunctional(
                format!("full({n}) with n > d + 1 is only available in the plane"),
            )),
            FunctionalKind::FixedPoint(x) if x.len() != self.dim => {
                Err(Error::DimensionMismatch { expected: self.dim, got: x.len() })
            }
            FunctionalKind::FixedPoint(x) if x.iter().any(|v| !v.is_finite()) => {
                Err(Error::InvalidFunctional("fixed point has non-finite coordinates".into()))
            }
            _ => Ok(()),
        }
    }

    /// Number of uniform points drawn per trial.
    pub fn points_per_trial(&self) -> usize {
        match self.kind {
            FunctionalKind::Full(n) => n,
            _ => self.dim,
        }
    }

    /// Vertex count of the random polytope (`d + 1` for anchored simplices).
    pub fn vertex_count(&self) -> usize {
        match self.kind {
            FunctionalKind::Full(n) => n,
            _ => self.dim + 1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            FunctionalKind::Full(_) => "full",
            FunctionalKind::FixedPoint(_) => "fixed",
            FunctionalKind::Centroid => "centroid",
        }
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub spec: FunctionalSpec,
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub seconds: f64,
}

/// Flat serialized form of an estimate. `seconds` is only filled in when
/// the caller asks for timing, so that default output is reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub functional: String,
    pub p: f64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub seconds: Option<f64>,
}

impl MomentEstimate {
    pub fn record(&self, timing: bool) -> EstimateRecord {
        EstimateRecord {
            functional: self.spec.label().to_string(),
            p: self.spec.p,
            n: self.spec.vertex_count(),
            x: match &self.spec.kind {
                FunctionalKind::FixedPoint(x) => Some(x.clone()),
                _ => None,
            },
            value: self.value,
            stderr: self.stderr,
            samples: self.samples,
            seed: self.seed,
            seconds: timing.then_some(self.seconds),
        }
    }
}

/// Normalized volume of one trial's random polytope.
pub(crate) struct TrialVolume {
    dim: usize,
    inv_volume: f64,
    anchor: Option<Vec<f64>>,
    buf: Vec<f64>,
    scratch: Vec<f64>,
    hull_pts: Vec<Vec2>,
    hull: Vec<Vec2>,
}

impl TrialVolume {
    pub(crate) fn new(dim: usize, volume: f64, anchor: Option<Vec<f64>>) -> TrialVolume {
        TrialVolume {
            dim,
            inv_volume: 1.0 / volume,
            buf: vec![0.0; (dim + 1) * dim],
            scratch: vec![0.0; dim * dim],
            anchor,
            hull_pts: Vec::new(),
            hull: Vec::new(),
        }
    }

    /// `V(conv pts) / V(K)`, with the anchor (if any) prepended.
    #[inline]
    pub(crate) fn eval(&mut self, pts: &[f64]) -> f64 {
        let d = self.dim;
        let vol = match &self.anchor {
            Some(a) => {
                self.buf[..d].copy_from_slice(a);
                self.buf[d..(d + 1) * d].copy_from_slice(&pts[..d * d]);
                simplex_volume_flat(&self.buf, d, &mut self.scratch)
            }
            None if pts.len() == (d + 1) * d => simplex_volume_flat(pts, d, &mut self.scratch),
            None => hull_area_flat(pts, &mut self.hull_pts, &mut self.hull),
        };
        vol * self.inv_volume
    }
}

/// Runs `trials` trials of `points_per_trial` consecutive stream points
/// each, feeding every trial to an evaluator built by `make` and
/// accumulating the `width` statistics it writes.
pub(crate) fn run_trials<F, G>(
    sampler: &Sampler,
    seed: u64,
    trials: usize,
    points_per_trial: usize,
    width: usize,
    make: G,
) -> Accumulator
where
    G: Fn() -> F + Sync,
    F: FnMut(&[f64], &mut [f64]),
{
    let d = sampler.dim();
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let (start, end) = (c * CHUNK, ((c + 1) * CHUNK).min(trials));
            let mut eval = make();
            let mut cur = sampler.cursor(seed, (start * points_per_trial) as u64);
            let mut pts = vec![0.0; points_per_trial * d];
            let mut stats = vec![0.0; width];
            let mut acc = Accumulator::new(width);
            for _ in start..end {
                for k in 0..points_per_trial {
                    cur.next_point(&mut pts[k * d..(k + 1) * d]);
                }
                eval(&pts, &mut stats);
                acc.push(&stats);
            }
            acc
        })
        .collect();
    parts.iter().fold(Accumulator::new(width), |mut a, b| {
        a.merge(b);
        a
    })
}

/// The point a fixed-vertex functional pins, in body coordinates.
pub(crate) fn anchor_of(body: &Body, spec: &FunctionalSpec) -> Option<Vec<f64>> {
    match &spec.kind {
        FunctionalKind::Full(_) => None,
        FunctionalKind::FixedPoint(x) => Some(x.clone()),
        FunctionalKind::Centroid => Some(body.centroid().iter().copied().collect()),
    }
}

/// Monte Carlo estimate of `E^p` for `body`.
pub fn estimate_moment(body: &Body, spec: &FunctionalSpec, samples: usize, seed: u64) -> Result<MomentEstimate> {
    spec.validate()?;
    if spec.dim != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), got: spec.dim });
    }
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: samples });
    }
    let clock = Instant::now();
    let sampler = Sampler::new(body);
    let (d, volume, p) = (body.dim(), body.volume(), spec.p);
    let anchor = anchor_of(body, spec);
    let acc = run_trials(&sampler, seed, samples, spec.points_per_trial(), 1, || {
        let mut tv = TrialVolume::new(d, volume, anchor.clone());
        move |pts: &[f64], out: &mut [f64]| out[0] = pow(tv.eval(pts), p)
    });
    Ok(MomentEstimate {
        spec: spec.clone(),
        value: acc.mean(0),
        stderr: acc.stderr(0),
        samples,
        seed,
        seconds: clock.elapsed().as_secs_f64(),
    })
}

#[inline]
pub(crate) fn pow(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{standard_body, Polygon, StandardKind};
    use approx::assert_relative_eq;

    #[test]
    fn spec_validation() {
        assert!(FunctionalSpec::full(2, 1.0, 2).validate().is_err());
        assert!(FunctionalSpec::full(5, 1.0, 2).validate().is_ok());
        assert!(FunctionalSpec::full(5, 1.0, 3).validate().is_err());
        assert!(FunctionalSpec::full(4, 1.0, 3).validate().is_ok());
        assert!(FunctionalSpec::centroid(0.5, 2).validate().is_err());
        assert!(FunctionalSpec::centroid(2.5, 2).validate().is_ok());
        let mut f = FunctionalSpec::fixed(&[0.0, 0.0], 1.0);
        f.dim = 3;
        assert!(f.validate().is_err());
    }

    #[test]
    fn too_few_samples_and_mismatch() {
        let t = standard_body(StandardKind::Simplex, 2).unwrap();
        assert!(matches!(
            estimate_moment(&t, &FunctionalSpec::full(3, 1.0, 2), 10, 1),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(estimate_moment(&t, &FunctionalSpec::full(4, 1.0, 3), 1000, 1).is_err());
    }

    #[test]
    fn reed_oracle_p1() {
        let t = standard_body(StandardKind::Simplex, 2).unwrap();
        let e = estimate_moment(&t, &FunctionalSpec::full(3, 1.0, 2), 400_000, 3).unwrap();
        assert!((e.value - 1.0 / 12.0).abs() <= 4.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn segment_centroid_second_moment() {
        // in d = 1 the centroid simplex is [γ, x] with γ the midpoint
        let s = crate::bodies::Body::Simplex(
            crate::bodies::Simplex::new(vec![nalgebra::dvector![0.0], nalgebra::dvector![1.0]]).unwrap(),
        );
        let e = estimate_moment(&s, &FunctionalSpec::centroid(2.0, 1), 200_000, 5).unwrap();
        assert!((e.value - 1.0 / 12.0).abs() <= 4.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn scale_free_exactly() {
        let p = Polygon::regular(7, 1.0).unwrap();
        let big = p.transform(&nalgebra::Matrix2::identity().scale(4.0), Vec2::zeros()).unwrap();
        let spec = FunctionalSpec::full(4, 1.5, 2);
        let a = estimate_moment(&Body::Polygon(p), &spec, 5000, 9).unwrap();
        let b = estimate_moment(&Body::Polygon(big), &spec, 5000, 9).unwrap();
        assert_relative_eq!(a.value, b.value, max_relative = 1e-12);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let body = standard_body(StandardKind::Ball, 3).unwrap();
        let spec = FunctionalSpec::centroid(1.0, 3);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_moment(&body, &spec, 3 * CHUNK + 17, 4).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn record_omits_time_by_default() {
        let t = standard_body(StandardKind::Square, 0).unwrap();
        let e = estimate_moment(&t, &FunctionalSpec::fixed(&[0.0, 0.0], 1.0), 1000, 2).unwrap();
        let r = e.record(false);
        assert_eq!(r.functional, "fixed");
        assert_eq!(r.n, 3);
        assert!(r.seconds.is_none());
        assert!(e.record(true).seconds.is_some());
    }
}
