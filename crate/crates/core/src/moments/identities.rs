//! The isotropy constant and the residuals of the moment identities and
//! inequalities, estimated on shared sample streams.

use serde::{Deserialize, Serialize};

use super::{pow, run_trials, TrialVolume, MIN_SAMPLES};
use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::sampling::Sampler;

/// `L_K` with its standard error (zero when computed exactly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotropyEstimate {
    pub value: f64,
    pub stderr: f64,
    pub exact: bool,
}

/// Isotropy constant: exact from the inertia matrix for polygons, otherwise
/// from `d!·E²_*(K)`.
pub fn isotropy_constant(body: &Body, samples: usize, seed: u64) -> Result<IsotropyEstimate> {
    if let Body::Polygon(p) = body {
        let m = p.measures();
        let value = m.inertia.determinant().powf(0.25) / m.area;
        return Ok(IsotropyEstimate { value, stderr: 0.0, exact: true });
    }
    let d = body.dim();
    let e = super::estimate_moment(body, &super::FunctionalSpec::centroid(2.0, d), samples, seed)?;
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let k = 1.0 / (2.0 * d as f64);
    let value = (fact * e.value).powf(k);
    Ok(IsotropyEstimate { value, stderr: value * k * e.stderr / e.value, exact: false })
}

/// A signed slack with its standard error. One-sided checks pass when
/// `slack ≥ −4σ`, two-sided ones when `|slack| ≤ 4σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub name: String,
    pub slack: f64,
    pub stderr: f64,
    pub two_sided: bool,
    pub pass: bool,
}

impl Slack {
    pub fn new(name: &str, slack: f64, stderr: f64, two_sided: bool) -> Slack {
        let pass = if two_sided { slack.abs() <= 4.0 * stderr } else { slack >= -4.0 * stderr };
        Slack { name: name.to_string(), slack, stderr, two_sided, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub p: f64,
    pub q: f64,
    /// `E^p_{d+1}`, `E^p_*`, `E^q_*`, `E²_{d+1}`, `E²_*`.
    pub estimates: [f64; 5],
    pub stderrs: [f64; 5],
    pub slacks: Vec<Slack>,
    pub samples: usize,
    pub seed: u64,
}

/// Sandwich between `E^p_*` and `E^p_{d+1}`, the identity
/// `(d+1)E²_* = E²_{d+1}`, and Hölder monotonicity in the exponent, all
/// from one stream: each trial draws `d + 1` points, the full simplex uses
/// all of them and the centroid simplex the first `d`.
pub fn identity_report(body: &Body, p: f64, q: f64, samples: usize, seed: u64) -> Result<IdentityReport> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    if !(q > p) || !q.is_finite() {
        return Err(Error::InvalidExponent(q));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { needed: MIN_SAMPLES, got: samples });
    }
    let d = body.dim();
    let volume = body.volume();
    let gamma: Vec<f64> = body.centroid().iter().copied().collect();
    let sampler = Sampler::new(body);
    let acc = run_trials(&sampler, seed, samples, d + 1, 5, || {
        let mut full = TrialVolume::new(d, volume, None);
        let mut cen = TrialVolume::new(d, volume, Some(gamma.clone()));
        move |pts: &[f64], out: &mut [f64]| {
            let f = full.eval(pts);
            let c = cen.eval(&pts[..d * d]);
            out[0] = pow(f, p);
            out[1] = pow(c, p);
            out[2] = pow(c, q);
            out[3] = f * f;
            out[4] = c * c;
        }
    });
    let m: [f64; 5] = std::array::from_fn(|i| acc.mean(i));
    let dd = (d + 1) as f64;
    let root = |x: f64, r: f64| x.powf(1.0 / r);
    let droot = |x: f64, r: f64| x.powf(1.0 / r - 1.0) / r;
    let (gf, gc, gq) = (droot(m[0], p), droot(m[1], p), droot(m[2], q));
    let mut slacks = Vec::new();
    slacks.push(Slack::new(
        "sandwich-lower",
        root(m[0], p) - root(m[1], p),
        acc.stderr_of(&[gf, -gc, 0.0, 0.0, 0.0]),
        false,
    ));
    slacks.push(Slack::new(
        "sandwich-upper",
        dd * root(m[1], p) - root(m[0], p),
        acc.stderr_of(&[-gf, dd * gc, 0.0, 0.0, 0.0]),
        false,
    ));
    slacks.push(Slack::new("(2*)", dd * m[4] - m[3], acc.stderr_of(&[0.0, 0.0, 0.0, -1.0, dd]), true));
    slacks.push(Slack::new(
        "holder",
        root(m[2], q) - root(m[1], p),
        acc.stderr_of(&[0.0, -gc, gq, 0.0, 0.0]),
        false,
    ));
    Ok(IdentityReport {
        p,
        q,
        estimates: m,
        stderrs: std::array::from_fn(|i| acc.stderr(i)),
        slacks,
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{standard_body, Polygon, StandardKind};
    use crate::geom::Vec2;
    use approx::assert_relative_eq;

    #[test]
    fn disc_isotropy_constant() {
        let disc = Body::Polygon(Polygon::regular(4096, 3.0).unwrap());
        let l = isotropy_constant(&disc, 0, 0).unwrap();
        assert!(l.exact);
        assert_relative_eq!(l.value, 1.0 / (2.0 * std::f64::consts::PI.sqrt()), max_relative = 1e-5);
    }

    #[test]
    fn triangle_isotropy_constant() {
        let t = standard_body(StandardKind::Simplex, 2).unwrap();
        let l = isotropy_constant(&t, 0, 0).unwrap();
        assert_relative_eq!(l.value, 108f64.powf(-0.25), max_relative = 1e-13);
    }

    #[test]
    fn ball_isotropy_by_moment() {
        // same disc value, reached through d!·E²_*
        let b = standard_body(StandardKind::Ball, 2).unwrap();
        let l = isotropy_constant(&b, 400_000, 3).unwrap();
        let exact = 1.0 / (2.0 * std::f64::consts::PI.sqrt());
        assert!((l.value - exact).abs() <= 4.0 * l.stderr, "{l:?}");
    }

    #[test]
    fn identity_holds_on_triangle() {
        let t = standard_body(StandardKind::Simplex, 2).unwrap();
        let r = identity_report(&t, 2.0, 3.0, 200_000, 8).unwrap();
        assert!(r.slacks.iter().all(|s| s.pass), "{r:?}");
        // E²_3(T²) = 1/72 and E²_*(T²) = 1/216
        assert!((r.estimates[0] - 1.0 / 72.0).abs() <= 4.0 * r.stderrs[0]);
        assert!((r.estimates[1] - 1.0 / 216.0).abs() <= 4.0 * r.stderrs[1]);
    }

    #[test]
    fn identity_holds_in_three_dimensions() {
        let b = standard_body(StandardKind::Ball, 3).unwrap();
        let r = identity_report(&b, 1.0, 2.0, 100_000, 1).unwrap();
        assert!(r.slacks.iter().all(|s| s.pass), "{r:?}");
    }

    #[test]
    fn bad_exponents() {
        let sq = Body::Polygon(Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap());
        assert!(identity_report(&sq, 2.0, 1.0, 1000, 0).is_err());
        assert!(identity_report(&sq, 0.5, 1.0, 1000, 0).is_err());
    }
}
