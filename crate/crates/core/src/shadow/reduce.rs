use serde::{Deserialize, Serialize};

use super::basic_system;
use crate::bodies::{Body, Polygon};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::moments::{estimate_moment, FunctionalKind, FunctionalSpec, MomentEstimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    /// Vertex whose basic system was used.
    pub vertex: usize,
    /// Endpoint taken: `α` or `−β`.
    pub t: f64,
    pub vertices: Vec<[f64; 2]>,
    pub area: f64,
    pub estimate: MomentEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub initial: MomentEstimate,
    pub steps: Vec<ReductionStep>,
}

impl Reduction {
    pub fn final_estimate(&self) -> &MomentEstimate {
        self.steps.last().map(|s| &s.estimate).unwrap_or(&self.initial)
    }

    /// Whether no step lowers the estimate by more than `k` combined
    /// standard errors.
    pub fn is_monotone_within(&self, k: f64) -> bool {
        let mut prev = &self.initial;
        for s in &self.steps {
            let sd = (prev.stderr.powi(2) + s.estimate.stderr.powi(2)).sqrt();
            if s.estimate.value < prev.value - k * sd {
                return false;
            }
            prev = &s.estimate;
        }
        true
    }
}

/// Deforms `poly` into a triangle through basic shadow systems. At each step
/// every vertex's system is tried, both endpoints are estimated with the
/// same seed, and the endpoint with the largest estimate is kept (ties go to
/// the lowest vertex index). Capped sides never lose a vertex and are
/// skipped.
pub fn reduce_to_triangle(poly: &Polygon, spec: &FunctionalSpec, samples: usize, seed: u64) -> Result<Reduction> {
    match spec.kind {
        FunctionalKind::Full(3) | FunctionalKind::Centroid => {}
        _ => return Err(Error::InvalidFunctional("reduction needs full(3) or centroid".into())),
    }
    if spec.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: spec.dim });
    }
    let initial = estimate_moment(&Body::Polygon(poly.clone()), spec, samples, seed)?;
    let mut current = poly.clone();
    let mut steps = Vec::new();
    while current.len() > 3 {
        let mut best: Option<(usize, f64, Polygon, MomentEstimate)> = None;
        for i in 0..current.len() {
            let b = basic_system(&current, i)?;
            let sides = [(b.alpha, &b.endpoints.0, b.capped.0), (-b.beta, &b.endpoints.1, b.capped.1)];
            for (t, end, capped) in sides {
                if capped || end.len() >= current.len() {
                    continue;
                }
                let est = estimate_moment(&Body::Polygon(end.clone()), spec, samples, seed)?;
                if best.as_ref().is_none_or(|bst| est.value > bst.3.value) {
                    best = Some((i, t, end.clone(), est));
                }
            }
        }
        let (vertex, t, next, estimate) =
            best.ok_or_else(|| Error::InvalidParameter("no basic system removes a vertex".into()))?;
        steps.push(ReductionStep {
            vertex,
            t,
            vertices: next.vertices().iter().map(|v: &Vec2| [v.x, v.y]).collect(),
            area: next.area(),
            estimate,
        });
        current = next;
    }
    Ok(Reduction { initial, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_reduces_in_one_step() {
        let sq = Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)])
            .unwrap();
        let r = reduce_to_triangle(&sq, &FunctionalSpec::full(3, 1.0, 2), 100_000, 1).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].vertices.len(), 3);
        assert!((r.steps[0].area - 1.0).abs() < 1e-12);
        let e = r.final_estimate();
        assert!((e.value - 1.0 / 12.0).abs() <= 4.0 * e.stderr);
        assert!(r.is_monotone_within(4.0));
    }

    #[test]
    fn hexagon_takes_three_steps() {
        let hex = Polygon::regular(6, 1.0).unwrap();
        let r = reduce_to_triangle(&hex, &FunctionalSpec::centroid(1.0, 2), 20_000, 2).unwrap();
        assert_eq!(r.steps.len(), 3);
        assert!(r.is_monotone_within(4.0));
    }

    #[test]
    fn pentagon_reduces_in_two_steps() {
        let pent = Polygon::regular(5, 1.0).unwrap();
        let r = reduce_to_triangle(&pent, &FunctionalSpec::full(3, 1.0, 2), 20_000, 4).unwrap();
        assert_eq!(r.steps.len(), 2);
        for s in &r.steps {
            assert!((s.area - pent.area()).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_is_left_alone() {
        let t = Polygon::new(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
        let r = reduce_to_triangle(&t, &FunctionalSpec::full(3, 1.0, 2), 10_000, 1).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.final_estimate(), &r.initial);
    }

    #[test]
    fn rejects_other_functionals() {
        let t = Polygon::regular(5, 1.0).unwrap();
        assert!(reduce_to_triangle(&t, &FunctionalSpec::full(4, 1.0, 2), 10_000, 1).is_err());
    }
}
