//! Reproducible uniform sampling from bodies.
//!
//! Point `i` of the stream with seed `s` is a pure function of `(s, i)`: the
//! generator is ChaCha8 keyed by `s` (through `seed_from_u64`), and point `i`
//! reads counter blocks `i·k .. (i+1)·k` where `k` is the number of 64-byte
//! blocks a point of this body needs. Unused words of a block are skipped, so
//! a stream can be cut at any index and resumed on another thread with
//! bit-identical output.

use nalgebra::DVector;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bodies::Body;
use crate::geom::Vec2;

const WORDS_PER_BLOCK: u128 = 16;
const U64_PER_BLOCK: usize = 8;

#[inline]
fn open_unit(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone)]
enum Kind {
    Polygon { tris: Vec<[Vec2; 3]>, cum: Vec<f64> },
    /// `center + linear · (unit ball point)`; `linear` stored row-major.
    Ellipsoidal { linear: Vec<f64>, center: Vec<f64> },
    Simplex { vertices: Vec<Vec<f64>> },
}

/// A body prepared for fast uniform sampling.
#[derive(Debug, Clone)]
pub struct Sampler {
    dim: usize,
    uniforms: usize,
    blocks: usize,
    kind: Kind,
}

impl Sampler {
    pub fn new(body: &Body) -> Sampler {
        let dim = body.dim();
        let kind = match body {
            Body::Polygon(p) => {
                let v = p.vertices();
                let mut tris = Vec::with_capacity(v.len() - 2);
                let mut cum = Vec::with_capacity(v.len() - 2);
                let mut total = 0.0;
                for k in 1..v.len() - 1 {
                    let t = [v[0], v[k], v[k + 1]];
                    total += 0.5 * crate::geom::orient(t[0], t[1], t[2]);
                    tris.push(t);
                    cum.push(total);
                }
                Kind::Polygon { tris, cum }
            }
            Body::Ball { dim, radius, center } => Kind::Ellipsoidal {
                linear: (0..dim * dim).map(|k| if k / dim == k % dim { *radius } else { 0.0 }).collect(),
                center: center.iter().copied().collect(),
            },
            Body::Ellipsoid(e) => Kind::Ellipsoidal {
                linear: (0..dim * dim).map(|k| e.linear()[(k / dim, k % dim)]).collect(),
                center: e.center().iter().copied().collect(),
            },
            Body::Simplex(s) => Kind::Simplex {
                vertices: s.vertices().iter().map(|v| v.iter().copied().collect()).collect(),
            },
        };
        let uniforms = match kind {
            Kind::Polygon { .. } => 3,
            Kind::Ellipsoidal { .. } => 2 * dim.div_ceil(2) + 1,
            Kind::Simplex { .. } => dim + 1,
        };
        Sampler { dim, uniforms, blocks: uniforms.div_ceil(U64_PER_BLOCK), kind }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generator positioned at the start of point `index`.
    pub fn cursor(&self, seed: u64, index: u64) -> Cursor<'_> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(index as u128 * self.blocks as u128 * WORDS_PER_BLOCK);
        Cursor { sampler: self, rng, u: vec![0.0; self.blocks * U64_PER_BLOCK], gauss: vec![0.0; self.dim + 1] }
    }

    /// Point `index` of the stream `seed`, written to `out[..dim]`.
    pub fn point(&self, seed: u64, index: u64, out: &mut [f64]) {
        self.cursor(seed, index).next_point(out);
    }

    fn map(&self, u: &[f64], gauss: &mut [f64], out: &mut [f64]) {
        match &self.kind {
            Kind::Polygon { tris, cum } => {
                let total = *cum.last().unwrap();
                let target = u[0] * total;
                let k = cum.partition_point(|&c| c < target).min(tris.len() - 1);
                let [a, b, c] = tris[k];
                let (mut s, mut t) = (u[1], u[2]);
                if s + t > 1.0 {
                    s = 1.0 - s;
                    t = 1.0 - t;
                }
                let p = a + s * (b - a) + t * (c - a);
                out[0] = p.x;
                out[1] = p.y;
            }
            Kind::Ellipsoidal { linear, center } => {
                let d = self.dim;
                let mut norm2 = 0.0;
                for pair in 0..d.div_ceil(2) {
                    let r = (-2.0 * u[2 * pair].ln()).sqrt();
                    let (sn, cs) = (std::f64::consts::TAU * u[2 * pair + 1]).sin_cos();
                    gauss[2 * pair] = r * cs;
                    if 2 * pair + 1 < d {
                        gauss[2 * pair + 1] = r * sn;
                    }
                }
                for g in gauss.iter().take(d) {
                    norm2 += g * g;
                }
                let radius = u[2 * d.div_ceil(2)].powf(1.0 / d as f64) / norm2.sqrt();
                for (i, o) in out.iter_mut().enumerate().take(d) {
                    let row = &linear[i * d..(i + 1) * d];
                    let mut acc = 0.0;
                    for j in 0..d {
                        acc += row[j] * gauss[j];
                    }
                    *o = center[i] + radius * acc;
                }
            }
            Kind::Simplex { vertices } => {
                let d = self.dim;
                let mut total = 0.0;
                for i in 0..=d {
                    gauss[i] = -u[i].ln();
                    total += gauss[i];
                }
                for o in out.iter_mut().take(d) {
                    *o = 0.0;
                }
                for (w, v) in gauss.iter().zip(vertices) {
                    let w = w / total;
                    for j in 0..d {
                        out[j] += w * v[j];
                    }
                }
            }
        }
    }
}

/// Sequential reader over a stream, starting at a given point index.
pub struct Cursor<'a> {
    sampler: &'a Sampler,
    rng: ChaCha8Rng,
    u: Vec<f64>,
    gauss: Vec<f64>,
}

impl Cursor<'_> {
    pub fn next_point(&mut self, out: &mut [f64]) {
        for x in self.u.iter_mut() {
            *x = open_unit(self.rng.next_u64());
        }
        let s = self.sampler;
        s.map(&self.u[..s.uniforms], &mut self.gauss, out);
    }
}

/// Plain open-unit uniforms from stream `seed`, consumed in items of
/// `per_item` values; item `i` starts at 64-bit word `i·per_item`.
pub struct Uniforms {
    rng: ChaCha8Rng,
}

impl Uniforms {
    pub fn new(seed: u64, item: u64, per_item: usize) -> Uniforms {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(item as u128 * per_item as u128 * 2);
        Uniforms { rng }
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        open_unit(self.rng.next_u64())
    }
}

/// Seed for the `index`-th independent sub-run of a run seeded with `seed`:
/// the first word of ChaCha8 stream `index + 1` under key `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index + 1);
    rng.next_u64()
}

/// `n` uniform points of `body` from stream `seed`.
pub fn sample(body: &Body, n: usize, seed: u64) -> Vec<DVector<f64>> {
    let sampler = Sampler::new(body);
    let mut cur = sampler.cursor(seed, 0);
    let mut buf = vec![0.0; sampler.dim];
    (0..n)
        .map(|_| {
            cur.next_point(&mut buf);
            DVector::from_column_slice(&buf)
        })
        .collect()
}

/// Determinant of the `d×d` row-major matrix in `m` (destroyed), by
/// Gaussian elimination with partial pivoting.
pub fn det_in_place(m: &mut [f64], d: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..d {
        let mut piv = col;
        let mut best = m[col * d + col].abs();
        for r in col + 1..d {
            let a = m[r * d + col].abs();
            if a > best {
                best = a;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..d {
                m.swap(col * d + c, piv * d + c);
            }
            det = -det;
        }
        let p = m[col * d + col];
        det *= p;
        for r in col + 1..d {
            let f = m[r * d + col] / p;
            if f != 0.0 {
                for c in col + 1..d {
                    m[r * d + c] -= f * m[col * d + c];
                }
            }
        }
    }
    det
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

/// Volume of the simplex with the `d + 1` vertices stored consecutively in
/// `pts` (each of length `d`). `scratch` must hold `d²` values.
#[inline]
pub fn simplex_volume_flat(pts: &[f64], d: usize, scratch: &mut [f64]) -> f64 {
    match d {
        1 => (pts[1] - pts[0]).abs(),
        2 => 0.5 * ((pts[2] - pts[0]) * (pts[5] - pts[1]) - (pts[3] - pts[1]) * (pts[4] - pts[0])).abs(),
        _ => {
            for r in 0..d {
                for c in 0..d {
                    scratch[r * d + c] = pts[(r + 1) * d + c] - pts[c];
                }
            }
            det_in_place(&mut scratch[..d * d], d).abs() / factorial(d)
        }
    }
}

/// `|det(x₂ − x₁, …, x_{d+1} − x₁)| / d!` for `d + 1` points in `ℝ^d`.
/// Degenerate input gives zero.
pub fn simplex_volume(vertices: &[DVector<f64>]) -> f64 {
    let d = vertices.len().saturating_sub(1);
    if d == 0 || vertices.iter().any(|v| v.len() != d) {
        return 0.0;
    }
    let flat: Vec<f64> = vertices.iter().flat_map(|v| v.iter().copied()).collect();
    let mut scratch = vec![0.0; d * d];
    simplex_volume_flat(&flat, d, &mut scratch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{standard_body, StandardKind};
    use approx::assert_relative_eq;

    fn dv(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    #[test]
    fn simplex_volume_examples() {
        assert_relative_eq!(simplex_volume(&[dv(&[0.0, 0.0]), dv(&[1.0, 0.0]), dv(&[0.0, 1.0])]), 0.5);
        assert_eq!(simplex_volume(&[dv(&[0.0, 0.0]), dv(&[1.0, 1.0]), dv(&[2.0, 2.0])]), 0.0);
        let tet = [dv(&[0.0, 0.0, 0.0]), dv(&[1.0, 0.0, 0.0]), dv(&[0.0, 1.0, 0.0]), dv(&[0.0, 0.0, 1.0])];
        assert_relative_eq!(simplex_volume(&tet), 1.0 / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn ball_samples_inside() {
        for d in 1..=6 {
            let b = standard_body(StandardKind::Ball, d).unwrap();
            for p in sample(&b, 2000, 11) {
                assert!(p.norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn random_access_matches_sequential() {
        let body = standard_body(StandardKind::Simplex, 4).unwrap();
        let s = Sampler::new(&body);
        let seq = sample(&body, 50, 99);
        let mut out = vec![0.0; 4];
        for i in [0usize, 1, 17, 49] {
            s.point(99, i as u64, &mut out);
            assert_eq!(out.as_slice(), seq[i].as_slice());
        }
    }

    #[test]
    fn seeds_give_different_streams() {
        let body = standard_body(StandardKind::Square, 0).unwrap();
        assert_ne!(sample(&body, 4, 1), sample(&body, 4, 2));
        assert_eq!(sample(&body, 4, 1), sample(&body, 4, 1));
    }
}
