//! Moments of random simplex volumes in convex bodies.
//!
//! For a convex body `K ⊂ ℝ^d`, `E^p_n(K)` is the expected `p`-th power of
//! the volume of the convex hull of `n` independent uniform points of `K`,
//! divided by `V(K)^p`. `E^p_x(K)` pins one vertex of a random simplex at
//! `x` and `E^p_*(K)` pins it at the centroid. The crate provides
//!
//! * exact bodies and planar geometry ([`bodies`]),
//! * reproducible samplers ([`sampling`]),
//! * closed forms and Monte Carlo estimators ([`moments`]),
//! * linear shadow systems on polygons ([`shadow`]),
//! * centroid, projection and intersection bodies in the plane ([`derived`]),
//! * the stability sweeps and corpus checks behind the command-line tool
//!   ([`experiments`]).
//!
//! ```
//! use simplex_moments::bodies::{standard_body, StandardKind};
//! use simplex_moments::moments::{estimate_moment, FunctionalSpec};
//!
//! let triangle = standard_body(StandardKind::Simplex, 2).unwrap();
//! let est = estimate_moment(&triangle, &FunctionalSpec::full(3, 1.0, 2), 100_000, 7).unwrap();
//! assert!((est.value - 1.0 / 12.0).abs() < 5.0 * est.stderr);
//! ```

pub mod bodies;
pub mod derived;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod moments;
pub mod sampling;
pub mod shadow;
pub mod stats;

pub use error::{Error, Result};
