//! JSON body files:
//!
//! ```json
//! {"type":"polygon","vertices":[[0,0],[1,0],[0,1]]}
//! {"type":"ball","d":2,"r":1.0,"c":[0,0]}
//! {"type":"ellipsoid","d":2,"shape":[[2,0],[0,0.5]],"c":[0,0]}
//! {"type":"simplex","vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}
//! ```
//!
//! Polygon vertices may come in any order; the loader canonicalizes them.
//! Derived bodies carry an extra `"derived_from"` string.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Body, Ellipsoid, Polygon, Simplex};
use crate::error::{Error, Result};
use crate::geom::Vec2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyFile {
    Polygon {
        vertices: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        derived_from: Option<String>,
    },
    Ball {
        d: usize,
        r: f64,
        c: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        derived_from: Option<String>,
    },
    Ellipsoid {
        d: usize,
        shape: Vec<Vec<f64>>,
        c: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        derived_from: Option<String>,
    },
    Simplex {
        vertices: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        derived_from: Option<String>,
    },
}

impl BodyFile {
    pub fn from_body(body: &Body, derived_from: Option<String>) -> BodyFile {
        match body {
            Body::Polygon(p) => BodyFile::Polygon {
                vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
                derived_from,
            },
            Body::Ball { dim, radius, center } => {
                BodyFile::Ball { d: *dim, r: *radius, c: center.iter().copied().collect(), derived_from }
            }
            Body::Ellipsoid(e) => {
                let s = e.shape_matrix();
                BodyFile::Ellipsoid {
                    d: e.dim(),
                    shape: s.row_iter().map(|r| r.iter().copied().collect()).collect(),
                    c: e.center().iter().copied().collect(),
                    derived_from,
                }
            }
            Body::Simplex(s) => BodyFile::Simplex {
                vertices: s.vertices().iter().map(|v| v.iter().copied().collect()).collect(),
                derived_from,
            },
        }
    }

    pub fn into_body(self) -> Result<Body> {
        match self {
            BodyFile::Polygon { vertices, .. } => {
                let pts: Vec<Vec2> = vertices.iter().map(|v| Vec2::new(v[0], v[1])).collect();
                Ok(Body::Polygon(Polygon::new(&pts)?))
            }
            BodyFile::Ball { d, r, c, .. } => Body::ball(d, r, DVector::from_vec(c)),
            BodyFile::Ellipsoid { d, shape, c, .. } => {
                if shape.len() != d || shape.iter().any(|r| r.len() != d) {
                    return Err(Error::Format(format!("ellipsoid shape must be {d}x{d}")));
                }
                let m = DMatrix::from_fn(d, d, |i, j| shape[i][j]);
                Ok(Body::Ellipsoid(Ellipsoid::new(m, DVector::from_vec(c))?))
            }
            BodyFile::Simplex { vertices, .. } => {
                Ok(Body::Simplex(Simplex::new(vertices.into_iter().map(DVector::from_vec).collect())?))
            }
        }
    }
}

pub fn body_from_json(text: &str) -> Result<Body> {
    serde_json::from_str::<BodyFile>(text)?.into_body()
}

pub fn body_to_json(body: &Body, derived_from: Option<&str>) -> String {
    serde_json::to_string(&BodyFile::from_body(body, derived_from.map(str::to_owned)))
        .expect("body files always serialize")
}

pub fn load_body(path: impl AsRef<Path>) -> Result<Body> {
    body_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_body(path: impl AsRef<Path>, body: &Body, derived_from: Option<&str>) -> Result<()> {
    std::fs::write(path, body_to_json(body, derived_from) + "\n")?;
    Ok(())
}
