//! Regenerates the verification corpus: `cargo run --example make_corpus -- corpus`.

use std::f64::consts::TAU;

use nalgebra::Matrix2;
use simplex_moments::bodies::{save_body, Body, Polygon};
use simplex_moments::geom::Vec2;
use simplex_moments::sampling::Uniforms;
use simplex_moments::shadow::{family_generator, polygonal_disc, Family};

/// Random convex `n`-gon: sorted random angles on the unit circle, then a
/// random shear and shift.
fn random_polygon(n: usize, seed: u64) -> Polygon {
    let mut u = Uniforms::new(seed, 0, 3 * n + 6);
    let mut angles: Vec<f64> = (0..n).map(|_| TAU * u.next_f64()).collect();
    angles.sort_by(f64::total_cmp);
    let pts: Vec<Vec2> = angles.iter().map(|a| Vec2::new(a.cos(), a.sin())).collect();
    let m = Matrix2::new(1.0 + u.next_f64(), u.next_f64() - 0.5, u.next_f64() - 0.5, 0.5 + u.next_f64());
    let shift = Vec2::new(u.next_f64(), u.next_f64());
    let poly = Polygon::new(&pts).expect("points on a circle are in convex position");
    assert_eq!(poly.len(), n);
    poly.transform(&m, shift).expect("non-singular")
}

fn main() -> simplex_moments::Result<()> {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    std::fs::create_dir_all(&dir)?;
    let v = Vec2::new;
    let mut bodies: Vec<(String, Polygon)> = vec![
        ("triangle".into(), Polygon::new(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)])?),
        ("square".into(), Polygon::new(&[v(-1.0, -1.0), v(1.0, -1.0), v(1.0, 1.0), v(-1.0, 1.0)])?),
        ("pentagon".into(), Polygon::regular(5, 1.0)?),
        ("hexagon".into(), Polygon::regular(6, 1.0)?),
        ("octagon".into(), Polygon::regular(8, 1.0)?),
        ("disc512".into(), polygonal_disc(512)?),
    ];
    for n in 4..=12 {
        bodies.push((format!("random{n:02}"), random_polygon(n, 1000 + n as u64)));
    }
    for (name, fam, res) in [
        ("spindle020", Family::Spindle(0.2), 128),
        ("truncated010", Family::TruncatedTriangle(0.1), 0),
        ("truncated030", Family::TruncatedTriangle(0.3), 0),
    ] {
        bodies.push((name.into(), family_generator(fam, res)?.as_polygon().expect("polygon").clone()));
    }
    for (name, poly) in bodies {
        save_body(dir.join(format!("{name}.json")), &Body::Polygon(poly), None)?;
    }
    Ok(())
}
