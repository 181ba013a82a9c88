#![allow(dead_code)]

use polyfrac::{Material, PlaneState, Vec2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Star-shaped counter-clockwise polygon with `n` vertices around a random
/// center, at a random scale between 1e-3 and 1e3.
pub fn star_polygon(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec2> {
    let scale = 10f64.powf(rng.random_range(-3.0..3.0));
    let center = Vec2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)) * scale;
    // angles at least a third of the uniform spacing apart
    let gap = std::f64::consts::TAU / n as f64;
    let start = rng.random_range(0.0..std::f64::consts::TAU);
    (0..n)
        .map(|k| {
            let a = start + gap * (k as f64 + rng.random_range(-0.33..0.33));
            let r = scale * rng.random_range(0.6..1.4);
            center + Vec2::new(a.cos(), a.sin()) * r
        })
        .collect()
}

pub fn material(rng: &mut ChaCha8Rng) -> Material {
    let state = if rng.random_bool(0.5) { PlaneState::PlaneStress } else { PlaneState::PlaneStrain };
    Material::new(10f64.powf(rng.random_range(0.0..8.0)), rng.random_range(0.0..0.45), state).unwrap()
}

pub fn max_abs<'a>(it: impl IntoIterator<Item = &'a f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Nodal interpolant of an exact field; crack face vertices sample their own
/// side of the crack and the tip itself gets zero.
pub fn interpolate(mesh: &polyfrac::PolyMesh, field: &dyn polyfrac::reference::ExactSolution, tip: Vec2) -> Vec<f64> {
    let faces = mesh.crack_face_vertices();
    (0..mesh.n_vertices())
        .flat_map(|v| {
            let p = if faces.contains(&v) { polyfrac::system::sample_point(mesh, v) } else { mesh.vertex(v) };
            let d = if (p - tip).norm() == 0.0 { Vec2::zeros() } else { field.displacement(p) };
            [d.x, d.y]
        })
        .collect()
}
