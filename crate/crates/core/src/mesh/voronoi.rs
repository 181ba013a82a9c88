use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generate::tag_rect_boundary;
use super::{Element, PolyMesh};
use crate::error::{Error, Result};
use crate::geometry::{self, Rect, Vec2};

/// Clipped Voronoi tessellation of `domain` from uniformly random seeds,
/// followed by `lloyd_iterations` centroidal relaxation sweeps.
pub fn generate_voronoi(domain: Rect, n_seeds: usize, lloyd_iterations: usize, rng_seed: u64) -> Result<PolyMesh> {
    if n_seeds < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 seeds, got {n_seeds}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let seeds: Vec<Vec2> = (0..n_seeds)
        .map(|_| Vec2::new(rng.random_range(domain.x0..domain.x1), rng.random_range(domain.y0..domain.y1)))
        .collect();
    voronoi_from_seeds(domain, &seeds, lloyd_iterations)
}

pub fn voronoi_from_seeds(domain: Rect, seeds: &[Vec2], lloyd_iterations: usize) -> Result<PolyMesh> {
    if !(domain.width() > 0.0 && domain.height() > 0.0) {
        return Err(Error::InvalidInput(format!("degenerate rectangle {domain:?}")));
    }
    if seeds.len() < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 seeds, got {}", seeds.len())));
    }
    if let Some(s) = seeds.iter().find(|s| !domain.contains(**s, 0.0)) {
        return Err(Error::InvalidInput(format!("seed {s:?} outside the domain")));
    }
    let mut seeds = seeds.to_vec();
    let mut cells = clip_cells(domain, &seeds);
    for _ in 0..lloyd_iterations {
        for (s, c) in seeds.iter_mut().zip(&cells) {
            if c.len() >= 3 {
                *s = geometry::polygon_centroid(c);
            }
        }
        cells = clip_cells(domain, &seeds);
    }
    assemble(domain, &cells)
}

fn clip_cells(domain: Rect, seeds: &[Vec2]) -> Vec<Vec<Vec2>> {
    let rect = vec![
        Vec2::new(domain.x0, domain.y0),
        Vec2::new(domain.x1, domain.y0),
        Vec2::new(domain.x1, domain.y1),
        Vec2::new(domain.x0, domain.y1),
    ];
    (0..seeds.len())
        .map(|i| {
            let s = seeds[i];
            let mut others: Vec<usize> = (0..seeds.len()).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| (seeds[a] - s).norm_squared().total_cmp(&(seeds[b] - s).norm_squared()));
            let mut cell = rect.clone();
            for j in others {
                let reach = cell.iter().map(|p| (p - s).norm()).fold(0.0, f64::max);
                // seeds farther than twice the cell radius cannot cut it
                if (seeds[j] - s).norm() > 2.0 * reach {
                    break;
                }
                cell = clip_half_plane(&cell, s, seeds[j]);
                if cell.len() < 3 {
                    break;
                }
            }
            cell
        })
        .collect()
}

/// Keeps the part of `poly` closer to `s` than to `t`.
fn clip_half_plane(poly: &[Vec2], s: Vec2, t: Vec2) -> Vec<Vec2> {
    let m = (s + t) / 2.0;
    let d = t - s;
    let f = |p: Vec2| (p - m).dot(&d);
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            out.push(p + (q - p) * (fp / (fp - fq)));
        }
    }
    out
}

fn assemble(domain: Rect, cells: &[Vec<Vec2>]) -> Result<PolyMesh> {
    let scale = (domain.width().powi(2) + domain.height().powi(2)).sqrt();
    let tol = 1e-9 * scale;
    let mut vertices: Vec<Vec2> = Vec::new();
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: Vec2| ((p.x / (4.0 * tol)).floor() as i64, (p.y / (4.0 * tol)).floor() as i64);
    let mut elements = Vec::with_capacity(cells.len());
    for cell in cells {
        if cell.len() < 3 {
            continue;
        }
        let mut ids: Vec<usize> = Vec::with_capacity(cell.len());
        for &p in cell {
            let (kx, ky) = key(p);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = grid.get(&(kx + dx, ky + dy)) {
                        if let Some(&v) = list.iter().find(|&&v| (vertices[v] - p).norm() <= tol) {
                            found = Some(v);
                            break 'search;
                        }
                    }
                }
            }
            let v = found.unwrap_or_else(|| {
                vertices.push(p);
                grid.entry((kx, ky)).or_default().push(vertices.len() - 1);
                vertices.len() - 1
            });
            if ids.last() != Some(&v) {
                ids.push(v);
            }
        }
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        if ids.len() >= 3 {
            elements.push(Element::new(ids));
        }
    }
    fix_t_junctions(&vertices, &mut elements, domain, tol);
    tag_rect_boundary(&vertices, &mut elements, domain);
    PolyMesh::new(vertices, elements, vec![])
}

/// Inserts vertices that lie on the interior of an edge lacking a twin.
fn fix_t_junctions(vertices: &[Vec2], elements: &mut [Element], domain: Rect, tol: f64) {
    let mut directed = HashSet::new();
    for el in elements.iter() {
        let n = el.len();
        for i in 0..n {
            directed.insert((el.vertices[i], el.vertices[(i + 1) % n]));
        }
    }
    for el in elements.iter_mut() {
        let n = el.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
            out.push(a);
            if directed.contains(&(b, a)) {
                continue;
            }
            let (pa, pb) = (vertices[a], vertices[b]);
            let on_side = [(pa.y, pb.y, domain.y0), (pa.y, pb.y, domain.y1), (pa.x, pb.x, domain.x0), (pa.x, pb.x, domain.x1)]
                .iter()
                .any(|&(u, w, c)| (u - c).abs() <= tol && (w - c).abs() <= tol);
            if on_side {
                continue;
            }
            let mut hits: Vec<(f64, usize)> = (0..vertices.len())
                .filter(|&v| v != a && v != b)
                .filter_map(|v| {
                    let (d, t) = geometry::point_segment_distance(vertices[v], pa, pb);
                    (d <= tol && t > 0.0 && t < 1.0).then_some((t, v))
                })
                .collect();
            hits.sort_by(|x, y| x.0.total_cmp(&y.0));
            out.extend(hits.into_iter().map(|h| h.1));
        }
        el.edge_tags = vec![0; out.len()];
        el.vertices = out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_seeds_give_congruent_rectangles() {
        let seeds = [Vec2::new(0.25, 0.25), Vec2::new(0.75, 0.25), Vec2::new(0.75, 0.75), Vec2::new(0.25, 0.75)];
        let m = voronoi_from_seeds(Rect::new(0.0, 0.0, 1.0, 1.0), &seeds, 0).unwrap();
        assert_eq!(m.n_elements(), 4);
        assert_eq!(m.n_vertices(), 9);
        for e in 0..4 {
            let g = m.element_geometry(e);
            assert!((g.area - 0.25).abs() < 1e-14);
            assert!((g.diameter - 0.5f64.hypot(0.5)).abs() < 1e-14);
        }
    }

    #[test]
    fn random_voronoi_tiles_domain() {
        let d = Rect::new(0.0, 0.0, 2.0, 1.0);
        let m = generate_voronoi(d, 100, 0, 42).unwrap();
        assert!((m.total_area() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let d = Rect::new(0.0, 0.0, 1.0, 1.0);
        assert_eq!(generate_voronoi(d, 30, 3, 7).unwrap(), generate_voronoi(d, 30, 3, 7).unwrap());
    }

    #[test]
    fn lloyd_improves_min_angle() {
        let d = Rect::new(0.0, 0.0, 1.0, 1.0);
        let raw = generate_voronoi(d, 100, 0, 42).unwrap();
        let relaxed = generate_voronoi(d, 100, 50, 42).unwrap();
        assert!(relaxed.min_angle() > raw.min_angle());
        assert!((relaxed.total_area() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cells_are_convex() {
        let m = generate_voronoi(Rect::new(0.0, 0.0, 1.0, 1.0), 60, 5, 3).unwrap();
        for e in 0..m.n_elements() {
            let p = m.element_points(e);
            let n = p.len();
            for i in 0..n {
                assert!(geometry::orient(p[i], p[(i + 1) % n], p[(i + 2) % n]) >= -1e-12);
            }
        }
    }
}
