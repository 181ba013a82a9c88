//! Midpoint-to-centroid subdivision of polygons.
//!
//! A polygon's corners are the vertices where it is not straight (plus crack
//! tips); consecutive corners bound a side, which may already carry hanging
//! nodes. Each side gets one split point: an existing side vertex within
//! [`REUSE_FRACTION`] of the side length from its midpoint, or else a new
//! vertex at the midpoint. Child k joins corner k, the split points of the
//! two sides at that corner, and the polygon centroid.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::geometry::{is_simple, polygon_centroid, signed_area, Vec2};
use crate::mesh::{is_straight_pts, rebuild_face_pairs, EdgePoints, Element, MeshParts, PolyMesh};

pub const REUSE_FRACTION: f64 = 0.2;

/// Result of a subdivision pass.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub mesh: PolyMesh,
    /// Marked elements left whole because their children would be invalid.
    pub skipped: Vec<usize>,
}

struct Side {
    vertices: Vec<usize>,
    tags: Vec<u32>,
    split: usize,
}

/// Corner positions of an element, in local vertex order.
pub(crate) fn corners(parts: &MeshParts, el: &Element, tips: &BTreeSet<usize>) -> Vec<usize> {
    let n = el.len();
    (0..n)
        .filter(|&i| {
            let v = el.vertices[i];
            tips.contains(&v)
                || !is_straight_pts(parts.vertices[el.vertices[(i + n - 1) % n]], parts.vertices[v], parts.vertices[el.vertices[(i + 1) % n]])
        })
        .collect()
}

/// Corner-to-corner chains of (vertex, tag of the edge leaving it).
fn sides(parts: &MeshParts, el: &Element, tips: &BTreeSet<usize>) -> Vec<Vec<(usize, u32)>> {
    let n = el.len();
    let cs = corners(parts, el, tips);
    (0..cs.len())
        .map(|k| {
            let (i0, i1) = (cs[k], cs[(k + 1) % cs.len()]);
            let len = (i1 + n - i0 - 1) % n + 1;
            (0..=len).map(|j| (el.vertices[(i0 + j) % n], el.edge_tags[(i0 + j) % n])).collect()
        })
        .collect()
}

/// Splits a non-convex polygon along the diagonal from a reflex vertex that
/// gives the most even pair of valid halves. Both halves go one level down.
fn diagonal_split(parts: &MeshParts, el: &Element) -> Option<Vec<Element>> {
    let n = el.len();
    let p = |i: usize| parts.vertices[el.vertices[i % n]];
    let valid = |idx: &[usize]| {
        let q: Vec<Vec2> = idx.iter().map(|&i| p(i)).collect();
        let h = crate::geometry::diameter(&q);
        signed_area(&q) > 1e-10 * h * h && is_simple(&q)
    };
    let mut best: Option<(f64, usize, usize)> = None;
    for i in (0..n).filter(|&i| crate::geometry::orient(p(i + n - 1), p(i), p(i + 1)) < 0.0) {
        for d in 2..n - 1 {
            let j = (i + d) % n;
            let a: Vec<usize> = (0..=d).map(|k| (i + k) % n).collect();
            let b: Vec<usize> = (0..=n - d).map(|k| (j + k) % n).collect();
            if !(valid(&a) && valid(&b)) {
                continue;
            }
            let area = |idx: &[usize]| signed_area(&idx.iter().map(|&k| p(k)).collect::<Vec<_>>());
            let score = area(&a).min(area(&b));
            if best.is_none_or(|(s, _, _)| score > s) {
                best = Some((score, i, j));
            }
        }
    }
    let (_, i, j) = best?;
    let half = |from: usize, to: usize| {
        let len = (to + n - from) % n;
        let idx: Vec<usize> = (0..=len).map(|k| (from + k) % n).collect();
        let mut tags: Vec<u32> = idx[..len].iter().map(|&k| el.edge_tags[k]).collect();
        tags.push(0);
        Element { vertices: idx.iter().map(|&k| el.vertices[k]).collect(), edge_tags: tags, level: el.level + 1 }
    };
    Some(vec![half(i, j), half(j, i)])
}

pub fn midpoint_refine(mesh: &PolyMesh, marked: &[usize]) -> Result<PolyMesh> {
    Ok(subdivide(mesh, &marked.iter().copied().collect())?.mesh)
}

pub fn subdivide(mesh: &PolyMesh, marked: &BTreeSet<usize>) -> Result<Subdivision> {
    if marked.is_empty() {
        return Ok(Subdivision { mesh: mesh.clone(), skipped: vec![] });
    }
    let mut parts = mesh.to_parts();
    let tips = mesh.tip_vertices();
    let mut ep = EdgePoints::default();

    // split vertex of every side of every marked element; points on shared
    // edges are shared, and all new points are spliced in before the
    // children are cut so that every chain sees every point
    let mut splits: Vec<(usize, Vec<usize>)> = Vec::with_capacity(marked.len());
    for &e in marked {
        let el = parts.elements[e].clone();
        let mut ids = Vec::new();
        for chain in sides(&parts, &el, &tips) {
            let len = chain.len() - 1;
            let (pa, pb) = (parts.vertices[chain[0].0], parts.vertices[chain[len].0]);
            let g = pb - pa;
            let mid = pa + g * 0.5;
            let reuse = (1..len)
                .map(|j| (chain[j].0, (parts.vertices[chain[j].0] - mid).norm()))
                .filter(|&(_, d)| d < REUSE_FRACTION * g.norm())
                .min_by(|x, y| x.1.total_cmp(&y.1));
            let id = match reuse {
                Some((v, _)) => v,
                None => {
                    // chain edge whose projection onto the side covers the midpoint
                    let s_of = |v: usize| (parts.vertices[v] - pa).dot(&g) / g.norm_squared();
                    let j = (0..len).find(|&j| s_of(chain[j + 1].0) > 0.5).unwrap_or(len - 1);
                    let (a, b) = (chain[j].0, chain[j + 1].0);
                    let (sa, sb) = (s_of(a), s_of(b));
                    ep.get_or_insert(&mut parts.vertices, a, b, (0.5 - sa) / (sb - sa), 1e-9)
                }
            };
            ids.push(id);
        }
        splits.push((e, ids));
    }
    ep.apply(&mut parts.elements);

    let mut skipped = Vec::new();
    let mut plans: Vec<(usize, Vec<Side>)> = Vec::with_capacity(splits.len());
    for (e, ids) in splits {
        let el = &parts.elements[e];
        let chains = sides(&parts, el, &tips);
        if chains.len() != ids.len() {
            // splicing changed the corner set (near-degenerate sides)
            skipped.push(e);
            continue;
        }
        let plan = chains
            .into_iter()
            .zip(ids)
            .map(|(chain, id)| {
                let split = chain.iter().position(|c| c.0 == id).expect("split vertex lies on its side");
                let tags = chain[..chain.len() - 1].iter().map(|c| c.1).collect();
                Side { vertices: chain.into_iter().map(|c| c.0).collect(), tags, split }
            })
            .collect();
        plans.push((e, plan));
    }

    let mut children: Vec<(usize, Vec<Element>)> = Vec::new();
    for (e, sides) in &plans {
        let level = parts.elements[*e].level + 1;
        let pts: Vec<Vec2> = parts.elements[*e].vertices.iter().map(|&v| parts.vertices[v]).collect();
        let cv = parts.vertices.len();
        let m = sides.len();
        let mut kids = Vec::with_capacity(m);
        for k in 0..m {
            let cur = &sides[k];
            let prev = &sides[(k + m - 1) % m];
            let mut vs: Vec<usize> = cur.vertices[..=cur.split].to_vec();
            let mut ts: Vec<u32> = cur.tags[..cur.split].to_vec();
            ts.push(0);
            vs.push(cv);
            ts.push(0);
            let tail = prev.vertices.len() - 1;
            vs.extend_from_slice(&prev.vertices[prev.split..tail]);
            ts.extend_from_slice(&prev.tags[prev.split..]);
            kids.push(Element { vertices: vs, edge_tags: ts, level });
        }
        let valid_with = |c: Vec2| {
            kids.iter().all(|k| {
                let kp: Vec<Vec2> = k.vertices.iter().map(|&v| if v == cv { c } else { parts.vertices[v] }).collect();
                let h = crate::geometry::diameter(&kp);
                signed_area(&kp) > 1e-10 * h * h && is_simple(&kp)
            })
        };
        // non-convex cells (a crack tip inside a former triangle) may need
        // a center other than the centroid
        let split_mean = sides.iter().map(|s| parts.vertices[s.vertices[s.split]]).sum::<Vec2>() / m as f64;
        let mut candidates = vec![polygon_centroid(&pts), split_mean];
        candidates.extend(sides.iter().map(|s| 0.5 * (parts.vertices[s.vertices[0]] + split_mean)));
        match candidates.into_iter().find(|&c| valid_with(c)) {
            Some(c) => {
                parts.vertices.push(c);
                children.push((*e, kids));
            }
            None => match diagonal_split(&parts, &parts.elements[*e]) {
                Some(halves) => children.push((*e, halves)),
                None => skipped.push(*e),
            },
        }
    }

    let replaced: BTreeSet<usize> = children.iter().map(|c| c.0).collect();
    let mut elements: Vec<Element> = Vec::with_capacity(parts.elements.len() + 4 * children.len());
    let mut kids_iter = children.into_iter();
    for (e, el) in parts.elements.iter().enumerate() {
        if replaced.contains(&e) {
            let (_, kids) = kids_iter.next().expect("children follow element order");
            elements.extend(kids);
        } else {
            elements.push(el.clone());
        }
    }
    parts.elements = elements;
    rebuild_face_pairs(&mut parts);
    Ok(Subdivision { mesh: PolyMesh::from_parts(parts)?, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::mesh::{generate_structured, ElementKind};

    #[test]
    fn quad_with_neighbor_gets_hanging_node() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 2.0, 1.0), 2, 1).unwrap();
        let r = midpoint_refine(&m, &[0]).unwrap();
        assert_eq!(r.n_elements(), 5);
        let big = r.elements().iter().find(|e| e.level == 0).unwrap();
        assert_eq!(big.len(), 5);
        assert_eq!(r.hanging_nodes().len(), 1);
        let h = *r.hanging_nodes().iter().next().unwrap();
        assert_eq!(r.vertex(h), Vec2::new(1.0, 0.5));
        assert!((r.total_area() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn thin_reflex_wedge_is_split_not_skipped() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.5), Vec2::new(0.0, 0.5), Vec2::new(0.0868, 0.4924)];
        let el = Element { vertices: vec![0, 1, 2, 3], edge_tags: vec![crate::mesh::tags::BOTTOM; 4], level: 0 };
        let m = PolyMesh::new(v, vec![el], vec![]).unwrap();
        let s = subdivide(&m, &[0].into_iter().collect()).unwrap();
        assert!(s.skipped.is_empty());
        assert!(s.mesh.n_elements() >= 2);
        assert!((s.mesh.total_area() - m.total_area()).abs() < 1e-14);
        assert!((0..s.mesh.n_elements()).all(|e| s.mesh.element_geometry(e).area > 0.0 && s.mesh.element(e).level == 1));
    }

    #[test]
    fn triangle_gives_three_quads() {
        let m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
        let r = midpoint_refine(&m, &[0]).unwrap();
        let kids: Vec<_> = r.elements().iter().filter(|e| e.level == 1).collect();
        assert_eq!(kids.len(), 3);
        assert!(kids.iter().all(|k| k.len() == 4));
    }

    #[test]
    fn hexagon_children_have_equal_area() {
        let pts: Vec<Vec2> = (0..6).map(|k| {
            let a = k as f64 * std::f64::consts::PI / 3.0;
            Vec2::new(a.cos(), a.sin())
        }).collect();
        let mut el = Element::new((0..6).collect());
        el.edge_tags = vec![1; 6];
        let m = PolyMesh::new(pts, vec![el], vec![]).unwrap();
        let r = midpoint_refine(&m, &[0]).unwrap();
        assert_eq!(r.n_elements(), 6);
        let total = m.total_area();
        for e in 0..6 {
            assert!((r.element_geometry(e).area - total / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn existing_midpoint_is_reused() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 2.0, 1.0), 2, 1).unwrap();
        let r1 = midpoint_refine(&m, &[0]).unwrap();
        let big = r1.elements().iter().position(|e| e.level == 0).unwrap();
        let r2 = midpoint_refine(&r1, &[big]).unwrap();
        // the hanging node becomes a regular vertex; no new vertex on x = 1
        assert!(r2.hanging_nodes().is_empty());
        let on_line = r2.vertices().iter().filter(|p| p.x == 1.0).count();
        assert_eq!(on_line, 3);
    }

    #[test]
    fn empty_marking_is_identity() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 2.0, 1.0), 2, 1).unwrap();
        assert_eq!(midpoint_refine(&m, &[]).unwrap(), m);
    }
}
