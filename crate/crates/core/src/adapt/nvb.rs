//! Newest vertex bisection with conforming closure.
//!
//! Convention: local vertex 0 of a triangle is its newest vertex and the
//! opposite edge (1, 2) is its refinement edge. Level-0 triangles are first
//! rotated so that vertex 0 faces the longest edge.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::mesh::{rebuild_face_pairs, Element, PolyMesh};

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Rotates a triangle so that vertex 0 is opposite its longest edge.
fn orient_longest(vertices: &[Vec2], el: &Element) -> Element {
    let p = |i: usize| vertices[el.vertices[i % 3]];
    let opposite_len = |i: usize| (p(i + 1) - p(i + 2)).norm();
    let mut best = 0;
    for i in 1..3 {
        if opposite_len(i) > opposite_len(best) * (1.0 + 1e-12) {
            best = i;
        }
    }
    Element {
        vertices: (0..3).map(|j| el.vertices[(best + j) % 3]).collect(),
        edge_tags: (0..3).map(|j| el.edge_tags[(best + j) % 3]).collect(),
        level: el.level,
    }
}

pub fn nvb_refine(mesh: &PolyMesh, marked: &[usize]) -> Result<PolyMesh> {
    if let Some(e) = mesh.elements().iter().position(|el| el.len() != 3) {
        return Err(Error::InvalidInput(format!("newest vertex bisection needs triangles; element {e} has {} vertices", mesh.element(e).len())));
    }
    if marked.is_empty() {
        return Ok(mesh.clone());
    }
    let mut parts = mesh.to_parts();
    for el in parts.elements.iter_mut() {
        if el.level == 0 {
            *el = orient_longest(&parts.vertices, el);
        }
    }

    // closure: a triangle with any marked edge must bisect its refinement edge
    let mut edge_owners: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, el) in parts.elements.iter().enumerate() {
        for i in 0..3 {
            edge_owners.entry(key(el.vertices[i], el.vertices[(i + 1) % 3])).or_default().push(e);
        }
    }
    let refinement_edge = |el: &Element| key(el.vertices[1], el.vertices[2]);
    let mut marked_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut work: Vec<(usize, usize)> = Vec::new();
    for &e in marked {
        let k = refinement_edge(&parts.elements[e]);
        if marked_edges.insert(k) {
            work.push(k);
        }
    }
    while let Some(k) = work.pop() {
        for &e in edge_owners.get(&k).map(|v| v.as_slice()).unwrap_or(&[]) {
            let r = refinement_edge(&parts.elements[e]);
            if marked_edges.insert(r) {
                work.push(r);
            }
        }
    }

    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = Vec::with_capacity(parts.elements.len() + 2 * marked_edges.len());
    let elements = std::mem::take(&mut parts.elements);
    for el in elements {
        bisect(el, &marked_edges, &mut midpoints, &mut parts.vertices, &mut out);
    }
    parts.elements = out;
    rebuild_face_pairs(&mut parts);
    PolyMesh::from_parts(parts)
}

fn bisect(
    el: Element,
    marked: &BTreeSet<(usize, usize)>,
    midpoints: &mut HashMap<(usize, usize), usize>,
    vertices: &mut Vec<Vec2>,
    out: &mut Vec<Element>,
) {
    let (p0, p1, p2) = (el.vertices[0], el.vertices[1], el.vertices[2]);
    let k = key(p1, p2);
    if !marked.contains(&k) {
        out.push(el);
        return;
    }
    let m = *midpoints.entry(k).or_insert_with(|| {
        vertices.push((vertices[p1] + vertices[p2]) * 0.5);
        vertices.len() - 1
    });
    let [t01, t12, t20] = [el.edge_tags[0], el.edge_tags[1], el.edge_tags[2]];
    let level = el.level + 1;
    let left = Element { vertices: vec![m, p0, p1], edge_tags: vec![0, t01, t12], level };
    let right = Element { vertices: vec![m, p2, p0], edge_tags: vec![t12, t20, 0], level };
    bisect(left, marked, midpoints, vertices, out);
    bisect(right, marked, midpoints, vertices, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::mesh::{generate_structured, ElementKind};

    #[test]
    fn two_triangle_square_closure() {
        let m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
        let r = nvb_refine(&m, &[0]).unwrap();
        assert_eq!(r.n_elements(), 4);
        assert_eq!(r.n_vertices(), 5);
        assert!(r.hanging_nodes().is_empty());
    }

    #[test]
    fn two_passes_quadrisect() {
        let m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 2.0, 1.0), 4, 2).unwrap();
        let all: Vec<usize> = (0..m.n_elements()).collect();
        let r1 = nvb_refine(&m, &all).unwrap();
        let all1: Vec<usize> = (0..r1.n_elements()).collect();
        let r2 = nvb_refine(&r1, &all1).unwrap();
        assert_eq!(r2.n_elements(), 4 * m.n_elements());
        assert!((r2.total_area() - 2.0).abs() < 1e-12);
        assert!(r2.hanging_nodes().is_empty());
    }

    #[test]
    fn rejects_quads() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
        assert!(nvb_refine(&m, &[0]).is_err());
    }

    #[test]
    fn repeated_local_refinement_stays_conforming() {
        let mut m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 1.0, 1.0), 4, 4).unwrap();
        let a0 = m.min_angle();
        for _ in 0..8 {
            let e = m.locate(crate::geometry::Vec2::new(0.3, 0.3)).unwrap();
            m = nvb_refine(&m, &[e]).unwrap();
            assert!(m.hanging_nodes().is_empty());
        }
        // NVB produces finitely many similarity classes; angles stay bounded
        assert!(m.min_angle() > 0.4 * a0);
    }
}
