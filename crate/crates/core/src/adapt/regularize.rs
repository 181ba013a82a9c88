//! Sliding hanging nodes that crowd a neighbor towards the middle of the
//! side they subdivide.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{diameter, is_simple, signed_area, Vec2};
use crate::mesh::PolyMesh;

use super::midpoint::corners;

/// Moves each interior hanging node that lies closer than
/// `epsilon_merge` × (side length) to an adjacent vertex of its side onto the
/// side midpoint. A move is skipped when the midpoint is not strictly between
/// the node's side neighbors or when any element touching the node would
/// become degenerate. Boundary and crack vertices never move.
pub fn regularize(mesh: &PolyMesh, epsilon_merge: f64) -> Result<PolyMesh> {
    if !(epsilon_merge > 0.0 && epsilon_merge <= 0.5) {
        return Err(Error::InvalidInput(format!("epsilon_merge must lie in (0, 0.5], got {epsilon_merge}")));
    }
    if mesh.hanging_nodes().is_empty() {
        return Ok(mesh.clone());
    }
    let mut parts = mesh.to_parts();
    let tips = mesh.tip_vertices();
    let mut fixed: BTreeSet<usize> = BTreeSet::new();
    for el in mesh.elements() {
        let n = el.len();
        for i in 0..n {
            if el.edge_tags[i] != 0 {
                fixed.insert(el.vertices[i]);
                fixed.insert(el.vertices[(i + 1) % n]);
            }
        }
    }
    let topo = mesh.topology();
    let mut moved = false;
    for &v in mesh.hanging_nodes() {
        if fixed.contains(&v) {
            continue;
        }
        let Some(&e) = topo.vertex_elements[v].iter().find(|&&e| !corners(&parts, &parts.elements[e], &tips).contains(&parts.elements[e].position(v).unwrap())) else {
            continue;
        };
        let el = &parts.elements[e];
        let n = el.len();
        let cs = corners(&parts, el, &tips);
        let i = el.position(v).unwrap();
        // corners bracketing position i
        let k = cs.iter().rposition(|&c| c < i).unwrap_or(cs.len() - 1);
        let (ia, ib) = (cs[k], cs[(k + 1) % cs.len()]);
        let (pa, pb) = (parts.vertices[el.vertices[ia]], parts.vertices[el.vertices[ib]]);
        let g = pb - pa;
        let len = g.norm();
        let prev = parts.vertices[el.vertices[(i + n - 1) % n]];
        let next = parts.vertices[el.vertices[(i + 1) % n]];
        let p = parts.vertices[v];
        if (p - prev).norm() >= epsilon_merge * len && (p - next).norm() >= epsilon_merge * len {
            continue;
        }
        let target = pa + g * 0.5;
        let s = |q: Vec2| (q - pa).dot(&g) / (len * len);
        if !(s(prev) < 0.5 && 0.5 < s(next)) || target == p {
            continue;
        }
        parts.vertices[v] = target;
        let ok = topo.vertex_elements[v].iter().all(|&f| {
            let pts: Vec<Vec2> = parts.elements[f].vertices.iter().map(|&w| parts.vertices[w]).collect();
            let h = diameter(&pts);
            signed_area(&pts) > 1e-10 * h * h && is_simple(&pts)
        });
        if ok {
            moved = true;
        } else {
            parts.vertices[v] = p;
        }
    }
    if !moved {
        return Ok(mesh.clone());
    }
    PolyMesh::from_parts(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Element;

    /// Unit square on the left, two quads on the right split at height `y`.
    fn hanging_mesh(y: f64) -> PolyMesh {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, y),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, y),
            Vec2::new(2.0, 1.0),
        ];
        let mut left = Element::new(vec![0, 1, 4, 2, 3]);
        left.edge_tags = vec![1, 0, 0, 3, 4];
        let mut low = Element::new(vec![1, 5, 6, 4]);
        low.edge_tags = vec![1, 2, 0, 0];
        let mut up = Element::new(vec![4, 6, 7, 2]);
        up.edge_tags = vec![0, 2, 3, 0];
        PolyMesh::new(v, vec![left, low, up], vec![]).unwrap()
    }

    #[test]
    fn crowded_node_moves_to_midpoint() {
        let m = hanging_mesh(0.49);
        let r = regularize(&m, 0.5).unwrap();
        assert_eq!(r.vertex(4), Vec2::new(1.0, 0.5));
        assert!((r.total_area() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn midpoint_node_is_unchanged() {
        let m = hanging_mesh(0.5);
        assert_eq!(regularize(&m, 0.5).unwrap(), m);
    }

    #[test]
    fn node_beyond_threshold_is_unchanged() {
        let m = hanging_mesh(0.3);
        assert_eq!(regularize(&m, 0.2).unwrap(), m);
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(regularize(&hanging_mesh(0.5), 0.0).is_err());
        assert!(regularize(&hanging_mesh(0.5), 0.7).is_err());
    }
}
