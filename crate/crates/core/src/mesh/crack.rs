//! Conforming crack insertion.
//!
//! A crack segment is traced through the mesh, crossing points are spliced
//! into the edges they hit (neighbors absorb them as hanging nodes), every
//! traversed element is split along the segment, and finally the vertices on
//! the crack are duplicated so that elements on the right-hand side of the
//! path reference a coincident copy.
//!
//! An interior tip cannot end a chord inside an element, so the element
//! holding it is split by the crack piece plus a non-crack extension from the
//! tip to the element boundary.

use std::collections::{BTreeSet, HashSet};

use super::{compact, rebuild_face_pairs, tags, CrackGeometry, CrackTip, Element, EdgePoints, MeshParts, PolyMesh, TipEnd};
use crate::error::{Error, Result};
use crate::geometry::{self, ccw_sweep, Vec2};

/// Relative snapping distance of path points to vertices and edges.
const SNAP: f64 = 1e-8;
/// A path passing closer than this fraction of a vertex's shortest incident
/// edge goes through the vertex, so that cuts never leave micro-edges.
const VERTEX_SNAP: f64 = 1e-3;
/// A virtual extension landing this close to an edge end (relative to the
/// edge length) is moved onto the vertex.
const EXTENSION_SNAP: f64 = 0.2;

/// Result of cutting a single segment into the mesh.
#[derive(Clone, Debug)]
pub struct CutOutcome {
    pub mesh: PolyMesh,
    /// Vertex ids along the inserted path, in path order.
    pub path: Vec<usize>,
}

/// Inserts a new crack along `polyline`.
///
/// At most one endpoint may lie on the domain boundary (the crack mouth);
/// interior endpoints become crack tips.
pub fn insert_crack(mesh: &PolyMesh, polyline: &[Vec2]) -> Result<PolyMesh> {
    if polyline.len() < 2 {
        return Err(Error::Crack("a crack polyline needs at least two points".into()));
    }
    if polyline.windows(2).any(|w| (w[1] - w[0]).norm() == 0.0) {
        return Err(Error::Crack("crack polyline has a zero-length segment".into()));
    }
    let mut parts = mesh.to_parts();
    let first_on_boundary = on_boundary(&parts, polyline[0]);
    let last_on_boundary = on_boundary(&parts, *polyline.last().unwrap());
    if first_on_boundary && last_on_boundary {
        return Err(Error::Crack("both crack ends lie on the boundary".into()));
    }
    let path = cut_path(&mut parts, polyline, None)?;
    let n = path.len();
    let mut tips = Vec::new();
    if !first_on_boundary {
        tips.push(CrackTip { end: TipEnd::Start, vertex: path[0], angle: CrackGeometry::tip_angle(polyline, TipEnd::Start) });
    }
    if !last_on_boundary {
        tips.push(CrackTip { end: TipEnd::End, vertex: path[n - 1], angle: CrackGeometry::tip_angle(polyline, TipEnd::End) });
    }
    let mut line: Vec<Vec2> = polyline.to_vec();
    line[0] = parts.vertices[path[0]];
    line[polyline.len() - 1] = parts.vertices[path[n - 1]];
    duplicate_path(&mut parts, &path, None, first_on_boundary, last_on_boundary);
    parts.cracks.push(CrackGeometry { polyline: line, tips, face_pairs: vec![] });
    rebuild_face_pairs(&mut parts);
    compact(&mut parts);
    PolyMesh::from_parts(parts)
}

/// Cuts segment `from → to` starting at the existing vertex `from`, without
/// duplicating anything. Used by crack extension, which finishes the
/// topology itself.
pub fn cut_segment(mesh: &PolyMesh, from: usize, to: Vec2) -> Result<CutOutcome> {
    let mut parts = mesh.to_parts();
    let pts = [parts.vertices[from], to];
    let path = cut_path(&mut parts, &pts, Some(from))?;
    compact(&mut parts);
    Ok(CutOutcome { mesh: PolyMesh::from_parts(parts)?, path })
}

/// Extends crack tip `tip` of crack `crack` to `to`, duplicating the old tip.
pub(crate) fn extend_tip(mesh: &PolyMesh, crack: usize, tip: usize, to: Vec2) -> Result<PolyMesh> {
    let mut parts = mesh.to_parts();
    let t = parts.cracks[crack].tips[tip].clone();
    let line = parts.cracks[crack].polyline.clone();
    let before = match t.end {
        TipEnd::End => line[line.len() - 2],
        TipEnd::Start => line[1],
    };
    let pts = [parts.vertices[t.vertex], to];
    let path = cut_path(&mut parts, &pts, Some(t.vertex))?;
    let new_tip = *path.last().unwrap();
    duplicate_path(&mut parts, &path, Some(before), true, false);
    let c = &mut parts.cracks[crack];
    let end_point = parts.vertices[new_tip];
    match t.end {
        TipEnd::End => c.polyline.push(end_point),
        TipEnd::Start => c.polyline.insert(0, end_point),
    }
    let angle = CrackGeometry::tip_angle(&c.polyline, t.end);
    c.tips[tip] = CrackTip { end: t.end, vertex: new_tip, angle };
    rebuild_face_pairs(&mut parts);
    compact(&mut parts);
    PolyMesh::from_parts(parts)
}

fn on_boundary(parts: &MeshParts, p: Vec2) -> bool {
    for el in &parts.elements {
        let n = el.len();
        for i in 0..n {
            if el.edge_tags[i] == tags::INTERIOR {
                continue;
            }
            let (a, b) = (parts.vertices[el.vertices[i]], parts.vertices[el.vertices[(i + 1) % n]]);
            if geometry::point_segment_distance(p, a, b).0 <= SNAP * (b - a).norm() {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Copy, Debug)]
enum Event {
    Vertex(usize),
    Edge { a: usize, b: usize, s: f64 },
}

#[derive(Clone, Copy, Debug)]
enum Node {
    Vertex(usize),
    Free(Vec2),
}

fn vertex_flags(parts: &MeshParts) -> (Vec<bool>, Vec<bool>) {
    let mut boundary = vec![false; parts.vertices.len()];
    let mut crack = vec![false; parts.vertices.len()];
    for el in &parts.elements {
        let n = el.len();
        for i in 0..n {
            let t = el.edge_tags[i];
            let f = if t == tags::CRACK {
                &mut crack
            } else if t != tags::INTERIOR {
                &mut boundary
            } else {
                continue;
            };
            f[el.vertices[i]] = true;
            f[el.vertices[(i + 1) % n]] = true;
        }
    }
    (boundary, crack)
}

fn edge_tag(parts: &MeshParts, a: usize, b: usize) -> u32 {
    for el in &parts.elements {
        let n = el.len();
        for i in 0..n {
            let (u, w) = (el.vertices[i], el.vertices[(i + 1) % n]);
            if (u, w) == (a, b) || (u, w) == (b, a) {
                if el.edge_tags[i] != tags::INTERIOR {
                    return el.edge_tags[i];
                }
            }
        }
    }
    tags::INTERIOR
}

/// Events along p → q sorted by the path parameter.
fn collect_events(parts: &MeshParts, p: Vec2, q: Vec2) -> Vec<(f64, Event)> {
    let len = (q - p).norm();
    let tol = SNAP * len;
    // shortest incident edge per vertex; infinite for unused vertices
    let mut shortest = vec![f64::INFINITY; parts.vertices.len()];
    for el in &parts.elements {
        let n = el.len();
        for i in 0..n {
            let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
            let l = (parts.vertices[a] - parts.vertices[b]).norm();
            shortest[a] = shortest[a].min(l);
            shortest[b] = shortest[b].min(l);
        }
    }
    let mut near = vec![false; parts.vertices.len()];
    let mut events = Vec::new();
    for (v, &h) in shortest.iter().enumerate() {
        if h.is_infinite() {
            continue;
        }
        let (d, t) = geometry::point_segment_distance(parts.vertices[v], p, q);
        if d <= tol.max(VERTEX_SNAP * h) {
            near[v] = true;
            events.push((t, Event::Vertex(v)));
        }
    }
    let mut seen = HashSet::new();
    for el in &parts.elements {
        let n = el.len();
        for i in 0..n {
            let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
            if !seen.insert((a.min(b), a.max(b))) {
                continue;
            }
            let (pa, pb) = (parts.vertices[a], parts.vertices[b]);
            let crossing = if near[a] || near[b] { None } else { geometry::line_intersection(p, q, pa, pb) };
            match crossing {
                Some((t, s)) => {
                    if s > 0.0 && s < 1.0 && t >= -tol / len && t <= 1.0 + tol / len {
                        events.push((t.clamp(0.0, 1.0), Event::Edge { a, b, s }));
                    }
                }
                // collinear edge: an end point may sit inside it
                None => {
                    for (t, x) in [(0.0, p), (1.0, q)] {
                        let (d, s) = geometry::point_segment_distance(x, pa, pb);
                        if d <= tol && (x - pa).norm() > tol && (x - pb).norm() > tol {
                            events.push((t, Event::Edge { a, b, s }));
                        }
                    }
                }
            }
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    events
}

/// Cuts the polyline into the mesh and returns the ordered path vertices.
/// `start` pins the first point to an existing vertex (crack extension).
fn cut_path(parts: &mut MeshParts, polyline: &[Vec2], start: Option<usize>) -> Result<Vec<usize>> {
    let mut path: Vec<usize> = Vec::new();
    let mut from = start;
    let nseg = polyline.len() - 1;
    for k in 0..nseg {
        let p = from.map_or(polyline[k], |v| parts.vertices[v]);
        let q = polyline[k + 1];
        let seg = cut_one(parts, p, q, from, start.is_some() && k == 0, k == 0, k == nseg - 1)?;
        if path.last() == seg.first() {
            path.pop();
        }
        from = seg.last().copied();
        path.extend(seg);
    }
    Ok(path)
}

fn cut_one(
    parts: &mut MeshParts,
    p: Vec2,
    q: Vec2,
    from: Option<usize>,
    extending: bool,
    first_segment: bool,
    last_segment: bool,
) -> Result<Vec<usize>> {
    let len = (q - p).norm();
    let tol = SNAP * len;
    let events = collect_events(parts, p, q);
    let (bnd, crk) = vertex_flags(parts);
    let at_start = |t: f64| t * len <= tol;
    let at_end = |t: f64| (1.0 - t) * len <= tol;

    // Validate events against the existing boundary and cracks.
    for &(t, ev) in &events {
        let endpoint_ok = (first_segment && at_start(t)) || (last_segment && at_end(t));
        match ev {
            Event::Vertex(v) => {
                if Some(v) == from {
                    continue;
                }
                if crk[v] && !(extending && at_start(t)) {
                    return Err(Error::Crack(format!("path touches an existing crack at vertex {v}")));
                }
                if bnd[v] && !endpoint_ok {
                    return Err(Error::Crack("path leaves the domain interior".into()));
                }
            }
            Event::Edge { a, b, .. } => {
                let tag = edge_tag(parts, a, b);
                if tag == tags::CRACK {
                    return Err(Error::Crack("path crosses an existing crack".into()));
                }
                if tag != tags::INTERIOR && !endpoint_ok {
                    return Err(Error::Crack("path leaves the domain interior".into()));
                }
            }
        }
    }

    // Path nodes in order, with free end points where no event sits.
    let mut nodes: Vec<(f64, Node)> = Vec::new();
    let mut ep = EdgePoints::default();
    let first_event_at_start = events.first().is_some_and(|e| at_start(e.0));
    if let Some(v) = from {
        nodes.push((0.0, Node::Vertex(v)));
    } else if !first_event_at_start {
        nodes.push((0.0, Node::Free(p)));
    }
    for &(t, ev) in &events {
        if let Event::Vertex(v) = ev {
            if Some(v) == from {
                continue;
            }
        }
        if from.is_some() && at_start(t) {
            continue;
        }
        let node = match ev {
            Event::Vertex(v) => Node::Vertex(v),
            Event::Edge { a, b, s } => Node::Vertex(ep.get_or_insert(&mut parts.vertices, a, b, s, 1e-12)),
        };
        nodes.push((t, node));
    }
    if !nodes.last().is_some_and(|n| at_end(n.0)) {
        nodes.push((1.0, Node::Free(q)));
    }
    ep.apply(&mut parts.elements);

    for (_, n) in &nodes {
        if let Node::Free(x) = n {
            if containing_element(parts, *x, tol).is_none() {
                return Err(Error::Crack(format!("path point ({}, {}) lies outside the mesh", x.x, x.y)));
            }
        }
    }

    // Walk sub-segments, splitting the element each one crosses.
    let dir = (q - p) / len;
    let mut out: Vec<usize> = Vec::new();
    let mut i = 0;
    while i + 1 < nodes.len() {
        let (_, a) = nodes[i];
        let (_, b) = nodes[i + 1];
        match (a, b) {
            (Node::Vertex(u), Node::Vertex(w)) => {
                if !is_edge(parts, u, w) {
                    let mid = (parts.vertices[u] + parts.vertices[w]) / 2.0;
                    let e = containing_element(parts, mid, tol).ok_or_else(|| Error::Crack("path leaves the domain interior".into()))?;
                    split_element(parts, e, &[u, w])?;
                }
                push_unique(&mut out, u);
                push_unique(&mut out, w);
                i += 1;
            }
            (Node::Free(x), Node::Vertex(w)) => {
                let e = containing_element(parts, x, tol).unwrap();
                let r = ray_exit(parts, e, x, -dir, w)?;
                let xv = push_vertex(parts, x);
                split_element(parts, e, &[r, xv, w])?;
                push_unique(&mut out, xv);
                push_unique(&mut out, w);
                i += 1;
            }
            (Node::Vertex(u), Node::Free(x)) => {
                let e = containing_element(parts, x, tol).unwrap();
                let r = ray_exit(parts, e, x, dir, u)?;
                let xv = push_vertex(parts, x);
                split_element(parts, e, &[u, xv, r])?;
                push_unique(&mut out, u);
                push_unique(&mut out, xv);
                i += 1;
            }
            (Node::Free(x), Node::Free(y)) => {
                let e = containing_element(parts, x, tol).unwrap();
                if containing_element(parts, y, tol) != Some(e) {
                    return Err(Error::Crack("inconsistent free segment".into()));
                }
                let r1 = ray_exit(parts, e, x, -dir, usize::MAX)?;
                let r2 = ray_exit(parts, e, y, dir, r1)?;
                let e = containing_element(parts, x, tol).unwrap();
                let xv = push_vertex(parts, x);
                let yv = push_vertex(parts, y);
                split_element(parts, e, &[r1, xv, yv, r2])?;
                push_unique(&mut out, xv);
                push_unique(&mut out, yv);
                i += 1;
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Crack("empty crack path".into()));
    }
    // Crack faces: tag every edge along the path on both sides.
    for w in out.windows(2) {
        set_edge_tag(parts, w[0], w[1], tags::CRACK);
    }
    Ok(out)
}

fn push_unique(v: &mut Vec<usize>, x: usize) {
    if v.last() != Some(&x) {
        v.push(x);
    }
}

fn push_vertex(parts: &mut MeshParts, p: Vec2) -> usize {
    parts.vertices.push(p);
    parts.vertices.len() - 1
}

fn is_edge(parts: &MeshParts, u: usize, w: usize) -> bool {
    parts.elements.iter().any(|el| {
        let n = el.len();
        (0..n).any(|i| {
            let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
            (a, b) == (u, w) || (a, b) == (w, u)
        })
    })
}

fn set_edge_tag(parts: &mut MeshParts, u: usize, w: usize, tag: u32) {
    for el in &mut parts.elements {
        let n = el.len();
        for i in 0..n {
            let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
            if (a, b) == (u, w) || (a, b) == (w, u) {
                el.edge_tags[i] = tag;
            }
        }
    }
}

/// Element whose interior strictly contains `x` (farther than `tol` from its boundary).
fn containing_element(parts: &MeshParts, x: Vec2, tol: f64) -> Option<usize> {
    parts.elements.iter().position(|el| {
        let pts: Vec<Vec2> = el.vertices.iter().map(|&v| parts.vertices[v]).collect();
        geometry::point_in_polygon(x, &pts) && geometry::distance_to_boundary(x, &pts) > tol
    })
}

/// Where the ray from interior point `x` along `d` leaves element `e`.
/// Returns a vertex of the element, creating a new edge point when needed.
/// `avoid` is excluded as a snapping target.
fn ray_exit(parts: &mut MeshParts, e: usize, x: Vec2, d: Vec2, avoid: usize) -> Result<usize> {
    let el = parts.elements[e].clone();
    let n = el.len();
    let mut best: Option<(f64, usize, f64)> = None;
    for i in 0..n {
        let (pa, pb) = (parts.vertices[el.vertices[i]], parts.vertices[el.vertices[(i + 1) % n]]);
        if let Some((t, s)) = geometry::line_intersection(x, x + d, pa, pb) {
            if t > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&s) && best.is_none_or(|b| t < b.0) {
                best = Some((t, i, s.clamp(0.0, 1.0)));
            }
        }
    }
    let (_, i, s) = best.ok_or_else(|| Error::Crack("cannot extend tip to the element boundary".into()))?;
    let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
    if s < EXTENSION_SNAP && a != avoid {
        return Ok(a);
    }
    if s > 1.0 - EXTENSION_SNAP && b != avoid {
        return Ok(b);
    }
    let mut ep = EdgePoints::default();
    let v = ep.get_or_insert(&mut parts.vertices, a, b, s, 0.0);
    ep.apply(&mut parts.elements);
    Ok(v)
}

/// Splits element `e` along `chord` (first and last entries are vertices
/// of `e`, the rest are new interior vertices). The first piece replaces
/// `e`, the second is appended.
fn split_element(parts: &mut MeshParts, e: usize, chord: &[usize]) -> Result<()> {
    let el = parts.elements[e].clone();
    let n = el.len();
    let (u, w) = (chord[0], *chord.last().unwrap());
    let iu = el.position(u).ok_or_else(|| Error::Crack("chord start is not on the split element".into()))?;
    let iw = el.position(w).ok_or_else(|| Error::Crack("chord end is not on the split element".into()))?;
    let inner = &chord[1..chord.len() - 1];

    let arc = |from: usize, to: usize| -> (Vec<usize>, Vec<u32>) {
        let mut vs = Vec::new();
        let mut ts = Vec::new();
        let mut k = from;
        while k != to {
            vs.push(el.vertices[k]);
            ts.push(el.edge_tags[k]);
            k = (k + 1) % n;
        }
        vs.push(el.vertices[to]);
        (vs, ts)
    };
    // piece 1: u → … → w along the boundary, then back along the chord
    let (mut v1, mut t1) = arc(iu, iw);
    for &x in inner.iter().rev() {
        t1.push(tags::INTERIOR);
        v1.push(x);
    }
    t1.push(tags::INTERIOR);
    // piece 2: w → … → u along the boundary, then forward along the chord
    let (mut v2, mut t2) = arc(iw, iu);
    for &x in inner {
        t2.push(tags::INTERIOR);
        v2.push(x);
    }
    t2.push(tags::INTERIOR);

    for vs in [&v1, &v2] {
        let pts: Vec<Vec2> = vs.iter().map(|&v| parts.vertices[v]).collect();
        if vs.len() < 3 || geometry::signed_area(&pts) <= 0.0 || !geometry::is_simple(&pts) {
            return Err(Error::Crack(format!("splitting element {e} along the crack gives a degenerate piece")));
        }
    }
    parts.elements[e] = Element { vertices: v1, edge_tags: t1, level: el.level };
    parts.elements.push(Element { vertices: v2, edge_tags: t2, level: el.level });
    Ok(())
}

/// Gives elements on the right of the path a copy of each path vertex.
///
/// `before` is the crack point preceding `path[0]` when the path continues
/// an existing crack. End vertices are duplicated only when requested.
pub(crate) fn duplicate_path(parts: &mut MeshParts, path: &[usize], before: Option<Vec2>, dup_first: bool, dup_last: bool) {
    let m = path.len();
    let mut vertex_elements: Vec<Vec<usize>> = vec![Vec::new(); parts.vertices.len()];
    for (e, el) in parts.elements.iter().enumerate() {
        for &v in &el.vertices {
            vertex_elements[v].push(e);
        }
    }
    for k in 0..m {
        if (k == 0 && !dup_first) || (k == m - 1 && !dup_last) {
            continue;
        }
        let c = path[k];
        let pc = parts.vertices[c];
        let next = if k + 1 < m { Some(parts.vertices[path[k + 1]]) } else { None };
        let prev = if k > 0 { Some(parts.vertices[path[k - 1]]) } else { before };
        let (prev, next) = match (prev, next) {
            (Some(p), Some(q)) => (p, q),
            (None, Some(q)) => (pc * 2.0 - q, q),
            (Some(p), None) => (p, pc * 2.0 - p),
            (None, None) => continue,
        };
        let dn = next - pc;
        let dp = prev - pc;
        let left_span = ccw_sweep(dn, dp);
        let mut right: BTreeSet<usize> = BTreeSet::new();
        for &e in &vertex_elements[c] {
            let el = &parts.elements[e];
            let n = el.len();
            let i = el.position(c).unwrap();
            let a = parts.vertices[el.vertices[(i + 1) % n]] - pc;
            let b = parts.vertices[el.vertices[(i + n - 1) % n]] - pc;
            let sector = ccw_sweep(a, b);
            let bis = geometry::rotate(a.normalize(), 0.5 * sector);
            if ccw_sweep(dn, bis) >= left_span {
                right.insert(e);
            }
        }
        if right.is_empty() || right.len() == vertex_elements[c].len() {
            continue;
        }
        let copy = parts.vertices.len();
        parts.vertices.push(pc);
        vertex_elements.push(Vec::new());
        for &e in &right {
            for v in &mut parts.elements[e].vertices {
                if *v == c {
                    *v = copy;
                }
            }
            vertex_elements[copy].push(e);
        }
        vertex_elements[c].retain(|e| !right.contains(e));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::mesh::{generate_structured, ElementKind};

    fn square(n: usize) -> PolyMesh {
        generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 10.0, 10.0), n, n).unwrap()
    }

    #[test]
    fn edge_crack_along_grid_line() {
        let m = square(8);
        let c = insert_crack(&m, &[Vec2::new(0.0, 5.0), Vec2::new(5.0, 5.0)]).unwrap();
        assert_eq!(c.cracks().len(), 1);
        let cr = &c.cracks()[0];
        assert_eq!(cr.tips.len(), 1);
        assert_eq!(c.vertex(cr.tips[0].vertex), Vec2::new(5.0, 5.0));
        // mouth plus three interior grid vertices duplicated
        assert_eq!(cr.face_pairs.len(), 4);
        assert_eq!(c.n_vertices(), m.n_vertices() + 4);
        for &(a, b) in &cr.face_pairs {
            assert_eq!(c.vertex(a).y, 5.0);
            assert_eq!(c.vertex(a), c.vertex(b));
        }
        assert!((c.total_area() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn half_depth_slit_in_single_square() {
        let m = square(1);
        let c = insert_crack(&m, &[Vec2::new(0.0, 5.0), Vec2::new(5.0, 5.0)]).unwrap();
        assert_eq!(c.n_elements(), m.n_elements() + 1);
        assert!((c.total_area() - m.total_area()).abs() < 1e-12 * m.total_area());
    }

    #[test]
    fn oblique_interior_crack_has_two_tips() {
        let m = square(6);
        let c = insert_crack(&m, &[Vec2::new(3.1, 3.3), Vec2::new(6.7, 6.2)]).unwrap();
        assert_eq!(c.cracks()[0].tips.len(), 2);
        assert!((c.total_area() - 100.0).abs() < 1e-12);
        assert!(!c.cracks()[0].face_pairs.is_empty());
    }

    #[test]
    fn polyline_outside_mesh_is_rejected() {
        let m = square(2);
        assert!(insert_crack(&m, &[Vec2::new(12.0, 1.0), Vec2::new(14.0, 3.0)]).is_err());
    }

    #[test]
    fn polyline_crossing_the_boundary_is_rejected() {
        let m = square(2);
        assert!(insert_crack(&m, &[Vec2::new(5.0, 5.0), Vec2::new(14.0, 5.2)]).is_err());
    }

    #[test]
    fn crossing_an_existing_crack_is_rejected() {
        let m = square(4);
        let c = insert_crack(&m, &[Vec2::new(0.0, 5.0), Vec2::new(6.0, 5.0)]).unwrap();
        assert!(insert_crack(&c, &[Vec2::new(3.3, 3.0), Vec2::new(3.3, 7.0)]).is_err());
    }
}
