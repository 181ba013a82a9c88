//! Polygonal mesh model with explicit, mesh-conforming crack topology.
//!
//! Elements are counter-clockwise vertex cycles. Each element edge `i` runs
//! from `vertices[i]` to `vertices[i + 1]` and carries a tag: `0` for interior
//! edges, a boundary tag (see [`tags`]) for edges without a twin. Crack faces
//! are boundary edges tagged [`tags::CRACK`]; vertices along a crack exist
//! twice (a face pair) so the displacement can jump across it.

mod crack;
mod generate;
mod hole;
pub mod io;
mod voronoi;

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

pub use crack::{cut_segment, insert_crack, CutOutcome};
pub(crate) use crack::extend_tip;
pub use generate::{generate_structured, ElementKind};
pub use hole::cut_circular_holes;
pub use voronoi::{generate_voronoi, voronoi_from_seeds};

use crate::error::{Error, Result};
use crate::geometry::{self, cross, Vec2};

pub mod tags {
    pub const INTERIOR: u32 = 0;
    pub const BOTTOM: u32 = 1;
    pub const RIGHT: u32 = 2;
    pub const TOP: u32 = 3;
    pub const LEFT: u32 = 4;
    pub const HOLE: u32 = 5;
    pub const CRACK: u32 = 100;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub vertices: Vec<usize>,
    pub edge_tags: Vec<u32>,
    /// Refinement depth; 0 for elements of an initial mesh.
    pub level: u32,
}

impl Element {
    pub fn new(vertices: Vec<usize>) -> Element {
        let n = vertices.len();
        Element { vertices, edge_tags: vec![tags::INTERIOR; n], level: 0 }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TipEnd {
    Start,
    End,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrackTip {
    pub end: TipEnd,
    pub vertex: usize,
    /// Direction of the last crack segment, pointing out of the crack.
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct CrackGeometry {
    pub polyline: Vec<Vec2>,
    pub tips: Vec<CrackTip>,
    /// Coincident, topologically distinct vertex pairs along the crack faces.
    pub face_pairs: Vec<(usize, usize)>,
}

impl CrackGeometry {
    pub fn tip_angle(polyline: &[Vec2], end: TipEnd) -> f64 {
        let n = polyline.len();
        let d = match end {
            TipEnd::End => polyline[n - 1] - polyline[n - 2],
            TipEnd::Start => polyline[0] - polyline[1],
        };
        d.y.atan2(d.x)
    }

    pub fn tip_position(&self, end: TipEnd) -> Vec2 {
        match end {
            TipEnd::Start => self.polyline[0],
            TipEnd::End => *self.polyline.last().unwrap(),
        }
    }

    /// Total length of the crack polyline.
    pub fn length(&self) -> f64 {
        self.polyline.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

/// Reference to one tip of one crack in a mesh.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TipRef {
    pub crack: usize,
    pub tip: usize,
}

#[derive(Clone, Debug)]
pub struct ElementGeometry {
    pub centroid: Vec2,
    pub diameter: f64,
    pub area: f64,
    /// Outward unit normal of edge i (from vertex i to vertex i+1).
    pub normals: Vec<Vec2>,
    pub lengths: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub element: usize,
    pub local: usize,
    pub tag: u32,
}

/// Derived adjacency, computed once per mesh on first use.
#[derive(Clone, Debug)]
pub struct Topology {
    pub vertex_elements: Vec<Vec<usize>>,
    /// `twin[e][i]` is the (element, local edge) traversing edge i of e backwards.
    pub twin: Vec<Vec<Option<(usize, usize)>>>,
}

impl Topology {
    fn build(n_vertices: usize, elements: &[Element]) -> Topology {
        let mut vertex_elements = vec![Vec::new(); n_vertices];
        let mut directed: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (e, el) in elements.iter().enumerate() {
            let n = el.len();
            for i in 0..n {
                vertex_elements[el.vertices[i]].push(e);
                directed.insert((el.vertices[i], el.vertices[(i + 1) % n]), (e, i));
            }
        }
        let twin = elements
            .iter()
            .map(|el| {
                let n = el.len();
                (0..n).map(|i| directed.get(&(el.vertices[(i + 1) % n], el.vertices[i])).copied()).collect()
            })
            .collect();
        Topology { vertex_elements, twin }
    }

    /// Elements sharing at least one edge with `e`.
    pub fn edge_neighbors(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.twin[e].iter().filter_map(|t| t.map(|(f, _)| f))
    }
}

#[derive(Debug)]
pub struct PolyMesh {
    vertices: Vec<Vec2>,
    elements: Vec<Element>,
    cracks: Vec<CrackGeometry>,
    hanging_nodes: BTreeSet<usize>,
    topology: OnceLock<Topology>,
}

impl Clone for PolyMesh {
    fn clone(&self) -> Self {
        PolyMesh {
            vertices: self.vertices.clone(),
            elements: self.elements.clone(),
            cracks: self.cracks.clone(),
            hanging_nodes: self.hanging_nodes.clone(),
            topology: OnceLock::new(),
        }
    }
}

impl PartialEq for PolyMesh {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.elements == other.elements && self.cracks == other.cracks
    }
}

/// Mutable mesh parts handed between construction stages.
#[derive(Clone, Debug, Default)]
pub struct MeshParts {
    pub vertices: Vec<Vec2>,
    pub elements: Vec<Element>,
    pub cracks: Vec<CrackGeometry>,
}

impl PolyMesh {
    /// Builds a mesh, normalizing element orientation to counter-clockwise
    /// and checking every structural invariant.
    pub fn new(vertices: Vec<Vec2>, mut elements: Vec<Element>, cracks: Vec<CrackGeometry>) -> Result<PolyMesh> {
        for (e, el) in elements.iter_mut().enumerate() {
            if el.len() < 3 {
                return Err(Error::InvalidMesh(format!("element {e} has {} vertices", el.len())));
            }
            if el.edge_tags.len() != el.len() {
                return Err(Error::InvalidMesh(format!("element {e} has mismatched edge tag count")));
            }
            if let Some(&v) = el.vertices.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!("element {e} references missing vertex {v}")));
            }
            let pts: Vec<Vec2> = el.vertices.iter().map(|&v| vertices[v]).collect();
            if geometry::signed_area(&pts) < 0.0 {
                let n = el.len();
                let vs: Vec<usize> = (0..n).map(|j| el.vertices[(n - j) % n]).collect();
                let ts: Vec<u32> = (0..n).map(|j| el.edge_tags[n - 1 - j]).collect();
                el.vertices = vs;
                el.edge_tags = ts;
            }
        }
        let mesh = PolyMesh { vertices, elements, cracks, hanging_nodes: BTreeSet::new(), topology: OnceLock::new() };
        mesh.validate()?;
        let hanging_nodes = mesh.detect_hanging_nodes();
        Ok(PolyMesh { hanging_nodes, ..mesh })
    }

    pub fn from_parts(parts: MeshParts) -> Result<PolyMesh> {
        PolyMesh::new(parts.vertices, parts.elements, parts.cracks)
    }

    pub fn to_parts(&self) -> MeshParts {
        MeshParts { vertices: self.vertices.clone(), elements: self.elements.clone(), cracks: self.cracks.clone() }
    }

    fn validate(&self) -> Result<()> {
        let scale = self.bounding_diagonal();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, el) in self.elements.iter().enumerate() {
            let mut sorted = el.vertices.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMesh(format!("element {e} repeats a vertex")));
            }
            let pts = self.element_points(e);
            let area = geometry::signed_area(&pts);
            let h = geometry::diameter(&pts);
            if !(area > 1e-14 * h * h) {
                return Err(Error::DegenerateElement { element: e, reason: format!("area {area:e}") });
            }
            if !geometry::is_simple(&pts) {
                return Err(Error::DegenerateElement { element: e, reason: "self-intersecting".into() });
            }
            let n = el.len();
            for i in 0..n {
                let key = (el.vertices[i], el.vertices[(i + 1) % n]);
                if let Some(f) = seen.insert(key, e) {
                    return Err(Error::InvalidMesh(format!(
                        "directed edge {key:?} used by elements {f} and {e} (overlap or orientation clash)"
                    )));
                }
            }
        }
        let topo = self.topology();
        for (e, el) in self.elements.iter().enumerate() {
            for i in 0..el.len() {
                match topo.twin[e][i] {
                    None if el.edge_tags[i] == tags::INTERIOR => {
                        return Err(Error::InvalidMesh(format!(
                            "edge {i} of element {e} has no neighbor and no boundary tag (unabsorbed hanging node?)"
                        )));
                    }
                    Some((f, j)) if el.edge_tags[i] != tags::INTERIOR || self.elements[f].edge_tags[j] != tags::INTERIOR => {
                        return Err(Error::InvalidMesh(format!("shared edge {i} of element {e} carries a boundary tag")));
                    }
                    _ => {}
                }
            }
        }
        for c in &self.cracks {
            for &(a, b) in &c.face_pairs {
                if a >= self.vertices.len() || b >= self.vertices.len() {
                    return Err(Error::InvalidMesh("face pair references missing vertex".into()));
                }
                if (self.vertices[a] - self.vertices[b]).norm() > 1e-12 * scale {
                    return Err(Error::InvalidMesh(format!("face pair ({a}, {b}) is not coincident")));
                }
            }
            for t in &c.tips {
                if t.vertex >= self.vertices.len() || (self.vertices[t.vertex] - c.tip_position(t.end)).norm() > 1e-12 * scale {
                    return Err(Error::InvalidMesh("crack tip is not a mesh vertex at the polyline end".into()));
                }
            }
        }
        Ok(())
    }

    fn detect_hanging_nodes(&self) -> BTreeSet<usize> {
        let tips: BTreeSet<usize> = self.cracks.iter().flat_map(|c| c.tips.iter().map(|t| t.vertex)).collect();
        let mut out = BTreeSet::new();
        for el in &self.elements {
            let n = el.len();
            for i in 0..n {
                let v = el.vertices[i];
                if tips.contains(&v) {
                    continue;
                }
                if self.is_straight(el.vertices[(i + n - 1) % n], v, el.vertices[(i + 1) % n]) {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// True when `v` lies on the open segment between `a` and `b` to
    /// rounding accuracy.
    pub(crate) fn is_straight(&self, a: usize, v: usize, b: usize) -> bool {
        is_straight_pts(self.vertices[a], self.vertices[v], self.vertices[b])
    }

    fn bounding_diagonal(&self) -> f64 {
        let (mut lo, mut hi) = (Vec2::repeat(f64::INFINITY), Vec2::repeat(f64::NEG_INFINITY));
        for p in &self.vertices {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if self.vertices.is_empty() {
            1.0
        } else {
            (hi - lo).norm()
        }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Vec2 {
        self.vertices[v]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, e: usize) -> &Element {
        &self.elements[e]
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn cracks(&self) -> &[CrackGeometry] {
        &self.cracks
    }

    pub fn hanging_nodes(&self) -> &BTreeSet<usize> {
        &self.hanging_nodes
    }

    pub fn topology(&self) -> &Topology {
        self.topology.get_or_init(|| Topology::build(self.vertices.len(), &self.elements))
    }

    pub fn element_points(&self, e: usize) -> Vec<Vec2> {
        self.elements[e].vertices.iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn element_geometry(&self, e: usize) -> ElementGeometry {
        element_geometry_of(&self.element_points(e))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.elements.len()).map(|e| geometry::signed_area(&self.element_points(e))).sum()
    }

    pub fn boundary_edges(&self) -> Vec<BoundaryEdge> {
        let mut out = Vec::new();
        for (e, el) in self.elements.iter().enumerate() {
            for (local, &tag) in el.edge_tags.iter().enumerate() {
                if tag != tags::INTERIOR {
                    out.push(BoundaryEdge { element: e, local, tag });
                }
            }
        }
        out
    }

    pub fn tips(&self) -> Vec<TipRef> {
        let mut out = Vec::new();
        for (c, cr) in self.cracks.iter().enumerate() {
            for t in 0..cr.tips.len() {
                out.push(TipRef { crack: c, tip: t });
            }
        }
        out
    }

    pub fn tip(&self, r: TipRef) -> &CrackTip {
        &self.cracks[r.crack].tips[r.tip]
    }

    pub fn tip_vertices(&self) -> BTreeSet<usize> {
        self.cracks.iter().flat_map(|c| c.tips.iter().map(|t| t.vertex)).collect()
    }

    /// Vertices on crack-tagged edges other than the tips. Each lies on
    /// exactly one face.
    pub fn crack_face_vertices(&self) -> BTreeSet<usize> {
        let tips = self.tip_vertices();
        let mut out = self.vertices_with_tag(tags::CRACK);
        out.retain(|v| !tips.contains(v));
        out
    }

    /// Vertices incident to at least one boundary edge with the given tag.
    pub fn vertices_with_tag(&self, tag: u32) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for el in &self.elements {
            let n = el.len();
            for i in 0..n {
                if el.edge_tags[i] == tag {
                    out.insert(el.vertices[i]);
                    out.insert(el.vertices[(i + 1) % n]);
                }
            }
        }
        out
    }

    /// Smallest interior angle over all elements, in radians.
    pub fn min_angle(&self) -> f64 {
        (0..self.elements.len())
            .map(|e| {
                let p = self.element_points(e);
                let n = p.len();
                (0..n)
                    .map(|i| {
                        let a = p[(i + n - 1) % n] - p[i];
                        let b = p[(i + 1) % n] - p[i];
                        geometry::ccw_sweep(b, a)
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Element whose closed region contains `p`, preferring strict interiors.
    pub fn locate(&self, p: Vec2) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for e in 0..self.elements.len() {
            let pts = self.element_points(e);
            let g = self.element_geometry(e);
            if (p - g.centroid).norm() > g.diameter * (1.0 + 1e-9) {
                continue;
            }
            let d = geometry::distance_to_boundary(p, &pts);
            if geometry::point_in_polygon(p, &pts) || d <= 1e-12 * g.diameter {
                let signed = if geometry::point_in_polygon(p, &pts) { -d } else { d };
                if best.map_or(true, |(_, s)| signed < s) {
                    best = Some((e, signed));
                }
            }
        }
        best.map(|b| b.0)
    }
}

pub(crate) fn is_straight_pts(a: Vec2, v: Vec2, b: Vec2) -> bool {
    let u = a - v;
    let w = b - v;
    cross(u, w).abs() <= 1e-9 * u.norm() * w.norm() && u.dot(&w) < 0.0
}

pub fn element_geometry_of(pts: &[Vec2]) -> ElementGeometry {
    let n = pts.len();
    let mut normals = Vec::with_capacity(n);
    let mut lengths = Vec::with_capacity(n);
    for i in 0..n {
        let t = pts[(i + 1) % n] - pts[i];
        let l = t.norm();
        normals.push(Vec2::new(t.y / l, -t.x / l));
        lengths.push(l);
    }
    ElementGeometry {
        centroid: geometry::polygon_centroid(pts),
        diameter: geometry::diameter(pts),
        area: geometry::signed_area(pts),
        normals,
        lengths,
    }
}

/// Points to be inserted on existing edges, keyed by the undirected edge.
///
/// Parameters run from the lower to the higher vertex index so that both
/// elements sharing an edge see the same ordering.
#[derive(Default, Debug)]
pub(crate) struct EdgePoints {
    map: HashMap<(usize, usize), Vec<(f64, usize)>>,
}

impl EdgePoints {
    /// Returns the vertex at parameter `t` (from `a` towards `b`) on edge
    /// (a, b), creating it unless one already lies within `tol_t`.
    pub fn get_or_insert(&mut self, vertices: &mut Vec<Vec2>, a: usize, b: usize, t: f64, tol_t: f64) -> usize {
        let (lo, hi, s) = if a < b { (a, b, t) } else { (b, a, 1.0 - t) };
        let list = self.map.entry((lo, hi)).or_default();
        if let Some(&(_, v)) = list.iter().find(|(u, _)| (u - s).abs() <= tol_t) {
            return v;
        }
        let p = vertices[lo] + (vertices[hi] - vertices[lo]) * s;
        let v = vertices.len();
        vertices.push(p);
        list.push((s, v));
        v
    }

    /// Splices the registered points into every element edge they lie on;
    /// sub-edges inherit the tag of the edge they came from.
    pub fn apply(&self, elements: &mut [Element]) {
        if self.map.is_empty() {
            return;
        }
        for el in elements.iter_mut() {
            let n = el.len();
            let mut vs = Vec::with_capacity(n + 2);
            let mut ts = Vec::with_capacity(n + 2);
            let mut touched = false;
            for i in 0..n {
                let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
                vs.push(a);
                ts.push(el.edge_tags[i]);
                let key = if a < b { (a, b) } else { (b, a) };
                if let Some(list) = self.map.get(&key) {
                    let mut pts = list.clone();
                    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
                    if a > b {
                        pts.reverse();
                    }
                    for (_, v) in pts {
                        vs.push(v);
                        ts.push(el.edge_tags[i]);
                        touched = true;
                    }
                }
            }
            if touched {
                el.vertices = vs;
                el.edge_tags = ts;
            }
        }
    }
}

/// Drops vertices no element references and renumbers everything else.
pub(crate) fn compact(parts: &mut MeshParts) {
    let mut used = vec![false; parts.vertices.len()];
    for el in &parts.elements {
        for &v in &el.vertices {
            used[v] = true;
        }
    }
    if used.iter().all(|&u| u) {
        return;
    }
    let mut map = vec![usize::MAX; parts.vertices.len()];
    let mut verts = Vec::new();
    for (v, &u) in used.iter().enumerate() {
        if u {
            map[v] = verts.len();
            verts.push(parts.vertices[v]);
        }
    }
    for el in &mut parts.elements {
        for v in &mut el.vertices {
            *v = map[*v];
        }
    }
    for c in &mut parts.cracks {
        for t in &mut c.tips {
            t.vertex = map[t.vertex];
        }
        c.face_pairs.retain(|&(a, b)| map[a] != usize::MAX && map[b] != usize::MAX);
        for p in &mut c.face_pairs {
            *p = (map[p.0], map[p.1]);
        }
    }
    parts.vertices = verts;
}

/// Recomputes face pairs of every crack from coincident vertices incident to
/// crack-tagged edges. Pairs are ordered by vertex index.
pub(crate) fn rebuild_face_pairs(parts: &mut MeshParts) {
    if parts.cracks.is_empty() {
        return;
    }
    let mut on_crack = BTreeSet::new();
    for el in &parts.elements {
        let n = el.len();
        for i in 0..n {
            if el.edge_tags[i] == tags::CRACK {
                on_crack.insert(el.vertices[i]);
                on_crack.insert(el.vertices[(i + 1) % n]);
            }
        }
    }
    let mut buckets: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for &v in &on_crack {
        let p = parts.vertices[v];
        buckets.entry((p.x.to_bits(), p.y.to_bits())).or_default().push(v);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for list in buckets.values() {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                pairs.push((list[i].min(list[j]), list[i].max(list[j])));
            }
        }
    }
    pairs.sort_unstable();
    // Assign each pair to the crack whose polyline passes closest.
    for c in &mut parts.cracks {
        c.face_pairs.clear();
    }
    for (a, b) in pairs {
        let p = parts.vertices[a];
        let best = (0..parts.cracks.len())
            .min_by(|&i, &j| {
                polyline_distance(p, &parts.cracks[i].polyline).total_cmp(&polyline_distance(p, &parts.cracks[j].polyline))
            })
            .unwrap();
        parts.cracks[best].face_pairs.push((a, b));
    }
}

pub(crate) fn polyline_distance(p: Vec2, poly: &[Vec2]) -> f64 {
    if poly.len() == 1 {
        return (p - poly[0]).norm();
    }
    poly.windows(2).map(|w| geometry::point_segment_distance(p, w[0], w[1]).0).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> PolyMesh {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        let mut el = Element::new(vec![0, 1, 2, 3]);
        el.edge_tags = vec![tags::BOTTOM, tags::RIGHT, tags::TOP, tags::LEFT];
        PolyMesh::new(v, vec![el], vec![]).unwrap()
    }

    #[test]
    fn unit_square_geometry() {
        let g = unit_square().element_geometry(0);
        assert!((g.centroid - Vec2::new(0.5, 0.5)).norm() < 1e-15);
        assert!((g.area - 1.0).abs() < 1e-15);
        assert!((g.diameter - 2f64.sqrt()).abs() < 1e-15);
        assert!((g.normals[0] - Vec2::new(0.0, -1.0)).norm() < 1e-15);
        assert!((g.normals[1] - Vec2::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn right_triangle_geometry() {
        let g = element_geometry_of(&[Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]);
        assert!((g.area - 0.5).abs() < 1e-15);
        assert!((g.centroid - Vec2::new(1.0 / 3.0, 1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn regular_pentagon_area() {
        let pts: Vec<Vec2> = (0..5)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 5.0;
                Vec2::new(a.cos(), a.sin())
            })
            .collect();
        let g = element_geometry_of(&pts);
        // oracle: five isosceles triangles with apex angle 72°
        let expected = 5.0 * 0.5 * (72f64.to_radians()).sin();
        assert!((g.area - expected).abs() < 1e-14);
        assert!((g.area - 2.3776).abs() < 1e-4);
        assert!(g.centroid.norm() < 1e-15);
    }

    #[test]
    fn clockwise_input_is_reoriented_with_tags() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        let mut el = Element::new(vec![0, 3, 2, 1]);
        el.edge_tags = vec![tags::LEFT, tags::TOP, tags::RIGHT, tags::BOTTOM];
        let m = PolyMesh::new(v, vec![el], vec![]).unwrap();
        let el = m.element(0);
        assert!(m.element_geometry(0).area > 0.0);
        let n = el.len();
        for i in 0..n {
            let (a, b) = (m.vertex(el.vertices[i]), m.vertex(el.vertices[(i + 1) % n]));
            let mid = (a + b) / 2.0;
            let expect = if mid.y == 0.0 {
                tags::BOTTOM
            } else if mid.x == 1.0 {
                tags::RIGHT
            } else if mid.y == 1.0 {
                tags::TOP
            } else {
                tags::LEFT
            };
            assert_eq!(el.edge_tags[i], expect);
        }
    }

    #[test]
    fn untagged_open_edge_is_rejected() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(PolyMesh::new(v, vec![Element::new(vec![0, 1, 2])], vec![]).is_err());
    }

    #[test]
    fn edge_points_are_shared_between_neighbors() {
        let mut verts = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        let mut els = vec![Element::new(vec![0, 1, 2]), Element::new(vec![0, 2, 3])];
        let mut ep = EdgePoints::default();
        let m1 = ep.get_or_insert(&mut verts, 0, 2, 0.5, 1e-9);
        let m2 = ep.get_or_insert(&mut verts, 2, 0, 0.5, 1e-9);
        assert_eq!(m1, m2);
        ep.apply(&mut els);
        assert_eq!(els[0].vertices, vec![0, 1, 2, 4]);
        assert_eq!(els[1].vertices, vec![0, 4, 2, 3]);
    }
}
