use super::{compact, tags, Element, EdgePoints, PolyMesh};
use crate::error::{Error, Result};
use crate::geometry::{ccw_sweep, Vec2};

/// Removes the discs `(center, radius)` from the mesh.
///
/// Vertices close to a circle are first pulled onto it, edges crossing a
/// circle are split at the crossing, and each element boundary portion inside
/// a disc is replaced by a clockwise circular arc discretized with angular
/// step at most `arc_step`. Arc edges are tagged [`tags::HOLE`]. Each
/// element must intersect a disc in at most one connected region and must
/// not contain a disc entirely.
pub fn cut_circular_holes(mesh: &PolyMesh, holes: &[(Vec2, f64)], arc_step: f64) -> Result<PolyMesh> {
    if !(arc_step > 0.0) {
        return Err(Error::InvalidInput("arc_step must be positive".into()));
    }
    let mut parts = mesh.to_parts();
    for &(c, r) in holes {
        if !(r > 0.0) {
            return Err(Error::InvalidInput("hole radius must be positive".into()));
        }
        // pull nearby vertices onto the circle to avoid sliver edges
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
        for (v, p) in parts.vertices.iter_mut().enumerate() {
            let d = (*p - c).norm();
            if (d - r).abs() < 0.1 * shortest[v] && d > 0.0 {
                *p = c + (*p - c) * (r / d);
            }
        }
        let tol = 1e-10 * r;
        let inside = |p: Vec2| (p - c).norm() < r - tol;

        // crossing points, shared between neighbors
        let mut ep = EdgePoints::default();
        let mut seen = std::collections::HashSet::new();
        for e in 0..parts.elements.len() {
            let el = parts.elements[e].clone();
            let n = el.len();
            for i in 0..n {
                let (a, b) = (el.vertices[i], el.vertices[(i + 1) % n]);
                if !seen.insert((a.min(b), a.max(b))) {
                    continue;
                }
                let (pa, pb) = (parts.vertices[a], parts.vertices[b]);
                for t in circle_roots(pa, pb, c, r) {
                    let x = pa + (pb - pa) * t;
                    if (x - pa).norm() > tol && (x - pb).norm() > tol {
                        ep.get_or_insert(&mut parts.vertices, a, b, t, 1e-12);
                    }
                }
            }
        }
        ep.apply(&mut parts.elements);

        let mut kept = Vec::with_capacity(parts.elements.len());
        for el in std::mem::take(&mut parts.elements) {
            let n = el.len();
            let pts: Vec<Vec2> = el.vertices.iter().map(|&v| parts.vertices[v]).collect();
            let piece_in: Vec<bool> = (0..n).map(|i| inside((pts[i] + pts[(i + 1) % n]) / 2.0)).collect();
            if piece_in.iter().all(|&b| b) {
                continue;
            }
            if !piece_in.iter().any(|&b| b) {
                if crate::geometry::point_in_polygon(c, &pts) {
                    return Err(Error::InvalidMesh("an element contains a whole hole; refine the mesh first".into()));
                }
                kept.push(el);
                continue;
            }
            // start at the beginning of an outside piece that follows an inside one
            let start = (0..n).find(|&i| !piece_in[i] && piece_in[(i + n - 1) % n]).unwrap();
            let mut vs = Vec::new();
            let mut ts = Vec::new();
            let mut k = 0;
            while k < n {
                let i = (start + k) % n;
                if !piece_in[i] {
                    vs.push(el.vertices[i]);
                    ts.push(el.edge_tags[i]);
                    k += 1;
                    continue;
                }
                // inside run from vertex i to the first vertex after it
                let a = el.vertices[i];
                let mut j = k;
                while j < n && piece_in[(start + j) % n] {
                    j += 1;
                }
                let b = el.vertices[(start + j) % n];
                vs.push(a);
                ts.push(tags::HOLE);
                let (da, db) = (parts.vertices[a] - c, parts.vertices[b] - c);
                let sweep = ccw_sweep(db, da);
                let m = (sweep / arc_step).ceil().max(1.0) as usize;
                let a0 = da.y.atan2(da.x);
                for s in 1..m {
                    let ang = a0 - sweep * s as f64 / m as f64;
                    parts.vertices.push(c + Vec2::new(ang.cos(), ang.sin()) * r);
                    vs.push(parts.vertices.len() - 1);
                    ts.push(tags::HOLE);
                }
                k = j;
            }
            kept.push(Element { vertices: vs, edge_tags: ts, level: el.level });
        }
        parts.elements = kept;
    }
    compact(&mut parts);
    PolyMesh::from_parts(parts)
}

/// Parameters t in (0, 1) where segment a + t(b - a) meets the circle.
fn circle_roots(a: Vec2, b: Vec2, c: Vec2, r: f64) -> Vec<f64> {
    let d = b - a;
    let f = a - c;
    let qa = d.dot(&d);
    let qb = 2.0 * f.dot(&d);
    let qc = f.dot(&f) - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)].into_iter().filter(|t| *t > 0.0 && *t < 1.0).collect()
}
