//! Local mesh refinement: newest vertex bisection for triangles, midpoint
//! subdivision for arbitrary polygons and balanced polyTree subdivision.
//! Hanging nodes created by the polygon schemes become extra vertices of the
//! unrefined neighbors.

mod midpoint;
mod nvb;
mod regularize;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mesh::PolyMesh;

pub use midpoint::{midpoint_refine, subdivide, Subdivision, REUSE_FRACTION};
pub use nvb::nvb_refine;
pub use regularize::regularize;

/// Default threshold for [`regularize`].
pub const EPSILON_MERGE: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Nvb,
    Midpoint,
    Polytree,
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nvb" => Ok(Scheme::Nvb),
            "midpoint" => Ok(Scheme::Midpoint),
            "polytree" => Ok(Scheme::Polytree),
            other => Err(format!("unknown refinement scheme {other:?} (nvb, midpoint, polytree)")),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Nvb => "nvb",
            Scheme::Midpoint => "midpoint",
            Scheme::Polytree => "polytree",
        })
    }
}

/// What a refinement pass did.
#[derive(Clone, Debug)]
pub struct RefinementPlan {
    pub scheme: Scheme,
    /// Elements marked by the caller.
    pub marked: Vec<usize>,
    /// Elements refined after closure or balancing.
    pub refined: Vec<usize>,
    /// Non-convex cells split with the plain midpoint pattern (polyTree only).
    pub fallback: Vec<usize>,
    /// Marked elements left whole because their children would be invalid.
    pub skipped: Vec<usize>,
}

pub fn refine(mesh: &PolyMesh, scheme: Scheme, marked: &[usize]) -> Result<(PolyMesh, RefinementPlan)> {
    let mut plan = RefinementPlan { scheme, marked: marked.to_vec(), refined: vec![], fallback: vec![], skipped: vec![] };
    match scheme {
        Scheme::Nvb => {
            let out = nvb_refine(mesh, marked)?;
            plan.refined = marked.to_vec();
            Ok((out, plan))
        }
        Scheme::Midpoint => {
            let set: BTreeSet<usize> = marked.iter().copied().collect();
            let s = subdivide(mesh, &set)?;
            plan.refined = set.difference(&s.skipped.iter().copied().collect()).copied().collect();
            plan.skipped = s.skipped;
            Ok((s.mesh, plan))
        }
        Scheme::Polytree => {
            let set = balance(mesh, marked);
            plan.fallback = set.iter().copied().filter(|&e| !is_convex(mesh, e)).collect();
            let s = subdivide(mesh, &set)?;
            plan.refined = set.difference(&s.skipped.iter().copied().collect()).copied().collect();
            plan.skipped = s.skipped;
            Ok((s.mesh, plan))
        }
    }
}

pub fn polytree_refine(mesh: &PolyMesh, marked: &[usize]) -> Result<PolyMesh> {
    Ok(refine(mesh, Scheme::Polytree, marked)?.0)
}

/// Closes the marked set under the one-level rule: an edge neighbor whose
/// level is below that of a marked cell is marked too.
pub fn balance(mesh: &PolyMesh, marked: &[usize]) -> BTreeSet<usize> {
    let topo = mesh.topology();
    let mut set: BTreeSet<usize> = marked.iter().copied().collect();
    let mut work: Vec<usize> = set.iter().copied().collect();
    while let Some(m) = work.pop() {
        let lm = mesh.element(m).level;
        for n in topo.edge_neighbors(m) {
            if mesh.element(n).level < lm && set.insert(n) {
                work.push(n);
            }
        }
    }
    set
}

fn is_convex(mesh: &PolyMesh, e: usize) -> bool {
    let p = mesh.element_points(e);
    let n = p.len();
    (0..n).all(|i| crate::geometry::orient(p[i], p[(i + 1) % n], p[(i + 2) % n]) >= -1e-12 * crate::geometry::diameter(&p).powi(2))
}

/// Elements with a vertex within `factor` × (local size) of a crack tip,
/// where the local size is the largest diameter among elements at the tip.
pub fn tip_neighborhood(mesh: &PolyMesh, factor: f64) -> Vec<usize> {
    let topo = mesh.topology();
    let mut out = BTreeSet::new();
    for tip in mesh.tip_vertices() {
        let p = mesh.vertex(tip);
        let h = topo.vertex_elements[tip].iter().map(|&e| mesh.element_geometry(e).diameter).fold(0.0, f64::max);
        for e in 0..mesh.n_elements() {
            if mesh.element(e).vertices.iter().any(|&v| (mesh.vertex(v) - p).norm() < factor * h) {
                out.insert(e);
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Rect, Vec2};
    use crate::mesh::{generate_structured, ElementKind};

    #[test]
    fn polytree_single_mark_matches_midpoint() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 3.0, 3.0), 3, 3).unwrap();
        assert_eq!(polytree_refine(&m, &[4]).unwrap(), midpoint_refine(&m, &[4]).unwrap());
    }

    #[test]
    fn balancing_refines_intermediate_cell() {
        // strip of three cells; refine the right one twice
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 3.0, 1.0), 3, 1).unwrap();
        let m1 = midpoint_refine(&m, &[2]).unwrap();
        let deep = m1.locate(Vec2::new(2.1, 0.4)).unwrap();
        let m2 = midpoint_refine(&m1, &[deep]).unwrap();
        let target = m2.locate(Vec2::new(2.05, 0.2)).unwrap();
        assert_eq!(m2.element(target).level, 2);
        let set = balance(&m2, &[target]);
        let middle = m2.locate(Vec2::new(1.5, 0.5)).unwrap();
        assert!(set.contains(&middle));
        let far = m2.locate(Vec2::new(0.5, 0.5)).unwrap();
        assert!(!set.contains(&far));
    }

    #[test]
    fn mark_all_conserves_area() {
        let m = crate::mesh::generate_voronoi(Rect::new(0.0, 0.0, 2.0, 1.0), 30, 2, 7).unwrap();
        let all: Vec<usize> = (0..m.n_elements()).collect();
        for scheme in [Scheme::Midpoint, Scheme::Polytree] {
            let (r, _) = refine(&m, scheme, &all).unwrap();
            assert!((r.total_area() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scheme_parses() {
        assert_eq!("NVB".parse::<Scheme>().unwrap(), Scheme::Nvb);
        assert!("quadtree".parse::<Scheme>().is_err());
    }
}
