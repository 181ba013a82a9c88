//! Superconvergent patch recovery, error norms and Dörfler marking.
//!
//! Sampling points are element centroids carrying the constant projected
//! stress. Each node fits σ ≈ a₀ + a₁ξ + a₂η over its patch, with (ξ, η) the
//! offset from the node divided by the patch diameter, so the recovered
//! nodal value is a₀.

use std::collections::BTreeSet;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::mesh::PolyMesh;
use crate::quadrature::polygon_rule;
use crate::reference::ExactSolution;
use crate::system::Solution;

/// Condition number above which a patch is treated as degenerate.
const MAX_CONDITION: f64 = 1e4;
/// Rings of neighbors a patch may grow by.
const MAX_RINGS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint {
    pub location: Vec2,
    pub stress: Vector3<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryPatch {
    pub node: usize,
    pub elements: Vec<usize>,
    /// Fitted (a₀, a₁, a₂) per stress component, in patch coordinates.
    pub coefficients: [Vector3<f64>; 3],
}

/// Linear stress field over one element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearStress {
    pub centroid: Vec2,
    pub value: Vector3<f64>,
    /// Column j holds ∂σ/∂x_j.
    pub gradient: nalgebra::Matrix3x2<f64>,
}

impl LinearStress {
    pub fn eval(&self, p: Vec2) -> Vector3<f64> {
        self.value + self.gradient * (p - self.centroid)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredField {
    /// σ̃* per node.
    pub nodal: Vec<Vector3<f64>>,
    /// σ* per element.
    pub elements: Vec<LinearStress>,
}

/// Least-squares fit of σ ≈ a₀ + a₁x + a₂y to scalar samples, returned in
/// global coordinates.
pub fn spr_fit(samples: &[(Vec2, f64)]) -> Result<Vector3<f64>> {
    let pts: Vec<Vec2> = samples.iter().map(|s| s.0).collect();
    let origin = pts.iter().fold(Vec2::zeros(), |a, p| a + p) / pts.len().max(1) as f64;
    let scale = pts.iter().map(|p| (p - origin).norm()).fold(0.0, f64::max);
    let vals: Vec<Vector3<f64>> = samples.iter().map(|s| Vector3::new(s.1, 0.0, 0.0)).collect();
    let a = fit(&pts, &vals, origin, scale, usize::MAX)?[0];
    Ok(Vector3::new(a[0] - (a[1] * origin.x + a[2] * origin.y) / scale, a[1] / scale, a[2] / scale))
}

/// Fits all three stress components; coefficients are in coordinates
/// (p − origin) / scale.
fn fit(pts: &[Vec2], vals: &[Vector3<f64>], origin: Vec2, scale: f64, node: usize) -> Result<[Vector3<f64>; 3]> {
    if pts.len() < 3 || !(scale > 0.0) {
        return Err(Error::DegeneratePatch(node));
    }
    let mut a = Matrix3::zeros();
    let mut b = [Vector3::zeros(); 3];
    for (p, v) in pts.iter().zip(vals) {
        let q = (p - origin) / scale;
        let row = Vector3::new(1.0, q.x, q.y);
        a += row * row.transpose();
        for c in 0..3 {
            b[c] += row * v[c];
        }
    }
    let eig = a.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > 0.0) || hi / lo > MAX_CONDITION {
        return Err(Error::DegeneratePatch(node));
    }
    let chol = a.cholesky().ok_or(Error::DegeneratePatch(node))?;
    Ok([chol.solve(&b[0]), chol.solve(&b[1]), chol.solve(&b[2])])
}

pub fn sample_points(mesh: &PolyMesh, solution: &Solution) -> Vec<SamplePoint> {
    (0..mesh.n_elements())
        .map(|e| SamplePoint { location: solution.projections[e].geometry.centroid, stress: solution.stresses[e] })
        .collect()
}

/// Builds and fits the patch of `node`, growing it when the samples do not
/// determine a plane, and falling back to the patch mean when even the grown
/// patch is too flat. One-sided patches (crack face nodes) grow only across
/// shared edges so that they stay on one side of the crack.
pub fn build_patch(mesh: &PolyMesh, samples: &[SamplePoint], node: usize, one_sided: bool) -> Result<RecoveryPatch> {
    let topo = mesh.topology();
    let mut members: BTreeSet<usize> = topo.vertex_elements[node].iter().copied().collect();
    let origin = mesh.vertex(node);
    for ring in 0..=MAX_RINGS {
        if !members.is_empty() {
            let pts: Vec<Vec2> = members.iter().map(|&e| samples[e].location).collect();
            let vals: Vec<Vector3<f64>> = members.iter().map(|&e| samples[e].stress).collect();
            let scale = pts.iter().map(|p| (p - origin).norm()).fold(0.0, f64::max);
            if let Ok(coefficients) = fit(&pts, &vals, origin, scale, node) {
                return Ok(RecoveryPatch { node, elements: members.into_iter().collect(), coefficients });
            }
        }
        if ring == MAX_RINGS {
            break;
        }
        let mut grown = members.clone();
        for &e in &members {
            if one_sided {
                grown.extend(topo.edge_neighbors(e));
            } else {
                for &v in &mesh.element(e).vertices {
                    grown.extend(topo.vertex_elements[v].iter().copied());
                }
            }
        }
        if grown.len() == members.len() {
            break;
        }
        members = grown;
    }
    // samples still nearly collinear: a plane through them would extrapolate
    // wildly, so keep only the patch mean
    if members.len() >= 3 {
        let mean = members.iter().map(|&e| samples[e].stress).sum::<Vector3<f64>>() / members.len() as f64;
        let coefficients = [0, 1, 2].map(|c| Vector3::new(mean[c], 0.0, 0.0));
        return Ok(RecoveryPatch { node, elements: members.into_iter().collect(), coefficients });
    }
    Err(Error::DegeneratePatch(node))
}

/// Recovered stress σ̃* at every node.
pub fn recover_nodal(mesh: &PolyMesh, solution: &Solution) -> Result<Vec<Vector3<f64>>> {
    let samples = sample_points(mesh, solution);
    let faces = mesh.crack_face_vertices();
    (0..mesh.n_vertices())
        .into_par_iter()
        .map(|v| {
            let p = build_patch(mesh, &samples, v, faces.contains(&v))?;
            Ok(Vector3::new(p.coefficients[0][0], p.coefficients[1][0], p.coefficients[2][0]))
        })
        .collect()
}

/// σ*(x) = Σ Πφⁱ(x) σ̃*ᵢ on element `e`, from the scalar projection of each
/// stress component.
pub fn recovered_element_field(solution: &Solution, mesh: &PolyMesh, e: usize, nodal: &[Vector3<f64>]) -> LinearStress {
    let proj = &solution.projections[e];
    let el = mesh.element(e);
    let mut value = Vector3::zeros();
    let mut gradient = nalgebra::Matrix3x2::zeros();
    for c in 0..3 {
        let vals: Vec<f64> = el.vertices.iter().map(|&v| nodal[v][c]).collect();
        let (v0, g) = proj.scalar(&vals);
        value[c] = v0;
        gradient[(c, 0)] = g.x;
        gradient[(c, 1)] = g.y;
    }
    LinearStress { centroid: proj.geometry.centroid, value, gradient }
}

pub fn recover(mesh: &PolyMesh, solution: &Solution) -> Result<RecoveredField> {
    let nodal = recover_nodal(mesh, solution)?;
    let elements = (0..mesh.n_elements()).map(|e| recovered_element_field(solution, mesh, e, &nodal)).collect();
    Ok(RecoveredField { nodal, elements })
}

/// Relative error norms. The analytic ones are present only when an exact
/// solution was supplied.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorNorms {
    pub e_l2: Option<f64>,
    pub e_h1: Option<f64>,
    pub e_spr: Option<f64>,
    /// Global estimator from the recovered stress.
    pub eta: f64,
    /// Absolute ‖e*‖ of the whole domain.
    pub energy_error: f64,
    /// ‖e*‖_K per element.
    pub indicators: Vec<f64>,
}

#[derive(Clone, Copy, Default)]
struct Sums {
    l2_err: f64,
    l2_ref: f64,
    h1_err: f64,
    h1_ref: f64,
    spr_err: f64,
    est_err: f64,
    est_ref: f64,
}

impl std::ops::Add for Sums {
    type Output = Sums;
    fn add(self, o: Sums) -> Sums {
        Sums {
            l2_err: self.l2_err + o.l2_err,
            l2_ref: self.l2_ref + o.l2_ref,
            h1_err: self.h1_err + o.h1_err,
            h1_ref: self.h1_ref + o.h1_ref,
            spr_err: self.spr_err + o.spr_err,
            est_err: self.est_err + o.est_err,
            est_ref: self.est_ref + o.est_ref,
        }
    }
}

pub fn error_norms(mesh: &PolyMesh, solution: &Solution, recovered: &RecoveredField, exact: Option<&dyn ExactSolution>) -> Result<ErrorNorms> {
    let compliance = solution.material.compliance();
    let energy = |s: &Vector3<f64>| 0.5 * s.dot(&(compliance * s));
    let per: Vec<Sums> = (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let pts = mesh.element_points(e);
            let rule = polygon_rule(&pts, solution.projections[e].geometry.centroid);
            let sh = solution.stresses[e];
            let star = &recovered.elements[e];
            let mut s = Sums::default();
            for (p, w) in rule {
                let ss = star.eval(p);
                s.est_err += w * energy(&(ss - sh));
                s.est_ref += w * energy(&ss);
                if let Some(ex) = exact {
                    let u = ex.displacement(p);
                    let sig = ex.stress(p);
                    let du = u - solution.projected_displacement(e, p);
                    s.l2_err += w * du.norm_squared();
                    s.l2_ref += w * u.norm_squared();
                    s.h1_err += w * energy(&(sig - sh));
                    s.h1_ref += w * energy(&sig);
                    s.spr_err += w * energy(&(sig - ss));
                }
            }
            s
        })
        .collect();
    let total = per.iter().fold(Sums::default(), |a, b| a + *b);
    let indicators: Vec<f64> = per.iter().map(|s| s.est_err.max(0.0).sqrt()).collect();
    let ratio = |num: f64, den: f64, what: &str| -> Result<f64> {
        if den > 0.0 {
            Ok((num.max(0.0) / den).sqrt())
        } else {
            Err(Error::ZeroNorm(what.into()))
        }
    };
    let eta = if total.est_err <= 0.0 { 0.0 } else { ratio(total.est_err, total.est_ref, "recovered stress energy")? };
    let (e_l2, e_h1, e_spr) = if exact.is_some() {
        (
            Some(ratio(total.l2_err, total.l2_ref, "exact displacement")?),
            Some(ratio(total.h1_err, total.h1_ref, "exact stress energy")?),
            Some(ratio(total.spr_err, total.h1_ref, "exact stress energy")?),
        )
    } else {
        (None, None, None)
    };
    Ok(ErrorNorms { e_l2, e_h1, e_spr, eta, energy_error: total.est_err.max(0.0).sqrt(), indicators })
}

/// Smallest prefix of the indicators sorted in descending order (ties by
/// lower id) whose squares reach `theta` of the total. Returned ascending.
pub fn dorfler_mark(indicators: &[f64], theta: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..indicators.len()).collect();
    order.sort_by(|&a, &b| indicators[b].total_cmp(&indicators[a]).then(a.cmp(&b)));
    let total: f64 = order.iter().map(|&i| indicators[i] * indicators[i]).sum();
    if !(total > 0.0) {
        return vec![];
    }
    let mut acc = 0.0;
    let mut marked = Vec::new();
    for &i in &order {
        if acc >= theta * total {
            break;
        }
        acc += indicators[i] * indicators[i];
        marked.push(i);
    }
    marked.sort_unstable();
    marked
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_samples_are_reproduced() {
        let f = |p: Vec2| 3.0 + 2.0 * p.x - p.y;
        let pts = [Vec2::new(0.1, 0.2), Vec2::new(1.3, -0.4), Vec2::new(0.7, 2.2), Vec2::new(-1.0, 0.9)];
        let s: Vec<(Vec2, f64)> = pts.iter().map(|&p| (p, f(p))).collect();
        let a = spr_fit(&s).unwrap();
        assert!((a - Vector3::new(3.0, 2.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn collinear_samples_are_degenerate() {
        let s = [(Vec2::new(0.0, 0.0), 1.0), (Vec2::new(1.0, 1.0), 2.0), (Vec2::new(2.0, 2.0), 0.5)];
        assert!(matches!(spr_fit(&s), Err(Error::DegeneratePatch(_))));
    }

    #[test]
    fn quadratic_fit_matches_normal_equations() {
        let f = |p: Vec2| 1.0 + p.x * p.x - 2.0 * p.x * p.y + 0.5 * p.y;
        let pts = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.2),
            Vec2::new(0.3, 1.1),
            Vec2::new(-0.8, 0.4),
            Vec2::new(0.5, -0.9),
            Vec2::new(1.4, 1.3),
        ];
        let s: Vec<(Vec2, f64)> = pts.iter().map(|&p| (p, f(p))).collect();
        let a = spr_fit(&s).unwrap();
        // unscaled normal equations, solved by Cramer's rule
        let mut m = Matrix3::zeros();
        let mut b = Vector3::zeros();
        for &(p, v) in &s {
            let r = Vector3::new(1.0, p.x, p.y);
            m += r * r.transpose();
            b += r * v;
        }
        let det = m.determinant();
        let oracle = Vector3::from_fn(|i, _| {
            let mut mi = m;
            mi.set_column(i, &b);
            mi.determinant() / det
        });
        assert!((a - oracle).norm() < 1e-10 * oracle.norm());
    }

    #[test]
    fn dorfler_examples() {
        assert_eq!(dorfler_mark(&[3.0, 1.0, 1.0, 1.0], 0.5), vec![0]);
        assert_eq!(dorfler_mark(&[0.0, 2.0, 0.0, 1.0], 1.0), vec![1, 3]);
        assert!(dorfler_mark(&[0.0; 4], 0.5).is_empty());
        // equal indicators: lower ids first
        assert_eq!(dorfler_mark(&[1.0, 1.0, 1.0, 1.0], 0.5), vec![0, 1]);
    }
}
