//! Stress intensity factors from the interaction integral, the maximum
//! circumferential stress kink angle and geometric crack growth.
//!
//! The interaction integral is evaluated in its element-boundary form: on
//! each J-domain element the present state is the projected one (constant
//! stress, linear displacement), the weight is the projection Πq of a nodal
//! radial ramp, and the auxiliary state is a unit Williams field. Since both
//! states are equilibrated and compatible inside an element, the boundary
//! sum equals Σ_K ∫_K F_j ∂_j(Πq) dA.

use nalgebra::{Matrix2, Vector3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{line_intersection, point_segment_distance, rotate, Vec2};
use crate::material::Material;
use crate::mesh::{self, tags, PolyMesh, TipRef};
use crate::quadrature::GAUSS4;
use crate::reference::{williams, Mode};
use crate::system::Solution;

/// Default J-domain outer radius in units of the tip-local mesh size.
pub const R_OUT_FACTOR: f64 = 4.0;
/// Radii reported in every path-independence table.
pub const PATH_FACTORS: [f64; 3] = [3.0, 4.0, 6.0];

/// Weight function support around one tip.
#[derive(Clone, Debug)]
pub struct JDomain {
    pub tip: TipRef,
    pub origin: Vec2,
    /// Crack growth direction at the tip.
    pub angle: f64,
    pub members: Vec<usize>,
    /// Nodal q per mesh vertex.
    pub q: Vec<f64>,
    pub r_in: f64,
    pub r_out: f64,
}

/// Largest diameter among the elements touching the tip.
pub fn tip_mesh_size(mesh: &PolyMesh, tip: TipRef) -> f64 {
    let v = mesh.tip(tip).vertex;
    mesh.topology().vertex_elements[v].iter().map(|&e| mesh.element_geometry(e).diameter).fold(0.0, f64::max)
}

pub fn build_jdomain(mesh: &PolyMesh, tip: TipRef, r_out_factor: f64) -> Result<JDomain> {
    if !(r_out_factor > 0.0) {
        return Err(Error::InvalidInput("r_out_factor must be positive".into()));
    }
    let t = mesh.tip(tip);
    let origin = mesh.vertex(t.vertex);
    let r_out = r_out_factor * tip_mesh_size(mesh, tip);
    let r_in = 0.5 * r_out;
    let own = &mesh.cracks()[tip.crack].polyline;
    for b in mesh.boundary_edges() {
        let el = mesh.element(b.element);
        let (pa, pb) = (mesh.vertex(el.vertices[b.local]), mesh.vertex(el.vertices[(b.local + 1) % el.len()]));
        if b.tag == tags::CRACK && mesh::polyline_distance((pa + pb) * 0.5, own) < 1e-9 * (pb - pa).norm().max(1e-300) {
            continue;
        }
        let d = point_segment_distance(origin, pa, pb).0;
        if d < r_out {
            return Err(Error::JDomainCollision(format!(
                "r_out = {r_out:.4e} reaches a boundary edge (tag {}) at distance {d:.4e} from the tip",
                b.tag
            )));
        }
    }
    for other in mesh.tip_vertices() {
        let d = (mesh.vertex(other) - origin).norm();
        if other != t.vertex && d < r_out {
            return Err(Error::JDomainCollision(format!("r_out = {r_out:.4e} reaches another tip at distance {d:.4e}")));
        }
    }
    let q: Vec<f64> = mesh
        .vertices()
        .iter()
        .map(|p| ((r_out - (p - origin).norm()) / (r_out - r_in)).clamp(0.0, 1.0))
        .collect();
    let members = (0..mesh.n_elements())
        .filter(|&e| mesh.element(e).vertices.iter().any(|&v| (mesh.vertex(v) - origin).norm() < r_out))
        .collect();
    Ok(JDomain { tip, origin, angle: t.angle, members, q, r_in, r_out })
}

fn voigt_matrix(s: &Vector3<f64>) -> Matrix2<f64> {
    Matrix2::new(s[0], s[2], s[2], s[1])
}

/// Wraps `a` into (c − π, c + π].
fn unwrap_near(a: f64, c: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut d = (a - c) % tau;
    if d > std::f64::consts::PI {
        d -= tau;
    } else if d <= -std::f64::consts::PI {
        d += tau;
    }
    c + d
}

pub fn interaction_integral(mesh: &PolyMesh, solution: &Solution, jdomain: &JDomain, aux: Mode, material: &Material) -> Result<f64> {
    let (c, s) = (jdomain.angle.cos(), jdomain.angle.sin());
    // columns are the tip-frame axes
    let r = Matrix2::new(c, -s, s, c);
    let to_local = |p: Vec2| rotate(p - jdomain.origin, -jdomain.angle);
    let parts: Vec<f64> = jdomain
        .members
        .par_iter()
        .map(|&e| -> Result<f64> {
            let el = mesh.element(e);
            let qv: Vec<f64> = el.vertices.iter().map(|&v| jdomain.q[v]).collect();
            // Πq constant: ∫_K F·∇Πq vanishes
            if qv.iter().all(|&x| x == qv[0]) {
                return Ok(0.0);
            }
            let proj = &solution.projections[e];
            let (q0, qg) = proj.scalar(&qv);
            let xc = proj.geometry.centroid;
            let sig1 = r.transpose() * voigt_matrix(&solution.stresses[e]) * r;
            let g1 = r.transpose() * solution.projected_gradient(e) * r;
            let eps1 = Vector3::new(g1[(0, 0)], g1[(1, 1)], g1[(0, 1)] + g1[(1, 0)]);
            let cl = to_local(xc);
            let theta_c = cl.y.atan2(cl.x);
            let n = el.len();
            let mut sum = 0.0;
            for i in 0..n {
                let (pa, pb) = (mesh.vertex(el.vertices[i]), mesh.vertex(el.vertices[(i + 1) % n]));
                let len = (pb - pa).norm();
                let nrm = rotate(proj.geometry.normals[i], -jdomain.angle);
                for &(t, w) in &GAUSS4 {
                    let x = pa + (pb - pa) * t;
                    let xl = to_local(x);
                    let theta = unwrap_near(xl.y.atan2(xl.x), theta_c);
                    let a = williams(aux, xl.norm(), theta, material)?;
                    let sig2 = voigt_matrix(&a.stress);
                    let g2 = a.gradient;
                    let eps2 = Vector3::new(g2[(0, 0)], g2[(1, 1)], g2[(0, 1)] + g2[(1, 0)]);
                    let w12 = 0.5 * (voigt_dot(&sig1, &eps2) + a.stress.dot(&eps1));
                    let du2 = Vec2::new(g2[(0, 0)], g2[(1, 0)]);
                    let du1 = Vec2::new(g1[(0, 0)], g1[(1, 0)]);
                    let f = sig1.transpose() * du2 + sig2.transpose() * du1 - Vec2::new(w12, 0.0);
                    let qx = q0 + qg.dot(&(x - xc));
                    sum += f.dot(&nrm) * qx * w * len;
                }
            }
            Ok(sum)
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

fn voigt_dot(sig: &Matrix2<f64>, eps: &Vector3<f64>) -> f64 {
    sig[(0, 0)] * eps[0] + sig[(1, 1)] * eps[1] + sig[(0, 1)] * eps[2]
}

/// K = (E*/2) I for each mode.
pub fn sifs_from_integrals(i_mode_i: f64, i_mode_ii: f64, material: &Material) -> (f64, f64) {
    let h = 0.5 * material.e_star();
    (h * i_mode_i, h * i_mode_ii)
}

/// Kink angle of the maximum circumferential stress criterion, counter-
/// clockwise positive. K_II = 0 gives the continuity limit 0.
pub fn propagation_angle(k1: f64, k2: f64) -> Result<f64> {
    if k1 == 0.0 && k2 == 0.0 {
        return Err(Error::NoDrivingForce);
    }
    if k2 == 0.0 {
        return Ok(0.0);
    }
    let a = k1 / (4.0 * k2);
    let root = (a * a + 0.5).sqrt();
    // rationalized branches avoid cancellation when |K_I/K_II| is large
    let t = if k2 > 0.0 {
        if a >= 0.0 {
            -0.5 / (a + root)
        } else {
            a - root
        }
    } else if a <= 0.0 {
        0.5 / (root - a)
    } else {
        a + root
    };
    Ok(2.0 * t.atan())
}

pub fn equivalent_sif(k1: f64, k2: f64, theta: f64) -> f64 {
    let h = 0.5 * theta;
    k1 * h.cos().powi(3) - 1.5 * k2 * h.cos() * theta.sin()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SifResult {
    pub k1: f64,
    pub k2: f64,
    pub i_mode_i: f64,
    pub i_mode_ii: f64,
    /// (r_out_factor, K_I, K_II) for every radius that fits in the domain.
    pub per_radius: Vec<(f64, f64, f64)>,
    pub theta: f64,
    pub k_eq: f64,
    pub r_out: f64,
}

fn sifs_at(mesh: &PolyMesh, solution: &Solution, tip: TipRef, factor: f64) -> Result<(f64, f64, f64, f64, f64)> {
    let jd = build_jdomain(mesh, tip, factor)?;
    let m = &solution.material;
    let i1 = interaction_integral(mesh, solution, &jd, Mode::I, m)?;
    let i2 = interaction_integral(mesh, solution, &jd, Mode::II, m)?;
    let (k1, k2) = sifs_from_integrals(i1, i2, m);
    Ok((k1, k2, i1, i2, jd.r_out))
}

/// SIFs, kink angle and equivalent SIF at `tip`, plus the path table.
pub fn compute_sifs(mesh: &PolyMesh, solution: &Solution, tip: TipRef, r_out_factor: f64) -> Result<SifResult> {
    let (k1, k2, i1, i2, r_out) = sifs_at(mesh, solution, tip, r_out_factor)?;
    let mut per_radius = Vec::new();
    for f in PATH_FACTORS {
        if f == r_out_factor {
            per_radius.push((f, k1, k2));
        } else if let Ok((a, b, ..)) = sifs_at(mesh, solution, tip, f) {
            per_radius.push((f, a, b));
        }
    }
    let theta = propagation_angle(k1, k2)?;
    Ok(SifResult { k1, k2, i_mode_i: i1, i_mode_ii: i2, per_radius, theta, k_eq: equivalent_sif(k1, k2, theta), r_out })
}

/// Outcome of one growth step.
#[derive(Clone, Debug)]
pub enum Extension {
    Extended(PolyMesh),
    /// The step would leave the domain or enter a hole. `hit` is where the
    /// step first meets the boundary; `tag` is that boundary's tag.
    ReachedBoundary { hit: Vec2, tag: u32 },
}

/// Steps longer than this multiple of Δa are checked for boundary hits, so
/// that no sliver is left between the new tip and the boundary.
const LOOKAHEAD: f64 = 1.25;

/// Grows `tip` by `delta_a` at angle `theta` relative to its current direction.
pub fn extend_crack(mesh: &PolyMesh, tip: TipRef, theta: f64, delta_a: f64) -> Result<Extension> {
    if !(delta_a > 0.0) {
        return Err(Error::InvalidInput("crack growth increment must be positive".into()));
    }
    let t = mesh.tip(tip);
    let p0 = mesh.vertex(t.vertex);
    let dir = Vec2::new((t.angle + theta).cos(), (t.angle + theta).sin());
    let far = p0 + dir * (LOOKAHEAD * delta_a);
    let mut first: Option<(f64, Vec2, u32)> = None;
    for b in mesh.boundary_edges() {
        let el = mesh.element(b.element);
        let (a, c) = (el.vertices[b.local], el.vertices[(b.local + 1) % el.len()]);
        if a == t.vertex || c == t.vertex {
            continue;
        }
        let (pa, pc) = (mesh.vertex(a), mesh.vertex(c));
        if let Some((s, u)) = line_intersection(p0, far, pa, pc) {
            if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u) && s > 0.0 && first.map_or(true, |f| s < f.0) {
                first = Some((s, p0 + (far - p0) * s, b.tag));
            }
        }
    }
    if let Some((_, hit, tag)) = first {
        return Ok(Extension::ReachedBoundary { hit, tag });
    }
    let to = p0 + dir * delta_a;
    Ok(Extension::Extended(mesh::extend_tip(mesh, tip.crack, tip.tip, to)?))
}
