//! Named benchmark problems: geometry, initial meshes, boundary data and,
//! where one exists, the closed-form solution.
//!
//! Boundary data is rebuilt from the mesh after every refinement or crack
//! extension, so a problem describes loads by boundary tag or location and
//! never by vertex id.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};
use crate::material::{Material, PlaneState};
use crate::mesh::{self, generate_structured, generate_voronoi, tags, ElementKind, PolyMesh, TipEnd, TipRef};
use crate::reference::{slanted_sifs, ExactSolution, NearTipField, TimoshenkoBeam};
use crate::system::{fix_tagged, BoundaryConditionSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshFamily {
    T3,
    Q4,
    Voronoi,
}

impl std::str::FromStr for MeshFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "t3" => Ok(MeshFamily::T3),
            "q4" => Ok(MeshFamily::Q4),
            "voronoi" => Ok(MeshFamily::Voronoi),
            other => Err(format!("unknown mesh family {other:?} (t3, q4, voronoi)")),
        }
    }
}

impl std::fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeshFamily::T3 => "t3",
            MeshFamily::Q4 => "q4",
            MeshFamily::Voronoi => "voronoi",
        })
    }
}

/// Lloyd sweeps applied to every generated Voronoi mesh.
const LLOYD_ITERATIONS: usize = 4;

/// Mesh of `domain` with `nx` × `ny` cells (structured) or as many seeds
/// (Voronoi).
pub fn family_mesh(family: MeshFamily, domain: Rect, nx: usize, ny: usize, seed: u64) -> Result<PolyMesh> {
    match family {
        MeshFamily::T3 => generate_structured(ElementKind::T3, domain, nx, ny),
        MeshFamily::Q4 => generate_structured(ElementKind::Q4, domain, nx, ny),
        MeshFamily::Voronoi => generate_voronoi(domain, nx * ny, LLOYD_ITERATIONS, seed),
    }
}

pub trait Problem: Send + Sync {
    fn name(&self) -> &'static str;
    fn material(&self) -> Material;
    /// Uniform mesh of refinement level `level`; each level halves h.
    fn initial_mesh(&self, family: MeshFamily, level: usize, seed: u64) -> Result<PolyMesh>;
    fn boundary_conditions(&self, mesh: &PolyMesh) -> Result<BoundaryConditionSet>;
    fn exact(&self) -> Option<&dyn ExactSolution> {
        None
    }
    /// Tip whose SIFs are reported, if the problem has a crack.
    fn tip(&self, mesh: &PolyMesh) -> Option<TipRef> {
        mesh.tips().into_iter().next()
    }
    /// Crack growth increment when none is configured.
    fn default_delta_a(&self) -> Option<f64> {
        None
    }
    /// Mesh family used when none is configured.
    fn default_family(&self) -> MeshFamily {
        MeshFamily::T3
    }
}

fn scale(level: usize) -> usize {
    1 << level
}

/// Linear displacement field; constant strain everywhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearField {
    pub material: Material,
    pub offset: Vec2,
    /// ∂u_i/∂x_j
    pub gradient: nalgebra::Matrix2<f64>,
}

impl ExactSolution for LinearField {
    fn displacement(&self, p: Vec2) -> Vec2 {
        self.offset + self.gradient * p
    }

    fn stress(&self, _p: Vec2) -> nalgebra::Vector3<f64> {
        let g = self.gradient;
        self.material.constitutive() * nalgebra::Vector3::new(g[(0, 0)], g[(1, 1)], g[(0, 1)] + g[(1, 0)])
    }
}

/// Unit square with a linear field prescribed on its whole boundary.
#[derive(Clone, Copy, Debug)]
pub struct PatchProblem {
    pub field: LinearField,
}

impl Default for PatchProblem {
    fn default() -> Self {
        let material = Material { young: 1.0, poisson: 0.3, state: PlaneState::PlaneStress };
        PatchProblem {
            field: LinearField { material, offset: Vec2::new(0.1, -0.2), gradient: nalgebra::Matrix2::new(0.01, 0.02, -0.005, 0.015) },
        }
    }
}

impl Problem for PatchProblem {
    fn name(&self) -> &'static str {
        "patch"
    }
    fn material(&self) -> Material {
        self.field.material
    }
    fn initial_mesh(&self, family: MeshFamily, level: usize, seed: u64) -> Result<PolyMesh> {
        let n = 4 * scale(level);
        family_mesh(family, Rect::new(0.0, 0.0, 1.0, 1.0), n, n, seed)
    }
    fn boundary_conditions(&self, mesh: &PolyMesh) -> Result<BoundaryConditionSet> {
        let mut bcs = BoundaryConditionSet::default();
        let f = self.field;
        fix_tagged(mesh, &mut bcs, &[tags::BOTTOM, tags::RIGHT, tags::TOP, tags::LEFT], &[0, 1], &move |p| f.displacement(p));
        Ok(bcs)
    }
    fn exact(&self) -> Option<&dyn ExactSolution> {
        Some(&self.field)
    }
    fn default_family(&self) -> MeshFamily {
        MeshFamily::Q4
    }
}

/// Cantilever clamped (exact displacements) at x = 0, parabolic shear
/// traction at x = L. Level 0 is 8 × 2 cells.
#[derive(Clone, Copy, Debug, Default)]
pub struct TimoshenkoProblem {
    pub beam: TimoshenkoBeam,
}

impl TimoshenkoProblem {
    pub fn domain(&self) -> Rect {
        Rect::new(0.0, -0.5 * self.beam.depth, self.beam.length, 0.5 * self.beam.depth)
    }
}

impl Problem for TimoshenkoProblem {
    fn name(&self) -> &'static str {
        "timoshenko"
    }
    fn material(&self) -> Material {
        Material { young: self.beam.young, poisson: self.beam.poisson, state: PlaneState::PlaneStress }
    }
    fn initial_mesh(&self, family: MeshFamily, level: usize, seed: u64) -> Result<PolyMesh> {
        let s = scale(level);
        family_mesh(family, self.domain(), 8 * s, 2 * s, seed)
    }
    fn boundary_conditions(&self, mesh: &PolyMesh) -> Result<BoundaryConditionSet> {
        let mut bcs = BoundaryConditionSet::default();
        let beam = self.beam;
        fix_tagged(mesh, &mut bcs, &[tags::LEFT], &[0, 1], &move |p| beam.timoshenko_displacement(p.x, p.y));
        bcs.traction(tags::RIGHT, move |p| {
            let s = beam.timoshenko_stress(p.x, p.y);
            Vec2::new(s[0], s[2])
        });
        Ok(bcs)
    }
    fn exact(&self) -> Option<&dyn ExactSolution> {
        Some(&self.beam)
    }
    fn default_family(&self) -> MeshFamily {
        MeshFamily::Q4
    }
}

/// Square window around the right tip of a long centre crack: exact mode-I
/// displacements on bottom, top and left, exact traction on the right.
#[derive(Clone, Copy, Debug)]
pub struct NearTipProblem {
    pub sigma: f64,
    /// Half length of the physical crack.
    pub a: f64,
    pub size: f64,
    pub material: Material,
    pub field: NearTipField,
}

impl Default for NearTipProblem {
    fn default() -> Self {
        NearTipProblem::new(1e4, 100.0, 10.0, Material { young: 1e7, poisson: 0.3, state: PlaneState::PlaneStrain })
    }
}

impl NearTipProblem {
    pub fn new(sigma: f64, a: f64, size: f64, material: Material) -> NearTipProblem {
        let k1 = sigma * (PI * a).sqrt();
        let tip = Vec2::new(0.5 * size, 0.5 * size);
        NearTipProblem { sigma, a, size, material, field: NearTipField::mode_i(k1, material, tip, 0.0) }
    }

    pub fn k1(&self) -> f64 {
        self.field.k1
    }
}

impl Problem for NearTipProblem {
    fn name(&self) -> &'static str {
        "neartip"
    }
    fn material(&self) -> Material {
        self.material
    }
    /// Level 0 is 4 × 4 cells, so the crack runs along grid lines.
    fn initial_mesh(&self, family: MeshFamily, level: usize, seed: u64) -> Result<PolyMesh> {
        let n = 4 * scale(level);
        let m = family_mesh(family, Rect::new(0.0, 0.0, self.size, self.size), n, n, seed)?;
        let h = 0.5 * self.size;
        mesh::insert_crack(&m, &[Vec2::new(0.0, h), Vec2::new(h, h)])
    }
    fn boundary_conditions(&self, mesh: &PolyMesh) -> Result<BoundaryConditionSet> {
        let mut bcs = BoundaryConditionSet::default();
        let f = self.field;
        fix_tagged(mesh, &mut bcs, &[tags::BOTTOM, tags::TOP, tags::LEFT], &[0, 1], &move |p| f.displacement(p));
        bcs.traction(tags::RIGHT, move |p| {
            let s = f.stress(p);
            Vec2::new(s[0], s[2])
        });
        Ok(bcs)
    }
    fn exact(&self) -> Option<&dyn ExactSolution> {
        Some(&self.field)
    }
}

/// Centre crack of half length `a` at angle `beta` in a square of width
/// `width` under remote stress σ_yy = σ, σ_xx = ασ applied as edge
/// tractions. Two vertices are pinned against rigid motion.
#[derive(Clone, Copy, Debug)]
pub struct SlantedCrackProblem {
    pub sigma: f64,
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub width: f64,
    pub material: Material,
}

impl Default for SlantedCrackProblem {
    fn default() -> Self {
        SlantedCrackProblem {
            sigma: 2000.0,
            a: 0.5,
            alpha: 0.0,
            beta: 0.0,
            width: 10.0,
            material: Material { young: 3e7, poisson: 0.25, state: PlaneState::PlaneStrain },
        }
    }
}

impl SlantedCrackProblem {
    pub fn with_angles(beta_deg: f64, alpha: f64) -> SlantedCrackProblem {
        SlantedCrackProblem { beta: beta_deg.to_radians(), alpha, ..Default::default() }
    }

    pub fn exact_sifs(&self) -> (f64, f64) {
        slanted_sifs(self.sigma, self.a, self.alpha, self.beta)
    }

    fn domain(&self) -> Rect {
        let w = 0.5 * self.width;
        Rect::new(-w, -w, w, w)
    }
}

fn nearest_vertex(mesh: &PolyMesh, p: Vec2) -> usize {
    (0..mesh.n_vertices()).min_by(|&a, &b| (mesh.vertex(a) - p).norm().total_cmp(&(mesh.vertex(b) - p).norm())).unwrap_or(0)
}

impl Problem for SlantedCrackProblem {
    fn name(&self) -> &'static str {
        "slanted"
    }
    fn material(&self) -> Material {
        self.material
    }
    /// Level 0 is 10 × 10 cells.
    fn initial_mesh(&self, family: MeshFamily, level: usize, seed: u64) -> Result<PolyMesh> {
        let n = 10 * scale(level);
        let m = family_mesh(family, self.domain(), n, n, seed)?;
        let d = Vec2::new(self.beta.cos(), self.beta.sin()) * self.a;
        mesh::insert_crack(&m, &[-d, d])
    }
    fn boundary_conditions(&self, mesh: &PolyMesh) -> Result<BoundaryConditionSet> {
        let mut bcs = BoundaryConditionSet::default();
        let (sx, sy) = (self.alpha * self.sigma, self.sigma);
        bcs.traction(tags::LEFT, move |_| Vec2::new(-sx, 0.0));
        bcs.traction(tags::RIGHT, move |_| Vec2::new(sx, 0.0));
        bcs.traction(tags::BOTTOM, move |_| Vec2::new(0.0, -sy));
        bcs.traction(tags::TOP, move |_| Vec2::new(0.0, sy));
        let r = self.domain();
        let a = nearest_vertex(mesh, Vec2::new(r.x0, r.y0));
        let b = nearest_vertex(mesh, Vec2::new(r.x1, r.y0));
        bcs.dirichlet.push(crate::system::Dirichlet { node: a, component: 0, value: 0.0 });
        bcs.dirichlet.push(crate::system::Dirichlet { node: a, component: 1, value: 0.0 });
        bcs.dirichlet.push(crate::system::Dirichlet { node: b, component: 1, value: 0.0 });
        Ok(bcs)
    }
    /// The tip at the +x end of the crack.
    fn tip(&self, mesh: &PolyMesh) -> Option<TipRef> {
        let tips = mesh.tips();
        tips.iter().copied().find(|&t| mesh.tip(t).end == TipEnd::End).or(tips.first().copied())
    }
}

/// Plate with an edge crack at mid height, clamped at the bottom and
/// sheared along the top.
#[derive(Clone, Copy, Debug)]
pub struct EdgeCrackProblem {
    pub width: f64,
    pub height: f64,
    pub a: f64,
    pub tau: f64,
    pub material: Material,
    pub delta_a: f64,
}

impl Default for EdgeCrackProblem {
    fn default() -> Self {
        EdgeCrackProblem {
            width: 7.0,
            height: 16.0,
            a: 3.5,
            tau: 1.0,
            material: Material { young: 3e7, poisson: 0.25, state: PlaneState::PlaneStress },
            delta_a: 0.3,
        }
    }
}

impl EdgeCrackProblem {
    /// Reference SIFs of the default geometry.
    pub const K_REFERENCE: (f64, f64) = (34.0, 4.55);
}

impl Problem for EdgeCrackProblem {
    fn name(&self) -> &'static str {
        "edge"
    }
    fn material(&self) -> Material {
        self.material
    }
    /// Level 0 has cells of size 0.5 on the default plate.
    fn initial_mesh(&self, family: MeshFamily, level: usize, seed: u64) -> Result<PolyMesh> {
        let s = 2 * scale(level);
        let nx = (self.width * s as f64).round().max(1.0) as usize;
        let ny = (self.height * s as f64).round().max(1.0) as usize;
        let m = family_mesh(family, Rect::new(0.0, 0.0, self.width, self.height), nx, ny, seed)?;
        let y = 0.5 * self.height;
        mesh::insert_crack(&m, &[Vec2::new(0.0, y), Vec2::new(self.a, y)])
    }
    fn boundary_conditions(&self, mesh: &PolyMesh) -> Result<BoundaryConditionSet> {
        let mut bcs = BoundaryConditionSet::default();
        fix_tagged(mesh, &mut bcs, &[tags::BOTTOM], &[0, 1], &|_| Vec2::zeros());
        let tau = self.tau;
        bcs.traction(tags::TOP, move |_| Vec2::new(tau, 0.0));
        Ok(bcs)
    }
    fn default_delta_a(&self) -> Option<f64> {
        Some(self.delta_a)
    }
}

/// Three-point bent beam with an initial edge crack and three holes.
/// The load and the supports act on short boundary segments so that the
/// energy stays finite under refinement.
#[derive(Clone, Debug)]
pub struct PmmaBeamProblem {
    pub length: f64,
    pub depth: f64,
    pub load: f64,
    pub material: Material,
    pub crack: [Vec2; 2],
    pub holes: Vec<(Vec2, f64)>,
    pub supports: [f64; 2],
    pub load_x: f64,
    /// Half width of the loaded and supported segments.
    pub pad: f64,
    pub delta_a: f64,
}

impl Default for PmmaBeamProblem {
    fn default() -> Self {
        PmmaBeamProblem {
            length: 20.0,
            depth: 8.0,
            load: 1.0,
            material: Material { young: 4e5, poisson: 0.3, state: PlaneState::PlaneStrain },
            crack: [Vec2::new(4.0, 0.0), Vec2::new(4.0, 1.0)],
            holes: [2.25, 4.25, 6.25].iter().map(|&y| (Vec2::new(6.0, y), 0.25)).collect(),
            supports: [1.0, 19.0],
            load_x: 10.0,
            pad: 0.25,
            delta_a: 0.4,
        }
    }
}

impl PmmaBeamProblem {
    /// Index into `holes` of the hole whose disc contains `p`, with a
    /// relative tolerance on the radius.
    pub fn hole_containing(&self, p: Vec2, tol: f64) -> Option<usize> {
        self.holes.iter().position(|&(c, r)| (p - c).norm() <= r * (1.0 + tol))
    }
}

impl Problem for PmmaBeamProblem {
    fn name(&self) -> &'static str {
        "pmma"
    }
    fn material(&self) -> Material {
        self.material
    }
    /// Level 0 has cells of size 0.25, fine enough for the holes.
    fn initial_mesh(&self, family: MeshFamily, level: usize, seed: u64) -> Result<PolyMesh> {
        let s = 4 * scale(level);
        let nx = (self.length * s as f64).round() as usize;
        let ny = (self.depth * s as f64).round() as usize;
        let m = family_mesh(family, Rect::new(0.0, 0.0, self.length, self.depth), nx, ny, seed)?;
        let step = PI / 12.0;
        let m = mesh::cut_circular_holes(&m, &self.holes, step)?;
        mesh::insert_crack(&m, &self.crack)
    }
    fn boundary_conditions(&self, mesh: &PolyMesh) -> Result<BoundaryConditionSet> {
        let mut bcs = BoundaryConditionSet::default();
        let tol = 1e-9 * self.length;
        let bottom = mesh.vertices_with_tag(tags::BOTTOM);
        for (k, &xs) in self.supports.iter().enumerate() {
            let nodes: Vec<usize> = bottom.iter().copied().filter(|&v| (mesh.vertex(v).x - xs).abs() <= self.pad + tol).collect();
            if nodes.is_empty() {
                return Err(Error::InvalidInput(format!("no mesh vertex on the support at x = {xs}")));
            }
            // left support pinned, right support on rollers
            let comps: &[usize] = if k == 0 { &[0, 1] } else { &[1] };
            bcs.fix_field(mesh, nodes, comps, &|_| Vec2::zeros());
        }
        let (x0, pad, q) = (self.load_x, self.pad, self.load / (2.0 * self.pad));
        bcs.traction(tags::TOP, move |p| if (p.x - x0).abs() <= pad { Vec2::new(0.0, -q) } else { Vec2::zeros() });
        Ok(bcs)
    }
    fn default_delta_a(&self) -> Option<f64> {
        Some(self.delta_a)
    }
}

/// Problem names accepted by [`by_name`].
pub const NAMES: [&str; 6] = ["patch", "timoshenko", "neartip", "slanted", "edge", "pmma"];

pub fn by_name(name: &str) -> Result<Box<dyn Problem>> {
    Ok(match name {
        "patch" => Box::new(PatchProblem::default()),
        "timoshenko" => Box::new(TimoshenkoProblem::default()),
        "neartip" => Box::new(NearTipProblem::default()),
        "slanted" => Box::new(SlantedCrackProblem::default()),
        "edge" => Box::new(EdgeCrackProblem::default()),
        "pmma" => Box::new(PmmaBeamProblem::default()),
        other => return Err(Error::Config(format!("unknown problem {other:?}; expected one of {}", NAMES.join(", ")))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::solve_problem;

    #[test]
    fn meshes_build() {
        for name in NAMES {
            let p = by_name(name).unwrap();
            let m = p.initial_mesh(p.default_family(), 0, 1).unwrap();
            assert!(m.n_elements() > 0, "{name}");
            p.boundary_conditions(&m).unwrap();
        }
    }

    #[test]
    fn cracked_problems_have_one_tracked_tip() {
        for p in [by_name("neartip").unwrap(), by_name("edge").unwrap(), by_name("pmma").unwrap()] {
            let m = p.initial_mesh(MeshFamily::T3, 0, 1).unwrap();
            assert_eq!(m.tips().len(), 1, "{}", p.name());
        }
        let s = SlantedCrackProblem::with_angles(30.0, 0.0);
        let m = s.initial_mesh(MeshFamily::T3, 0, 1).unwrap();
        assert_eq!(m.tips().len(), 2);
        let t = s.tip(&m).unwrap();
        assert!(m.vertex(m.tip(t).vertex).x > 0.0);
    }

    #[test]
    fn slanted_pins_leave_no_reaction() {
        let s = SlantedCrackProblem::with_angles(20.0, 0.25);
        let m = s.initial_mesh(MeshFamily::T3, 0, 1).unwrap();
        let sol = solve_problem(&m, &s.material(), 1.0, &s.boundary_conditions(&m).unwrap()).unwrap();
        let r = sol.reaction_resultant();
        assert!(r.norm() < 1e-6 * s.sigma * s.width);
    }

    #[test]
    fn pmma_load_resultant() {
        let p = PmmaBeamProblem::default();
        let m = p.initial_mesh(MeshFamily::T3, 0, 1).unwrap();
        let sol = solve_problem(&m, &p.material(), 1.0, &p.boundary_conditions(&m).unwrap()).unwrap();
        let r = sol.reaction_resultant();
        assert!((r.y - p.load).abs() < 1e-9 && r.x.abs() < 1e-9);
    }

    #[test]
    fn family_parses() {
        assert_eq!("Voronoi".parse::<MeshFamily>().unwrap(), MeshFamily::Voronoi);
        assert!("hex".parse::<MeshFamily>().is_err());
    }
}
