//! Global assembly, boundary conditions and the linear solve.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use nalgebra::{DVector, Matrix2, Vector3, Vector6};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::material::Material;
use crate::mesh::{tags, PolyMesh};
use crate::vem::{self, LocalVemMatrices, Projection};

/// Node `i` owns global DOFs `2i` (x) and `2i + 1` (y). Coincident crack
/// face vertices are distinct nodes and so get distinct DOFs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DofMap {
    pub n_nodes: usize,
}

impl DofMap {
    pub fn dof(&self, node: usize, component: usize) -> usize {
        2 * node + component
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.n_nodes
    }
}

/// Symmetric sparse matrix in compressed-row form, both triangles stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let cols = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        match cols.binary_search(&j) {
            Ok(k) => self.values[self.row_ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (self.row_ptr[i]..self.row_ptr[i + 1]).map(|k| self.values[k] * x[self.col_idx[k]]).sum())
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Largest |a_ij − a_ji| relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                worst = worst.max((self.values[k] - self.get(j, i)).abs());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.col_idx[k])] = self.values[k];
            }
        }
        m
    }
}

pub type Traction = Arc<dyn Fn(Vec2) -> Vec2 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dirichlet {
    pub node: usize,
    pub component: usize,
    pub value: f64,
}

/// Prescribed displacements, edge tractions (by boundary tag), nodal point
/// loads and a constant body force. Crack faces are traction free unless a
/// traction is registered for [`tags::CRACK`].
#[derive(Clone, Default)]
pub struct BoundaryConditionSet {
    pub dirichlet: Vec<Dirichlet>,
    pub neumann: Vec<(u32, Traction)>,
    pub point_loads: Vec<(usize, Vec2)>,
    pub body_force: Vec2,
}

impl fmt::Debug for BoundaryConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryConditionSet")
            .field("dirichlet", &self.dirichlet.len())
            .field("neumann_tags", &self.neumann.iter().map(|n| n.0).collect::<Vec<_>>())
            .field("point_loads", &self.point_loads)
            .field("body_force", &self.body_force)
            .finish()
    }
}

impl BoundaryConditionSet {
    /// Prescribes `field` at `nodes` for the listed components.
    pub fn fix_field(&mut self, mesh: &PolyMesh, nodes: impl IntoIterator<Item = usize>, components: &[usize], field: &dyn Fn(Vec2) -> Vec2) {
        let faces = mesh.crack_face_vertices();
        for v in nodes {
            let u = field(sample_point_with(mesh, &faces, v));
            for &c in components {
                self.dirichlet.push(Dirichlet { node: v, component: c, value: u[c] });
            }
        }
    }

    pub fn traction(&mut self, tag: u32, t: impl Fn(Vec2) -> Vec2 + Send + Sync + 'static) {
        self.neumann.push((tag, Arc::new(t)));
    }

    /// Multiplies every load and prescribed value by `s`.
    pub fn scaled(&self, s: f64) -> BoundaryConditionSet {
        BoundaryConditionSet {
            dirichlet: self.dirichlet.iter().map(|d| Dirichlet { value: d.value * s, ..*d }).collect(),
            neumann: self
                .neumann
                .iter()
                .map(|(tag, f)| {
                    let f = f.clone();
                    (*tag, Arc::new(move |p: Vec2| f(p) * s) as Traction)
                })
                .collect(),
            point_loads: self.point_loads.iter().map(|&(v, f)| (v, f * s)).collect(),
            body_force: self.body_force * s,
        }
    }
}

/// Point at which boundary data for vertex `v` is evaluated. Crack face
/// vertices are nudged towards one adjacent element so that fields
/// discontinuous across the crack are sampled on the correct side.
pub fn sample_point(mesh: &PolyMesh, v: usize) -> Vec2 {
    sample_point_with(mesh, &mesh.crack_face_vertices(), v)
}

fn sample_point_with(mesh: &PolyMesh, faces: &std::collections::BTreeSet<usize>, v: usize) -> Vec2 {
    let p = mesh.vertex(v);
    if !faces.contains(&v) {
        return p;
    }
    match mesh.topology().vertex_elements[v].first() {
        Some(&e) => {
            let g = mesh.element_geometry(e);
            p + (g.centroid - p) * 1e-9
        }
        None => p,
    }
}

/// Global stiffness with the element data needed for post-processing.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub matrix: SparseMatrix,
    pub dofmap: DofMap,
    pub elements: Vec<LocalVemMatrices>,
}

pub fn assemble(mesh: &PolyMesh, material: &Material, gamma: f64) -> Result<Assembly> {
    let locals: Vec<LocalVemMatrices> = (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| vem::local_stiffness(mesh, e, material, gamma))
        .collect::<Result<_>>()?;
    let dofmap = DofMap { n_nodes: mesh.n_vertices() };
    let n = dofmap.n_dofs();

    let mut node_adj: Vec<Vec<usize>> = vec![Vec::new(); mesh.n_vertices()];
    for el in mesh.elements() {
        for &a in &el.vertices {
            node_adj[a].extend_from_slice(&el.vertices);
        }
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::new();
    row_ptr.push(0);
    for adj in node_adj.iter_mut() {
        adj.sort_unstable();
        adj.dedup();
        for _ in 0..2 {
            for &b in adj.iter() {
                col_idx.push(2 * b);
                col_idx.push(2 * b + 1);
            }
            row_ptr.push(col_idx.len());
        }
    }
    let mut values = vec![0.0; col_idx.len()];
    // single ordered reduction: element order, then local row/column order
    for (el, local) in mesh.elements().iter().zip(&locals) {
        let k = &local.k_local;
        let dofs: Vec<usize> = el.vertices.iter().flat_map(|&v| [2 * v, 2 * v + 1]).collect();
        for (a, &ra) in dofs.iter().enumerate() {
            let start = row_ptr[ra];
            let cols = &col_idx[start..row_ptr[ra + 1]];
            for (b, &cb) in dofs.iter().enumerate() {
                let pos = cols.binary_search(&cb).expect("pattern covers element couplings");
                values[start + pos] += k[(a, b)];
            }
        }
    }
    Ok(Assembly { matrix: SparseMatrix { n, row_ptr, col_idx, values }, dofmap, elements: locals })
}

/// Right-hand side of all Neumann, point and body loads.
pub fn load_vector(mesh: &PolyMesh, assembly: &Assembly, bcs: &BoundaryConditionSet) -> Vec<f64> {
    let mut f = vec![0.0; assembly.dofmap.n_dofs()];
    let by_tag: BTreeMap<u32, Vec<&Traction>> = bcs.neumann.iter().fold(BTreeMap::new(), |mut m, (t, tr)| {
        m.entry(*t).or_insert_with(Vec::new).push(tr);
        m
    });
    for b in mesh.boundary_edges() {
        let Some(list) = by_tag.get(&b.tag) else { continue };
        let el = mesh.element(b.element);
        let n = el.len();
        let (va, vb) = (el.vertices[b.local], el.vertices[(b.local + 1) % n]);
        for tr in list {
            let (fa, fb) = vem::boundary_load(mesh.vertex(va), mesh.vertex(vb), &|p| tr(p));
            f[2 * va] += fa.x;
            f[2 * va + 1] += fa.y;
            f[2 * vb] += fb.x;
            f[2 * vb + 1] += fb.y;
        }
    }
    for &(v, p) in &bcs.point_loads {
        f[2 * v] += p.x;
        f[2 * v + 1] += p.y;
    }
    if bcs.body_force != Vec2::zeros() {
        for (el, local) in mesh.elements().iter().zip(&assembly.elements) {
            let fl = vem::body_load(&local.projection, bcs.body_force);
            for (i, &v) in el.vertices.iter().enumerate() {
                f[2 * v] += fl[2 * i];
                f[2 * v + 1] += fl[2 * i + 1];
            }
        }
    }
    f
}

/// Linear system after symmetric elimination of the Dirichlet DOFs.
#[derive(Clone, Debug)]
pub struct ConstrainedSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
    /// Prescribed value per DOF, if any.
    pub fixed: Vec<Option<f64>>,
    /// External load before elimination.
    pub load: Vec<f64>,
}

pub fn apply_bcs(mesh: &PolyMesh, assembly: &Assembly, bcs: &BoundaryConditionSet) -> Result<ConstrainedSystem> {
    let n = assembly.dofmap.n_dofs();
    if bcs.dirichlet.is_empty() {
        return Err(Error::SingularSystem("no Dirichlet data: rigid body modes are unconstrained".into()));
    }
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    for d in &bcs.dirichlet {
        if d.node >= assembly.dofmap.n_nodes || d.component > 1 {
            return Err(Error::InvalidInput(format!("Dirichlet condition on missing DOF ({}, {})", d.node, d.component)));
        }
        let dof = assembly.dofmap.dof(d.node, d.component);
        match fixed[dof] {
            Some(v) if (v - d.value).abs() > 1e-12 * v.abs().max(d.value.abs()).max(1e-300) => {
                return Err(Error::InvalidInput(format!("conflicting Dirichlet values {v} and {} on DOF {dof}", d.value)));
            }
            _ => fixed[dof] = Some(d.value),
        }
    }
    check_rigid_modes(mesh, &fixed)?;
    let load = load_vector(mesh, assembly, bcs);
    let k = &assembly.matrix;
    let mut rhs = load.clone();
    let mut values = k.values.clone();
    for i in 0..n {
        for p in k.row_ptr[i]..k.row_ptr[i + 1] {
            let j = k.col_idx[p];
            match (fixed[i], fixed[j]) {
                (None, Some(uj)) => {
                    rhs[i] -= k.values[p] * uj;
                    values[p] = 0.0;
                }
                (Some(_), _) => values[p] = if i == j { 1.0 } else { 0.0 },
                (None, None) => {}
            }
        }
        if let Some(u) = fixed[i] {
            rhs[i] = u;
        }
    }
    Ok(ConstrainedSystem { matrix: SparseMatrix { values, ..k.clone() }, rhs, fixed, load })
}

/// Every edge-connected piece of the mesh must have its three rigid body
/// modes (two translations, one rotation) restrained by the fixed DOFs.
fn check_rigid_modes(mesh: &PolyMesh, fixed: &[Option<f64>]) -> Result<()> {
    let nv = mesh.n_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for el in mesh.elements() {
        let r0 = find(&mut parent, el.vertices[0]);
        for &v in &el.vertices[1..] {
            let r = find(&mut parent, v);
            parent[r] = r0;
        }
    }
    let mut pieces: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for el in mesh.elements() {
        for &v in &el.vertices {
            pieces.entry(find(&mut parent, v)).or_default().push(v);
        }
    }
    for (_, mut nodes) in pieces {
        nodes.sort_unstable();
        nodes.dedup();
        let pts: Vec<Vec2> = nodes.iter().map(|&v| mesh.vertex(v)).collect();
        let c = pts.iter().fold(Vec2::zeros(), |a, p| a + p) / pts.len() as f64;
        let size = pts.iter().map(|p| (p - c).norm()).fold(0.0, f64::max).max(1e-300);
        let mut m = nalgebra::Matrix3::<f64>::zeros();
        for (&v, p) in nodes.iter().zip(&pts) {
            let d = (p - c) / size;
            for comp in 0..2 {
                if fixed[2 * v + comp].is_some() {
                    let r = if comp == 0 { Vector3::new(1.0, 0.0, -d.y) } else { Vector3::new(0.0, 1.0, d.x) };
                    m += r * r.transpose();
                }
            }
        }
        let eig = m.symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        if !(lo > 1e-10 * hi.max(1.0)) {
            return Err(Error::NotPositiveDefinite(format!(
                "supports leave a rigid body mode free on a piece of {} nodes",
                nodes.len()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub n_dofs: usize,
    pub nnz: usize,
    /// ‖K u − f‖ / ‖f‖ of the constrained system.
    pub relative_residual: f64,
}

/// Sparse Cholesky solve of the constrained system.
pub fn solve(system: &ConstrainedSystem) -> Result<(Vec<f64>, SolveStats)> {
    let a = &system.matrix;
    let n = a.n;
    let mut trip = Vec::with_capacity(a.nnz() / 2 + n);
    for i in 0..n {
        for p in a.row_ptr[i]..a.row_ptr[i + 1] {
            let j = a.col_idx[p];
            if j <= i && a.values[p] != 0.0 {
                trip.push(Triplet::new(i, j, a.values[p]));
            }
        }
    }
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
        .map_err(|e| Error::SingularSystem(format!("sparse matrix construction failed: {e:?}")))?;
    let llt = mat
        .sp_cholesky(Side::Lower)
        .map_err(|e| Error::NotPositiveDefinite(format!("Cholesky factorization failed ({e:?}); check supports and element quality")))?;
    let mut b = Mat::<f64>::zeros(n, 1);
    for i in 0..n {
        b[(i, 0)] = system.rhs[i];
    }
    let x = llt.solve(&b);
    let u: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotPositiveDefinite("solution is not finite".into()));
    }
    let r = a.mul_vec(&u);
    let res: f64 = r.iter().zip(&system.rhs).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let fnorm = system.rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    let stats = SolveStats { n_dofs: n, nnz: a.nnz(), relative_residual: if fnorm > 0.0 { res / fnorm } else { res } };
    Ok((u, stats))
}

/// Discrete solution with the per-element projections needed downstream.
#[derive(Clone, Debug)]
pub struct Solution {
    pub displacement: Vec<f64>,
    /// Monomial coefficients of Πu per element.
    pub coefficients: Vec<Vector6<f64>>,
    /// Constant projected strain per element (Voigt, engineering shear).
    pub strains: Vec<Vector3<f64>>,
    /// Constant projected stress per element (Voigt).
    pub stresses: Vec<Vector3<f64>>,
    /// K u − f at every DOF; nonzero only at constrained DOFs.
    pub reactions: Vec<f64>,
    pub load: Vec<f64>,
    pub fixed: Vec<Option<f64>>,
    pub projections: Vec<Projection>,
    pub material: Material,
    pub stats: SolveStats,
}

impl Solution {
    pub fn nodal(&self, v: usize) -> Vec2 {
        Vec2::new(self.displacement[2 * v], self.displacement[2 * v + 1])
    }

    /// Projected displacement Πu of element `e` at point `p`.
    pub fn projected_displacement(&self, e: usize, p: Vec2) -> Vec2 {
        let m = self.projections[e].basis.eval(p);
        let u = m * self.coefficients[e];
        Vec2::new(u[0], u[1])
    }

    pub fn projected_gradient(&self, e: usize) -> Matrix2<f64> {
        self.projections[e].basis.gradient(&self.coefficients[e])
    }

    pub fn local_values(&self, mesh: &PolyMesh, e: usize) -> DVector<f64> {
        let el = mesh.element(e);
        DVector::from_iterator(2 * el.len(), el.vertices.iter().flat_map(|&v| [self.displacement[2 * v], self.displacement[2 * v + 1]]))
    }

    /// Post-processes a given nodal displacement vector without solving;
    /// reactions and loads are left at zero.
    pub fn from_displacement(mesh: &PolyMesh, material: &Material, displacement: Vec<f64>) -> Result<Solution> {
        if displacement.len() != 2 * mesh.n_vertices() {
            return Err(Error::InvalidInput(format!("{} displacement values for {} vertices", displacement.len(), mesh.n_vertices())));
        }
        let projections = (0..mesh.n_elements()).into_par_iter().map(|e| vem::compute_projection(mesh, e, material)).collect::<Result<Vec<_>>>()?;
        let n = displacement.len();
        let stats = SolveStats { n_dofs: n, nnz: 0, relative_residual: 0.0 };
        Ok(postprocess(mesh, material, displacement, projections, vec![0.0; n], vec![0.0; n], vec![None; n], stats))
    }

    /// Sum of reactions and applied loads, per component. Zero at equilibrium.
    pub fn force_balance(&self) -> Vec2 {
        let mut s = Vec2::zeros();
        for i in 0..self.load.len() {
            let f = self.load[i] + if self.fixed[i].is_some() { self.reactions[i] } else { 0.0 };
            if i % 2 == 0 {
                s.x += f;
            } else {
                s.y += f;
            }
        }
        s
    }

    /// Resultant of the reactions at constrained DOFs.
    pub fn reaction_resultant(&self) -> Vec2 {
        let mut s = Vec2::zeros();
        for (i, r) in self.reactions.iter().enumerate() {
            if self.fixed[i].is_some() {
                if i % 2 == 0 {
                    s.x += r;
                } else {
                    s.y += r;
                }
            }
        }
        s
    }
}

/// Assemble, constrain, solve and post-process in one call.
pub fn solve_problem(mesh: &PolyMesh, material: &Material, gamma: f64, bcs: &BoundaryConditionSet) -> Result<Solution> {
    let assembly = assemble(mesh, material, gamma)?;
    let system = apply_bcs(mesh, &assembly, bcs)?;
    let (u, stats) = solve(&system)?;
    let ku = assembly.matrix.mul_vec(&u);
    let reactions: Vec<f64> = ku.iter().zip(&system.load).map(|(a, f)| a - f).collect();
    let projections = assembly.elements.into_iter().map(|l| l.projection).collect();
    Ok(postprocess(mesh, material, u, projections, reactions, system.load, system.fixed, stats))
}

#[allow(clippy::too_many_arguments)]
fn postprocess(
    mesh: &PolyMesh,
    material: &Material,
    u: Vec<f64>,
    projections: Vec<Projection>,
    reactions: Vec<f64>,
    load: Vec<f64>,
    fixed: Vec<Option<f64>>,
    stats: SolveStats,
) -> Solution {
    let c = material.constitutive();
    let mut coefficients = Vec::with_capacity(mesh.n_elements());
    let mut strains = Vec::with_capacity(mesh.n_elements());
    let mut stresses = Vec::with_capacity(mesh.n_elements());
    for (e, p) in projections.iter().enumerate() {
        let el = mesh.element(e);
        let ul = DVector::from_iterator(2 * el.len(), el.vertices.iter().flat_map(|&v| [u[2 * v], u[2 * v + 1]]));
        let coef = p.coefficients(&ul);
        let eps = p.basis.strains() * coef;
        coefficients.push(coef);
        strains.push(eps);
        stresses.push(c * eps);
    }
    Solution { displacement: u, coefficients, strains, stresses, reactions, load, fixed, projections, material: *material, stats }
}

/// Dirichlet data on every vertex with one of the given boundary tags.
pub fn fix_tagged(mesh: &PolyMesh, bcs: &mut BoundaryConditionSet, tag_list: &[u32], components: &[usize], field: &dyn Fn(Vec2) -> Vec2) {
    let mut nodes = std::collections::BTreeSet::new();
    for &t in tag_list {
        nodes.extend(mesh.vertices_with_tag(t));
    }
    bcs.fix_field(mesh, nodes, components, field);
}

/// True when the tag denotes part of the outer or hole boundary rather than a crack face.
pub fn is_outer_tag(tag: u32) -> bool {
    tag != tags::INTERIOR && tag != tags::CRACK
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::material::PlaneState;
    use crate::mesh::{generate_structured, ElementKind};

    fn mat() -> Material {
        Material::new(1.0, 0.3, PlaneState::PlaneStress).unwrap()
    }

    #[test]
    fn single_element_matches_local() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
        let a = assemble(&m, &mat(), 1.0).unwrap();
        let local = vem::local_stiffness(&m, 0, &mat(), 1.0).unwrap().k_local;
        // vertex order of the element is 0,1,3,2 in global numbering
        let el = m.element(0);
        for (i, &vi) in el.vertices.iter().enumerate() {
            for (j, &vj) in el.vertices.iter().enumerate() {
                for c in 0..2 {
                    for d in 0..2 {
                        assert_eq!(a.matrix.get(2 * vi + c, 2 * vj + d), local[(2 * i + c, 2 * j + d)]);
                    }
                }
            }
        }
    }

    #[test]
    fn two_quads_are_symmetric_and_accumulate() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 2.0, 1.0), 2, 1).unwrap();
        let a = assemble(&m, &mat(), 1.0).unwrap();
        assert!(a.matrix.asymmetry() < 1e-12);
        let k0 = vem::local_stiffness(&m, 0, &mat(), 1.0).unwrap().k_local;
        let k1 = vem::local_stiffness(&m, 1, &mat(), 1.0).unwrap().k_local;
        // vertex 1 is shared: local index 1 in element 0 and 0 in element 1
        let expected = k0[(2, 2)] + k1[(0, 0)];
        assert!((a.matrix.get(2, 2) - expected).abs() < 1e-15);
    }

    #[test]
    fn assembly_is_bitwise_deterministic() {
        let m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 3.0, 2.0), 12, 8).unwrap();
        let a = assemble(&m, &mat(), 1.0).unwrap().matrix;
        let b = assemble(&m, &mat(), 1.0).unwrap().matrix;
        assert_eq!(a, b);
    }

    #[test]
    fn all_fixed_gives_zero() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 1.0, 1.0), 2, 2).unwrap();
        let mut bcs = BoundaryConditionSet::default();
        bcs.fix_field(&m, 0..m.n_vertices(), &[0, 1], &|_| Vec2::zeros());
        bcs.body_force = Vec2::new(3.0, -1.0);
        let s = solve_problem(&m, &mat(), 1.0, &bcs).unwrap();
        assert!(s.displacement.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn missing_dirichlet_is_singular() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 1.0, 1.0), 2, 2).unwrap();
        let mut bcs = BoundaryConditionSet::default();
        bcs.traction(tags::RIGHT, |_| Vec2::new(1.0, 0.0));
        assert!(matches!(solve_problem(&m, &mat(), 1.0, &bcs), Err(Error::SingularSystem(_))));
    }

    #[test]
    fn insufficient_supports_are_not_positive_definite() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 1.0, 1.0), 2, 2).unwrap();
        let mut bcs = BoundaryConditionSet::default();
        bcs.dirichlet.push(Dirichlet { node: 0, component: 0, value: 0.0 });
        assert!(matches!(solve_problem(&m, &mat(), 1.0, &bcs), Err(Error::NotPositiveDefinite(_))));
    }

    #[test]
    fn conflicting_dirichlet_is_rejected() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
        let mut bcs = BoundaryConditionSet::default();
        bcs.dirichlet.push(Dirichlet { node: 0, component: 0, value: 0.0 });
        bcs.dirichlet.push(Dirichlet { node: 0, component: 0, value: 1.0 });
        assert!(solve_problem(&m, &mat(), 1.0, &bcs).is_err());
    }
}
