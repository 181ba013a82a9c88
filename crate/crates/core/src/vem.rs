//! First-order virtual element kernel for plane elasticity.
//!
//! The polynomial space is spanned by six vector monomials in centered,
//! diameter-scaled coordinates ξ = (x − x_K)/h_K, η = (y − y_K)/h_K:
//!
//! | α | m^α      | mode                 |
//! |---|----------|----------------------|
//! | 1 | (1, 0)   | translation x        |
//! | 2 | (0, 1)   | translation y        |
//! | 3 | (−η, ξ)  | rotation             |
//! | 4 | (η, ξ)   | shear                |
//! | 5 | (ξ, −η)  | deviatoric axial     |
//! | 6 | (ξ, η)   | volumetric           |
//!
//! Rows 4–6 of the projection system are the energy conditions
//! `a_K(m^α, Πv) = a_K(m^α, v)`, evaluated on the boundary with the
//! endpoint (Gauss–Lobatto) rule. Rows 1–2 fix the vertex average and row 3
//! the mean rotation, which makes `G` square and invertible.

use nalgebra::{DMatrix, DVector, Matrix2x6, Matrix3x6, Matrix6, Vector3, Vector6};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::material::Material;
use crate::mesh::{element_geometry_of, ElementGeometry, PolyMesh};

/// Scaled vector monomial basis of one element.
#[derive(Clone, Copy, Debug)]
pub struct MonomialBasis {
    pub centroid: Vec2,
    pub h: f64,
}

impl MonomialBasis {
    pub fn new(geom: &ElementGeometry) -> MonomialBasis {
        MonomialBasis { centroid: geom.centroid, h: geom.diameter }
    }

    /// The 2×6 matrix M(x, y) whose columns are the monomials.
    pub fn eval(&self, p: Vec2) -> Matrix2x6<f64> {
        let xi = (p.x - self.centroid.x) / self.h;
        let eta = (p.y - self.centroid.y) / self.h;
        Matrix2x6::new(1.0, 0.0, -eta, eta, xi, xi, 0.0, 1.0, xi, xi, -eta, eta)
    }

    /// Voigt strains (xx, yy, xy engineering) of the six monomials.
    pub fn strains(&self) -> Matrix3x6<f64> {
        let s = 1.0 / self.h;
        Matrix3x6::new(0.0, 0.0, 0.0, 0.0, s, s, 0.0, 0.0, 0.0, 0.0, -s, s, 0.0, 0.0, 0.0, 2.0 * s, 0.0, 0.0)
    }

    /// Displacement gradient [[∂x u_x, ∂y u_x], [∂x u_y, ∂y u_y]] of Σ c_α m^α.
    pub fn gradient(&self, c: &Vector6<f64>) -> nalgebra::Matrix2<f64> {
        let s = 1.0 / self.h;
        nalgebra::Matrix2::new((c[4] + c[5]) * s, (c[3] - c[2]) * s, (c[2] + c[3]) * s, (c[5] - c[4]) * s)
    }
}

/// Projection operators of one element.
#[derive(Clone, Debug)]
pub struct Projection {
    pub geometry: ElementGeometry,
    pub basis: MonomialBasis,
    /// (2n)×6 nodal values of the monomials.
    pub d: DMatrix<f64>,
    /// 6×(2n) right-hand side of the projection system.
    pub b: DMatrix<f64>,
    pub g: Matrix6<f64>,
    /// 6×(2n): nodal values → monomial coefficients of Πv.
    pub pi_star: DMatrix<f64>,
    /// (2n)×(2n): nodal values → nodal values of Πv.
    pub pi: DMatrix<f64>,
}

impl Projection {
    /// Monomial coefficients of the projection of local nodal values.
    pub fn coefficients(&self, u_local: &DVector<f64>) -> Vector6<f64> {
        let c = &self.pi_star * u_local;
        Vector6::from_column_slice(c.as_slice())
    }

    /// Projection of a scalar nodal field, using the x-rows of Π*.
    /// Returns (value at centroid, gradient).
    pub fn scalar(&self, values: &[f64]) -> (f64, Vec2) {
        let n = values.len();
        let mut u = DVector::zeros(2 * n);
        for i in 0..n {
            u[2 * i] = values[i];
        }
        let c = self.coefficients(&u);
        let g = self.basis.gradient(&c);
        (c[0], Vec2::new(g[(0, 0)], g[(0, 1)]))
    }
}

/// All local matrices of one element.
#[derive(Clone, Debug)]
pub struct LocalVemMatrices {
    pub projection: Projection,
    /// G with rows 1–3 zeroed.
    pub a: Matrix6<f64>,
    pub alpha_star: f64,
    pub gamma: f64,
    /// Consistency part Π*ᵀ A Π*.
    pub k_consistency: DMatrix<f64>,
    /// Stabilization part (I − Π)ᵀ S* (I − Π).
    pub k_stability: DMatrix<f64>,
    pub k_local: DMatrix<f64>,
}

impl LocalVemMatrices {
    /// The diagonal stabilization matrix S* = γ α* I.
    pub fn s_star(&self) -> DMatrix<f64> {
        let n = self.k_local.nrows();
        DMatrix::identity(n, n) * (self.gamma * self.alpha_star)
    }
}

pub fn build_monomials(geom: &ElementGeometry) -> MonomialBasis {
    MonomialBasis::new(geom)
}

pub fn compute_projection(mesh: &PolyMesh, e: usize, material: &Material) -> Result<Projection> {
    projection_of(&mesh.element_points(e), material).map_err(|err| with_element(err, e))
}

pub fn local_stiffness(mesh: &PolyMesh, e: usize, material: &Material, gamma: f64) -> Result<LocalVemMatrices> {
    stiffness_of(&mesh.element_points(e), material, gamma).map_err(|err| with_element(err, e))
}

fn with_element(err: Error, e: usize) -> Error {
    match err {
        Error::DegenerateElement { reason, .. } => Error::DegenerateElement { element: e, reason },
        other => other,
    }
}

/// Projection of a polygon given by its counter-clockwise vertices.
pub fn projection_of(pts: &[Vec2], material: &Material) -> Result<Projection> {
    let n = pts.len();
    if n < 3 {
        return Err(Error::DegenerateElement { element: usize::MAX, reason: format!("{n} vertices") });
    }
    let geometry = element_geometry_of(pts);
    if !(geometry.area > 0.0) {
        return Err(Error::DegenerateElement { element: usize::MAX, reason: "non-positive area".into() });
    }
    let basis = MonomialBasis::new(&geometry);
    let c = material.constitutive();
    let strains = basis.strains();
    let stresses = c * strains;

    let mut d = DMatrix::zeros(2 * n, 6);
    for (i, &p) in pts.iter().enumerate() {
        let m = basis.eval(p);
        for beta in 0..6 {
            d[(2 * i, beta)] = m[(0, beta)];
            d[(2 * i + 1, beta)] = m[(1, beta)];
        }
    }

    let mut b = DMatrix::zeros(6, 2 * n);
    let inv_n = 1.0 / n as f64;
    let rot = 1.0 / (2.0 * geometry.area);
    for i in 0..n {
        b[(0, 2 * i)] = inv_n;
        b[(1, 2 * i + 1)] = inv_n;
        // the two edges meeting at vertex i, each weighting it by L/2
        for edge in [(i + n - 1) % n, i] {
            let w = 0.5 * geometry.lengths[edge];
            let nv = geometry.normals[edge];
            b[(2, 2 * i)] -= rot * w * nv.y;
            b[(2, 2 * i + 1)] += rot * w * nv.x;
            for alpha in 3..6 {
                let s = stresses.column(alpha);
                b[(alpha, 2 * i)] += w * (s[0] * nv.x + s[2] * nv.y);
                b[(alpha, 2 * i + 1)] += w * (s[2] * nv.x + s[1] * nv.y);
            }
        }
    }

    let mut g = Matrix6::zeros();
    for beta in 0..6 {
        g[(0, beta)] = (0..n).map(|i| d[(2 * i, beta)]).sum::<f64>() * inv_n;
        g[(1, beta)] = (0..n).map(|i| d[(2 * i + 1, beta)]).sum::<f64>() * inv_n;
    }
    g[(2, 2)] = 1.0 / basis.h;
    for alpha in 3..6 {
        for beta in 0..6 {
            g[(alpha, beta)] = geometry.area * strains.column(alpha).dot(&stresses.column(beta));
        }
    }

    let g_inv = g.try_inverse().ok_or_else(|| Error::DegenerateElement {
        element: usize::MAX,
        reason: "singular projection matrix G".into(),
    })?;
    let g_inv_dyn = DMatrix::from_column_slice(6, 6, g_inv.as_slice());
    let pi_star = &g_inv_dyn * &b;
    let pi = &d * &pi_star;
    Ok(Projection { geometry, basis, d, b, g, pi_star, pi })
}

/// Local stiffness of a polygon given by its counter-clockwise vertices.
pub fn stiffness_of(pts: &[Vec2], material: &Material, gamma: f64) -> Result<LocalVemMatrices> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput(format!("stabilization factor must be positive, got {gamma}")));
    }
    let projection = projection_of(pts, material)?;
    let n2 = projection.d.nrows();
    let mut a = projection.g;
    for r in 0..3 {
        a.row_mut(r).fill(0.0);
    }
    let a_dyn = DMatrix::from_column_slice(6, 6, a.as_slice());
    let pi_star = &projection.pi_star;
    let mut k_consistency = pi_star.transpose() * &a_dyn * pi_star;
    symmetrize(&mut k_consistency);

    let alpha_star = stabilization_scale(&projection, material);
    let i_minus_pi = DMatrix::identity(n2, n2) - &projection.pi;
    let mut k_stability = i_minus_pi.transpose() * &i_minus_pi * (gamma * alpha_star);
    symmetrize(&mut k_stability);
    let k_local = &k_consistency + &k_stability;
    Ok(LocalVemMatrices { projection, a, alpha_star, gamma, k_consistency, k_stability, k_local })
}

/// α* = (1/10)|K| tr(C) tr((D_cᵀ D_c)⁻¹) with D_c the non-constant monomial
/// columns taken in physical offsets (x − x_K), so that α* is invariant
/// under uniform scaling of the element.
pub fn stabilization_scale(p: &Projection, material: &Material) -> f64 {
    let dc = p.d.columns(2, 4);
    let dtd = dc.transpose() * dc;
    let tr_inv = dtd.try_inverse().map(|m| m.trace()).unwrap_or(f64::INFINITY);
    0.1 * p.geometry.area * material.constitutive().trace() * tr_inv / (p.basis.h * p.basis.h)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Consistent nodal forces of a traction on the edge a → b, from two-point
/// Gauss quadrature. Returns (f_a, f_b).
pub fn boundary_load(a: Vec2, b: Vec2, traction: &dyn Fn(Vec2) -> Vec2) -> (Vec2, Vec2) {
    let l = (b - a).norm();
    let g = 0.5 / 3f64.sqrt();
    let mut fa = Vec2::zeros();
    let mut fb = Vec2::zeros();
    for s in [0.5 - g, 0.5 + g] {
        let t = traction(a + (b - a) * s) * (0.5 * l);
        fa += t * (1.0 - s);
        fb += t * s;
    }
    (fa, fb)
}

/// Nodal forces of a constant body force: Π*ᵀ ∫ Mᵀ b. With centered
/// monomials only the translation moments are nonzero.
pub fn body_load(p: &Projection, body: Vec2) -> DVector<f64> {
    let mut m = DVector::zeros(6);
    m[0] = p.geometry.area * body.x;
    m[1] = p.geometry.area * body.y;
    p.pi_star.transpose() * m
}

/// Projected strain (Voigt) of local nodal values.
pub fn projected_strain(p: &Projection, u_local: &DVector<f64>) -> Vector3<f64> {
    p.basis.strains() * p.coefficients(u_local)
}
