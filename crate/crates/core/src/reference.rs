//! Closed-form elasticity solutions used for boundary data, error norms and
//! stress intensity factor checks.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rotate, Vec2};
use crate::material::Material;

/// An exact displacement and stress field on the whole domain.
pub trait ExactSolution: Sync {
    fn displacement(&self, p: Vec2) -> Vec2;
    /// Voigt stress (σxx, σyy, σxy).
    fn stress(&self, p: Vec2) -> Vector3<f64>;
}

/// Cantilever of length `length` and depth `depth` occupying
/// [0, L] × [−D/2, D/2], clamped at x = 0 and loaded by a parabolic end
/// shear of resultant `load` at x = L. Plane stress, unit thickness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimoshenkoBeam {
    pub length: f64,
    pub depth: f64,
    pub load: f64,
    pub young: f64,
    pub poisson: f64,
}

impl Default for TimoshenkoBeam {
    fn default() -> Self {
        TimoshenkoBeam { length: 16.0, depth: 4.0, load: 1000.0, young: 1e6, poisson: 0.3 }
    }
}

impl TimoshenkoBeam {
    pub fn inertia(&self) -> f64 {
        self.depth.powi(3) / 12.0
    }

    pub fn timoshenko_displacement(&self, x: f64, y: f64) -> Vec2 {
        let (l, d, p, e, nu, i) = (self.length, self.depth, self.load, self.young, self.poisson, self.inertia());
        let ux = p * y / (6.0 * e * i) * ((6.0 * l - 3.0 * x) * x + (2.0 + nu) * (y * y - d * d / 4.0));
        let uy = -p / (6.0 * e * i) * (3.0 * nu * y * y * (l - x) + (4.0 + 5.0 * nu) * d * d * x / 4.0 + (3.0 * l - x) * x * x);
        Vec2::new(ux, uy)
    }

    pub fn timoshenko_stress(&self, x: f64, y: f64) -> Vector3<f64> {
        let (l, d, p, i) = (self.length, self.depth, self.load, self.inertia());
        Vector3::new(p * (l - x) * y / i, 0.0, -p / (2.0 * i) * (d * d / 4.0 - y * y))
    }
}

impl ExactSolution for TimoshenkoBeam {
    fn displacement(&self, p: Vec2) -> Vec2 {
        self.timoshenko_displacement(p.x, p.y)
    }

    fn stress(&self, p: Vec2) -> Vector3<f64> {
        self.timoshenko_stress(p.x, p.y)
    }
}

/// Fields of the two-term-free Williams expansion in the crack-tip frame,
/// all scaled by the corresponding stress intensity factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TipFields {
    pub displacement: Vec2,
    /// ∂u_i/∂x_j.
    pub gradient: Matrix2<f64>,
    pub stress: Vector3<f64>,
}

impl TipFields {
    fn zero() -> TipFields {
        TipFields { displacement: Vec2::zeros(), gradient: Matrix2::zeros(), stress: Vector3::zeros() }
    }

    fn add_scaled(&mut self, other: &TipFields, s: f64) {
        self.displacement += other.displacement * s;
        self.gradient += other.gradient * s;
        self.stress += other.stress * s;
    }

    /// Expresses tip-frame fields in a frame rotated by `angle`.
    fn rotated(&self, angle: f64) -> TipFields {
        let (c, s) = (angle.cos(), angle.sin());
        let r = Matrix2::new(c, -s, s, c);
        let sig = Matrix2::new(self.stress[0], self.stress[2], self.stress[2], self.stress[1]);
        let sg = r * sig * r.transpose();
        TipFields {
            displacement: rotate(self.displacement, angle),
            gradient: r * self.gradient * r.transpose(),
            stress: Vector3::new(sg[(0, 0)], sg[(1, 1)], sg[(0, 1)]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    I,
    II,
}

/// Unit-SIF Williams field of one mode at polar tip coordinates (r, θ).
/// θ outside (−π, π] is accepted and evaluates the smooth continuation.
pub fn williams(mode: Mode, r: f64, theta: f64, material: &Material) -> Result<TipFields> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::SingularPoint(format!("asymptotic field evaluated at r = {r}")));
    }
    let kappa = material.kappa();
    let mu = material.shear_modulus();
    let (s, c) = (theta / 2.0).sin_cos();
    let (s3, c3) = (1.5 * theta).sin_cos();
    let sr = r.sqrt();
    let ku = 1.0 / (2.0 * mu * (2.0 * PI).sqrt());
    let ks = 1.0 / (2.0 * PI * r).sqrt();
    // u = ku √r f(θ); f' is the θ-derivative
    let (f, df, stress) = match mode {
        Mode::I => (
            Vec2::new(c * (kappa - 1.0 + 2.0 * s * s), s * (kappa + 1.0 - 2.0 * c * c)),
            Vec2::new(-0.5 * s * (kappa - 1.0 + 2.0 * s * s) + 2.0 * s * c * c, 0.5 * c * (kappa + 1.0 - 2.0 * c * c) + 2.0 * s * s * c),
            Vector3::new(c * (1.0 - s * s3), c * (1.0 + s * s3), s * c * c3) * ks,
        ),
        Mode::II => (
            Vec2::new(s * (kappa + 1.0 + 2.0 * c * c), -c * (kappa - 1.0 - 2.0 * s * s)),
            Vec2::new(0.5 * c * (kappa + 1.0 + 2.0 * c * c) - 2.0 * s * s * c, 0.5 * s * (kappa - 1.0 - 2.0 * s * s) + 2.0 * s * c * c),
            Vector3::new(-s * (2.0 + c * c3), s * c * c3, c * (1.0 - s * s3)) * ks,
        ),
    };
    let (st, ct) = theta.sin_cos();
    // ∂/∂x = cosθ ∂/∂r − sinθ/r ∂/∂θ, ∂/∂y = sinθ ∂/∂r + cosθ/r ∂/∂θ
    let dx = (f * (0.5 * ct) - df * st) * (ku / sr);
    let dy = (f * (0.5 * st) + df * ct) * (ku / sr);
    Ok(TipFields { displacement: f * (ku * sr), gradient: Matrix2::new(dx.x, dy.x, dx.y, dy.y), stress })
}

/// Mode-II auxiliary state used by the interaction integral.
pub fn mode2_auxiliary(r: f64, theta: f64, material: &Material) -> Result<TipFields> {
    williams(Mode::II, r, theta, material)
}

/// Mixed-mode asymptotic field around a tip at `origin` whose crack runs
/// behind it along direction `angle + π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NearTipField {
    pub k1: f64,
    pub k2: f64,
    pub material: Material,
    pub origin: Vec2,
    pub angle: f64,
}

impl NearTipField {
    pub fn mode_i(k1: f64, material: Material, origin: Vec2, angle: f64) -> NearTipField {
        NearTipField { k1, k2: 0.0, material, origin, angle }
    }

    /// Tip-frame polar coordinates of a global point, θ ∈ (−π, π].
    pub fn polar(&self, p: Vec2) -> (f64, f64) {
        let q = rotate(p - self.origin, -self.angle);
        (q.norm(), q.y.atan2(q.x))
    }

    /// Tip-frame fields at polar coordinates, in tip-frame components.
    pub fn local(&self, r: f64, theta: f64) -> Result<TipFields> {
        let mut t = TipFields::zero();
        if self.k1 != 0.0 {
            t.add_scaled(&williams(Mode::I, r, theta, &self.material)?, self.k1);
        }
        if self.k2 != 0.0 {
            t.add_scaled(&williams(Mode::II, r, theta, &self.material)?, self.k2);
        }
        if self.k1 == 0.0 && self.k2 == 0.0 && !(r > 0.0) {
            return Err(Error::SingularPoint("r = 0".into()));
        }
        Ok(t)
    }

    pub fn neartip_displacement(&self, r: f64, theta: f64) -> Result<Vec2> {
        Ok(self.local(r, theta)?.rotated(self.angle).displacement)
    }

    pub fn neartip_stress(&self, r: f64, theta: f64) -> Result<Vector3<f64>> {
        Ok(self.local(r, theta)?.rotated(self.angle).stress)
    }

    /// Fields at a global point in global components.
    pub fn at(&self, p: Vec2) -> Result<TipFields> {
        let (r, th) = self.polar(p);
        Ok(self.local(r, th)?.rotated(self.angle))
    }
}

impl ExactSolution for NearTipField {
    fn displacement(&self, p: Vec2) -> Vec2 {
        self.at(p).map(|t| t.displacement).unwrap_or_else(|_| Vec2::zeros())
    }

    fn stress(&self, p: Vec2) -> Vector3<f64> {
        self.at(p).map(|t| t.stress).unwrap_or_else(|_| Vector3::zeros())
    }
}

/// Exact SIFs of a straight crack of half-length `a` at angle `beta` in a
/// remote field σ_yy = σ, σ_xx = ασ.
pub fn slanted_sifs(sigma: f64, a: f64, alpha: f64, beta: f64) -> (f64, f64) {
    let k0 = sigma * (PI * a).sqrt();
    let (s, c) = beta.sin_cos();
    (k0 * (c * c + alpha * s * s), k0 * (1.0 - alpha) * s * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::PlaneState;

    fn strain_mat() -> Material {
        Material::new(1e7, 0.3, PlaneState::PlaneStrain).unwrap()
    }

    #[test]
    fn beam_origin_and_tip() {
        let b = TimoshenkoBeam::default();
        assert_eq!(b.timoshenko_displacement(0.0, 0.0), Vec2::zeros());
        let uy = b.timoshenko_displacement(16.0, 0.0).y;
        // −P/(6EI)·[(4+5ν)D²L/4 + 2L³] with I = 16/3
        let oracle = -1000.0 / (6.0 * 1e6 * 16.0 / 3.0) * (5.5 * 16.0 * 16.0 / 4.0 + 2.0 * 4096.0);
        assert!((uy - oracle).abs() < 1e-15);
        assert!((uy - -0.267).abs() < 5e-4);
    }

    #[test]
    fn beam_is_in_equilibrium_and_consistent() {
        let b = TimoshenkoBeam::default();
        let m = Material::new(b.young, b.poisson, PlaneState::PlaneStress).unwrap();
        let c = m.constitutive();
        let hd = 1e-4;
        for k in 0..100 {
            let x = 16.0 * ((k as f64 * 0.618_033_988_7) % 1.0);
            let y = 4.0 * ((k as f64 * 0.414_213_562_3) % 1.0) - 2.0;
            let s = |x, y| b.timoshenko_stress(x, y);
            let dsx = (s(x + hd, y) - s(x - hd, y)) / (2.0 * hd);
            let dsy = (s(x, y + hd) - s(x, y - hd)) / (2.0 * hd);
            let scale = 1000.0 * 2.0 / (16.0 / 3.0);
            assert!((dsx[0] + dsy[2]).abs() < 1e-10 * scale * 16.0);
            assert!((dsx[2] + dsy[1]).abs() < 1e-10 * scale * 16.0);
            // stress equals C ε(u)
            let u = |x, y| b.timoshenko_displacement(x, y);
            let ux = (u(x + hd, y) - u(x - hd, y)) / (2.0 * hd);
            let uy = (u(x, y + hd) - u(x, y - hd)) / (2.0 * hd);
            let sig = c * Vector3::new(ux.x, uy.y, ux.y + uy.x);
            assert!((sig - s(x, y)).norm() < 1e-5 * scale * 16.0);
        }
    }

    #[test]
    fn crack_faces_are_traction_free() {
        let f = NearTipField::mode_i(1.0, strain_mat(), Vec2::zeros(), 0.0);
        for th in [PI, -PI] {
            let s = f.local(0.7, th).unwrap().stress;
            assert!(s[1].abs() < 1e-15 && s[2].abs() < 1e-15);
        }
        let f2 = NearTipField { k1: 0.0, k2: 1.0, ..f };
        for th in [PI, -PI] {
            let s = f2.local(0.7, th).unwrap().stress;
            assert!(s[1].abs() < 1e-15 && s[2].abs() < 1e-15);
        }
    }

    #[test]
    fn opening_jump_and_ahead_stress() {
        let m = strain_mat();
        let k = 1e4 * (100.0 * PI).sqrt();
        let f = NearTipField::mode_i(k, m, Vec2::zeros(), 0.0);
        let r: f64 = 2.0;
        let jump = f.neartip_displacement(r, PI).unwrap().y - f.neartip_displacement(r, -PI).unwrap().y;
        let oracle = 2.0 * (2.0 * 1.3 / (2.0 * PI).sqrt()) * (k / 1e7) * r.sqrt() * (2.0 - 0.6);
        assert!((jump - oracle).abs() < 1e-12 * oracle);
        let s = f.neartip_stress(r, 0.0).unwrap();
        assert!((s[1] - k / (2.0 * PI * r).sqrt()).abs() < 1e-9 * s[1]);
    }

    #[test]
    fn printed_plane_strain_form_matches_general_form() {
        let m = strain_mat();
        let nu: f64 = 0.3;
        for &(r, th) in &[(0.3, 0.4), (1.7, -2.5), (4.0, 3.0)] {
            let t = williams(Mode::I, r, th, &m).unwrap();
            let (s, c) = (th / 2.0_f64).sin_cos();
            let pre = 2.0 * (1.0 + nu) / (2.0 * PI).sqrt() / 1e7 * r.sqrt() * (2.0 - 2.0 * nu - c * c);
            assert!((t.displacement.x - pre * c).abs() < 1e-20);
            assert!((t.displacement.y - pre * s).abs() < 1e-20);
        }
    }

    #[test]
    fn gradient_matches_finite_differences_and_hooke() {
        for state in [PlaneState::PlaneStrain, PlaneState::PlaneStress] {
            let m = Material::new(3e7, 0.25, state).unwrap();
            let c = m.constitutive();
            for mode in [Mode::I, Mode::II] {
                for &(x, y) in &[(0.3, 0.2), (-0.5, 0.4), (-0.2, -0.7), (1.0, -0.1)] {
                    let p = Vec2::new(x, y);
                    let eval = |q: Vec2| williams(mode, q.norm(), q.y.atan2(q.x), &m).unwrap();
                    let t = eval(p);
                    let h = 1e-6;
                    let gx = (eval(p + Vec2::new(h, 0.0)).displacement - eval(p - Vec2::new(h, 0.0)).displacement) / (2.0 * h);
                    let gy = (eval(p + Vec2::new(0.0, h)).displacement - eval(p - Vec2::new(0.0, h)).displacement) / (2.0 * h);
                    let fd = Matrix2::new(gx.x, gy.x, gx.y, gy.y);
                    assert!((fd - t.gradient).norm() < 1e-6 * t.gradient.norm());
                    let g = t.gradient;
                    let s = c * Vector3::new(g[(0, 0)], g[(1, 1)], g[(0, 1)] + g[(1, 0)]);
                    assert!((s - t.stress).norm() < 1e-10 * t.stress.norm());
                }
            }
        }
    }

    #[test]
    fn mode_ii_symmetries() {
        let m = strain_mat();
        let a = williams(Mode::II, 0.5, 0.0, &m).unwrap();
        assert!(a.stress[1].abs() < 1e-15);
        let p = williams(Mode::II, 0.5, 1.1, &m).unwrap();
        let q = williams(Mode::II, 0.5, -1.1, &m).unwrap();
        assert!((p.displacement.x + q.displacement.x).abs() < 1e-18);
        assert!(williams(Mode::II, 0.0, 1.0, &m).is_err());
    }

    /// Contour form of the interaction integral of a field with itself on a
    /// circle: equals 2J = 2K²/E*.
    #[test]
    fn self_interaction_matches_energy_release_rate() {
        for state in [PlaneState::PlaneStrain, PlaneState::PlaneStress] {
            let m = Material::new(3e7, 0.25, state).unwrap();
            for mode in [Mode::I, Mode::II] {
                let r = 0.8;
                let n = 4000;
                let mut integral = 0.0;
                for k in 0..n {
                    let th = -PI + (k as f64 + 0.5) * 2.0 * PI / n as f64;
                    let t = williams(mode, r, th, &m).unwrap();
                    let nrm = Vec2::new(th.cos(), th.sin());
                    let sig = Matrix2::new(t.stress[0], t.stress[2], t.stress[2], t.stress[1]);
                    let g = t.gradient;
                    let eps = Vector3::new(g[(0, 0)], g[(1, 1)], g[(0, 1)] + g[(1, 0)]);
                    let w = t.stress.dot(&eps);
                    let du1 = Vec2::new(g[(0, 0)], g[(1, 0)]);
                    let tr = sig * nrm;
                    integral += (w * nrm.x - 2.0 * tr.dot(&du1)) * r * 2.0 * PI / n as f64;
                }
                let oracle = 2.0 / m.e_star();
                assert!((integral - oracle).abs() < 1e-3 * oracle, "{state:?} {mode:?}: {integral} vs {oracle}");
            }
        }
    }

    #[test]
    fn slanted_table_values() {
        let (k1, k2) = slanted_sifs(2000.0, 0.5, 0.0, 0.0);
        assert!((k1 - 2506.6282).abs() < 1e-4 && k2 == 0.0);
        let (k1, k2) = slanted_sifs(2000.0, 0.5, 0.0, 30f64.to_radians());
        assert!((k1 - 1879.9712).abs() < 1e-4);
        assert!((k2 - 1085.4019).abs() < 1e-4);
        let (k1, k2) = slanted_sifs(2000.0, 0.5, 1.0, 0.7);
        assert!((k1 - 2000.0 * (PI * 0.5).sqrt()).abs() < 1e-9 && k2.abs() < 1e-12);
    }

    #[test]
    fn rotated_frame_consistency() {
        let m = strain_mat();
        let f = NearTipField { k1: 2.0, k2: -0.5, material: m, origin: Vec2::new(1.0, 2.0), angle: 0.6 };
        let p = Vec2::new(1.4, 2.9);
        let (r, th) = f.polar(p);
        let g = f.at(p).unwrap();
        assert_eq!(g.displacement, f.neartip_displacement(r, th).unwrap());
        assert!(g.stress.norm() > 0.0);
    }
}
