use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaneState {
    PlaneStress,
    PlaneStrain,
}

/// Isotropic linear elastic material in a plane state.
///
/// Stress and strain use Voigt order (xx, yy, xy) with engineering shear
/// strain, so that `σ = C ε` and the energy density is `½ εᵀ C ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub young: f64,
    pub poisson: f64,
    pub state: PlaneState,
}

impl Material {
    pub fn new(young: f64, poisson: f64, state: PlaneState) -> Result<Material> {
        let m = Material { young, poisson, state };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.young > 0.0 && self.young.is_finite()) {
            return Err(Error::InvalidInput(format!("Young's modulus must be positive, got {}", self.young)));
        }
        if !(self.poisson > -1.0 && self.poisson < 0.5) {
            return Err(Error::InvalidInput(format!("Poisson's ratio must lie in (-1, 0.5), got {}", self.poisson)));
        }
        Ok(())
    }

    pub fn constitutive(&self) -> Matrix3<f64> {
        let (e, nu) = (self.young, self.poisson);
        match self.state {
            PlaneStress => {
                let f = e / (1.0 - nu * nu);
                Matrix3::new(f, f * nu, 0.0, f * nu, f, 0.0, 0.0, 0.0, f * (1.0 - nu) / 2.0)
            }
            PlaneStrain => {
                let f = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
                Matrix3::new(
                    f * (1.0 - nu),
                    f * nu,
                    0.0,
                    f * nu,
                    f * (1.0 - nu),
                    0.0,
                    0.0,
                    0.0,
                    f * (1.0 - 2.0 * nu) / 2.0,
                )
            }
        }
    }

    /// Inverse of [`Material::constitutive`].
    pub fn compliance(&self) -> Matrix3<f64> {
        self.constitutive().try_inverse().expect("validated material has SPD constitutive matrix")
    }

    pub fn shear_modulus(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.poisson))
    }

    /// Kolosov constant.
    pub fn kappa(&self) -> f64 {
        let nu = self.poisson;
        match self.state {
            PlaneStress => (3.0 - nu) / (1.0 + nu),
            PlaneStrain => 3.0 - 4.0 * nu,
        }
    }

    /// Effective modulus relating energy release rate and SIFs.
    pub fn e_star(&self) -> f64 {
        match self.state {
            PlaneStress => self.young,
            PlaneStrain => self.young / (1.0 - self.poisson * self.poisson),
        }
    }
}

use PlaneState::{PlaneStrain, PlaneStress};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compliance_inverts_constitutive() {
        for state in [PlaneStress, PlaneStrain] {
            let m = Material::new(3e7, 0.25, state).unwrap();
            let id = m.constitutive() * m.compliance();
            assert!((id - Matrix3::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn e_star_plane_strain() {
        let m = Material::new(3e7, 0.25, PlaneStrain).unwrap();
        assert!((m.e_star() - 3.2e7).abs() < 1e-6);
    }

    #[test]
    fn rejects_incompressible() {
        assert!(Material::new(1.0, 0.5, PlaneStrain).is_err());
        assert!(Material::new(-1.0, 0.2, PlaneStress).is_err());
    }
}
