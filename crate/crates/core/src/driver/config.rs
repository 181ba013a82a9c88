//! Run configuration, read from a TOML file.
//!
//! Every key has a default; `SimulationConfig::default_toml` prints them all.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adapt::{Scheme, EPSILON_MERGE};
use crate::error::{Error, Result};
use crate::fracture::R_OUT_FACTOR;
use crate::material::{Material, PlaneState};
use crate::problems::MeshFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    /// One adaptive solve.
    Adaptive,
    /// Crack growth loop.
    Propagate,
    /// Uniform refinement sequence with convergence slopes.
    Convergence,
    /// Slanted-crack SIF table over `table.betas` × `table.alphas`.
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemSection {
    /// Named benchmark: patch, timoshenko, neartip, slanted, edge, pmma.
    pub name: String,
    /// Optional mesh file replacing the generated initial mesh.
    pub mesh: Option<PathBuf>,
    pub family: Option<MeshFamily>,
    pub level: usize,
    pub mode: RunMode,
}

impl Default for ProblemSection {
    fn default() -> Self {
        ProblemSection { name: "neartip".into(), mesh: None, family: None, level: 1, mode: RunMode::Adaptive }
    }
}

/// Overrides of the problem's material; unset keys keep the benchmark value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MaterialSection {
    pub young: Option<f64>,
    pub poisson: Option<f64>,
    pub state: Option<PlaneState>,
}

impl MaterialSection {
    pub fn apply(&self, base: Material) -> Result<Material> {
        let m = Material {
            young: self.young.unwrap_or(base.young),
            poisson: self.poisson.unwrap_or(base.poisson),
            state: self.state.unwrap_or(base.state),
        };
        m.validate()?;
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdaptSection {
    pub scheme: Scheme,
    /// Stabilization multiplier γ.
    pub gamma: f64,
    /// Dörfler bulk fraction.
    pub theta: f64,
    /// Stop once the relative estimated error η drops below this.
    pub eta_stop: f64,
    pub max_refinements: usize,
    pub epsilon_merge: f64,
}

impl Default for AdaptSection {
    fn default() -> Self {
        AdaptSection { scheme: Scheme::Midpoint, gamma: 1.0, theta: 0.5, eta_stop: 0.06, max_refinements: 30, epsilon_merge: EPSILON_MERGE }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FractureSection {
    /// Growth increment; the problem's own default, else min(a/10, 2 h_tip).
    pub delta_a: Option<f64>,
    pub max_steps: usize,
    pub r_out_factor: f64,
}

impl Default for FractureSection {
    fn default() -> Self {
        FractureSection { delta_a: None, max_steps: 10, r_out_factor: R_OUT_FACTOR }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudySection {
    pub levels: usize,
    pub families: Vec<MeshFamily>,
}

impl Default for StudySection {
    fn default() -> Self {
        StudySection { levels: 5, families: vec![MeshFamily::Q4, MeshFamily::T3] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TableSection {
    /// Crack angles in degrees.
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl Default for TableSection {
    fn default() -> Self {
        TableSection { betas: (0..=9).map(|k| 10.0 * k as f64).collect(), alphas: vec![0.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub vtk: bool,
    pub seed: u64,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: None, vtk: true, seed: 1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub problem: ProblemSection,
    pub material: MaterialSection,
    pub adapt: AdaptSection,
    pub fracture: FractureSection,
    pub study: StudySection,
    pub table: TableSection,
    pub output: OutputSection,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

impl SimulationConfig {
    pub fn from_toml(text: &str) -> Result<SimulationConfig> {
        let cfg: SimulationConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative mesh path is resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<SimulationConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        if let (Some(m), Some(dir)) = (cfg.problem.mesh.as_mut(), path.parent()) {
            if m.is_relative() {
                *m = dir.join(&*m);
            }
        }
        Ok(cfg)
    }

    pub fn default_toml() -> String {
        toml::to_string_pretty(&SimulationConfig::default()).expect("default config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.adapt;
        if !(a.eta_stop > 0.0 && a.eta_stop < 1.0) {
            return Err(Error::Config(format!("adapt.eta_stop must lie in (0, 1), got {}", a.eta_stop)));
        }
        if !(a.theta > 0.0 && a.theta <= 1.0) {
            return Err(Error::Config(format!("adapt.theta must lie in (0, 1], got {}", a.theta)));
        }
        if !(a.epsilon_merge > 0.0 && a.epsilon_merge <= 0.5) {
            return Err(Error::Config(format!("adapt.epsilon_merge must lie in (0, 0.5], got {}", a.epsilon_merge)));
        }
        positive("adapt.gamma", a.gamma)?;
        positive("fracture.r_out_factor", self.fracture.r_out_factor)?;
        if let Some(d) = self.fracture.delta_a {
            positive("fracture.delta_a", d)?;
        }
        if self.problem.mode == RunMode::Propagate && self.fracture.max_steps < 1 {
            return Err(Error::Config("fracture.max_steps must be at least 1".into()));
        }
        if self.problem.mode == RunMode::Convergence && self.study.levels < 1 {
            return Err(Error::Config("study.levels must be at least 1".into()));
        }
        for v in [self.material.young, self.material.poisson].into_iter().flatten() {
            if !v.is_finite() {
                return Err(Error::Config("material parameters must be finite".into()));
            }
        }
        if let Some(e) = self.material.young {
            positive("material.young", e)?;
        }
        crate::problems::by_name(&self.problem.name)?;
        Ok(())
    }
}
