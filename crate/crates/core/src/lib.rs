//! Virtual element method for two-dimensional linear elastic fracture mechanics.
//!
//! The crate solves plane elasticity with first-order virtual elements on
//! arbitrary polygonal meshes, estimates the discretization error by
//! superconvergent patch recovery, refines adaptively (newest vertex
//! bisection, midPoint, polyTree), extracts mixed-mode stress intensity
//! factors with an interaction integral and grows cracks quasi-statically.
//!
//! Module map:
//! - [`mesh`]: polygonal mesh model, generators, crack insertion, file format
//! - [`vem`]: element projection and stiffness kernels
//! - [`system`]: global assembly, boundary conditions and the sparse solve
//! - [`reference`]: closed-form solutions used for validation
//! - [`recovery`]: SPR stress recovery, error norms and Dörfler marking
//! - [`adapt`]: refinement schemes and hanging-node regularization
//! - [`fracture`]: J-domains, interaction integrals, kink angles, crack extension
//! - [`driver`]: adaptive loop, propagation loop, benchmarks, configuration, output

pub mod adapt;
pub mod driver;
pub mod error;
pub mod fracture;
pub mod geometry;
pub mod material;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod recovery;
pub mod reference;
pub mod system;
pub mod vem;

pub use error::{Error, Result};
pub use geometry::Vec2;
pub use material::{Material, PlaneState};
pub use mesh::PolyMesh;
