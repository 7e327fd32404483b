//! Discrete channel surfaces in Lie sphere geometry.
//!
//! The kernel works in the hexaspherical model R^{4,2}: oriented spheres,
//! planes and points are null lines, contact elements are totally isotropic
//! planes, and a discrete Legendre map assigns contact elements to the
//! vertices of a labelled quad complex.

pub mod builder;
pub mod channel;
pub mod complex;
pub mod curvature;
pub mod error;
pub mod io;
pub mod legendre;
pub mod lie;
mod linalg;
pub mod tol;

pub use complex::{Label, QuadComplex};
pub use error::{Error, Result};
pub use legendre::{ContactElement, DupinCyclide, LegendreNet};
pub use lie::{LieVec, Subspace, Vec3};
pub use tol::Tolerances;
