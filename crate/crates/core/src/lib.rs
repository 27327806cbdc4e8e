//! Equiangular tight frames of shape d×2d: explicit constructions from
//! conference matrices, detection of circulant structure, a numerical solver
//! for the 2-circulant constraint system, and interval-arithmetic existence
//! certificates.

pub mod certify;
pub mod constructions;
pub mod error;
pub mod frames;
pub mod galois;
pub mod harmonic;
pub mod io;
pub mod linalg;
pub mod rigor;
pub mod solver;

pub use error::{CertFailure, Error, Result};
pub use linalg::{ComplexMatrix, RealMatrix, Role, C64};

/// Version string embedded in certificates and run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
