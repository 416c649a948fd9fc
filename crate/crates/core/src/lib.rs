//! Computations on quasi-symmetric Siegel domains: Jordan algebra calculus,
//! the Hermitian map Q, subspace arithmetic, invariant kernels, Bergman
//! integrals and multiplicity-freeness certificates.

pub mod catalog;
pub mod certifier;
pub mod domain;
pub mod error;
pub mod integrals;
pub mod jordan;
pub mod json;
pub mod kernel;
pub mod linalg;
pub mod sampling;
pub mod spaces;
pub mod specfile;
pub mod subspace;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
