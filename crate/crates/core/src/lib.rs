//! Numerical laboratory for sharp lower bounds on sums of reciprocal
//! Laplace eigenvalues: Neumann spectra of Euclidean domains, folded
//! radial test functions, and conformal foldings on spheres.

pub mod eigensolve;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod specfun;
pub mod sphere;
pub mod testfun;
pub mod verify;

pub use error::{Error, Result};
