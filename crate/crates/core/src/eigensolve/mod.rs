//! Neumann spectra: closed forms for separable families, P1 finite
//! elements plus a sparse symmetric eigensolver for meshed 2D domains.

pub mod analytic;
pub mod assemble;
pub mod csr;
pub mod solver;
pub mod spectral;

pub use analytic::{analytic_spectrum, bessel_jprime_zeros, spherical_jprime_zeros};
pub use assemble::{assemble, rayleigh_quotient};
pub use csr::CsrMatrix;
pub use solver::fem_spectrum;
pub use spectral::{AnalyticMode, EigenBasis, ModeKind, SolverInfo, SpectralResult};
