//! Special functions: Bessel J, Gamma, Neumann ball eigenvalues, the
//! constant K_n, and the radial test-function profile built from them.

mod bessel;
mod gamma;
mod profile;

pub use bessel::{bessel_j, bessel_j_pair, MAX_ARGUMENT, MAX_ORDER};
pub use gamma::{gamma_fn, kn_constant, ln_gamma, unit_ball_volume};
pub use profile::{neumann_ball_mu1, profile_critical_point, WeinbergerProfile};
