//! Sphere machinery: Mobius automorphisms, center of mass for measures,
//! spherical caps with reflections and folding, conformal energies, the
//! conformal spectrum on S^2, and the cap + center orthogonality solver.

pub mod cap;
pub mod capsolve;
pub mod energy;
pub mod factor;
pub mod grid;
pub mod harmonics;
pub mod measure;
pub mod mobius;
pub mod spectrum;
pub mod theorems;

pub use cap::{reflect_plane, Cap};
pub use capsolve::{solve_cap_and_center, CapCenter};
pub use energy::{conformal_energy, i_n_exact};
pub use factor::{BumpSpec, ConformalFactor};
pub use grid::SphereGrid;
pub use measure::{sphere_center_of_mass, CenterOfMassResult, SphereMeasure};
pub use mobius::{mobius, mobius_factor};
pub use spectrum::{s2_conformal_spectrum, S2Spectrum};
pub use theorems::{verify_sphere_theorems, SphereTheoremCertificate};
