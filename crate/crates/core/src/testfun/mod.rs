//! Domain-side test-function machinery: the radial field, its fold across
//! a mediator hyperplane, the solvers that place the fold, the orthonormal
//! direction basis, and the certified inequality chain.

pub mod backend;
pub mod borsuk;
pub mod certificate;
pub mod field;
pub mod frame;
pub mod solvers;

pub use backend::{DomainBackend, FieldNode};
pub use borsuk::{borsuk_basis, BorsukBasis};
pub use certificate::{reciprocal_sum_certificate, ModeCheck, ReciprocalSumCertificate};
pub use field::{component_energy_density, eval_ga, eval_gab, TestFieldEvaluation};
pub use frame::{FoldingFrame, Side};
pub use solvers::{
    folding_residuals, solve_center_of_mass, solve_folding_pair, CenterOfMass, FoldingPair,
    FoldingResiduals,
};
