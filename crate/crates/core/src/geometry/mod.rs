//! Domain geometry: specifications with analytic volumes, triangulations
//! of the 2D families, quadrature rules, and the mesh file format.

pub mod domain;
pub mod io;
pub mod mesh;
pub mod meshgen;
pub mod quad;

pub use domain::{equivalent_radii, l_shape, DomainSpec, DumbbellGeometry, PlacedSpec, Placement};
pub use io::{export_mesh, import_mesh, mesh_from_string, mesh_to_string};
pub use mesh::Mesh;
pub use meshgen::generate_mesh;
pub use quad::{domain_quadrature, Quadrature};
