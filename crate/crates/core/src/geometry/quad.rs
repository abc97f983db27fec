//! Symmetric quadrature rules on triangles (degrees 1 through 6).

use crate::error::{Error, Result};
use crate::geometry::mesh::Mesh;

/// Quadrature nodes and positive weights; weights sum to the measure of
/// the underlying region.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    /// Index of the mesh triangle each node came from.
    pub parents: Vec<usize>,
    pub degree: usize,
}

impl Quadrature {
    pub fn integrate<F: Fn([f64; 2]) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Barycentric rule on the reference triangle; weights sum to 1 and are
/// scaled by the physical triangle area on mapping.
pub fn reference_rule(degree: usize) -> Result<Vec<([f64; 3], f64)>> {
    let mut pts = Vec::new();
    let sym3 = |a: f64, w: f64, pts: &mut Vec<([f64; 3], f64)>| {
        let b = 0.5 * (1.0 - a);
        pts.push(([a, b, b], w));
        pts.push(([b, a, b], w));
        pts.push(([b, b, a], w));
    };
    let sym6 = |a: f64, b: f64, w: f64, pts: &mut Vec<([f64; 3], f64)>| {
        let c = 1.0 - a - b;
        for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            pts.push((p, w));
        }
    };
    match degree {
        1 => pts.push(([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1.0)),
        2 => sym3(2.0 / 3.0, 1.0 / 3.0, &mut pts),
        3 => {
            pts.push(([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], -27.0 / 48.0));
            sym3(0.6, 25.0 / 48.0, &mut pts);
        }
        4 => {
            sym3(0.108_103_018_168_070, 0.223_381_589_678_011, &mut pts);
            sym3(0.816_847_572_980_459, 0.109_951_743_655_322, &mut pts);
        }
        5 => {
            pts.push(([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225));
            sym3(0.059_715_871_789_770, 0.132_394_152_788_506, &mut pts);
            sym3(0.797_426_985_353_087, 0.125_939_180_544_827, &mut pts);
        }
        6 => {
            sym3(0.873_821_971_016_996, 0.050_844_906_370_207, &mut pts);
            sym3(0.501_426_509_658_179, 0.116_786_275_726_379, &mut pts);
            sym6(
                0.636_502_499_121_399,
                0.310_352_451_033_785,
                0.082_851_075_618_374,
                &mut pts,
            );
        }
        _ => {
            return Err(Error::Range(format!(
                "triangle quadrature supports degrees 1..=6, got {degree}"
            )))
        }
    }
    Ok(pts)
}

/// Per-triangle rule of the requested polynomial degree over the mesh.
pub fn domain_quadrature(mesh: &Mesh, degree: usize) -> Result<Quadrature> {
    let rule = reference_rule(degree)?;
    let mut nodes = Vec::with_capacity(mesh.num_triangles() * rule.len());
    let mut weights = Vec::with_capacity(nodes.capacity());
    let mut parents = Vec::with_capacity(nodes.capacity());
    for (t, &[i, j, k]) in mesh.triangles.iter().enumerate() {
        let a = mesh.vertices[i];
        let b = mesh.vertices[j];
        let c = mesh.vertices[k];
        let area = mesh.signed_area(t);
        for &(l, w) in &rule {
            nodes.push([
                l[0] * a[0] + l[1] * b[0] + l[2] * c[0],
                l[0] * a[1] + l[1] * b[1] + l[2] * c[1],
            ]);
            weights.push(w * area);
            parents.push(t);
        }
    }
    Ok(Quadrature {
        nodes,
        weights,
        parents,
        degree,
    })
}
