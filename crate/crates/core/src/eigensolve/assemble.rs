//! P1 Galerkin assembly of the stiffness and consistent mass operators.

use crate::eigensolve::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::geometry::mesh::Mesh;

/// Assemble (stiffness, mass). Both are symmetric; the stiffness has
/// row sums zero (constants in the kernel) up to roundoff.
pub fn assemble(mesh: &Mesh) -> Result<(CsrMatrix, CsrMatrix)> {
    let n = mesh.num_vertices();
    let mut kt = Vec::with_capacity(9 * mesh.num_triangles());
    let mut mt = Vec::with_capacity(9 * mesh.num_triangles());
    for (t, &[i, j, k]) in mesh.triangles.iter().enumerate() {
        let area = mesh.signed_area(t);
        if area <= 0.0 || !area.is_finite() {
            return Err(Error::Mesh(format!(
                "degenerate triangle {t} (area {area}) during assembly"
            )));
        }
        let v = [mesh.vertices[i], mesh.vertices[j], mesh.vertices[k]];
        // gradients of the barycentric basis
        let mut b = [0.0; 3];
        let mut c = [0.0; 3];
        for l in 0..3 {
            let pj = v[(l + 1) % 3];
            let pk = v[(l + 2) % 3];
            b[l] = (pj[1] - pk[1]) / (2.0 * area);
            c[l] = (pk[0] - pj[0]) / (2.0 * area);
        }
        let idx = [i, j, k];
        for r in 0..3 {
            for s in 0..3 {
                kt.push((idx[r], idx[s], area * (b[r] * b[s] + c[r] * c[s])));
                let m = if r == s { area / 6.0 } else { area / 12.0 };
                mt.push((idx[r], idx[s], m));
            }
        }
    }
    Ok((CsrMatrix::from_triplets(n, &kt), CsrMatrix::from_triplets(n, &mt)))
}

/// Rayleigh quotient v^T K v / v^T M v of a nodal vector.
pub fn rayleigh_quotient(stiffness: &CsrMatrix, mass: &CsrMatrix, v: &[f64]) -> Result<f64> {
    let den = mass.bilinear(v, v);
    if den <= 0.0 {
        return Err(Error::Precondition(
            "rayleigh quotient of a mass-kernel vector".into(),
        ));
    }
    Ok(stiffness.bilinear(v, v) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::DomainSpec;
    use crate::geometry::meshgen::generate_mesh;
    use std::f64::consts::PI;

    #[test]
    fn stiffness_kills_constants_and_mass_measures_area() {
        let mesh = generate_mesh(&DomainSpec::Rectangle { a: PI, b: PI / 2.0 }, 0.2).unwrap();
        let (k, m) = assemble(&mesh).unwrap();
        let ones = vec![1.0; mesh.num_vertices()];
        let kv = k.matvec_alloc(&ones);
        let maxrow = kv.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        assert!(maxrow < 1e-12, "stiffness row sums {maxrow}");
        let area = m.bilinear(&ones, &ones);
        assert!((area - PI * PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn rayleigh_of_linear_function_on_rectangle() {
        // f = x on the centered rectangle: grad energy = area, mass = a^3 b / 12
        let (a, b) = (2.0, 1.0);
        let mesh = generate_mesh(&DomainSpec::Rectangle { a, b }, 0.15).unwrap();
        let (kk, mm) = assemble(&mesh).unwrap();
        let v: Vec<f64> = mesh.vertices.iter().map(|p| p[0]).collect();
        let num = kk.bilinear(&v, &v);
        let den = mm.bilinear(&v, &v);
        assert!((num - a * b).abs() < 1e-10);
        // the P1 interpolant of x is exact, so the mass integral is exact too
        assert!((den - a.powi(3) * b / 12.0).abs() < 1e-10);
        let rq = rayleigh_quotient(&kk, &mm, &v).unwrap();
        assert!((rq - 12.0 / (a * a)).abs() < 1e-9);
    }

    #[test]
    fn rayleigh_of_constant_is_zero() {
        let mesh = generate_mesh(&DomainSpec::Disk { r: 1.0 }, 0.3).unwrap();
        let (kk, mm) = assemble(&mesh).unwrap();
        let v = vec![3.0; mesh.num_vertices()];
        let rq = rayleigh_quotient(&kk, &mm, &v).unwrap();
        assert!(rq.abs() < 1e-12);
    }
}
