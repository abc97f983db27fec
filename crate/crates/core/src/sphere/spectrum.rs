//! Galerkin spectrum of the Laplace-Beltrami operator for g = e^{2u} g_0
//! on S^2, in the real spherical-harmonic basis: the stiffness is the
//! diagonal l(l+1), the mass is int Y_i Y_j e^{2u} dv_0. The basis is
//! conforming, so every computed eigenvalue bounds the true one from above.

use crate::eigensolve::spectral::{EigenBasis, SolverInfo, SpectralResult};
use crate::error::{Error, Result};
use crate::sphere::factor::ConformalFactor;
use crate::sphere::grid::SphereGrid;
use crate::sphere::harmonics;
use nalgebra::DMatrix;

pub struct S2Spectrum {
    pub result: SpectralResult,
    /// Harmonic coefficients per eigenfunction (same data as the basis).
    pub degree: usize,
    pub grid: SphereGrid,
    /// Basis evaluations at the grid nodes (nodes x basis).
    pub basis_at_nodes: DMatrix<f64>,
    pub volume: f64,
}

impl S2Spectrum {
    /// Eigenfunction values at every grid node.
    pub fn eigenfunction_at_nodes(&self, k: usize) -> Vec<f64> {
        let EigenBasis::Nodal(coeffs) = &self.result.basis else {
            unreachable!("galerkin basis is coefficient vectors")
        };
        let c = nalgebra::DVector::from_column_slice(&coeffs[k]);
        (&self.basis_at_nodes * c).as_slice().to_vec()
    }
}

/// First `count` eigenvalues of Delta_g with truncation degree `l_max`.
pub fn s2_conformal_spectrum(
    u: &ConformalFactor,
    l_max: usize,
    count: usize,
) -> Result<S2Spectrum> {
    if l_max > 40 {
        return Err(Error::Range(format!("truncation degree l_max <= 40, got {l_max}")));
    }
    let nb = harmonics::basis_size(l_max);
    if count > nb.saturating_sub(1) + 1 {
        return Err(Error::Range(format!(
            "count {count} exceeds basis size {nb}"
        )));
    }
    u.validate()?;

    // quadrature: 2L+2 polar nodes, 2(2L+1) azimuthal; exact for the
    // harmonic products, smooth-factor error from the grid itself
    let grid = SphereGrid::s2(2 * l_max + 2, 2 * (2 * l_max + 1));
    let nn = grid.nodes.len();
    let mut basis_at_nodes = DMatrix::zeros(nn, nb);
    for (i, x) in grid.nodes.iter().enumerate() {
        let y = harmonics::eval_all(l_max, x);
        for (j, v) in y.iter().enumerate() {
            basis_at_nodes[(i, j)] = *v;
        }
    }
    let scaled = {
        let mut s = basis_at_nodes.clone();
        for (i, (x, &w)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
            let f = w * (2.0 * u.eval(x)).exp();
            for j in 0..nb {
                s[(i, j)] *= f;
            }
        }
        s
    };
    let mass = basis_at_nodes.transpose() * &scaled;
    let mass = 0.5 * (&mass + mass.transpose());
    let volume = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(x, &w)| w * (2.0 * u.eval(x)).exp())
        .sum();

    let chol = mass.clone().cholesky().ok_or_else(|| {
        Error::Config("mass matrix not positive definite; raise the grid resolution".into())
    })?;
    let l = chol.l();

    // stiffness is diagonal l(l+1)
    let mut stiff = DMatrix::zeros(nb, nb);
    for j in 0..nb {
        let deg = harmonics::degree_of(j) as f64;
        stiff[(j, j)] = deg * (deg + 1.0);
    }
    let t1 = l
        .solve_lower_triangular(&stiff)
        .ok_or_else(|| Error::solver("triangular solve failed", f64::NAN))?;
    let a = l
        .solve_lower_triangular(&t1.transpose())
        .ok_or_else(|| Error::solver("triangular solve failed", f64::NAN))?;
    let a = 0.5 * (&a + a.transpose());
    let eig = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());

    let mut eigenvalues = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for &idx in order.iter().take(count) {
        eigenvalues.push(eig.eigenvalues[idx]);
        let c = l
            .transpose()
            .solve_upper_triangular(&eig.eigenvectors.column(idx).into_owned())
            .ok_or_else(|| Error::solver("triangular solve failed", f64::NAN))?;
        vectors.push(c.as_slice().to_vec());
    }
    // residuals of the small dense pencil
    let residuals: Vec<f64> = eigenvalues
        .iter()
        .zip(&vectors)
        .map(|(&lam, c)| {
            let cv = nalgebra::DVector::from_column_slice(c);
            let r = &stiff * &cv - lam * (&mass * &cv);
            r.norm() / (&mass * &cv).norm().max(1e-300)
        })
        .collect();

    Ok(S2Spectrum {
        result: SpectralResult {
            eigenvalues,
            residuals,
            multiplicity_tol: 1e-8,
            basis: EigenBasis::Nodal(vectors),
            solver: SolverInfo {
                method: "galerkin-harmonics".into(),
                iterations: 1,
                tolerance: 0.0,
                seed: None,
            },
            mesh_checksum: None,
        },
        degree: l_max,
        grid,
        basis_at_nodes,
        volume,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_spectrum() {
        let s = s2_conformal_spectrum(&ConformalFactor::round(), 8, 10).unwrap();
        let want = [0.0, 2.0, 2.0, 2.0, 6.0, 6.0, 6.0, 6.0, 6.0, 12.0];
        for (got, want) in s.result.eigenvalues.iter().zip(want) {
            assert!((got - want).abs() < 1e-10, "{:?}", s.result.eigenvalues);
        }
        assert!((s.volume - 4.0 * std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn constant_factor_rescales() {
        let c = 0.37;
        let u = ConformalFactor::Harmonic {
            coeffs: vec![(0, 0, c * (4.0 * std::f64::consts::PI).sqrt())],
        };
        // u = c everywhere: lambda_k = e^{-2c} l(l+1)
        let s = s2_conformal_spectrum(&u, 6, 5).unwrap();
        let scale = (-2.0 * c).exp();
        for (k, want) in [(1usize, 2.0), (4, 6.0)] {
            assert!(
                (s.result.eigenvalues[k] - scale * want).abs() < 1e-9,
                "{:?}",
                s.result.eigenvalues
            );
        }
    }

    #[test]
    fn galerkin_upper_bound_decreases_with_degree() {
        let u = ConformalFactor::Bump {
            center: [0.0, 0.0, 1.0],
            amplitude: 0.7,
            width: 0.8,
        };
        let coarse = s2_conformal_spectrum(&u, 10, 5).unwrap();
        let fine = s2_conformal_spectrum(&u, 16, 5).unwrap();
        for k in 1..5 {
            assert!(
                fine.result.eigenvalues[k] <= coarse.result.eigenvalues[k] + 1e-10,
                "k = {k}: {} vs {}",
                fine.result.eigenvalues[k],
                coarse.result.eigenvalues[k]
            );
        }
    }

    #[test]
    fn eigenfunction_node_values_match_coefficients() {
        let s = s2_conformal_spectrum(&ConformalFactor::round(), 4, 4).unwrap();
        let vals = s.eigenfunction_at_nodes(0);
        // constant eigenfunction
        let c0 = vals[0];
        assert!(vals.iter().all(|v| (v - c0).abs() < 1e-10));
    }
}
