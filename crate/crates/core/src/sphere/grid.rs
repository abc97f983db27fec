//! Tensor quadrature grids on S^2 and S^3.

use crate::numerics::gauss::{gauss_legendre, gauss_legendre_on};
use std::f64::consts::PI;

pub struct SphereGrid {
    /// Unit vectors.
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub dim: usize,
}

impl SphereGrid {
    /// S^2 grid: Gauss-Legendre in the polar cosine, uniform azimuth.
    /// Exact for spherical polynomials of degree up to n_polar-ish; the
    /// uniform azimuth kills all modes below n_azimuth.
    pub fn s2(n_polar: usize, n_azimuth: usize) -> Self {
        let (zs, zw) = gauss_legendre(n_polar);
        let dphi = 2.0 * PI / n_azimuth as f64;
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for (&z, &wz) in zs.iter().zip(&zw) {
            let s = (1.0 - z * z).max(0.0).sqrt();
            for ia in 0..n_azimuth {
                let phi = dphi * ia as f64;
                nodes.push(vec![s * phi.cos(), s * phi.sin(), z]);
                weights.push(wz * dphi);
            }
        }
        SphereGrid { nodes, weights, dim: 2 }
    }

    /// S^3 grid: Gauss-Legendre in the hyperpolar angle chi against the
    /// weight sin^2(chi), times an S^2 grid.
    pub fn s3(n_chi: usize, n_polar: usize, n_azimuth: usize) -> Self {
        let (cs, cw) = gauss_legendre_on(n_chi, 0.0, PI);
        let base = SphereGrid::s2(n_polar, n_azimuth);
        let mut nodes = Vec::with_capacity(n_chi * base.nodes.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for (&chi, &wc) in cs.iter().zip(&cw) {
            let (s, c) = chi.sin_cos();
            for (omega, &wo) in base.nodes.iter().zip(&base.weights) {
                nodes.push(vec![c, s * omega[0], s * omega[1], s * omega[2]]);
                weights.push(wc * s * s * wo);
            }
        }
        SphereGrid { nodes, weights, dim: 3 }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s2_area_and_moments() {
        let g = SphereGrid::s2(24, 48);
        assert!((g.total_weight() - 4.0 * PI).abs() < 1e-12);
        let z2: f64 = g
            .nodes
            .iter()
            .zip(&g.weights)
            .map(|(x, w)| w * x[2] * x[2])
            .sum();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn s3_volume() {
        let g = SphereGrid::s3(32, 24, 48);
        // vol(S^3) = 2 pi^2
        assert!((g.total_weight() - 2.0 * PI * PI).abs() < 1e-10);
        let x2: f64 = g
            .nodes
            .iter()
            .zip(&g.weights)
            .map(|(x, w)| w * x[0] * x[0])
            .sum();
        // int x_i^2 = vol / 4
        assert!((x2 - PI * PI / 2.0).abs() < 1e-9);
    }
}
