//! Conformal automorphisms of the unit sphere.

use crate::error::{Error, Result};
use crate::numerics::vecn;

/// phi_xi(x) = xi + (1 - |xi|^2)/|x + xi|^2 (x + xi), for |xi| < 1, |x| = 1.
pub fn mobius(xi: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let xi_norm = vecn::norm(xi);
    if xi_norm > 1.0 - 1e-10 {
        return Err(Error::Range(format!(
            "mobius parameter must satisfy |xi| <= 1 - 1e-10, got {xi_norm}"
        )));
    }
    let s = vecn::add(x, xi);
    let s2 = vecn::dot(&s, &s);
    if s2.sqrt() < 1e-12 {
        return Err(Error::Range("mobius near-singular: |x + xi| < 1e-12".into()));
    }
    let lam = (1.0 - xi_norm * xi_norm) / s2;
    let mut out = xi.to_vec();
    vecn::axpy(&mut out, lam, &s);
    Ok(out)
}

/// Conformal scale factor of phi_xi at x: |d phi_xi| = (1 - |xi|^2)/|x + xi|^2.
pub fn mobius_factor(xi: &[f64], x: &[f64]) -> f64 {
    let s = vecn::add(x, xi);
    let s2 = vecn::dot(&s, &s);
    (1.0 - vecn::dot(xi, xi)) / s2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::grid::SphereGrid;

    #[test]
    fn identity_at_origin() {
        let x = vec![0.6, 0.0, 0.8];
        let y = mobius(&[0.0, 0.0, 0.0], &x).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_point_opposite_to_xi() {
        let xi = vec![0.3, -0.1, 0.2];
        let n = vecn::norm(&xi);
        let x: Vec<f64> = xi.iter().map(|v| -v / n).collect();
        let y = mobius(&xi, &x).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn preserves_unit_norm_and_inverts() {
        let g = SphereGrid::s2(8, 16);
        let xi = vec![0.45, 0.2, -0.6];
        let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
        for x in g.nodes.iter().take(64) {
            let y = mobius(&xi, x).unwrap();
            assert!((vecn::norm(&y) - 1.0).abs() < 1e-12);
            let back = mobius(&neg, &y).unwrap();
            for (a, b) in x.iter().zip(&back) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn scale_factor_is_the_jacobian_scale() {
        // numeric check: |phi(x + eps t) - phi(x)| / eps ~ factor for a
        // tangent direction t
        let xi = vec![0.2, 0.5, -0.1];
        let x = vec![0.0, 0.6, 0.8];
        let t = {
            let raw = vec![1.0, 0.0, 0.0];
            let c = vecn::dot(&raw, &x);
            let mut t = raw;
            vecn::axpy(&mut t, -c, &x);
            vecn::normalized(&t)
        };
        let eps = 1e-6;
        let mut xp = x.clone();
        vecn::axpy(&mut xp, eps, &t);
        let xp = vecn::normalized(&xp);
        let y0 = mobius(&xi, &x).unwrap();
        let y1 = mobius(&xi, &xp).unwrap();
        let num = vecn::dist(&y0, &y1) / vecn::dist(&x, &xp);
        let fac = mobius_factor(&xi, &x);
        assert!((num - fac).abs() / fac < 1e-4, "{num} vs {fac}");
    }

    #[test]
    fn parameter_outside_ball_rejected() {
        assert!(mobius(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]).is_err());
    }
}
