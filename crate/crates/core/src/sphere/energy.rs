//! The conformal n-energy of folded coordinate functions:
//! int |grad (X_v o phi_xi o F_C)|^n dv_0.

use crate::error::Result;
use crate::numerics::vecn;
use crate::sphere::cap::Cap;
use crate::sphere::grid::SphereGrid;
use crate::sphere::mobius::{mobius, mobius_factor};

/// With no cap this is I_n = int (1 - X_v^2)^{n/2} dv_0, independent of xi
/// and v by conformal invariance; a cap inserts the folding map first.
pub fn conformal_energy(
    dim: usize,
    xi: &[f64],
    cap: Option<&Cap>,
    v: &[f64],
    grid: &SphereGrid,
) -> Result<f64> {
    assert_eq!(grid.dim, dim, "grid dimension mismatch");
    let n = dim as f64;
    let mut acc = 0.0;
    for (x, &w) in grid.nodes.iter().zip(&grid.weights) {
        let (y, fold_factor) = match cap {
            Some(c) => (c.fold(x)?, c.fold_factor(x)?),
            None => (x.clone(), 1.0),
        };
        let z = mobius(xi, &y)?;
        let lam = fold_factor * mobius_factor(xi, &y);
        let grad2 = 1.0 - vecn::dot(v, &z).powi(2);
        acc += w * (lam * lam * grad2.max(0.0)).powf(0.5 * n);
    }
    Ok(acc)
}

/// Closed-form value of I_n for the round sphere.
pub fn i_n_exact(dim: usize) -> f64 {
    use std::f64::consts::PI;
    match dim {
        2 => 8.0 * PI / 3.0,
        3 => 64.0 * PI / 15.0,
        _ => unimplemented!("I_n tabulated for n = 2, 3 only"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{kn_constant, unit_ball_volume};
    use std::f64::consts::PI;

    fn sphere_volume(n: usize) -> f64 {
        // w_n = (n+1) * volume of the unit (n+1)-ball
        (n as f64 + 1.0) * unit_ball_volume(n + 1)
    }

    #[test]
    fn i2_matches_closed_form() {
        let g = SphereGrid::s2(64, 128);
        let e = conformal_energy(2, &[0.0; 3], None, &[0.0, 0.0, 1.0], &g).unwrap();
        assert!((e - 8.0 * PI / 3.0).abs() < 1e-10, "I2 = {e}");
    }

    #[test]
    fn i3_matches_closed_form() {
        // the integrand has an interior |.|^3 kink off the grid axis, so
        // convergence is algebraic; 5e-7 absolute is ample for the 1e-6 target
        let g = SphereGrid::s3(64, 48, 96);
        let e = conformal_energy(3, &[0.0; 4], None, &[0.0, 0.0, 0.0, 1.0], &g).unwrap();
        assert!((e - 64.0 * PI / 15.0).abs() < 5e-7, "I3 = {e}");
        // axis-aligned direction: smooth integrand, near machine accuracy
        let e_axis = conformal_energy(3, &[0.0; 4], None, &[1.0, 0.0, 0.0, 0.0], &g).unwrap();
        assert!((e_axis - 64.0 * PI / 15.0).abs() < 1e-10, "axis I3 = {e_axis}");
    }

    #[test]
    fn energy_identity_with_kn() {
        // I_n^{2/n} = n/(n+1) K_n w_n^{2/n}
        for n in [2usize, 3] {
            let lhs = i_n_exact(n).powf(2.0 / n as f64);
            let rhs = n as f64 / (n as f64 + 1.0)
                * kn_constant(n).unwrap()
                * sphere_volume(n).powf(2.0 / n as f64);
            assert!(
                ((lhs - rhs) / rhs).abs() < 1e-12,
                "n = {n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn invariance_under_mobius_s2() {
        let g = SphereGrid::s2(160, 320);
        let want = 8.0 * PI / 3.0;
        for xi in [
            vec![0.0, 0.0, 0.0],
            vec![0.3, 0.0, 0.0],
            vec![0.0, -0.5, 0.55],
            vec![0.7, 0.3, -0.2],
        ] {
            let e = conformal_energy(2, &xi, None, &[0.0, 0.0, 1.0], &g).unwrap();
            assert!((e - want).abs() < 1e-8, "xi = {xi:?}: {e}");
        }
    }

    #[test]
    fn invariance_under_mobius_s3() {
        let g = SphereGrid::s3(48, 40, 80);
        let want = 64.0 * PI / 15.0;
        let e = conformal_energy(3, &[0.2, 0.0, -0.3, 0.1], None, &[1.0, 0.0, 0.0, 0.0], &g).unwrap();
        assert!((e - want).abs() < 1e-6, "I3 at xi != 0: {e}");
    }

    #[test]
    fn folded_energy_below_twice_unfolded() {
        let g2 = SphereGrid::s2(96, 192);
        let cap = Cap::new(vec![0.0, 0.0, 1.0], 0.2).unwrap();
        let e = conformal_energy(2, &[0.1, 0.0, 0.0], Some(&cap), &[0.0, 1.0, 0.0], &g2).unwrap();
        assert!(e < 2.0 * 8.0 * PI / 3.0, "folded S2 energy {e}");

        let g3 = SphereGrid::s3(32, 24, 48);
        let cap3 = Cap::new(vec![0.0, 0.0, 0.0, 1.0], -0.3).unwrap();
        let e3 = conformal_energy(3, &[0.0; 4], Some(&cap3), &[0.0, 1.0, 0.0, 0.0], &g3).unwrap();
        assert!(e3 < 2.0 * 64.0 * PI / 15.0, "folded S3 energy {e3}");
    }

    #[test]
    fn hemisphere_fold_doubles_energy() {
        // fold across the equator with v along the axis kept in the cap:
        // the two halves contribute equally, so the energy is twice the
        // cap integral and approaches 2 I_n for this symmetric setup
        let g = SphereGrid::s2(128, 256);
        let cap = Cap::new(vec![0.0, 0.0, 1.0], 0.0).unwrap();
        let e = conformal_energy(2, &[0.0; 3], Some(&cap), &[0.0, 0.0, 1.0], &g).unwrap();
        // int over cap of (1 - z^2) dv = half of I_2 by symmetry
        assert!((e - 8.0 * PI / 3.0).abs() < 1e-8, "{e}");
    }
}
