//! Certified reciprocal-sum checks for conformal metrics on S^2: the
//! Hersch-type bound (sum from the first eigenvalue) and the folded bound
//! (sum from the second), with the energy-route consistency data.

use crate::error::Result;
use crate::numerics::vecn;
use crate::sphere::capsolve::solve_cap_and_center;
use crate::sphere::energy::conformal_energy;
use crate::sphere::factor::ConformalFactor;
use crate::sphere::grid::SphereGrid;
use crate::sphere::measure::sphere_center_of_mass;
use crate::sphere::mobius::mobius;
use crate::sphere::spectrum::s2_conformal_spectrum;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct SphereTheoremCertificate {
    pub degree: usize,
    pub volume: f64,
    pub eigenvalues: Vec<f64>,
    /// sum_{i=1}^{3} 1/lambda_i vs 3 vol / (8 pi).
    pub first_sum_lhs: f64,
    pub first_sum_rhs: f64,
    pub first_margin: f64,
    /// sum_{i=2}^{4} 1/lambda_i vs 3 vol / (16 pi).
    pub second_sum_lhs: f64,
    pub second_sum_rhs: f64,
    pub second_margin: f64,
    /// center of mass of e^{2u} dv_0 and its residual
    pub xi: Vec<f64>,
    pub center_residual: f64,
    /// Orthonormal directions e_1..e_3: e_i makes X_{e_i} o phi_xi
    /// orthogonal to f_1..f_{i-1}, so it tests lambda_i.
    pub directions: Vec<Vec<f64>>,
    /// Dirichlet energies int |grad_0 (X_{e_i} o phi_xi)|^2 dv_0; each must
    /// equal 8 pi / 3 (the conformal-invariance step).
    pub direction_energies: Vec<f64>,
    /// Masses int (X_{e_i} o phi_xi)^2 dv_g; they sum to the volume.
    pub direction_masses: Vec<f64>,
    /// lambda_i * mass_i - energy_i. Nonpositive up to the orthogonality
    /// residual slack, which is reported alongside.
    pub variational_gaps: Vec<f64>,
    /// lambda_i * sum of squared residual projections onto f_j, j < i.
    pub variational_slacks: Vec<f64>,
    /// cap-folded route: energies int |grad_0 (X o phi o F_C)|^2 dv_0 < 16 pi/3
    pub folded_energies: Vec<f64>,
    pub cap_axis: Vec<f64>,
    pub cap_t: f64,
    pub cap_residual_max: f64,
}

/// Spectrum plus energy-route consistency for one metric.
pub fn verify_sphere_theorems(u: &ConformalFactor, l_max: usize) -> Result<SphereTheoremCertificate> {
    let spec = s2_conformal_spectrum(u, l_max, 6)?;
    let lam = &spec.result.eigenvalues;
    let vol = spec.volume;

    let first_sum: f64 = (1..=3).map(|i| 1.0 / lam[i]).sum();
    let first_rhs = 3.0 * vol / (8.0 * PI);
    let second_sum: f64 = (2..=4).map(|i| 1.0 / lam[i]).sum();
    let second_rhs = 3.0 * vol / (16.0 * PI);

    // center the volume measure
    let measure = u.measure_on(&spec.grid)?;
    let center = sphere_center_of_mass(&measure)?;

    // direction basis: rows M_j[k] = int X_k o phi_xi f_j d mu for j = 1, 2;
    // e_3 kills both rows, e_2 kills the first inside e_3-perp, e_1 = rest
    let f1_vals = spec.eigenfunction_at_nodes(1);
    let f2_vals = spec.eigenfunction_at_nodes(2);
    let mut m1 = vec![0.0; 3];
    let mut m2 = vec![0.0; 3];
    for ((x, &w), (f1, f2)) in measure
        .nodes
        .iter()
        .zip(&measure.weights)
        .zip(f1_vals.iter().zip(&f2_vals))
    {
        let z = mobius(&center.xi, x)?;
        for k in 0..3 {
            m1[k] += w * z[k] * f1;
            m2[k] += w * z[k] * f2;
        }
    }
    let directions = direction_basis(&m1, &m2);

    // energy route: Dirichlet energies are conformally invariant in 2D,
    // so compute them against the round background
    let energy_grid = SphereGrid::s2(2 * l_max + 24, 2 * (2 * l_max + 24));
    let mut direction_energies = Vec::with_capacity(3);
    let mut direction_masses = Vec::with_capacity(3);
    let mut variational_slacks = Vec::with_capacity(3);
    for (i, v) in directions.iter().enumerate() {
        direction_energies.push(conformal_energy(2, &center.xi, None, v, &energy_grid)?);
        let mass: f64 = measure
            .nodes
            .iter()
            .zip(&measure.weights)
            .map(|(x, &w)| {
                let z = mobius(&center.xi, x).unwrap();
                w * vecn::dot(v, &z).powi(2)
            })
            .sum();
        direction_masses.push(mass);
        let c1 = vecn::dot(v, &m1);
        let c2 = vecn::dot(v, &m2);
        let slack = match i {
            0 => 0.0,
            1 => lam[2] * c1 * c1,
            _ => lam[3] * (c1 * c1 + c2 * c2),
        };
        variational_slacks.push(slack);
    }
    let variational_gaps: Vec<f64> = (0..3)
        .map(|i| lam[i + 1] * direction_masses[i] - direction_energies[i])
        .collect();

    // folded route via the cap + center solver
    let capcenter = solve_cap_and_center(&measure, &f1_vals, &[])?;
    let mut folded_energies = Vec::with_capacity(3);
    for v in &directions {
        folded_energies.push(conformal_energy(
            2,
            &capcenter.xi,
            Some(&capcenter.cap),
            v,
            &energy_grid,
        )?);
    }
    let cap_residual_max = capcenter
        .moment_residuals
        .iter()
        .chain(&capcenter.f1_residuals)
        .fold(0.0f64, |m, r| m.max(r.abs()));

    Ok(SphereTheoremCertificate {
        degree: l_max,
        volume: vol,
        eigenvalues: lam.clone(),
        first_sum_lhs: first_sum,
        first_sum_rhs: first_rhs,
        first_margin: first_sum - first_rhs,
        second_sum_lhs: second_sum,
        second_sum_rhs: second_rhs,
        second_margin: second_sum - second_rhs,
        xi: center.xi,
        center_residual: center.residual,
        directions,
        direction_energies,
        direction_masses,
        variational_gaps,
        variational_slacks,
        folded_energies,
        cap_axis: capcenter.cap.p.clone(),
        cap_t: capcenter.cap.t,
        cap_residual_max,
    })
}

/// Orthonormal e_1, e_2, e_3 with e_3 orthogonal to both rows and e_2 to
/// the first; the rows are linear in the direction, so this is exact.
fn direction_basis(m1: &[f64], m2: &[f64]) -> Vec<Vec<f64>> {
    let cross = |a: &[f64], b: &[f64]| {
        vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let scale = vecn::norm(m1).max(vecn::norm(m2)).max(1e-300);
    let c = cross(m1, m2);
    let e3 = if vecn::norm(&c) > 1e-12 * scale * scale {
        vecn::normalized(&c)
    } else if vecn::norm(m1) > 1e-12 * scale {
        // rows parallel: any unit vector orthogonal to m1
        let pick = if m1[0].abs() < 0.9 * vecn::norm(m1) {
            vec![1.0, 0.0, 0.0]
        } else {
            vec![0.0, 1.0, 0.0]
        };
        vecn::normalized(&cross(m1, &pick))
    } else {
        vec![0.0, 0.0, 1.0]
    };
    let e2 = {
        let c2 = cross(m1, &e3);
        if vecn::norm(&c2) > 1e-12 * scale {
            vecn::normalized(&c2)
        } else {
            let pick = if e3[0].abs() < 0.9 { vec![1.0, 0.0, 0.0] } else { vec![0.0, 1.0, 0.0] };
            vecn::normalized(&cross(&e3, &pick))
        }
    };
    let e1 = cross(&e2, &e3);
    vec![e1, e2, e3]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_metric_equalities() {
        let cert = verify_sphere_theorems(&ConformalFactor::round(), 8).unwrap();
        // Hersch equality: 3/2 = 3 * 4pi / 8pi
        assert!((cert.first_sum_lhs - 1.5).abs() < 1e-8);
        assert!(cert.first_margin.abs() < 1e-8);
        // second sum: 3/2 vs 3/4 -- strictly positive margin on the round sphere
        assert!(cert.second_margin > 0.0);
        // invariance step: every direction energy is 8 pi / 3
        for e in &cert.direction_energies {
            assert!((e - 8.0 * PI / 3.0).abs() < 1e-8, "energy {e}");
        }
        // masses sum to the volume
        let mass_sum: f64 = cert.direction_masses.iter().sum();
        assert!((mass_sum - cert.volume).abs() < 1e-8);
        // folded energies below the doubling bound
        for e in &cert.folded_energies {
            assert!(*e < 16.0 * PI / 3.0 + 1e-9, "folded {e}");
        }
    }

    #[test]
    fn bump_metric_strict_margins() {
        let u = ConformalFactor::Bump {
            center: [0.0, 0.0, 1.0],
            amplitude: 0.5,
            width: 0.8,
        };
        let cert = verify_sphere_theorems(&u, 12).unwrap();
        assert!(cert.first_margin > 0.0, "first margin {:e}", cert.first_margin);
        assert!(cert.second_margin > 0.0, "second margin {:e}", cert.second_margin);
        assert!(cert.cap_residual_max <= 1e-6 * cert.volume);
        // variational bound with the explicit orthogonality slack, plus a
        // small allowance for Galerkin truncation of the f_j themselves
        for i in 0..3 {
            let g = cert.variational_gaps[i];
            let s = cert.variational_slacks[i];
            assert!(g <= s + 1e-4 * cert.volume, "gap {i} = {g:e}, slack {s:e}");
        }
        // the basis is orthonormal
        for i in 0..3 {
            for j in 0..=i {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = crate::numerics::vecn::dot(&cert.directions[i], &cert.directions[j]);
                assert!((got - want).abs() < 1e-12);
            }
        }
    }
}
