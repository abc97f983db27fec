//! The full inequality chain for the reciprocal-sum bound on domains,
//! certified numerically: per-component Rayleigh quotients with explicit
//! orthogonality slack, the folded-profile quotient, and the ball value
//! it is displaced onto.

use crate::error::{Error, Result};
use crate::numerics::vecn;
use crate::specfun::{neumann_ball_mu1, unit_ball_volume, WeinbergerProfile};
use crate::testfun::backend::DomainBackend;
use crate::testfun::field::{component_energy_density, eval_gab};
use crate::testfun::frame::{FoldingFrame, Side};
use crate::testfun::solvers::folding_residuals;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ModeCheck {
    /// Index i of the direction e_i; the mode tests mu_{i+1}.
    pub index: usize,
    pub eigenvalue_tested: f64,
    pub mass: f64,
    pub energy: f64,
    pub rayleigh_quotient: f64,
    /// Projections onto f_0..f_i (should vanish).
    pub orthogonality: Vec<f64>,
    /// mu_{i+1} * sum of squared projections: the additive slack in the
    /// Rayleigh bound caused by imperfect orthogonality.
    pub slack: f64,
    /// energy + slack - mu_{i+1} * mass (nonnegative when the bound holds).
    pub bound_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReciprocalSumCertificate {
    pub dim: usize,
    pub volume: f64,
    pub half_ball_radius: f64,
    pub mu1_half_ball: f64,
    pub profile_plateau: f64,
    ///

    /// sum_{i=2}^{n} 1/mu_i from the spectrum.
    pub lhs_reciprocal_sum: f64,
    /// (n-1) |Omega|^{2/n} / (mu_2(B+B) |B+B|^{2/n}).
    pub rhs: f64,
    /// Quotient of the folded-profile integrals (the quantity displaced
    /// onto the half-volume ball).
    pub intermediate_quotient: f64,
    /// lhs/(n-1) - intermediate (nonnegative up to residual slack).
    pub margin_lhs_vs_intermediate: f64,
    /// intermediate - 1/mu1(B_r) (nonnegative; zero exactly at the split).
    pub margin_intermediate_vs_ball: f64,
    pub margin_lhs_vs_rhs: f64,
    pub per_mode: Vec<ModeCheck>,
    pub folding_residuals: Vec<f64>,
    pub folding_scale: f64,
    pub basis_residuals: Vec<f64>,
    /// max over quadrature nodes of G'(t)^2 - G(t)^2/t^2 (must be <= 0
    /// up to roundoff).
    pub sign_property_max: f64,
    /// | sum_i mass_i - (int_A G^2 + int_B G^2) | / scale.
    pub l2_identity_gap: f64,
    pub quadrature_nodes: usize,
}

pub fn reciprocal_sum_certificate(
    backend: &DomainBackend,
    profile: &WeinbergerProfile,
    frame: &FoldingFrame,
    basis: &[Vec<f64>],
    basis_residuals: &[f64],
) -> Result<ReciprocalSumCertificate> {
    let n = backend.dim();
    if basis.len() != n {
        return Err(Error::Precondition(format!(
            "need {n} basis directions, got {}",
            basis.len()
        )));
    }
    let (_, r_half) = crate::geometry::domain::equivalent_radii(&backend.spec)?;
    if ((profile.radius - r_half) / r_half).abs() > 1e-6 {
        return Err(Error::Precondition(format!(
            "profile radius {} is not r_Omega = {r_half}",
            profile.radius
        )));
    }
    if backend.spectrum.eigenvalues.len() < n + 2 {
        return Err(Error::Precondition(format!(
            "certificate needs mu_0..mu_{}; spectrum has {}",
            n + 1,
            backend.spectrum.eigenvalues.len()
        )));
    }

    let mu = &backend.spectrum.eigenvalues;
    let lhs: f64 = (2..=n).map(|i| 1.0 / mu[i]).sum();
    let mu1_unit = neumann_ball_mu1(n, 1.0)?;
    let wn = unit_ball_volume(n);
    let rhs = (n as f64 - 1.0) * backend.volume.powf(2.0 / n as f64)
        / (mu1_unit * (2.0 * wn).powf(2.0 / n as f64));
    let mu1_half_ball = profile.mu1_ball;

    let nodes = backend.fold_quadrature(frame);

    // folded-profile integrals and the sign property
    let mut num = 0.0; // int G^2 on both sides
    let mut den = 0.0; // int (G'^2 + (n-1) G^2/d^2)
    let mut sign_max = f64::NEG_INFINITY;
    for node in &nodes {
        let base = match node.side {
            Side::A => &frame.a,
            Side::B => &frame.b,
        };
        let d = vecn::dist(&node.x, base);
        let g = profile.eval(d);
        num += node.w * g * g;
        den += node.w * eval_gab(profile, frame, &node.x).gradient_energy_density;
        if d > 0.0 {
            sign_max = sign_max.max(profile.sign_quantity(d));
        }
    }
    let intermediate = num / den;

    // per-direction Rayleigh data with orthogonality slack
    let mut per_mode = Vec::with_capacity(n);
    let mut mass_total = 0.0;
    for (idx, e) in basis.iter().enumerate() {
        let i = idx + 1; // e_i tests mu_{i+1}
        let tested = mu[i + 1];
        let mut mass = 0.0;
        let mut energy = 0.0;
        let mut orth = vec![0.0; i + 1];
        for node in &nodes {
            let value = eval_gab(profile, frame, &node.x).value;
            let phi = vecn::dot(&value, e);
            mass += node.w * phi * phi;
            energy += node.w * component_energy_density(profile, frame, &node.x, e);
            for (j, o) in orth.iter_mut().enumerate() {
                *o += node.w * phi * backend.eval_eigenfunction(j, node);
            }
        }
        mass_total += mass;
        let slack = tested * orth.iter().map(|c| c * c).sum::<f64>();
        per_mode.push(ModeCheck {
            index: i,
            eigenvalue_tested: tested,
            mass,
            energy,
            rayleigh_quotient: energy / mass,
            orthogonality: orth,
            slack,
            bound_margin: energy + slack - tested * mass,
        });
    }

    let scale = backend.volume * profile.plateau() * profile.plateau();
    let fold_res = folding_residuals(backend, profile, frame);

    Ok(ReciprocalSumCertificate {
        dim: n,
        volume: backend.volume,
        half_ball_radius: r_half,
        mu1_half_ball,
        profile_plateau: profile.plateau(),
        lhs_reciprocal_sum: lhs,
        rhs,
        intermediate_quotient: intermediate,
        margin_lhs_vs_intermediate: lhs / (n as f64 - 1.0) - intermediate,
        margin_intermediate_vs_ball: intermediate - 1.0 / mu1_half_ball,
        margin_lhs_vs_rhs: lhs - rhs,
        per_mode,
        folding_residuals: fold_res.normalized(),
        folding_scale: fold_res.scale,
        basis_residuals: basis_residuals.to_vec(),
        sign_property_max: sign_max,
        l2_identity_gap: (mass_total - num).abs() / scale,
        quadrature_nodes: nodes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::analytic_spectrum;
    use crate::geometry::domain::DomainSpec;
    use crate::testfun::borsuk::borsuk_basis;
    use crate::testfun::solvers::solve_folding_pair;

    fn full_chain(spec: &DomainSpec, k: usize, seed: u64) -> ReciprocalSumCertificate {
        let s = analytic_spectrum(spec, k).unwrap();
        let b = DomainBackend::analytic(spec, s, 1).unwrap();
        let (_, r_half) = crate::geometry::domain::equivalent_radii(spec).unwrap();
        let p = WeinbergerProfile::new(spec.dim(), r_half).unwrap();
        let pair = solve_folding_pair(&b, &p, seed).unwrap();
        let basis = borsuk_basis(&b, &p, &pair.frame).unwrap();
        reciprocal_sum_certificate(&b, &p, &pair.frame, &basis.vectors, &basis.residuals).unwrap()
    }

    #[test]
    fn two_disks_chain_is_tight() {
        let spec = DomainSpec::two_disks(1.0, 0.5);
        let cert = full_chain(&spec, 6, 42);
        // at the split the intermediate quotient equals 1/mu1(B_r) exactly
        assert!(
            cert.margin_intermediate_vs_ball.abs() < 1e-8,
            "ball margin {:e}",
            cert.margin_intermediate_vs_ball
        );
        // lhs = rhs: the equality case
        assert!(cert.margin_lhs_vs_rhs.abs() < 1e-8);
        assert!(cert.sign_property_max <= 1e-13);
        assert!(cert.l2_identity_gap < 1e-12);
        assert!(cert.folding_residuals.iter().all(|r| r.abs() < 1e-6));
        for m in &cert.per_mode {
            assert!(
                m.bound_margin > -1e-8 * m.energy.abs(),
                "mode {} margin {:e}",
                m.index,
                m.bound_margin
            );
        }
    }

    #[test]
    fn square_chain_strict() {
        // area 2 pi
        let side = (2.0 * std::f64::consts::PI).sqrt();
        let spec = DomainSpec::Rectangle { a: side, b: side };
        let cert = full_chain(&spec, 6, 7);
        assert!(cert.margin_lhs_vs_rhs > 0.0, "strict inequality expected");
        assert!(cert.margin_intermediate_vs_ball > 0.0);
        assert!(cert.margin_lhs_vs_intermediate > -1e-10);
        assert!(cert.sign_property_max <= 1e-13);
    }

    #[test]
    fn serializes_to_json() {
        let spec = DomainSpec::two_disks(1.0, 0.5);
        let cert = full_chain(&spec, 6, 42);
        let text = serde_json::to_string(&cert).unwrap();
        assert!(text.contains("intermediate_quotient"));
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["dim"], 2);
    }
}
