//! Neumann ball eigenvalues and the folded radial test-function profile.
//!
//! The radial profile g(t) = t^{1-n/2} J_{n/2}(sqrt(mu) t) solves
//! g'' + (n-1)/t g' + (mu - (n-1)/t^2) g = 0 with g(0) = 0; the first
//! positive critical point of t^{1-n/2} J_{n/2}(t) pins mu so that
//! g'(R) = 0, which is the first nonzero Neumann eigenvalue of B_R.

use crate::error::{Error, Result};
use crate::numerics::roots::scan_and_bisect;
use crate::specfun::bessel::bessel_j;
use crate::specfun::gamma::ln_gamma;

/// First positive critical point of t -> t^(1-n/2) J_(n/2)(t).
///
/// Bracketing scans in steps of 0.01 from 0+, then bisection to 1e-13.
pub fn profile_critical_point(dim: usize) -> Result<f64> {
    check_dim(dim)?;
    let nu = dim as f64 / 2.0;
    // t^(-nu) (J_nu(t) - t J_{nu+1}(t)) carries the sign of the derivative
    let f = move |t: f64| bessel_j(nu, t).unwrap() - t * bessel_j(nu + 1.0, t).unwrap();
    scan_and_bisect(f, 1e-4, 0.01, 30.0, 1e-13)
}

/// First nonzero Neumann eigenvalue of the ball of radius R in dimension n.
///
/// Satisfies the exact scaling mu1(B_R) = mu1(B_1) / R^2 by construction.
pub fn neumann_ball_mu1(dim: usize, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Range(format!("radius must be positive, got {radius}")));
    }
    let t = profile_critical_point(dim)?;
    Ok((t / radius) * (t / radius))
}

/// The radial profile G_R: Bessel-built below R, constant at g(R) past R.
#[derive(Debug, Clone)]
pub struct WeinbergerProfile {
    pub dim: usize,
    pub radius: f64,
    pub mu1_ball: f64,
    wavenumber: f64,
    plateau: f64,
    slope_at_zero: f64,
}

impl WeinbergerProfile {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(radius > 0.0) {
            return Err(Error::Range(format!("radius must be positive, got {radius}")));
        }
        let mu = neumann_ball_mu1(dim, radius)?;
        let k = mu.sqrt();
        let nu = dim as f64 / 2.0;
        let plateau = radius.powf(1.0 - nu) * bessel_j(nu, k * radius)?;
        // g'(0+) = (k/2)^nu * k^(1-nu) / Gamma(nu+1)... reduces to k^nu / (2^nu Gamma(nu+1))
        let slope_at_zero = (nu * (0.5 * k).ln() - ln_gamma(nu + 1.0)?).exp() * k;
        Ok(WeinbergerProfile {
            dim,
            radius,
            mu1_ball: mu,
            wavenumber: k,
            plateau,
            slope_at_zero,
        })
    }

    /// G_R(t) for t >= 0.
    pub fn eval(&self, t: f64) -> f64 {
        let nu = self.dim as f64 / 2.0;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.radius {
            return self.plateau;
        }
        if t < 1e-8 * self.radius {
            return self.slope_at_zero * t;
        }
        t.powf(1.0 - nu) * bessel_j(nu, self.wavenumber * t).unwrap()
    }

    /// G_R'(t) for t >= 0, from the Bessel derivative identity
    /// d/dt [t^(1-nu) J_nu(kt)] = t^(-nu) (J_nu(kt) - kt J_{nu+1}(kt)).
    pub fn deriv(&self, t: f64) -> f64 {
        let nu = self.dim as f64 / 2.0;
        if t >= self.radius {
            return 0.0;
        }
        if t < 1e-8 * self.radius {
            return self.slope_at_zero;
        }
        let kt = self.wavenumber * t;
        t.powf(-nu) * (bessel_j(nu, kt).unwrap() - kt * bessel_j(nu + 1.0, kt).unwrap())
    }

    /// Plateau value g(R) = G_R(t) for t >= R.
    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    /// g'(0+), the slope of the profile at the center.
    pub fn slope_at_zero(&self) -> f64 {
        self.slope_at_zero
    }

    /// G'(t)^2 - G(t)^2/t^2, the quantity whose nonpositivity on (0, R]
    /// the proof chain discards.
    pub fn sign_quantity(&self, t: f64) -> f64 {
        let g = self.eval(t);
        let gp = self.deriv(t);
        if t <= 0.0 {
            return 0.0;
        }
        gp * gp - (g / t) * (g / t)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !(2..=10).contains(&dim) {
        return Err(Error::Range(format!(
            "ball eigenvalues support 2 <= dim <= 10, got {dim}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_eigenvalue_reference() {
        // first critical point of J_1 and its square
        let t = profile_critical_point(2).unwrap();
        assert!((t - 1.8411837813406593).abs() < 1e-12, "t = {t}");
        let mu = neumann_ball_mu1(2, 1.0).unwrap();
        assert!((mu - 3.389957716671889).abs() < 1e-11, "mu = {mu}");
        // 4-significant-figure anchor
        assert!((mu - 3.390).abs() / 3.390 < 3e-3);
    }

    #[test]
    fn ball3_eigenvalue_reference() {
        let mu = neumann_ball_mu1(3, 1.0).unwrap();
        assert!((mu - 4.332958551429382).abs() < 1e-11, "mu = {mu}");
        assert!((mu - 4.3330).abs() < 1e-4);
    }

    #[test]
    fn scaling_law() {
        for n in 2..=10 {
            let mu1 = neumann_ball_mu1(n, 1.0).unwrap();
            for &r in &[0.3, 2.0, 17.5] {
                let mur = neumann_ball_mu1(n, r).unwrap();
                assert!(
                    ((mur * r * r - mu1) / mu1).abs() < 1e-10,
                    "n={n} r={r}: {mur} vs {mu1}"
                );
            }
        }
    }

    #[test]
    fn boundary_conditions_and_plateau() {
        let p = WeinbergerProfile::new(2, 1.0).unwrap();
        assert_eq!(p.eval(0.0), 0.0);
        assert!(p.deriv(1.0).abs() < 1e-12, "G'(R) = {}", p.deriv(1.0));
        assert_eq!(p.eval(2.0), p.eval(1.0));
        assert_eq!(p.deriv(1.5), 0.0);
        // continuity at R: left limit matches the plateau
        let left = p.eval(1.0 - 1e-9);
        assert!(((left - p.plateau()) / p.plateau()).abs() < 1e-7);
        let close = p.eval(1.0 - 1e-13);
        assert!(((close - p.plateau()) / p.plateau()).abs() < 1e-12);
    }

    #[test]
    fn sign_quantity_nonpositive_on_dense_grid() {
        for n in [2usize, 3, 5] {
            let p = WeinbergerProfile::new(n, 1.0).unwrap();
            for i in 1..=2000 {
                let t = i as f64 / 2000.0;
                let s = p.sign_quantity(t);
                assert!(
                    s <= 1e-13 * p.slope_at_zero().powi(2),
                    "n={n} t={t}: sign quantity {s:e}"
                );
            }
        }
    }

    #[test]
    fn sign_quantity_strictly_negative_inside() {
        let p = WeinbergerProfile::new(3, 1.0).unwrap();
        assert!(p.sign_quantity(0.5) < 0.0);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = WeinbergerProfile::new(3, 1.3).unwrap();
        for &t in &[0.2, 0.5, 0.9, 1.2] {
            let h = 1e-6;
            let fd = (p.eval(t + h) - p.eval(t - h)) / (2.0 * h);
            assert!((fd - p.deriv(t)).abs() < 1e-8, "t = {t}");
        }
    }
}
