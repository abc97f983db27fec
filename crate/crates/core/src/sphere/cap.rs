//! Spherical caps, their boundary reflections, and the folding map.

use crate::error::{Error, Result};
use crate::numerics::vecn;
use crate::sphere::mobius::{mobius, mobius_factor};

/// The cap C_{(p,t)} = phi_{-tp}(hemisphere around p), p a unit vector,
/// t in (-1, 1).
#[derive(Debug, Clone)]
pub struct Cap {
    pub p: Vec<f64>,
    pub t: f64,
}

impl Cap {
    pub fn new(p: Vec<f64>, t: f64) -> Result<Self> {
        let n = vecn::norm(&p);
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!("cap axis must be unit, |p| = {n}")));
        }
        if !(-1.0 < t && t < 1.0) {
            return Err(Error::Range(format!("cap parameter t must lie in (-1,1), got {t}")));
        }
        Ok(Cap { p: vecn::scale(&p, 1.0 / n), t })
    }

    fn tp(&self) -> Vec<f64> {
        vecn::scale(&self.p, self.t)
    }

    fn neg_tp(&self) -> Vec<f64> {
        vecn::scale(&self.p, -self.t)
    }

    /// Membership via the pullback hemisphere test <phi_{tp}(x), p> > 0.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        let y = mobius(&self.tp(), x)?;
        Ok(vecn::dot(&y, &self.p) > 0.0)
    }

    /// Reflection across the cap boundary: tau_C = phi_{-tp} o R_p o phi_{tp}.
    pub fn reflect(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = mobius(&self.tp(), x)?;
        let ry = reflect_plane(&self.p, &y);
        mobius(&self.neg_tp(), &ry)
    }

    /// Folding map F_C: identity on the cap, reflection outside.
    pub fn fold(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.contains(x)? {
            Ok(x.to_vec())
        } else {
            self.reflect(x)
        }
    }

    /// Conformal scale factor of tau_C at x (R_p is an isometry).
    pub fn reflect_factor(&self, x: &[f64]) -> Result<f64> {
        let y = mobius(&self.tp(), x)?;
        let ry = reflect_plane(&self.p, &y);
        Ok(mobius_factor(&self.tp(), x) * mobius_factor(&self.neg_tp(), &ry))
    }

    /// Factor of the folding map: 1 inside the cap, reflect_factor outside.
    pub fn fold_factor(&self, x: &[f64]) -> Result<f64> {
        if self.contains(x)? {
            Ok(1.0)
        } else {
            self.reflect_factor(x)
        }
    }
}

/// R_p(x) = x - 2 <x, p> p.
pub fn reflect_plane(p: &[f64], x: &[f64]) -> Vec<f64> {
    let c = 2.0 * vecn::dot(x, p);
    x.iter().zip(p).map(|(xi, pi)| xi - c * pi).collect()
}
