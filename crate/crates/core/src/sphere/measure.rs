//! Discrete Borel measures on the sphere and the Hersch-Szego center of
//! mass: the unique xi in the open unit ball with int phi_xi d mu = 0.

use crate::error::{Error, Result};
use crate::numerics::vecn;
use crate::sphere::mobius::mobius;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct SphereMeasure {
    /// Sphere dimension n (points live in R^{n+1}).
    pub dim: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub total: f64,
}

impl SphereMeasure {
    pub fn new(dim: usize, nodes: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::Precondition("measure needs matching nodes/weights".into()));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::Precondition("measure weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Precondition("measure must have positive total mass".into()));
        }
        let max_atom = weights.iter().cloned().fold(0.0, f64::max);
        if max_atom >= 0.5 * total {
            return Err(Error::Precondition(format!(
                "largest atom {max_atom} is at least half the total mass {total}"
            )));
        }
        Ok(SphereMeasure { dim, nodes, weights, total })
    }

    pub fn moment(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim + 1;
        let mut acc = vec![0.0; d];
        for (x, &w) in self.nodes.iter().zip(&self.weights) {
            let y = mobius(xi, x)?;
            vecn::axpy(&mut acc, w, &y);
        }
        Ok(acc)
    }
}

pub struct CenterOfMassResult {
    pub xi: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Newton iteration on F(xi) = int phi_xi d mu with a finite-difference
/// Jacobian and trust-region damping near the boundary of the ball.
/// Uniqueness of the root lets us accept the first converged answer; a
/// second start double-checks it.
pub fn sphere_center_of_mass(measure: &SphereMeasure) -> Result<CenterOfMassResult> {
    let first = newton_center(measure, &vec![0.0; measure.dim + 1])?;
    // dual-start agreement check from a biased start
    let mut alt = vec![0.0; measure.dim + 1];
    for (x, &w) in measure.nodes.iter().zip(&measure.weights) {
        vecn::axpy(&mut alt, 0.4 * w / measure.total, x);
    }
    let second = newton_center(measure, &alt)?;
    let gap = vecn::dist(&first.xi, &second.xi);
    if gap > 1e-8 * (1.0 + vecn::norm(&first.xi)) {
        return Err(Error::Solver {
            msg: format!("center-of-mass starts disagree by {gap:e}"),
            best_residual: first.residual,
        });
    }
    Ok(first)
}

fn newton_center(measure: &SphereMeasure, start: &[f64]) -> Result<CenterOfMassResult> {
    let d = measure.dim + 1;
    let tol = 1e-10 * measure.total;
    let mut xi = start.to_vec();
    let mut f = DVector::from_vec(measure.moment(&xi)?);
    let mut iterations = 0;
    for it in 0..120 {
        iterations = it + 1;
        if f.norm() <= tol {
            return Ok(CenterOfMassResult { xi, residual: f.norm(), iterations });
        }
        // finite-difference Jacobian, step 1e-6
        let mut jac = DMatrix::zeros(d, d);
        for j in 0..d {
            let h = 1e-6;
            let mut xp = xi.clone();
            xp[j] += h;
            if vecn::norm(&xp) > 1.0 - 1e-9 {
                xp[j] -= 2.0 * h;
            }
            let fp = DVector::from_vec(measure.moment(&xp)?);
            let sign = if xp[j] > xi[j] { 1.0 } else { -1.0 };
            for i in 0..d {
                jac[(i, j)] = sign * (fp[i] - f[i]) / h;
            }
        }
        let step = jac
            .lu()
            .solve(&f)
            .ok_or_else(|| Error::solver("singular Jacobian in center-of-mass", f.norm()))?;
        // damped update staying inside the ball
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let mut trial = xi.clone();
            for i in 0..d {
                trial[i] -= alpha * step[i];
            }
            if vecn::norm(&trial) <= 1.0 - 1e-9 {
                let ft = DVector::from_vec(measure.moment(&trial)?);
                if ft.norm() < f.norm() {
                    xi = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let r = f.norm();
    if r <= tol {
        Ok(CenterOfMassResult { xi, residual: r, iterations })
    } else {
        Err(Error::Solver {
            msg: "center-of-mass Newton iteration stalled".into(),
            best_residual: r / measure.total,
        })
    }
}
