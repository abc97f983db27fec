//! Dense Levenberg-Marquardt for small residual systems, with a
//! finite-difference Jacobian. Problem sizes here are at most a dozen
//! unknowns, so everything is dense nalgebra.

use nalgebra::{DMatrix, DVector};

pub struct LmOptions {
    pub max_iters: usize,
    /// Stop when the residual 2-norm drops below this.
    pub target_norm: f64,
    /// Relative finite-difference step.
    pub fd_step: f64,
    /// Stop when the step is smaller than this.
    pub min_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iters: 120,
            target_norm: 1e-13,
            fd_step: 1e-7,
            min_step: 1e-14,
        }
    }
}

pub struct LmResult {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize ||f(x)||^2 starting at `x0`.
pub fn levenberg_marquardt<F>(f: F, x0: &[f64], opts: &LmOptions) -> LmResult
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut r = DVector::from_vec(f(x.as_slice()));
    let m = r.len();
    let mut rn = r.norm();
    let mut lambda = 1e-3;
    let mut iters = 0;

    for it in 0..opts.max_iters {
        iters = it + 1;
        if rn <= opts.target_norm {
            break;
        }
        // finite-difference Jacobian
        let mut jac = DMatrix::zeros(m, n);
        for j in 0..n {
            let h = opts.fd_step * x[j].abs().max(1.0);
            let mut xp = x.clone();
            xp[j] += h;
            let rp = DVector::from_vec(f(xp.as_slice()));
            for i in 0..m {
                jac[(i, j)] = (rp[i] - r[i]) / h;
            }
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;

        let mut stepped = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for d in 0..n {
                a[(d, d)] += lambda * (jtj[(d, d)].abs().max(1e-12));
            }
            let step = match a.cholesky() {
                Some(ch) => ch.solve(&jtr),
                None => {
                    lambda *= 10.0;
                    continue;
                }
            };
            let xt = &x - &step;
            let rt = DVector::from_vec(f(xt.as_slice()));
            let rtn = rt.norm();
            if rtn < rn {
                let small = step.norm() < opts.min_step * (1.0 + x.norm());
                x = xt;
                r = rt;
                rn = rtn;
                lambda = (lambda * 0.3).max(1e-14);
                stepped = true;
                if small {
                    return LmResult {
                        x: x.as_slice().to_vec(),
                        residual_norm: rn,
                        iterations: iters,
                        converged: rn <= opts.target_norm,
                    };
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
        if !stepped {
            break;
        }
    }
    LmResult {
        x: x.as_slice().to_vec(),
        residual_norm: rn,
        iterations: iters,
        converged: rn <= opts.target_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_nonlinear_system() {
        // residuals of (x^2 + y^2 - 4, x - y): root at (sqrt2, sqrt2)
        let f = |p: &[f64]| vec![p[0] * p[0] + p[1] * p[1] - 4.0, p[0] - p[1]];
        let out = levenberg_marquardt(f, &[1.0, 0.5], &LmOptions::default());
        assert!(out.residual_norm < 1e-10, "norm = {}", out.residual_norm);
        assert!((out.x[0] - std::f64::consts::SQRT_2).abs() < 1e-7);
    }

    #[test]
    fn rosenbrock_as_least_squares() {
        let f = |p: &[f64]| vec![10.0 * (p[1] - p[0] * p[0]), 1.0 - p[0]];
        let out = levenberg_marquardt(f, &[-1.2, 1.0], &LmOptions::default());
        assert!((out.x[0] - 1.0).abs() < 1e-6 && (out.x[1] - 1.0).abs() < 1e-6);
    }
}
