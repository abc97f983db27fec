//! Cap + center solver: find a spherical cap C and a Mobius parameter xi
//! making the folded coordinate functions orthogonal to constants and to
//! the first eigenfunction. The center is nested: for each cap, xi is the
//! unique center of mass of the folded measure, so the outer search runs
//! over the three cap parameters only.

use crate::error::{Error, Result};
use crate::numerics::leastsq::{levenberg_marquardt, LmOptions};
use crate::numerics::vecn;
use crate::sphere::cap::Cap;
use crate::sphere::measure::{sphere_center_of_mass, SphereMeasure};
use crate::sphere::mobius::mobius;

const T_GUARD: f64 = 1e-3;

pub struct CapCenter {
    pub cap: Cap,
    pub xi: Vec<f64>,
    /// int X_v o phi_xi o F_C d mu, per coordinate direction.
    pub moment_residuals: Vec<f64>,
    /// int X_v o phi_xi o F_C f_1 d mu, per coordinate direction.
    pub f1_residuals: Vec<f64>,
    pub start_index: usize,
}

fn folded_measure(measure: &SphereMeasure, cap: &Cap) -> Result<SphereMeasure> {
    let mut nodes = Vec::with_capacity(measure.nodes.len());
    for x in &measure.nodes {
        nodes.push(cap.fold(x)?);
    }
    SphereMeasure::new(measure.dim, nodes, measure.weights.clone())
}

fn residuals_for_cap(
    measure: &SphereMeasure,
    f1: &[f64],
    cap: &Cap,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let folded = folded_measure(measure, cap)?;
    let center = sphere_center_of_mass(&folded)?;
    let d = measure.dim + 1;
    let mut moments = vec![0.0; d];
    let mut with_f1 = vec![0.0; d];
    for ((y, &w), &f) in folded.nodes.iter().zip(&folded.weights).zip(f1) {
        let z = mobius(&center.xi, y)?;
        for k in 0..d {
            moments[k] += w * z[k];
            with_f1[k] += w * z[k] * f;
        }
    }
    Ok((center.xi, moments, with_f1))
}

/// Solve for (cap, xi). `f1` holds first-eigenfunction values at the
/// measure nodes. All 2(n+1) residuals land below 1e-6 * total mass.
pub fn solve_cap_and_center(
    measure: &SphereMeasure,
    f1: &[f64],
    seed_dirs: &[Vec<f64>],
) -> Result<CapCenter> {
    if measure.dim != 2 {
        return Err(Error::Range("cap solver supports S^2 only".into()));
    }
    if f1.len() != measure.nodes.len() {
        return Err(Error::Precondition("f1 values must align with measure nodes".into()));
    }
    let tol = 1e-6 * measure.total;

    let mut seeds: Vec<(Vec<f64>, f64)> = Vec::new();
    for dir in seed_dirs {
        seeds.push((vecn::normalized(dir), 0.0));
    }
    for axis in [
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, -1.0, 0.0],
    ] {
        for t in [0.0, 0.45, -0.45] {
            seeds.push((axis.clone(), t));
        }
    }

    let objective = |p: &[f64]| -> Vec<f64> {
        let q = [p[0], p[1], p[2]];
        let qn = vecn::norm(&q);
        if qn < 1e-8 {
            return vec![1e3; 3];
        }
        let t = p[3].clamp(-1.0 + T_GUARD, 1.0 - T_GUARD);
        let cap = match Cap::new(vecn::scale(&q, 1.0 / qn), t) {
            Ok(c) => c,
            Err(_) => return vec![1e3; 3],
        };
        match residuals_for_cap(measure, f1, &cap) {
            Ok((_, _, with_f1)) => with_f1.iter().map(|r| r / measure.total).collect(),
            Err(_) => vec![1e3; 3],
        }
    };

    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    for (si, (p0, t0)) in seeds.iter().enumerate() {
        let start = [p0[0], p0[1], p0[2], *t0];
        let out = levenberg_marquardt(&objective, &start, &LmOptions {
            max_iters: 60,
            target_norm: 1e-10,
            fd_step: 1e-6,
            min_step: 1e-13,
        });
        let better = match &best {
            None => true,
            Some((b, _, _)) => out.residual_norm < *b,
        };
        if better {
            best = Some((out.residual_norm, si, out.x.clone()));
        }
        if out.residual_norm * measure.total <= 0.3 * tol {
            break;
        }
    }
    let (_, start_index, p) = best.ok_or_else(|| Error::solver("no cap seeds", f64::NAN))?;
    let q = vecn::normalized(&p[..3]);
    let t = p[3].clamp(-1.0 + T_GUARD, 1.0 - T_GUARD);
    let cap = Cap::new(q, t)?;
    let (xi, moments, with_f1) = residuals_for_cap(measure, f1, &cap)?;
    let worst = moments
        .iter()
        .chain(&with_f1)
        .fold(0.0f64, |m, r| m.max(r.abs()));
    if worst > tol {
        return Err(Error::Solver {
            msg: format!(
                "cap/center residual {worst:e} above 1e-6 of total mass; existence is \
                 topological, so this is a numerical limit of the multistart search"
            ),
            best_residual: worst / measure.total,
        });
    }
    Ok(CapCenter {
        cap,
        xi,
        moment_residuals: moments,
        f1_residuals: with_f1,
        start_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::factor::ConformalFactor;
    use crate::sphere::spectrum::s2_conformal_spectrum;

    #[test]
    fn round_metric_symmetric_cap_and_axis_center() {
        let u = ConformalFactor::round();
        let spec = s2_conformal_spectrum(&u, 8, 2).unwrap();
        let measure = u.measure_on(&spec.grid).unwrap();
        let f1 = spec.eigenfunction_at_nodes(1);
        let out = solve_cap_and_center(&measure, &f1, &[]).unwrap();
        let tol = 1e-6 * measure.total;
        assert!(out.moment_residuals.iter().all(|r| r.abs() < tol));
        assert!(out.f1_residuals.iter().all(|r| r.abs() < tol));
        // folding concentrates the round measure onto the cap, so the
        // center of mass sits on the cap axis, on the far side
        let along = vecn::dot(&out.xi, &out.cap.p);
        let perp = (vecn::dot(&out.xi, &out.xi) - along * along).max(0.0).sqrt();
        assert!(perp < 1e-6, "xi off axis by {perp}");
        assert!(along < -0.01 && along > -0.9, "xi.p = {along}");
    }

    #[test]
    fn axisymmetric_bump_cap_axis_aligned() {
        let u = ConformalFactor::Bump {
            center: [0.0, 0.0, 1.0],
            amplitude: 0.6,
            width: 0.8,
        };
        let spec = s2_conformal_spectrum(&u, 10, 2).unwrap();
        let measure = u.measure_on(&spec.grid).unwrap();
        let f1 = spec.eigenfunction_at_nodes(1);
        let out = solve_cap_and_center(&measure, &f1, &[]).unwrap();
        let tol = 1e-6 * measure.total;
        let worst = out
            .moment_residuals
            .iter()
            .chain(&out.f1_residuals)
            .fold(0.0f64, |m, r| m.max(r.abs()));
        assert!(worst < tol, "worst residual {worst:e}");
    }
}
