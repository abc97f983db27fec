//! Orthonormal basis construction: each direction makes one more folded
//! component orthogonal to the next eigenfunction. The defining maps are
//! odd on the sphere of directions, so a sign-change bisection (n = 2) or
//! a grid scan with local refinement (n = 3) always lands on a zero.

use crate::error::{Error, Result};
use crate::numerics::leastsq::{levenberg_marquardt, LmOptions};
use crate::numerics::vecn;
use crate::specfun::WeinbergerProfile;
use crate::testfun::backend::DomainBackend;
use crate::testfun::field::eval_gab;
use crate::testfun::frame::FoldingFrame;

pub struct BorsukBasis {
    /// e_1 .. e_n, pairwise orthonormal.
    pub vectors: Vec<Vec<f64>>,
    /// |int g_AB . e_i f_j dx| for the conditions that define e_i,
    /// normalized by sqrt(|Omega|) G(r).
    pub residuals: Vec<f64>,
}

/// The matrix I[j][k] = int (g_AB)_k f_{j+2} dx for j = 0..n-2.
fn condition_integrals(
    backend: &DomainBackend,
    profile: &WeinbergerProfile,
    frame: &FoldingFrame,
) -> Vec<Vec<f64>> {
    let n = backend.dim();
    let nodes = backend.fold_quadrature(frame);
    let mut integrals = vec![vec![0.0; n]; n - 1];
    for node in &nodes {
        let value = eval_gab(profile, frame, &node.x).value;
        for (j, row) in integrals.iter_mut().enumerate() {
            let f = backend.eval_eigenfunction(j + 2, node);
            for k in 0..n {
                row[k] += node.w * value[k] * f;
            }
        }
    }
    integrals
}

pub fn borsuk_basis(
    backend: &DomainBackend,
    profile: &WeinbergerProfile,
    frame: &FoldingFrame,
) -> Result<BorsukBasis> {
    let n = backend.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::Range(format!("basis construction supports n in {{2, 3}}, got {n}")));
    }
    if backend.spectrum.eigenvalues.len() < n + 1 {
        return Err(Error::Precondition(format!(
            "need eigenfunctions f_2..f_{n}; spectrum has only {} entries",
            backend.spectrum.eigenvalues.len()
        )));
    }
    let scale = backend.volume.sqrt() * profile.plateau();
    let integrals = condition_integrals(backend, profile, frame);
    let tol = 1e-7;

    match n {
        2 => {
            let i2 = &integrals[0];
            // the odd scalar map on the circle: antipodal samples have
            // opposite signs, so bisection always brackets a zero
            let s = |theta: f64| theta.cos() * i2[0] + theta.sin() * i2[1];
            let e2 = if s(0.0).abs() <= tol * scale && vecn::norm(i2) <= tol * scale {
                vec![1.0, 0.0]
            } else {
                let theta = bisect_odd(&s, 0.0, std::f64::consts::PI)?;
                vec![theta.cos(), theta.sin()]
            };
            let e1 = vec![e2[1], -e2[0]];
            let r2 = vecn::dot(&e2, i2).abs() / scale;
            if r2 > tol {
                return Err(Error::Solver {
                    msg: format!("basis residual {r2:e} above 1e-7"),
                    best_residual: r2,
                });
            }
            Ok(BorsukBasis { vectors: vec![e1, e2], residuals: vec![0.0, r2] })
        }
        3 => {
            let (i2, i3) = (&integrals[0], &integrals[1]);
            // e_3: zero of p -> (p.I2, p.I3) on S^2, by lat-long grid scan
            // plus local least-squares refinement
            let mut best = (f64::INFINITY, vec![0.0, 0.0, 1.0]);
            let (nu, nv) = (48, 96);
            for iu in 0..=nu {
                let cu = -1.0 + 2.0 * iu as f64 / nu as f64;
                let su = (1.0 - cu * cu).max(0.0).sqrt();
                for iv in 0..nv {
                    let ph = 2.0 * std::f64::consts::PI * iv as f64 / nv as f64;
                    let p = vec![su * ph.cos(), su * ph.sin(), cu];
                    let r = vecn::dot(&p, i2).powi(2) + vecn::dot(&p, i3).powi(2);
                    if r < best.0 {
                        best = (r, p);
                    }
                }
            }
            let p0 = best.1;
            let (t1, t2) = tangent_frame(&p0);
            let obj = |uv: &[f64]| -> Vec<f64> {
                let mut p = p0.clone();
                vecn::axpy(&mut p, uv[0], &t1);
                vecn::axpy(&mut p, uv[1], &t2);
                let p = vecn::normalized(&p);
                vec![vecn::dot(&p, i2) / scale, vecn::dot(&p, i3) / scale]
            };
            let out = levenberg_marquardt(&obj, &[0.0, 0.0], &LmOptions {
                max_iters: 60,
                target_norm: 1e-12,
                ..LmOptions::default()
            });
            let mut e3 = p0.clone();
            vecn::axpy(&mut e3, out.x[0], &t1);
            vecn::axpy(&mut e3, out.x[1], &t2);
            let e3 = vecn::normalized(&e3);
            let r3 = (vecn::dot(&e3, i2).powi(2) + vecn::dot(&e3, i3).powi(2)).sqrt() / scale;
            if r3 > tol {
                return Err(Error::Solver {
                    msg: format!(
                        "zero of the two-condition map not bracketed (residual {r3:e}); \
                         try a finer direction grid"
                    ),
                    best_residual: r3,
                });
            }
            // e_2 on the circle orthogonal to e_3: single odd condition
            let (u1, u2) = tangent_frame(&e3);
            let s = |theta: f64| {
                let p: Vec<f64> = (0..3)
                    .map(|k| theta.cos() * u1[k] + theta.sin() * u2[k])
                    .collect();
                vecn::dot(&p, i2)
            };
            let e2 = if vecn::norm(i2) <= tol * scale {
                u1.clone()
            } else {
                let theta = bisect_odd(&s, 0.0, std::f64::consts::PI)?;
                (0..3)
                    .map(|k| theta.cos() * u1[k] + theta.sin() * u2[k])
                    .collect()
            };
            let r2 = vecn::dot(&e2, i2).abs() / scale;
            if r2 > tol {
                return Err(Error::Solver {
                    msg: format!("basis residual {r2:e} above 1e-7"),
                    best_residual: r2,
                });
            }
            let e1 = cross3(&e2, &e3);
            Ok(BorsukBasis { vectors: vec![e1, e2, e3], residuals: vec![0.0, r2, r3] })
        }
        _ => unreachable!(),
    }
}

/// Bisection on [lo, hi] where f(hi) = -f(lo) by oddness.
fn bisect_odd(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    if fa == 0.0 {
        return Ok(a);
    }
    let fb = f(b);
    if fa.signum() == fb.signum() {
        return Err(Error::solver("odd map failed the antipodal sign test", fa.abs().min(fb.abs())));
    }
    for _ in 0..90 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn tangent_frame(p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = if p[0].abs() < 0.9 { vec![1.0, 0.0, 0.0] } else { vec![0.0, 1.0, 0.0] };
    let mut t1 = cross3(p, &pick);
    t1 = vecn::normalized(&t1);
    let t2 = cross3(p, &t1);
    (t1, t2)
}

fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::analytic_spectrum;
    use crate::geometry::domain::DomainSpec;
    use crate::testfun::solvers::solve_folding_pair;

    #[test]
    fn two_disks_axis_aligned_basis() {
        let spec = DomainSpec::two_disks(1.0, 0.5);
        let s = analytic_spectrum(&spec, 5).unwrap();
        let b = DomainBackend::analytic(&spec, s, 1).unwrap();
        let p = crate::specfun::WeinbergerProfile::new(2, 1.0).unwrap();
        let pair = solve_folding_pair(&b, &p, 42).unwrap();
        let basis = borsuk_basis(&b, &p, &pair.frame).unwrap();
        assert!(basis.residuals.iter().all(|&r| r <= 1e-7));
        // orthonormal
        for i in 0..2 {
            for j in 0..=i {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = vecn::dot(&basis.vectors[i], &basis.vectors[j]);
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn box_union_3d_basis() {
        let spec = DomainSpec::DisjointUnion {
            components: vec![
                crate::geometry::domain::PlacedSpec {
                    spec: DomainSpec::Box3 { a: 1.0, b: 1.0, c: 1.0 },
                    placement: crate::geometry::domain::Placement::shift3(-1.0, 0.0, 0.0),
                },
                crate::geometry::domain::PlacedSpec {
                    spec: DomainSpec::Box3 { a: 1.0, b: 1.0, c: 1.0 },
                    placement: crate::geometry::domain::Placement::shift3(1.0, 0.0, 0.0),
                },
            ],
        };
        let s = analytic_spectrum(&spec, 6).unwrap();
        let b = DomainBackend::analytic(&spec, s, 1).unwrap();
        let (_, r_half) = crate::geometry::domain::equivalent_radii(&spec).unwrap();
        let p = crate::specfun::WeinbergerProfile::new(3, r_half).unwrap();
        let pair = solve_folding_pair(&b, &p, 9).unwrap();
        let basis = borsuk_basis(&b, &p, &pair.frame).unwrap();
        assert!(basis.residuals.iter().all(|&r| r < 1e-7), "{:?}", basis.residuals);
        for i in 0..3 {
            for j in 0..=i {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = vecn::dot(&basis.vectors[i], &basis.vectors[j]);
                assert!((got - want).abs() < 1e-10, "({i},{j}) = {got}");
            }
        }
    }
}
