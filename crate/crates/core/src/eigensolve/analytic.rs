//! Closed-form Neumann spectra for the separable families and their
//! disjoint unions.

use crate::eigensolve::spectral::{
    spherical_j1, AnalyticMode, EigenBasis, ModeKind, SolverInfo, SpectralResult,
};
use crate::error::{Error, Result};
use crate::geometry::domain::{DomainSpec, Placement};
use crate::numerics::gauss::gauss_legendre_on;
use crate::numerics::roots::scan_and_bisect;
use crate::specfun::bessel_j;
use std::f64::consts::PI;

/// First `count` positive zeros of J_m'.
pub fn bessel_jprime_zeros(m: usize, count: usize) -> Result<Vec<f64>> {
    let f = move |x: f64| -> f64 {
        if m == 0 {
            -bessel_j(1.0, x).unwrap()
        } else {
            bessel_j(m as f64 - 1.0, x).unwrap() - (m as f64 / x) * bessel_j(m as f64, x).unwrap()
        }
    };
    collect_zeros(f, m as f64 + 1e-3, count)
}

/// First `count` positive zeros of the spherical j_l'.
pub fn spherical_jprime_zeros(l: usize, count: usize) -> Result<Vec<f64>> {
    let f = move |z: f64| -> f64 {
        let j = |l: f64, z: f64| (PI / (2.0 * z)).sqrt() * bessel_j(l + 0.5, z).unwrap();
        if l == 0 {
            -spherical_j1(z)
        } else {
            j(l as f64 - 1.0, z) - ((l + 1) as f64 / z) * j(l as f64, z)
        }
    };
    collect_zeros(f, l as f64 + 1e-3, count)
}

fn collect_zeros(f: impl Fn(f64) -> f64 + Copy, start: f64, count: usize) -> Result<Vec<f64>> {
    let mut zeros = Vec::with_capacity(count);
    let mut a = start.max(1e-3);
    let stop = start + 14.0 + 4.0 * count as f64;
    while zeros.len() < count {
        let z = scan_and_bisect(f, a, 0.05, stop, 1e-13)?;
        zeros.push(z);
        a = z + 0.05;
    }
    Ok(zeros)
}

/// Analytic Neumann spectrum of a separable domain (or a disjoint union of
/// separable domains), first `count` eigenvalues ascending.
pub fn analytic_spectrum(spec: &DomainSpec, count: usize) -> Result<SpectralResult> {
    spec.validate()?;
    let mut modes = Vec::new();
    collect_modes(spec, &Placement::identity(spec.dim()), 0, count, &mut modes)?;
    modes.sort_by(|a, b| {
        a.eigenvalue
            .partial_cmp(&b.eigenvalue)
            .unwrap()
            .then(a.component.cmp(&b.component))
    });
    modes.truncate(count);
    if modes.len() < count {
        return Err(Error::Solver {
            msg: format!("generated only {} of {count} requested modes", modes.len()),
            best_residual: 0.0,
        });
    }
    Ok(SpectralResult {
        eigenvalues: modes.iter().map(|m| m.eigenvalue).collect(),
        residuals: vec![0.0; modes.len()],
        multiplicity_tol: 1e-8,
        basis: EigenBasis::Analytic(modes),
        solver: SolverInfo {
            method: "analytic".into(),
            iterations: 0,
            tolerance: 1e-13,
            seed: None,
        },
        mesh_checksum: None,
    })
}

fn collect_modes(
    spec: &DomainSpec,
    placement: &Placement,
    component: usize,
    count: usize,
    out: &mut Vec<AnalyticMode>,
) -> Result<()> {
    match spec {
        DomainSpec::Rectangle { a, b } => {
            let vol = a * b;
            out.push(constant_mode(component, placement, vol));
            let kmax = count + 1;
            for p in 0..=kmax {
                for q in 0..=kmax {
                    if p == 0 && q == 0 {
                        continue;
                    }
                    let mu = PI * PI * ((p * p) as f64 / (a * a) + (q * q) as f64 / (b * b));
                    let nx = if p == 0 { *a } else { 0.5 * a };
                    let ny = if q == 0 { *b } else { 0.5 * b };
                    out.push(AnalyticMode {
                        eigenvalue: mu,
                        component,
                        placement: placement.clone(),
                        norm: 1.0 / (nx * ny).sqrt(),
                        kind: ModeKind::RectCos { p, q, a: *a, b: *b },
                    });
                }
            }
        }
        DomainSpec::Box3 { a, b, c } => {
            let vol = a * b * c;
            out.push(constant_mode(component, placement, vol));
            let kmax = count + 1;
            for p in 0..=kmax {
                for q in 0..=kmax {
                    for r in 0..=kmax {
                        if p + q + r == 0 {
                            continue;
                        }
                        let mu = PI
                            * PI
                            * ((p * p) as f64 / (a * a)
                                + (q * q) as f64 / (b * b)
                                + (r * r) as f64 / (c * c));
                        let nx = if p == 0 { *a } else { 0.5 * a };
                        let ny = if q == 0 { *b } else { 0.5 * b };
                        let nz = if r == 0 { *c } else { 0.5 * c };
                        out.push(AnalyticMode {
                            eigenvalue: mu,
                            component,
                            placement: placement.clone(),
                            norm: 1.0 / (nx * ny * nz).sqrt(),
                            kind: ModeKind::BoxCos { p, q, r, a: *a, b: *b, c: *c },
                        });
                    }
                }
            }
        }
        DomainSpec::Disk { r } => {
            out.push(constant_mode(component, placement, PI * r * r));
            let per_order = count / 2 + 2;
            let orders = count / 2 + 2;
            for m in 0..=orders {
                let zeros = bessel_jprime_zeros(m, per_order)?;
                for z in zeros {
                    let k = z / r;
                    let mu = k * k;
                    // norm^2 = c_m * int_0^r J_m(k rho)^2 rho d rho
                    let (xs, ws) = gauss_legendre_on(64, 0.0, *r);
                    let radial: f64 = xs
                        .iter()
                        .zip(&ws)
                        .map(|(&x, &w)| {
                            let j = bessel_j(m as f64, k * x).unwrap();
                            w * j * j * x
                        })
                        .sum();
                    if m == 0 {
                        out.push(AnalyticMode {
                            eigenvalue: mu,
                            component,
                            placement: placement.clone(),
                            norm: 1.0 / (2.0 * PI * radial).sqrt(),
                            kind: ModeKind::DiskMode { m, k, sin: false },
                        });
                    } else {
                        for sin in [false, true] {
                            out.push(AnalyticMode {
                                eigenvalue: mu,
                                component,
                                placement: placement.clone(),
                                norm: 1.0 / (PI * radial).sqrt(),
                                kind: ModeKind::DiskMode { m, k, sin },
                            });
                        }
                    }
                }
            }
        }
        DomainSpec::Ball3 { r } => {
            out.push(constant_mode(component, placement, 4.0 / 3.0 * PI * r.powi(3)));
            let per_order = count / 3 + 2;
            let orders = count / 2 + 2;
            for l in 0..=orders {
                let zeros = spherical_jprime_zeros(l, per_order)?;
                for z in zeros {
                    let k = z / r;
                    let mu = k * k;
                    match l {
                        0 => {
                            let (xs, ws) = gauss_legendre_on(64, 0.0, *r);
                            let radial: f64 = xs
                                .iter()
                                .zip(&ws)
                                .map(|(&x, &w)| {
                                    let j = super::spectral::spherical_j0(k * x);
                                    w * j * j * x * x
                                })
                                .sum();
                            out.push(AnalyticMode {
                                eigenvalue: mu,
                                component,
                                placement: placement.clone(),
                                norm: 1.0 / (4.0 * PI * radial).sqrt(),
                                kind: ModeKind::BallRadial { k },
                            });
                        }
                        1 => {
                            let (xs, ws) = gauss_legendre_on(64, 0.0, *r);
                            let radial: f64 = xs
                                .iter()
                                .zip(&ws)
                                .map(|(&x, &w)| {
                                    let j = spherical_j1(k * x);
                                    w * j * j * x * x
                                })
                                .sum();
                            for axis in 0..3 {
                                out.push(AnalyticMode {
                                    eigenvalue: mu,
                                    component,
                                    placement: placement.clone(),
                                    norm: 1.0 / (4.0 * PI / 3.0 * radial).sqrt(),
                                    kind: ModeKind::BallDipole { k, axis },
                                });
                            }
                        }
                        _ => {
                            for _ in 0..(2 * l + 1) {
                                out.push(AnalyticMode {
                                    eigenvalue: mu,
                                    component,
                                    placement: placement.clone(),
                                    norm: 1.0,
                                    kind: ModeKind::BallHigher { l, k },
                                });
                            }
                        }
                    }
                }
            }
        }
        DomainSpec::DisjointUnion { components } => {
            for (ci, comp) in components.iter().enumerate() {
                let composed = compose(placement, &comp.placement);
                collect_modes(&comp.spec, &composed, ci, count, out)?;
            }
        }
        other => {
            return Err(Error::Domain(format!(
                "no analytic spectrum for family {other}"
            )))
        }
    }
    Ok(())
}

fn constant_mode(component: usize, placement: &Placement, volume: f64) -> AnalyticMode {
    AnalyticMode {
        eigenvalue: 0.0,
        component,
        placement: placement.clone(),
        norm: 1.0 / volume.sqrt(),
        kind: ModeKind::Constant,
    }
}

fn compose(outer: &Placement, inner: &Placement) -> Placement {
    let shift = outer.apply(&inner.shift);
    Placement {
        shift,
        angle: outer.angle + inner.angle,
    }
}
