//! Spectra with multiplicities: the result record shared by the analytic
//! and finite-element paths.

use crate::geometry::domain::Placement;
use crate::specfun::bessel_j;
use serde::Serialize;

/// Ascending eigenvalues with residuals and the eigenfunction basis.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// ||K v - mu M v|| / ||M v|| per pair (zero for analytic spectra).
    pub residuals: Vec<f64>,
    /// Floor of the multiplicity clustering tolerance.
    pub multiplicity_tol: f64,
    pub basis: EigenBasis,
    pub solver: SolverInfo,
    pub mesh_checksum: Option<String>,
}

#[derive(Debug, Clone)]
pub enum EigenBasis {
    /// Nodal coefficient vectors, L2(Omega)-orthonormal under the mesh mass.
    Nodal(Vec<Vec<f64>>),
    /// Closed-form mode descriptors for the analytic families.
    Analytic(Vec<AnalyticMode>),
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverInfo {
    pub method: String,
    pub iterations: usize,
    pub tolerance: f64,
    pub seed: Option<u64>,
}

impl SpectralResult {
    /// Eigenvalues within max(multiplicity_tol, 1e-6 mu) are one cluster.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &mu in &self.eigenvalues {
            match out.last_mut() {
                Some((rep, count))
                    if (mu - *rep).abs() <= self.multiplicity_tol.max(1e-6 * mu.abs()) =>
                {
                    // running mean keeps the representative centered
                    *rep = (*rep * *count as f64 + mu) / (*count as f64 + 1.0);
                    *count += 1;
                }
                _ => out.push((mu, 1)),
            }
        }
        out
    }

    pub fn to_report(&self) -> serde_json::Value {
        serde_json::json!({
            "eigenvalues": self.eigenvalues,
            "residuals": self.residuals,
            "mesh_checksum": self.mesh_checksum,
            "solver": self.solver,
        })
    }
}

/// One closed-form eigenfunction, L2-normalized over the whole domain.
#[derive(Debug, Clone)]
pub struct AnalyticMode {
    pub eigenvalue: f64,
    /// Index of the union component carrying the mode (0 for plain domains).
    pub component: usize,
    pub placement: Placement,
    pub norm: f64,
    pub kind: ModeKind,
}

#[derive(Debug, Clone)]
pub enum ModeKind {
    /// Indicator of the component.
    Constant,
    /// cos(p pi (x + a/2)/a) cos(q pi (y + b/2)/b) on the centered rectangle.
    RectCos { p: usize, q: usize, a: f64, b: f64 },
    BoxCos { p: usize, q: usize, r: usize, a: f64, b: f64, c: f64 },
    /// J_m(k rho) {cos,sin}(m theta) on the disk.
    DiskMode { m: usize, k: f64, sin: bool },
    /// j_0(k rho) on the 3-ball.
    BallRadial { k: f64 },
    /// j_1(k rho) x_axis / rho on the 3-ball.
    BallDipole { k: f64, axis: usize },
    /// Higher angular ball modes: eigenvalue bookkeeping only.
    BallHigher { l: usize, k: f64 },
}

pub fn spherical_j0(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0 + z.powi(4) / 120.0
    } else {
        z.sin() / z
    }
}

pub fn spherical_j1(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        z / 3.0 - z.powi(3) / 30.0 + z.powi(5) / 840.0
    } else {
        z.sin() / (z * z) - z.cos() / z
    }
}

impl AnalyticMode {
    /// Value at global point `x`, which the caller knows to lie in union
    /// component `component`.
    pub fn eval(&self, x: &[f64], component: usize) -> f64 {
        if component != self.component {
            return 0.0;
        }
        let lx = self.placement.pull_back(x);
        let raw = match &self.kind {
            ModeKind::Constant => 1.0,
            ModeKind::RectCos { p, q, a, b } => {
                let cx = (*p as f64 * std::f64::consts::PI * (lx[0] + 0.5 * a) / a).cos();
                let cy = (*q as f64 * std::f64::consts::PI * (lx[1] + 0.5 * b) / b).cos();
                cx * cy
            }
            ModeKind::BoxCos { p, q, r, a, b, c } => {
                let cx = (*p as f64 * std::f64::consts::PI * (lx[0] + 0.5 * a) / a).cos();
                let cy = (*q as f64 * std::f64::consts::PI * (lx[1] + 0.5 * b) / b).cos();
                let cz = (*r as f64 * std::f64::consts::PI * (lx[2] + 0.5 * c) / c).cos();
                cx * cy * cz
            }
            ModeKind::DiskMode { m, k, sin } => {
                let rho = (lx[0] * lx[0] + lx[1] * lx[1]).sqrt();
                let theta = lx[1].atan2(lx[0]);
                let radial = bessel_j(*m as f64, k * rho).expect("mode argument in box");
                let ang = if *sin {
                    (*m as f64 * theta).sin()
                } else {
                    (*m as f64 * theta).cos()
                };
                radial * ang
            }
            ModeKind::BallRadial { k } => {
                let rho = (lx[0] * lx[0] + lx[1] * lx[1] + lx[2] * lx[2]).sqrt();
                spherical_j0(k * rho)
            }
            ModeKind::BallDipole { k, axis } => {
                let rho = (lx[0] * lx[0] + lx[1] * lx[1] + lx[2] * lx[2]).sqrt();
                if rho < 1e-300 {
                    0.0
                } else {
                    spherical_j1(k * rho) * lx[*axis] / rho
                }
            }
            ModeKind::BallHigher { l, k } => {
                panic!("ball mode l={l}, k={k} has no pointwise evaluation")
            }
        };
        self.norm * raw
    }
}
