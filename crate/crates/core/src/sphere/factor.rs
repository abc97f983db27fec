//! Conformal factors u on the sphere: g = e^{2u} g_0 (surface case).
//!
//! File format (JSON): either
//!   {"type": "harmonic", "coeffs": [[l, m, value], ...]}
//!   {"type": "bump", "center": [x,y,z], "amplitude": a, "width": w}
//! or the multi-bump extension
//!   {"type": "bumps", "bumps": [{"center": ..., "amplitude": ..., "width": ...}, ...]}
//! A bump is u = a * exp(-dist^2/w^2) in geodesic distance.

use crate::error::{Error, Result};
use crate::numerics::vecn;
use crate::sphere::grid::SphereGrid;
use crate::sphere::harmonics;
use crate::sphere::measure::SphereMeasure;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BumpSpec {
    pub center: [f64; 3],
    pub amplitude: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ConformalFactor {
    Harmonic { coeffs: Vec<(usize, i64, f64)> },
    Bump { center: [f64; 3], amplitude: f64, width: f64 },
    Bumps { bumps: Vec<BumpSpec> },
}

impl ConformalFactor {
    pub fn round() -> Self {
        ConformalFactor::Harmonic { coeffs: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConformalFactor::Harmonic { coeffs } => {
                for &(l, m, _) in coeffs {
                    if m.unsigned_abs() as usize > l {
                        return Err(Error::Config(format!("harmonic coefficient |m| > l: ({l}, {m})")));
                    }
                }
                Ok(())
            }
            ConformalFactor::Bump { width, .. } => {
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::Config(format!("bump width must be positive, got {width}")));
                }
                Ok(())
            }
            ConformalFactor::Bumps { bumps } => {
                for b in bumps {
                    if !(b.width.is_finite() && b.width > 0.0) {
                        return Err(Error::Config("bump width must be positive".into()));
                    }
                }
                Ok(())
            }
        }
    }

    /// u(x) at a unit vector.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ConformalFactor::Harmonic { coeffs } => {
                if coeffs.is_empty() {
                    return 0.0;
                }
                let l_max = coeffs.iter().map(|&(l, _, _)| l).max().unwrap_or(0);
                let y = harmonics::eval_all(l_max, x);
                coeffs
                    .iter()
                    .map(|&(l, m, v)| v * y[harmonics::index_of(l, m)])
                    .sum()
            }
            ConformalFactor::Bump { center, amplitude, width } => {
                bump_value(center, *amplitude, *width, x)
            }
            ConformalFactor::Bumps { bumps } => bumps
                .iter()
                .map(|b| bump_value(&b.center, b.amplitude, b.width, x))
                .sum(),
        }
    }

    /// The measure e^{2u} dv_0 sampled on a tensor grid.
    pub fn measure_on(&self, grid: &SphereGrid) -> Result<SphereMeasure> {
        let weights: Vec<f64> = grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .map(|(x, &w)| w * (2.0 * self.eval(x)).exp())
            .collect();
        SphereMeasure::new(grid.dim, grid.nodes.clone(), weights)
    }

    /// vol(g) = int e^{2u} dv_0 on the given grid.
    pub fn volume_on(&self, grid: &SphereGrid) -> f64 {
        grid.nodes
            .iter()
            .zip(&grid.weights)
            .map(|(x, &w)| w * (2.0 * self.eval(x)).exp())
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("conformal factor serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ConformalFactor = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("bad conformal factor file: {e}")))?;
        f.validate()?;
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

fn bump_value(center: &[f64; 3], amplitude: f64, width: f64, x: &[f64]) -> f64 {
    let c = vecn::normalized(center);
    let cosd = vecn::dot(&c, x).clamp(-1.0, 1.0);
    let d = cosd.acos();
    amplitude * (-d * d / (width * width)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn round_metric_volume() {
        let g = SphereGrid::s2(24, 48);
        let u = ConformalFactor::round();
        assert!((u.volume_on(&g) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_both_forms() {
        let b = ConformalFactor::Bump {
            center: [0.0, 0.0, 1.0],
            amplitude: 0.8,
            width: 0.7,
        };
        let back = ConformalFactor::from_json(&b.to_json()).unwrap();
        assert!((back.eval(&[0.0, 0.0, 1.0]) - 0.8).abs() < 1e-15);

        let h = ConformalFactor::Harmonic { coeffs: vec![(2, 0, 0.3), (1, -1, 0.1)] };
        let text = h.to_json();
        assert!(text.contains("harmonic"));
        ConformalFactor::from_json(&text).unwrap();

        // spec format literals parse
        let lit = r#"{"type":"bump","center":[0,0,1],"amplitude":0.5,"width":0.6}"#;
        ConformalFactor::from_json(lit).unwrap();
        let lit2 = r#"{"type":"harmonic","coeffs":[[2,1,0.25]]}"#;
        ConformalFactor::from_json(lit2).unwrap();
    }

    #[test]
    fn invalid_coefficients_rejected() {
        assert!(ConformalFactor::from_json(r#"{"type":"harmonic","coeffs":[[1,2,0.5]]}"#).is_err());
        assert!(
            ConformalFactor::from_json(r#"{"type":"bump","center":[0,0,1],"amplitude":1,"width":0}"#)
                .is_err()
        );
    }

    #[test]
    fn bump_decays_with_geodesic_distance() {
        let u = ConformalFactor::Bump {
            center: [0.0, 0.0, 1.0],
            amplitude: 1.0,
            width: 0.5,
        };
        let at_pole = u.eval(&[0.0, 0.0, 1.0]);
        let quarter = u.eval(&[1.0, 0.0, 0.0]);
        let antipode = u.eval(&[0.0, 0.0, -1.0]);
        assert!(at_pole > quarter && quarter > antipode);
        assert!((at_pole - 1.0).abs() < 1e-15);
        assert!((quarter - (-((PI / 2.0) * (PI / 2.0)) / 0.25).exp()).abs() < 1e-12);
    }
}
