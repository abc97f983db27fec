//! The radial vector field g_A and its folded variant g_AB, together with
//! the closed-form gradient energy densities of their components.

use crate::numerics::vecn;
use crate::specfun::WeinbergerProfile;
use crate::testfun::frame::{FoldingFrame, Side};

/// Point evaluation of the folded field.
#[derive(Debug, Clone)]
pub struct TestFieldEvaluation {
    pub value: Vec<f64>,
    /// Sum over an orthonormal basis of |grad (g_AB . e_i)|^2 at the point,
    /// i.e. G'(d)^2 + (n-1) G(d)^2 / d^2 on the relevant side.
    pub gradient_energy_density: f64,
    pub side: Side,
}

/// g_A(x) = G(d_A(x))/d_A(x) * (x - A), extended by 0 at x = A.
pub fn eval_ga(profile: &WeinbergerProfile, a: &[f64], x: &[f64]) -> Vec<f64> {
    let diff = vecn::sub(x, a);
    let d = vecn::norm(&diff);
    if d < 1e-14 * profile.radius {
        return vec![0.0; x.len()];
    }
    vecn::scale(&diff, profile.eval(d) / d)
}

/// Total gradient energy density of the g_A field at distance d.
fn total_density(profile: &WeinbergerProfile, dim: usize, d: f64) -> f64 {
    if d < 1e-10 * profile.radius {
        return dim as f64 * profile.slope_at_zero().powi(2);
    }
    let g = profile.eval(d);
    let gp = profile.deriv(d);
    gp * gp + (dim as f64 - 1.0) * (g / d) * (g / d)
}

/// Folded field: g_A on the A side, T(g_B) on the B side.
pub fn eval_gab(
    profile: &WeinbergerProfile,
    frame: &FoldingFrame,
    x: &[f64],
) -> TestFieldEvaluation {
    let n = x.len();
    let side = frame.side(x);
    match side {
        Side::A => {
            let d = vecn::dist(x, &frame.a);
            TestFieldEvaluation {
                value: eval_ga(profile, &frame.a, x),
                gradient_energy_density: total_density(profile, n, d),
                side,
            }
        }
        Side::B => {
            let d = vecn::dist(x, &frame.b);
            TestFieldEvaluation {
                value: frame.reflect(&eval_ga(profile, &frame.b, x)),
                gradient_energy_density: total_density(profile, n, d),
                side,
            }
        }
    }
}

/// |grad (g_AB . e)|^2 at x for a unit direction e:
/// G^2/d^2 + (G'^2 - G^2/d^2) ((x-hat) . e)^2 with the base point and the
/// reflected direction chosen by the side of x.
pub fn component_energy_density(
    profile: &WeinbergerProfile,
    frame: &FoldingFrame,
    x: &[f64],
    e: &[f64],
) -> f64 {
    let (base, dir): (&[f64], Vec<f64>) = match frame.side(x) {
        Side::A => (&frame.a, e.to_vec()),
        Side::B => (&frame.b, frame.reflect(e)),
    };
    let diff = vecn::sub(x, base);
    let d = vecn::norm(&diff);
    if d < 1e-10 * profile.radius {
        return profile.slope_at_zero().powi(2);
    }
    let g_over_d = profile.eval(d) / d;
    let gp = profile.deriv(d);
    let cos = vecn::dot(&diff, &dir) / d;
    g_over_d * g_over_d + (gp * gp - g_over_d * g_over_d) * cos * cos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::WeinbergerProfile;

    fn profile2() -> WeinbergerProfile {
        WeinbergerProfile::new(2, 1.0).unwrap()
    }

    #[test]
    fn field_vanishes_at_base_point() {
        let p = profile2();
        let v = eval_ga(&p, &[0.3, -0.4], &[0.3, -0.4]);
        assert_eq!(v, vec![0.0, 0.0]);
    }

    #[test]
    fn field_norm_is_profile_value() {
        let p = profile2();
        let a = [0.1, 0.2];
        for x in [[0.7, -0.3], [1.5, 2.0], [0.100001, 0.2]] {
            let v = eval_ga(&p, &a, &x);
            let d = ((x[0] - a[0]).powi(2) + (x[1] - a[1]).powi(2)).sqrt();
            assert!((crate::numerics::vecn::norm(&v) - p.eval(d).abs()).abs() < 1e-13);
        }
    }

    #[test]
    fn plateau_norm_past_radius() {
        let p = profile2();
        let v = eval_ga(&p, &[0.0, 0.0], &[2.0, 0.0]);
        assert!((v[0] - p.plateau()).abs() < 1e-14);
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn folded_field_continuous_on_mediator() {
        let p = profile2();
        let frame = FoldingFrame::new(vec![-0.7, 0.1], vec![0.4, -0.5]).unwrap();
        // points on the mediator: midpoint + t * (perpendicular of ab)
        let perp = [-frame.ab[1], frame.ab[0]];
        for i in 0..1000 {
            let t = -2.0 + 4.0 * (i as f64 / 999.0);
            let x = [
                frame.midpoint[0] + t * perp[0],
                frame.midpoint[1] + t * perp[1],
            ];
            let from_a = eval_ga(&p, &frame.a, &x);
            let from_b = frame.reflect(&eval_ga(&p, &frame.b, &x));
            for (u, v) in from_a.iter().zip(&from_b) {
                assert!((u - v).abs() < 1e-10, "jump at t = {t}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn density_nonnegative_and_sums_over_basis() {
        let p = profile2();
        let frame = FoldingFrame::new(vec![-0.5, 0.0], vec![0.5, 0.3]).unwrap();
        for x in [[0.3, 0.2], [-0.9, -0.1], [0.0, 0.0]] {
            let total = eval_gab(&p, &frame, &x).gradient_energy_density;
            let e1 = component_energy_density(&p, &frame, &x, &[1.0, 0.0]);
            let e2 = component_energy_density(&p, &frame, &x, &[0.0, 1.0]);
            assert!(e1 >= 0.0 && e2 >= 0.0);
            assert!((e1 + e2 - total).abs() < 1e-12 * (1.0 + total));
        }
    }
}
