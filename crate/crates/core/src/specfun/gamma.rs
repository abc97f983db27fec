//! Gamma function (Lanczos) and the dimensional constant K_n.

use crate::error::{Error, Result};

// Lanczos g = 7, 9-term coefficient set.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_C: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS_C[0];
    for (i, c) in LANCZOS_C.iter().enumerate().skip(1) {
        a += c / (x - 1.0 + i as f64);
    }
    a
}

/// Gamma(x) for x > 0. Overflows to +inf past x ~ 171.6, as the value
/// exceeds the f64 range there; use [`ln_gamma`] for large arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || x > 200.0 {
        return Err(Error::Range(format!(
            "gamma_fn requires 0 < x <= 200, got {x}"
        )));
    }
    if x < 0.5 {
        // one recurrence step keeps the Lanczos kernel in its sweet spot
        return Ok(gamma_core(x + 1.0) / x);
    }
    Ok(gamma_core(x))
}

fn gamma_core(x: f64) -> f64 {
    let t = x + LANCZOS_G - 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * lanczos_sum(x)
}

/// ln Gamma(x) for x > 0; stays finite over the whole supported range.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Range(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(ln_gamma_core(x + 1.0) - x.ln());
    }
    Ok(ln_gamma_core(x))
}

fn ln_gamma_core(x: f64) -> f64 {
    let t = x + LANCZOS_G - 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x - 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// Volume of the unit ball in dimension n.
pub fn unit_ball_volume(n: usize) -> f64 {
    let nf = n as f64;
    (0.5 * nf * std::f64::consts::PI.ln() - ln_gamma(0.5 * nf + 1.0).unwrap()).exp()
}

/// The constant K_n = (n+1)/n * (Gamma(n) Gamma((n+1)/2) / (Gamma(n+1/2) Gamma(n/2)))^(2/n).
pub fn kn_constant(n: usize) -> Result<f64> {
    if !(2..=200).contains(&n) {
        return Err(Error::Range(format!(
            "kn_constant requires 2 <= n <= 200, got {n}"
        )));
    }
    let nf = n as f64;
    let log_ratio =
        ln_gamma(nf)? + ln_gamma(0.5 * (nf + 1.0))? - ln_gamma(nf + 0.5)? - ln_gamma(0.5 * nf)?;
    Ok((nf + 1.0) / nf * ((2.0 / nf) * log_ratio).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        assert!((gamma_fn(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-13);
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn half_integer_by_recurrence() {
        // Gamma(3.5) built from Gamma(0.5) by the recurrence
        let expected = 2.5 * 1.5 * 0.5 * std::f64::consts::PI.sqrt();
        let got = gamma_fn(3.5).unwrap();
        assert!((got - expected).abs() / expected < 1e-13, "got {got}");
        // frozen reference value
        assert!((got - 3.323_350_970_447_842_6).abs() < 1e-13);
    }

    #[test]
    fn relative_accuracy_against_recurrence_chain() {
        // Gamma(x+k) / Gamma(x) must equal the exact product x(x+1)...(x+k-1)
        for &x in &[0.1, 0.7, 1.3, 2.9, 7.25, 33.5] {
            let mut prod = 1.0;
            for i in 0..12 {
                prod *= x + i as f64;
            }
            let lhs = gamma_fn(x + 12.0).unwrap();
            let rhs = gamma_fn(x).unwrap() * prod;
            assert!(
                ((lhs - rhs) / rhs).abs() < 5e-13,
                "x = {x}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn domain_errors() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.0).is_err());
        assert!(gamma_fn(f64::NAN).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-13);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn kn_reference_values() {
        // frozen high-precision references
        assert!((kn_constant(2).unwrap() - 1.0).abs() < 1e-12);
        assert!((kn_constant(3).unwrap() - 1.030_096_633_064_951_7).abs() < 1e-12);
        assert!((kn_constant(100).unwrap() - 1.002_998_345_850_594_4).abs() < 1e-12);
    }

    #[test]
    fn kn_range_and_trend() {
        let mut prev = f64::INFINITY;
        for n in 2..=200 {
            let k = kn_constant(n).unwrap();
            assert!((1.0 - 1e-12..=1.04).contains(&k), "K_{n} = {k}");
            if n >= 5 {
                // monotone decay toward 1 past the peak at n = 4
                assert!(k < prev + 1e-15, "K_{n} = {k} vs previous {prev}");
            }
            prev = k;
        }
        assert!(kn_constant(100).unwrap() < kn_constant(3).unwrap());
    }
}
