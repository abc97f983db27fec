//! Scalar root bracketing and bisection.

use crate::error::{Error, Result};

/// Bisect a bracketed sign change of `f` down to absolute width `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::solver(
            format!("no sign change on [{a}, {b}]"),
            fa.abs().min(fb.abs()),
        ));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() < tol {
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

/// Scan `f` from `start` in steps of `step` until the sign changes, then bisect.
///
/// Errors with the searched interval if no sign change is found before `stop`.
pub fn scan_and_bisect<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    step: f64,
    stop: f64,
    tol: f64,
) -> Result<f64> {
    let mut a = start;
    let mut fa = f(a);
    while a < stop {
        let b = (a + step).min(stop);
        let fb = f(b);
        if fa == 0.0 {
            return Ok(a);
        }
        if fa.signum() != fb.signum() {
            return bisect(&f, a, b, tol);
        }
        a = b;
        fa = fb;
    }
    Err(Error::solver(
        format!("no sign change found scanning [{start}, {stop}] with step {step}"),
        fa.abs(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cosine_root() {
        let r = scan_and_bisect(|x| x.cos(), 0.0, 0.05, 3.0, 1e-13).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn reports_interval_on_failure() {
        let e = scan_and_bisect(|_| 1.0, 0.0, 0.5, 2.0, 1e-12).unwrap_err();
        assert!(e.to_string().contains("[0, 2]"));
    }
}
