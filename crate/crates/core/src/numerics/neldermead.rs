//! Derivative-free simplex minimization (Nelder-Mead), used as a fallback
//! when damped fixed-point iterations stall.

pub struct NmResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
}

pub fn nelder_mead<F>(f: F, x0: &[f64], scale: f64, max_iters: usize, ftol: f64) -> NmResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iters = 0;
    for it in 0..max_iters {
        iters = it + 1;
        // order ascending
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap());
        let reordered: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let refv: Vec<f64> = idx.iter().map(|&i| fv[i]).collect();
        simplex = reordered;
        fv = refv;

        if (fv[n] - fv[0]).abs() <= ftol * (1.0 + fv[0].abs()) {
            break;
        }

        // centroid of all but worst
        let mut c = vec![0.0; n];
        for v in simplex.iter().take(n) {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = c.iter().zip(&worst).map(|(ci, wi)| 2.0 * ci - wi).collect();
        let fr = f(&reflect);
        if fr < fv[0] {
            let expand: Vec<f64> = c.iter().zip(&worst).map(|(ci, wi)| 3.0 * ci - 2.0 * wi).collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[n] = expand;
                fv[n] = fe;
            } else {
                simplex[n] = reflect;
                fv[n] = fr;
            }
        } else if fr < fv[n - 1] {
            simplex[n] = reflect;
            fv[n] = fr;
        } else {
            let contract: Vec<f64> = c.iter().zip(&worst).map(|(ci, wi)| 0.5 * (ci + wi)).collect();
            let fc = f(&contract);
            if fc < fv[n] {
                simplex[n] = contract;
                fv[n] = fc;
            } else {
                // shrink toward best
                let best = simplex[0].clone();
                for v in simplex.iter_mut().skip(1) {
                    for (vi, bi) in v.iter_mut().zip(&best) {
                        *vi = bi + 0.5 * (*vi - bi);
                    }
                }
                for (i, v) in simplex.iter().enumerate().skip(1) {
                    fv[i] = f(v);
                }
            }
        }
    }
    NmResult {
        x: simplex[0].clone(),
        fx: fv[0],
        iterations: iters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_bowl() {
        let out = nelder_mead(
            |p| (p[0] - 2.0).powi(2) + 3.0 * (p[1] + 1.0).powi(2),
            &[0.0, 0.0],
            0.5,
            2000,
            1e-14,
        );
        assert!((out.x[0] - 2.0).abs() < 1e-5 && (out.x[1] + 1.0).abs() < 1e-5);
    }
}
