//! Real, fully normalized spherical harmonics on S^2.
//!
//! Index layout is (l, m) lexicographic: idx = l^2 + l + m for l = 0..=L,
//! m = -l..=l, which makes results reproducible bit-for-bit for a fixed
//! grid. Normalization is int_{S^2} Y^2 dS = 1.

/// Number of basis functions through degree `l_max`.
pub fn basis_size(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

pub fn index_of(l: usize, m: i64) -> usize {
    (l * l) as usize + (l as i64 + m) as usize
}

pub fn degree_of(idx: usize) -> usize {
    (idx as f64).sqrt().floor() as usize
}

/// Evaluate every Y_{lm} with l <= l_max at the unit vector `x`,
/// in index order.
pub fn eval_all(l_max: usize, x: &[f64]) -> Vec<f64> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let ct = (x[2] / r).clamp(-1.0, 1.0);
    let st = (1.0 - ct * ct).max(0.0).sqrt();
    let phi = x[1].atan2(x[0]);

    let nb = basis_size(l_max);
    let mut out = vec![0.0; nb];

    // normalized associated Legendre by stable recurrence:
    // pbar[m][l] stored flat as we go
    let mut pmm = vec![0.0; l_max + 1]; // P̄_{m,m}
    pmm[0] = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    for m in 1..=l_max {
        pmm[m] = pmm[m - 1] * st * ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
    }
    for m in 0..=l_max {
        // cos(m phi), sin(m phi)
        let (smp, cmp) = (m as f64 * phi).sin_cos();
        let azim_c = if m == 0 { 1.0 } else { std::f64::consts::SQRT_2 * cmp };
        let azim_s = std::f64::consts::SQRT_2 * smp;

        let mut p_lm1 = pmm[m]; // P̄_{m,m}
        let mut p_lm2 = 0.0;
        for l in m..=l_max {
            let p = if l == m {
                p_lm1
            } else if l == m + 1 {
                ct * ((2 * m + 3) as f64).sqrt() * pmm[m]
            } else {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                    .sqrt();
                a * (ct * p_lm1 - b * p_lm2)
            };
            if l > m {
                p_lm2 = p_lm1;
                p_lm1 = p;
            }
            out[index_of(l, m as i64)] = p * azim_c;
            if m > 0 {
                out[index_of(l, -(m as i64))] = p * azim_s;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::grid::SphereGrid;

    #[test]
    fn low_order_closed_forms() {
        let x = [0.3f64, -0.5, 0.81];
        let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let u = [x[0] / n, x[1] / n, x[2] / n];
        let y = eval_all(2, &u);
        let c00 = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
        assert!((y[index_of(0, 0)] - c00).abs() < 1e-14);
        // Y_{1,0} = sqrt(3/4pi) z
        let c10 = (3.0 / (4.0 * std::f64::consts::PI)).sqrt();
        assert!((y[index_of(1, 0)] - c10 * u[2]).abs() < 1e-13);
        // Y_{1,1} ~ x, Y_{1,-1} ~ y with the same constant
        assert!((y[index_of(1, 1)] - c10 * u[0]).abs() < 1e-13);
        assert!((y[index_of(1, -1)] - c10 * u[1]).abs() < 1e-13);
    }

    #[test]
    fn orthonormal_under_grid_quadrature() {
        let l_max = 6;
        let grid = SphereGrid::s2(2 * l_max + 2, 2 * (2 * l_max + 1));
        let nb = basis_size(l_max);
        let mut gram = vec![vec![0.0; nb]; nb];
        for (x, w) in grid.nodes.iter().zip(&grid.weights) {
            let y = eval_all(l_max, x);
            for i in 0..nb {
                for j in 0..=i {
                    gram[i][j] += w * y[i] * y[j];
                }
            }
        }
        for i in 0..nb {
            for j in 0..=i {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (gram[i][j] - want).abs() < 1e-12,
                    "gram[{i}][{j}] = {}",
                    gram[i][j]
                );
            }
        }
    }
}
