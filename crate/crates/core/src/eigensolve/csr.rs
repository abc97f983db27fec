//! Minimal CSR symmetric sparse matrix with the operations the
//! eigensolver needs: matvec, diagonal access, SSOR-style triangular
//! solves.

#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets; duplicates are summed and
    /// columns sorted within each row.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(r, c, v) in triplets {
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col = Vec::new();
        let mut val = Vec::new();
        row_ptr.push(0);
        for row in rows.iter_mut() {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for &(c, v) in row.iter() {
                if last == Some(c) {
                    *val.last_mut().unwrap() += v;
                } else {
                    col.push(c);
                    val.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(col.len());
        }
        CsrMatrix { n, row_ptr, col, val }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.val[idx] * x[self.col[idx]];
            }
            y[i] = acc;
        }
    }

    pub fn matvec_alloc(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.col[idx] == i {
                    d[i] = self.val[idx];
                }
            }
        }
        d
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    /// x^T A y.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                row += self.val[idx] * y[self.col[idx]];
            }
            acc += x[i] * row;
        }
        acc
    }

    /// A + sigma * B (same sparsity not required).
    pub fn add_scaled(&self, sigma: f64, other: &CsrMatrix) -> CsrMatrix {
        let mut triplets = Vec::with_capacity(self.val.len() + other.val.len());
        for i in 0..self.n {
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                triplets.push((i, self.col[idx], self.val[idx]));
            }
            for idx in other.row_ptr[i]..other.row_ptr[i + 1] {
                triplets.push((i, other.col[idx], sigma * other.val[idx]));
            }
        }
        CsrMatrix::from_triplets(self.n, &triplets)
    }
}

/// Symmetric Gauss-Seidel preconditioner P = (D+L) D^{-1} (D+U) built on a
/// fixed matrix; apply() approximates P^{-1} r.
pub struct SsorPreconditioner {
    mat: CsrMatrix,
    diag: Vec<f64>,
}

impl SsorPreconditioner {
    pub fn new(mat: CsrMatrix) -> Self {
        let mut diag = mat.diag();
        for d in diag.iter_mut() {
            if d.abs() < 1e-300 {
                *d = 1.0;
            }
        }
        SsorPreconditioner { mat, diag }
    }

    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.mat.n;
        // forward solve (D+L) y = r
        for i in 0..n {
            let mut acc = r[i];
            for idx in self.mat.row_ptr[i]..self.mat.row_ptr[i + 1] {
                let j = self.mat.col[idx];
                if j < i {
                    acc -= self.mat.val[idx] * z[j];
                }
            }
            z[i] = acc / self.diag[i];
        }
        // scale by D, then backward solve (D+U) z = w
        for i in 0..n {
            z[i] *= self.diag[i];
        }
        for i in (0..n).rev() {
            let mut acc = z[i];
            for idx in self.mat.row_ptr[i]..self.mat.row_ptr[i + 1] {
                let j = self.mat.col[idx];
                if j > i {
                    acc -= self.mat.val[idx] * z[j];
                }
            }
            z[i] = acc / self.diag[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_matvec() {
        // [[2, -1], [-1, 2]] with a duplicate entry
        let a = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 0, 1.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)]);
        let y = a.matvec_alloc(&[1.0, 2.0]);
        assert_eq!(y, vec![0.0, 3.0]);
        assert_eq!(a.diag(), vec![2.0, 2.0]);
    }

    #[test]
    fn ssor_identity_on_diagonal_matrix() {
        let a = CsrMatrix::from_triplets(3, &[(0, 0, 2.0), (1, 1, 4.0), (2, 2, 8.0)]);
        let p = SsorPreconditioner::new(a);
        let mut z = vec![0.0; 3];
        p.apply(&[2.0, 4.0, 8.0], &mut z);
        assert_eq!(z, vec![1.0, 1.0, 1.0]);
    }
}
