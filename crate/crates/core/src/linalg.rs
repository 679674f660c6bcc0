//! Dense LU factorization with partial pivoting and a 1-norm condition estimate.

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Matrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// A pivot fell below the relative threshold during elimination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPivot {
    pub row: usize,
    pub pivot: f64,
    pub threshold: f64,
}

/// `P A = L U` with unit lower-triangular `L`, both stored in one matrix.
#[derive(Debug, Clone)]
pub struct LuFactor {
    lu: Matrix,
    perm: Vec<usize>,
    swaps: usize,
    norm1: f64,
}

impl LuFactor {
    /// Factorizes `a`, refusing any pivot with magnitude below `rel_tol * ||a||_1`.
    pub fn new(a: &Matrix, rel_tol: f64) -> Result<Self, SingularPivot> {
        let n = a.dim();
        let norm1 = a.norm1();
        let threshold = rel_tol * norm1;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu.get(i, k).abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax.is_nan() || pmax <= threshold {
                return Err(SingularPivot {
                    row: k,
                    pivot: pmax,
                    threshold,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu.get(k, k);
            for i in k + 1..n {
                let l = lu.get(i, k) / pivot;
                lu.set(i, k, l);
                if l != 0.0 {
                    for j in k + 1..n {
                        let v = lu.get(i, j) - l * lu.get(k, j);
                        lu.set(i, j, v);
                    }
                }
            }
        }
        Ok(LuFactor {
            lu,
            perm,
            swaps,
            norm1,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    pub fn determinant(&self) -> f64 {
        let d: f64 = (0..self.dim()).map(|i| self.lu.get(i, i)).product();
        if self.swaps.is_multiple_of(2) {
            d
        } else {
            -d
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu.get(i, j) * x[j]).sum();
            x[i] = (x[i] - s) / self.lu.get(i, i);
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        // U^T w = b
        let mut w = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu.get(j, i) * w[j]).sum();
            w[i] = (w[i] - s) / self.lu.get(i, i);
        }
        // L^T v = w
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu.get(j, i) * w[j]).sum();
            w[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i];
        }
        x
    }

    /// Solve followed by one step of iterative refinement against `a`.
    pub fn solve_refined(&self, a: &Matrix, b: &[f64]) -> Vec<f64> {
        let mut x = self.solve(b);
        let ax = a.mul_vec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let dx = self.solve(&r);
        for (xi, di) in x.iter_mut().zip(dx) {
            *xi += di;
        }
        x
    }

    /// Hager-Higham estimate of `||A||_1 ||A^{-1}||_1`.
    pub fn cond_estimate(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        let norm = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x);
            est = norm(&y);
            let xi: Vec<f64> = y
                .iter()
                .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
                .collect();
            let z = self.solve_transpose(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.abs()))
                .fold((0, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
            last_j = j;
        }
        // alternating test vector guards against the classic counterexamples
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let alt_est = 2.0 * norm(&self.solve(&alt)) / (3.0 * n as f64);
        self.norm1 * est.max(alt_est)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hilbert(n: usize) -> Matrix {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).collect())
            .collect();
        Matrix::from_rows(&rows)
    }

    #[test]
    fn solves_small_system() {
        let a = Matrix::from_rows(&[
            vec![0.0, 2.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![3.0, 0.0, 1.0],
        ]);
        let lu = LuFactor::new(&a, 1e-13).unwrap();
        let x = lu.solve(&[7.0, 3.0, 6.0]);
        for (xi, e) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
        let xt = lu.solve_transpose(&[9.0, 4.0, 4.0]);
        let at = Matrix::from_rows(&[
            vec![0.0, 1.0, 3.0],
            vec![2.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
        ]);
        let back = at.mul_vec(&xt);
        for (b, e) in back.iter().zip([9.0, 4.0, 4.0]) {
            assert!((b - e).abs() < 1e-13);
        }
        assert!((lu.determinant() - (-5.0)).abs() < 1e-13);
    }

    #[test]
    fn rejects_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        let err = LuFactor::new(&a, 1e-13).unwrap_err();
        assert_eq!(err.row, 1);
    }

    #[test]
    fn condition_estimate_matches_exact_for_hilbert() {
        // exact kappa_1(H_4) = 28375
        let lu = LuFactor::new(&hilbert(4), 1e-15).unwrap();
        let k = lu.cond_estimate();
        assert!((k - 28_375.0).abs() / 28_375.0 < 1e-6, "{k}");
        let id =
            LuFactor::new(&Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]), 1e-13).unwrap();
        assert!((id.cond_estimate() - 1.0).abs() < 1e-15);
    }
}
