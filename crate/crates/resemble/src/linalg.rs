//! Small dense complex linear algebra: Hermitian Cholesky with incremental
//! column growth, used by the least-squares projections.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("Gram matrix is not positive definite at pivot {0} (rank deficiency beyond ridge repair)")]
    NotPositiveDefinite(usize),
}

/// Cholesky factor `L` of a Hermitian positive-definite matrix, stored as
/// lower-triangular rows. Supports appending columns without refactoring.
#[derive(Debug, Clone, Default)]
pub struct HermitianSolver {
    rows: Vec<Vec<Complex64>>,
}

impl HermitianSolver {
    pub fn new() -> Self {
        HermitianSolver { rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Factor a full Gram matrix given as rows of its lower triangle
    /// (`gram[i][j]` for `j <= i`).
    pub fn from_gram_lower(gram: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let mut solver = HermitianSolver::new();
        for col in gram {
            solver.push_column(col)?;
        }
        Ok(solver)
    }

    /// Append one atom: `column[i] = G[i][n]` for `i <= n` where `n` is the
    /// current size; `column[n]` is the (real) diagonal entry.
    pub fn push_column(&mut self, column: &[Complex64]) -> Result<(), LinalgError> {
        let n = self.rows.len();
        debug_assert_eq!(column.len(), n + 1);
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..n {
            // l[n][j] = (G[j][n]^* ... ) — we receive G[i][n]; the new row of L
            // uses G[n][j] = conj(G[j][n]).
            let mut s = column[j].conj();
            for k in 0..j {
                s -= row[k] * self.rows[j][k].conj();
            }
            row.push(s / self.rows[j][j]);
        }
        let mut d = column[n].re;
        for v in &row {
            d -= v.norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite(n));
        }
        row.push(Complex64::new(d.sqrt(), 0.0));
        self.rows.push(row);
        Ok(())
    }

    /// Solve `G x = b` via the factor (forward then adjoint back substitution).
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.rows.len();
        debug_assert_eq!(b.len(), n);
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.rows[i][k] * y[k];
            }
            y[i] = s / self.rows[i][i];
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.rows[k][i].conj() * x[k];
            }
            x[i] = s / self.rows[i][i];
        }
        x
    }
}

/// `sum conj(a) * b` over split re/im slices; the hot inner product of the
/// dictionary scans. Returns (re, im).
#[inline]
pub fn cdot_conj_split(ar: &[f64], ai: &[f64], br: &[f64], bi: &[f64]) -> (f64, f64) {
    let n = ar.len();
    debug_assert!(ai.len() == n && br.len() == n && bi.len() == n);
    let mut re0 = 0.0;
    let mut re1 = 0.0;
    let mut im0 = 0.0;
    let mut im1 = 0.0;
    let mut i = 0;
    while i + 1 < n {
        re0 += ar[i] * br[i] + ai[i] * bi[i];
        im0 += ar[i] * bi[i] - ai[i] * br[i];
        re1 += ar[i + 1] * br[i + 1] + ai[i + 1] * bi[i + 1];
        im1 += ar[i + 1] * bi[i + 1] - ai[i + 1] * br[i + 1];
        i += 2;
    }
    if i < n {
        re0 += ar[i] * br[i] + ai[i] * bi[i];
        im0 += ar[i] * bi[i] - ai[i] * br[i];
    }
    (re0 + re1, im0 + im1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn solves_known_system() {
        // G = A^H A for A with independent columns, so G is HPD.
        let a = [
            [c(1.0, 0.0), c(0.5, 0.2)],
            [c(0.0, 1.0), c(1.0, -0.3)],
            [c(0.3, 0.0), c(0.0, 0.7)],
        ];
        let mut gram = vec![vec![c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for row in &a {
                    gram[i][j] += row[i].conj() * row[j];
                }
            }
        }
        let lower: Vec<Vec<C>> = (0..2).map(|i| (0..=i).map(|j| gram[j][i]).collect()).collect();
        let solver = HermitianSolver::from_gram_lower(&lower).unwrap();
        let x_true = [c(2.0, -1.0), c(0.5, 3.0)];
        let b: Vec<C> = (0..2)
            .map(|i| gram[i][0] * x_true[0] + gram[i][1] * x_true[1])
            .collect();
        let x = solver.solve(&b);
        for (got, want) in x.iter().zip(x_true.iter()) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn incremental_matches_full_factor() {
        // Random-ish HPD 4x4 built from a fixed complex matrix.
        let n = 4;
        let mut gram = vec![vec![c(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = c(0.0, 0.0);
                for k in 0..6 {
                    let aik = c(((i * 7 + k * 3) % 5) as f64, ((i + k) % 3) as f64 - 1.0);
                    let ajk = c(((j * 7 + k * 3) % 5) as f64, ((j + k) % 3) as f64 - 1.0);
                    s += aik.conj() * ajk;
                }
                gram[i][j] = s + if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
            }
        }
        let lower: Vec<Vec<C>> = (0..n).map(|i| (0..=i).map(|j| gram[j][i]).collect()).collect();
        let full = HermitianSolver::from_gram_lower(&lower).unwrap();
        let mut inc = HermitianSolver::new();
        for col in &lower {
            inc.push_column(col).unwrap();
        }
        let b: Vec<C> = (0..n).map(|i| c(i as f64 + 0.5, -(i as f64))).collect();
        let xf = full.solve(&b);
        let xi = inc.solve(&b);
        for (a1, a2) in xf.iter().zip(xi.iter()) {
            assert!((a1 - a2).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_singular() {
        // Duplicate atoms give a singular Gram.
        let lower = vec![
            vec![c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
        ];
        assert_eq!(
            HermitianSolver::from_gram_lower(&lower).unwrap_err(),
            LinalgError::NotPositiveDefinite(1)
        );
    }

    #[test]
    fn split_dot_matches_naive() {
        let a: Vec<C> = (0..13).map(|i| c((i as f64).sin(), (i as f64 * 0.7).cos())).collect();
        let b: Vec<C> = (0..13).map(|i| c((i as f64 * 1.3).cos(), (i as f64 * 0.2).sin())).collect();
        let naive: C = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
        let ar: Vec<f64> = a.iter().map(|z| z.re).collect();
        let ai: Vec<f64> = a.iter().map(|z| z.im).collect();
        let br: Vec<f64> = b.iter().map(|z| z.re).collect();
        let bi: Vec<f64> = b.iter().map(|z| z.im).collect();
        let (re, im) = cdot_conj_split(&ar, &ai, &br, &bi);
        assert!((re - naive.re).abs() < 1e-12);
        assert!((im - naive.im).abs() < 1e-12);
    }
}
