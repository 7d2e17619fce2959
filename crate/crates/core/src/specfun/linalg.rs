use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense row-major square matrix.
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

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("Matrix::from_rows", "rows must form a square matrix"));
        }
        Ok(Matrix::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant as (sign, ln|det|) from LU with partial pivoting.
///
/// A singular matrix gives `(0.0, f64::NEG_INFINITY)`.
pub fn det_logspace(m: &Matrix) -> Result<(f64, f64)> {
    let n = m.size();
    if n == 0 || n > 64 {
        return Err(Error::domain("det_logspace", format!("size {n} outside 1..=64")));
    }
    let mut a = m.clone();
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[(p, col)].abs().total_cmp(&a[(q, col)].abs()))
            .unwrap();
        let pv = a[(pivot, col)];
        if pv == 0.0 {
            return Ok((0.0, f64::NEG_INFINITY));
        }
        if !pv.is_finite() {
            return Err(Error::range("det_logspace", "non-finite matrix entry"));
        }
        if pivot != col {
            for j in 0..n {
                a.data.swap(pivot * n + j, col * n + j);
            }
            sign = -sign;
        }
        if pv < 0.0 {
            sign = -sign;
        }
        log_abs += pv.abs().ln();
        for r in col + 1..n {
            let f = a[(r, col)] / pv;
            if f != 0.0 {
                for j in col + 1..n {
                    let v = a[(col, j)];
                    a[(r, j)] -= f * v;
                }
            }
        }
    }
    Ok((sign, log_abs))
}

/// Eigenvalues of a symmetric tridiagonal matrix (implicit QL), sorted ascending.
///
/// `diag` has length n, `off` has length n-1 (off[i] couples rows i and i+1).
pub fn symmetric_tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::domain("tridiagonal_eigenvalues", "need n diagonal and n-1 off-diagonal entries"));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::accuracy("tridiagonal_eigenvalues", "QL iteration did not converge", d[l]));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<f64>]) -> f64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut total = 0.0;
        for j in 0..n {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * m[0][j] * cofactor_det(&minor);
        }
        total
    }

    #[test]
    fn simple_determinants() {
        assert_eq!(det_logspace(&Matrix::identity(3)).unwrap(), (1.0, 0.0));
        let m = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.5]]).unwrap();
        let (s, l) = det_logspace(&m).unwrap();
        assert_eq!(s, 1.0);
        assert!(l.abs() < 1e-16);
        let hilbert = Matrix::from_fn(3, |i, j| 1.0 / (i + j + 1) as f64);
        let (s, l) = det_logspace(&hilbert).unwrap();
        assert_eq!(s, 1.0);
        assert!((l - (1.0f64 / 2160.0).ln()).abs() < 1e-13);
        let sing = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(det_logspace(&sing).unwrap(), (0.0, f64::NEG_INFINITY));
        assert!(det_logspace(&Matrix::zeros(0)).is_err());
    }

    #[test]
    fn agrees_with_cofactor_expansion_exhaustively_small() {
        // every 2x2 with entries in -2..=2, and a deterministic sweep of 3x3 and 4x4
        let vals = [-2.0, -1.0, 0.0, 1.0, 2.0];
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        let rows = vec![vec![a, b], vec![c, d]];
                        let (s, l) = det_logspace(&Matrix::from_rows(&rows).unwrap()).unwrap();
                        let exact = cofactor_det(&rows);
                        assert!((s * l.exp() - exact).abs() < 1e-12);
                    }
                }
            }
        }
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 5) as f64 - 2.0
        };
        for n in [3usize, 4] {
            for _ in 0..2000 {
                let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let (s, l) = det_logspace(&Matrix::from_rows(&rows).unwrap()).unwrap();
                let exact = cofactor_det(&rows);
                let got = if s == 0.0 { 0.0 } else { s * l.exp() };
                assert!((got - exact).abs() < 1e-10, "{rows:?}");
            }
        }
    }

    #[test]
    fn tridiagonal_eigenvalues_known_spectrum() {
        // second-difference matrix: 2 - 2 cos(k pi/(n+1))
        let n = 12;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let ev = symmetric_tridiagonal_eigenvalues(&diag, &off).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
        let ev = symmetric_tridiagonal_eigenvalues(&[3.5], &[]).unwrap();
        assert_eq!(ev, vec![3.5]);
    }
}
