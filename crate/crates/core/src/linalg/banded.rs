//! Direct solver for periodic banded matrices.
//!
//! The last `p = bandwidth` unknowns form a border. With them removed, the
//! remaining `n - p` unknowns couple through an ordinary (non-wrapping) band,
//! which is factored by banded LU. The two corner blocks only touch the
//! border, so they are absorbed by a `p x p` Schur complement:
//!
//! ```text
//! [B11 B12] [x1]   [f1]      S  = B22 - B21 B11^{-1} B12
//! [B21 B22] [x2] = [f2]      x2 = S^{-1} (f2 - B21 B11^{-1} f1)
//!                            x1 = B11^{-1} f1 - (B11^{-1} B12) x2
//! ```
//!
//! This is the Woodbury correction for the corner blocks written in bordered
//! form. Factor cost is `O(n p^2)`, each solve `O(n p)`.
//!
//! The banded LU does not pivot. Every matrix assembled here has a positive
//! definite symmetric part, a property inherited by the leading block and the
//! Schur complement, so no pivot vanishes.

use super::dense::DenseLu;
use super::matrix::StructuredMatrix;
use crate::error::{invalid, FemError, Result};

#[derive(Debug, Clone)]
pub struct PeriodicBandedLu {
    n: usize,
    p: usize,
    /// Banded LU of the leading `(n - p)` block; row `i` stores columns `i-p..=i+p`.
    core: Vec<f64>,
    /// `B11^{-1} B12`, row-major `(n - p) x p`.
    w: Vec<f64>,
    /// Coupling rows `B21`, as `(row, col, value)` with `col < n - p`.
    b21: Vec<(usize, usize, f64)>,
    schur: DenseLu,
}

impl PeriodicBandedLu {
    pub fn new(matrix: &StructuredMatrix) -> Result<Self> {
        let StructuredMatrix::PeriodicBanded { n, bandwidth, .. } = *matrix else {
            return invalid("periodic banded factorization needs periodic banded storage");
        };
        let p = bandwidth;
        if n < 2 * p + 1 {
            return invalid(format!("bandwidth {p} too large for dimension {n}"));
        }
        let m = n - p;
        let w = 2 * p + 1;
        let mut core = vec![0.0; m * w];
        for i in 0..m {
            for j in i.saturating_sub(p)..(i + p + 1).min(m) {
                core[i * w + (j + p - i)] = matrix.get(i, j);
            }
        }
        let scale = core.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

        for k in 0..m {
            let piv = core[k * w + p];
            if piv.abs() <= tiny {
                return Err(FemError::ZeroPivot { row: k });
            }
            for i in k + 1..(k + p + 1).min(m) {
                let l = core[i * w + (k + p - i)] / piv;
                core[i * w + (k + p - i)] = l;
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..(k + p + 1).min(m) {
                    core[i * w + (j + p - i)] -= l * core[k * w + (j + p - k)];
                }
            }
        }

        let mut lu = Self {
            n,
            p,
            core,
            w: Vec::new(),
            b21: Vec::new(),
            schur: DenseLu::new(0, Vec::new())?,
        };

        // B11^{-1} B12, one border column at a time
        let mut wmat = vec![0.0; m * p];
        for r in 0..p {
            let col = m + r;
            let mut rhs: Vec<f64> = (0..m).map(|i| matrix.get(i, col)).collect();
            lu.core_solve(&mut rhs);
            for i in 0..m {
                wmat[i * p + r] = rhs[i];
            }
        }

        let mut b21 = Vec::new();
        let mut s = vec![0.0; p * p];
        for r in 0..p {
            let row = m + r;
            for c in 0..p {
                s[r * p + c] = matrix.get(row, m + c);
            }
            for off in -(p as i64)..=(p as i64) {
                let j = (row as i64 + off).rem_euclid(n as i64) as usize;
                if j < m {
                    let v = matrix.get(row, j);
                    if v != 0.0 {
                        b21.push((r, j, v));
                        for c in 0..p {
                            s[r * p + c] -= v * wmat[j * p + c];
                        }
                    }
                }
            }
        }
        lu.w = wmat;
        lu.b21 = b21;
        lu.schur = DenseLu::new(p, s).map_err(|e| match e {
            FemError::ZeroPivot { row } => FemError::ZeroPivot { row: m + row },
            other => other,
        })?;
        Ok(lu)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.p
    }

    fn core_solve(&self, x: &mut [f64]) {
        let p = self.p;
        let w = 2 * p + 1;
        let m = self.n - p;
        for i in 0..m {
            let mut s = x[i];
            for j in i.saturating_sub(p)..i {
                s -= self.core[i * w + (j + p - i)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..m).rev() {
            let mut s = x[i];
            for j in i + 1..(i + p + 1).min(m) {
                s -= self.core[i * w + (j + p - i)] * x[j];
            }
            x[i] = s / self.core[i * w + p];
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n);
        let p = self.p;
        let m = self.n - p;
        let mut y1 = rhs[..m].to_vec();
        self.core_solve(&mut y1);
        let mut f2 = rhs[m..].to_vec();
        for &(r, j, v) in &self.b21 {
            f2[r] -= v * y1[j];
        }
        let x2 = self.schur.solve(&f2);
        for i in 0..m {
            let corr: f64 = (0..p).map(|c| self.w[i * p + c] * x2[c]).sum();
            y1[i] -= corr;
        }
        y1.extend_from_slice(&x2);
        y1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &StructuredMatrix, x: &[f64], b: &[f64]) -> f64 {
        m.matvec(x)
            .iter()
            .zip(b)
            .fold(0.0f64, |a, (p, q)| a.max((p - q).abs()))
    }

    #[test]
    fn diagonal_solves_exactly() {
        let mut m = StructuredMatrix::zeros_periodic(8, 2);
        for i in 0..8 {
            m.add(i, i, 1.0 + i as f64);
        }
        let lu = PeriodicBandedLu::new(&m).unwrap();
        let b: Vec<f64> = (0..8).map(|i| (1.0 + i as f64) * 0.5).collect();
        assert!(lu.solve(&b).iter().all(|&v| v == 0.5));
    }

    #[test]
    fn cyclic_tridiagonal() {
        let n = 11;
        let mut m = StructuredMatrix::zeros_periodic(n, 1);
        for i in 0..n {
            m.add(i, i, 4.0);
            m.add(i, (i + 1) % n, 1.0 + 0.1 * i as f64);
            m.add(i, (i + n - 1) % n, -0.7);
        }
        let lu = PeriodicBandedLu::new(&m).unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = lu.solve(&b);
        assert!(residual(&m, &x, &b) < 1e-14);
    }

    #[test]
    fn minimal_dimension() {
        let n = 5;
        let p = 2;
        let mut m = StructuredMatrix::zeros_periodic(n, p);
        for (i, j, _) in m.entries() {
            let v = if i == j {
                10.0
            } else {
                1.0 / (1.0 + i as f64 + 2.0 * j as f64)
            };
            m.add(i, j, v);
        }
        let lu = PeriodicBandedLu::new(&m).unwrap();
        let b = vec![1.0, -1.0, 2.0, 0.5, 0.0];
        assert!(residual(&m, &lu.solve(&b), &b) < 1e-14);
    }

    #[test]
    fn zero_pivot_reported() {
        let m = StructuredMatrix::zeros_periodic(7, 1);
        assert!(matches!(
            PeriodicBandedLu::new(&m),
            Err(FemError::ZeroPivot { row: 0 })
        ));
    }
}
