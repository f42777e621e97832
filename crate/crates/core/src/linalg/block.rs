use super::circulant::BlockCirculantFactor;
use super::matrix::{Factorization, StructuredMatrix};
use crate::error::{invalid, Result};

/// How to factor a block system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverPath {
    /// Fourier path when both blocks are circulant, banded otherwise.
    #[default]
    Auto,
    /// Force the FFT block-circulant path; fails for non-circulant blocks.
    Fourier,
    /// Force the interleaved periodic banded factorization.
    Banded,
}

#[derive(Debug, Clone)]
enum BlockFactor {
    Fourier(BlockCirculantFactor),
    /// Factorization of the matrix with unknowns interleaved as `(x_0, y_0, x_1, y_1, ...)`.
    Interleaved(Factorization),
}

/// `M = [[A, B], [B, A]]` together with its factorization.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    a: StructuredMatrix,
    b: StructuredMatrix,
    factor: BlockFactor,
}

fn bandwidth(m: &StructuredMatrix) -> usize {
    match m {
        StructuredMatrix::PeriodicBanded { bandwidth, .. } => *bandwidth,
        StructuredMatrix::Circulant { first_row } => {
            let n = first_row.len();
            (0..n)
                .filter(|&l| first_row[l] != 0.0)
                .map(|l| l.min(n - l))
                .max()
                .unwrap_or(0)
        }
        StructuredMatrix::Dense { n, .. } => *n / 2,
    }
}

impl BlockSystem {
    pub fn new(a: StructuredMatrix, b: StructuredMatrix, path: SolverPath) -> Result<Self> {
        if a.n() != b.n() {
            return invalid("blocks of a block system must have equal size");
        }
        let circ = match path {
            SolverPath::Banded => None,
            _ => a.as_circulant(1e-14).zip(b.as_circulant(1e-14)),
        };
        let factor = match (path, circ) {
            (SolverPath::Fourier, None) => {
                return invalid("Fourier path requested for non-circulant blocks")
            }
            (_, Some((ra, rb))) => BlockFactor::Fourier(BlockCirculantFactor::new(&ra, &rb)?),
            (_, None) => BlockFactor::Interleaved(Self::interleaved(&a, &b).factor()?),
        };
        Ok(Self { a, b, factor })
    }

    fn interleaved(a: &StructuredMatrix, b: &StructuredMatrix) -> StructuredMatrix {
        let p = bandwidth(a).max(bandwidth(b));
        let mut m = StructuredMatrix::zeros_periodic(2 * a.n(), 2 * p + 1);
        for (i, j, v) in a.entries() {
            m.add(2 * i, 2 * j, v);
            m.add(2 * i + 1, 2 * j + 1, v);
        }
        for (i, j, v) in b.entries() {
            m.add(2 * i, 2 * j + 1, v);
            m.add(2 * i + 1, 2 * j, v);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn a(&self) -> &StructuredMatrix {
        &self.a
    }

    pub fn b(&self) -> &StructuredMatrix {
        &self.b
    }

    pub fn uses_fourier(&self) -> bool {
        matches!(self.factor, BlockFactor::Fourier(_))
    }

    /// Solve `A x + B y = z1`, `B x + A y = z2`.
    pub fn solve(&self, z1: &[f64], z2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        match &self.factor {
            BlockFactor::Fourier(f) => f.solve(z1, z2),
            BlockFactor::Interleaved(f) => {
                let rhs: Vec<f64> = z1.iter().zip(z2).flat_map(|(&p, &q)| [p, q]).collect();
                let sol = f.solve(&rhs);
                let x = sol.iter().step_by(2).copied().collect();
                let y = sol.iter().skip(1).step_by(2).copied().collect();
                (x, y)
            }
        }
    }

    /// `M (x, y)`.
    pub fn matvec(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let ax = self.a.matvec(x);
        let ay = self.a.matvec(y);
        let bx = self.b.matvec(x);
        let by = self.b.matvec(y);
        (
            ax.iter().zip(&by).map(|(p, q)| p + q).collect(),
            bx.iter().zip(&ay).map(|(p, q)| p + q).collect(),
        )
    }

    /// Dense `2n x 2n` copy of `M` in block ordering.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let a = self.a.to_dense();
        let b = self.b.to_dense();
        (0..2 * n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        let blk = if (i < n) == (j < n) { &a } else { &b };
                        blk[i % n][j % n]
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_blocks(n: usize) -> (StructuredMatrix, StructuredMatrix) {
        let h = 1.0 / n as f64;
        let mut a = vec![0.0; n];
        a[0] = 4.0 * h / 6.0;
        a[1] = h / 6.0;
        a[n - 1] = h / 6.0;
        let mut b = vec![0.0; n];
        b[1] = -0.5;
        b[n - 1] = 0.5;
        (
            StructuredMatrix::circulant(a),
            StructuredMatrix::circulant(b),
        )
    }

    #[test]
    fn fourier_and_banded_agree() {
        let (a, b) = linear_blocks(12);
        let f = BlockSystem::new(a.clone(), b.clone(), SolverPath::Fourier).unwrap();
        let d = BlockSystem::new(a, b, SolverPath::Banded).unwrap();
        assert!(f.uses_fourier());
        assert!(!d.uses_fourier());
        let z1: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).cos()).collect();
        let z2: Vec<f64> = (0..12).map(|i| (i as f64 * 0.3).sin()).collect();
        let (x1, y1) = f.solve(&z1, &z2);
        let (x2, y2) = d.solve(&z1, &z2);
        for i in 0..12 {
            assert!((x1[i] - x2[i]).abs() < 1e-10);
            assert!((y1[i] - y2[i]).abs() < 1e-10);
        }
        let (r1, r2) = d.matvec(&x2, &y2);
        for i in 0..12 {
            assert!((r1[i] - z1[i]).abs() < 1e-12);
            assert!((r2[i] - z2[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_rejects_banded_blocks() {
        let mut a = StructuredMatrix::zeros_periodic(9, 2);
        for i in 0..9 {
            a.add(i, i, 1.0 + i as f64);
        }
        let b = StructuredMatrix::zeros_periodic(9, 2);
        assert!(BlockSystem::new(a, b, SolverPath::Fourier).is_err());
    }
}
