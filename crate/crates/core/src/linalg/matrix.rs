use super::banded::PeriodicBandedLu;
use super::circulant::CirculantFactor;
use super::dense::DenseLu;
use crate::error::{invalid, Result};

/// Square operator with periodic structure.
#[derive(Debug, Clone, PartialEq)]
pub enum StructuredMatrix {
    /// `C_ij = first_row[(j - i) mod n]`.
    Circulant { first_row: Vec<f64> },
    /// Entries `(i, j)` with periodic distance `min(|i-j|, n-|i-j|) <= bandwidth`.
    /// Row `i` stores offsets `-bandwidth..=bandwidth` contiguously.
    PeriodicBanded {
        n: usize,
        bandwidth: usize,
        data: Vec<f64>,
    },
    /// Row-major dense storage, used when the band would wrap onto itself.
    Dense { n: usize, data: Vec<f64> },
}

impl StructuredMatrix {
    /// Zero matrix able to hold a periodic band; falls back to dense storage
    /// when `n < 2 * bandwidth + 1`.
    pub fn zeros_periodic(n: usize, bandwidth: usize) -> Self {
        if n >= 2 * bandwidth + 1 {
            StructuredMatrix::PeriodicBanded {
                n,
                bandwidth,
                data: vec![0.0; n * (2 * bandwidth + 1)],
            }
        } else {
            StructuredMatrix::Dense {
                n,
                data: vec![0.0; n * n],
            }
        }
    }

    pub fn circulant(first_row: Vec<f64>) -> Self {
        StructuredMatrix::Circulant { first_row }
    }

    pub fn n(&self) -> usize {
        match self {
            StructuredMatrix::Circulant { first_row } => first_row.len(),
            StructuredMatrix::PeriodicBanded { n, .. } | StructuredMatrix::Dense { n, .. } => *n,
        }
    }

    fn band_slot(n: usize, bandwidth: usize, i: usize, j: usize) -> Option<usize> {
        let fwd = (j + n - i) % n;
        let off = if fwd <= bandwidth {
            fwd as i64
        } else if n - fwd <= bandwidth {
            -((n - fwd) as i64)
        } else {
            return None;
        };
        Some(i * (2 * bandwidth + 1) + (off + bandwidth as i64) as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            StructuredMatrix::Circulant { first_row } => {
                let n = first_row.len();
                first_row[(j + n - i) % n]
            }
            StructuredMatrix::PeriodicBanded { n, bandwidth, data } => {
                Self::band_slot(*n, *bandwidth, i, j).map_or(0.0, |s| data[s])
            }
            StructuredMatrix::Dense { n, data } => data[i * n + j],
        }
    }

    /// Accumulate `v` into entry `(i, j)`.
    ///
    /// Panics for a circulant matrix or an entry outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        match self {
            StructuredMatrix::Circulant { .. } => panic!("circulant matrices are immutable"),
            StructuredMatrix::PeriodicBanded { n, bandwidth, data } => {
                let s = Self::band_slot(*n, *bandwidth, i, j)
                    .unwrap_or_else(|| panic!("entry ({i}, {j}) outside the periodic band"));
                data[s] += v;
            }
            StructuredMatrix::Dense { n, data } => data[i * *n + j] += v,
        }
    }

    /// Structurally present entries `(i, j, value)`.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        match self {
            StructuredMatrix::Circulant { first_row } => {
                let n = first_row.len();
                let nz: Vec<usize> = (0..n).filter(|&l| first_row[l] != 0.0).collect();
                (0..n)
                    .flat_map(|i| nz.iter().map(move |&l| (i, (i + l) % n)))
                    .map(|(i, j)| (i, j, self.get(i, j)))
                    .collect()
            }
            StructuredMatrix::PeriodicBanded { n, bandwidth, data } => {
                let w = 2 * bandwidth + 1;
                (0..*n)
                    .flat_map(|i| {
                        (0..w).map(move |s| (i, (i + n + s - bandwidth) % n, data[i * w + s]))
                    })
                    .collect()
            }
            StructuredMatrix::Dense { n, data } => (0..*n)
                .flat_map(|i| (0..*n).map(move |j| (i, j, data[i * n + j])))
                .collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        match self {
            StructuredMatrix::Circulant { first_row } => {
                let nz: Vec<(usize, f64)> = first_row
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0.0)
                    .map(|(l, &c)| (l, c))
                    .collect();
                (0..n)
                    .map(|i| nz.iter().map(|&(l, c)| c * x[(i + l) % n]).sum())
                    .collect()
            }
            StructuredMatrix::PeriodicBanded {
                bandwidth, data, ..
            } => {
                let w = 2 * bandwidth + 1;
                (0..n)
                    .map(|i| {
                        (0..w)
                            .map(|s| data[i * w + s] * x[(i + n + s - bandwidth) % n])
                            .sum()
                    })
                    .collect()
            }
            StructuredMatrix::Dense { data, .. } => (0..n)
                .map(|i| (0..n).map(|j| data[i * n + j] * x[j]).sum())
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        match self {
            StructuredMatrix::Circulant { first_row } => {
                let n = first_row.len();
                StructuredMatrix::Circulant {
                    first_row: (0..n).map(|l| first_row[(n - l) % n]).collect(),
                }
            }
            StructuredMatrix::PeriodicBanded { n, bandwidth, .. } => {
                let mut t = StructuredMatrix::zeros_periodic(*n, *bandwidth);
                for (i, j, v) in self.entries() {
                    t.add(j, i, v);
                }
                t
            }
            StructuredMatrix::Dense { n, data } => StructuredMatrix::Dense {
                n: *n,
                data: (0..n * n).map(|s| data[(s % n) * n + s / n]).collect(),
            },
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// First row, if every row is the cyclic shift of it within `tol`
    /// (relative to the largest entry).
    pub fn as_circulant(&self, tol: f64) -> Option<Vec<f64>> {
        if let StructuredMatrix::Circulant { first_row } = self {
            return Some(first_row.clone());
        }
        let n = self.n();
        let row: Vec<f64> = (0..n).map(|j| self.get(0, j)).collect();
        let scale = row
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let ok = self
            .entries()
            .into_iter()
            .all(|(i, j, v)| (v - row[(j + n - i) % n]).abs() <= tol * scale);
        ok.then_some(row)
    }

    /// Factorization matched to the storage kind.
    pub fn factor(&self) -> Result<Factorization> {
        match self {
            StructuredMatrix::Circulant { first_row } => {
                Ok(Factorization::Circulant(CirculantFactor::new(first_row)?))
            }
            StructuredMatrix::PeriodicBanded { .. } => {
                Ok(Factorization::Banded(PeriodicBandedLu::new(self)?))
            }
            StructuredMatrix::Dense { n, data } => {
                Ok(Factorization::Dense(DenseLu::new(*n, data.clone())?))
            }
        }
    }

    /// Sum with another matrix of the same size and kind.
    pub fn scaled_add(&self, alpha: f64, other: &StructuredMatrix) -> Result<Self> {
        if self.n() != other.n() {
            return invalid("matrix sizes differ");
        }
        let mut out = match self {
            StructuredMatrix::Circulant { first_row } => {
                if let StructuredMatrix::Circulant { first_row: o } = other {
                    return Ok(StructuredMatrix::Circulant {
                        first_row: first_row
                            .iter()
                            .zip(o)
                            .map(|(a, b)| a + alpha * b)
                            .collect(),
                    });
                }
                return invalid("cannot add a non-circulant matrix to a circulant one");
            }
            _ => self.clone(),
        };
        for (i, j, v) in other.entries() {
            out.add(i, j, alpha * v);
        }
        Ok(out)
    }
}

/// Solver handle produced by [`StructuredMatrix::factor`]. Immutable; solves
/// may run concurrently.
#[derive(Debug, Clone)]
pub enum Factorization {
    Circulant(CirculantFactor),
    Banded(PeriodicBandedLu),
    Dense(DenseLu),
}

impl Factorization {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match self {
            Factorization::Circulant(f) => f.solve(rhs),
            Factorization::Banded(f) => f.solve(rhs),
            Factorization::Dense(f) => f.solve(rhs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_wraps_periodically() {
        let mut m = StructuredMatrix::zeros_periodic(6, 1);
        m.add(0, 5, 2.0);
        m.add(5, 0, 3.0);
        m.add(2, 3, 1.0);
        assert_eq!(m.get(0, 5), 2.0);
        assert_eq!(m.get(5, 0), 3.0);
        assert_eq!(m.get(0, 3), 0.0);
        let y = m.matvec(&[1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(y, vec![2.0, 0.0, 1.0, 0.0, 0.0, 3.0]);
    }

    #[test]
    fn outside_band_is_exact_zero() {
        let mut m = StructuredMatrix::zeros_periodic(9, 2);
        for (i, j, _) in m.entries() {
            m.add(i, j, 1.0 + i as f64 + 0.1 * j as f64);
        }
        for i in 0..9 {
            for j in 0..9 {
                let d = (i as i64 - j as i64).rem_euclid(9);
                if d > 2 && d < 7 {
                    assert_eq!(m.get(i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn small_sizes_fall_back_to_dense() {
        let m = StructuredMatrix::zeros_periodic(4, 2);
        assert!(matches!(m, StructuredMatrix::Dense { .. }));
    }

    #[test]
    fn transpose_of_circulant() {
        let c = StructuredMatrix::circulant(vec![1.0, 2.0, 0.0, 3.0]);
        let t = c.transpose();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(c.get(i, j), t.get(j, i));
            }
        }
    }

    #[test]
    fn detects_circulant_structure() {
        let c = StructuredMatrix::circulant(vec![4.0, 1.0, 0.0, 0.0, 1.0]);
        let mut b = StructuredMatrix::zeros_periodic(5, 1);
        for (i, j, v) in c.entries() {
            b.add(i, j, v);
        }
        assert_eq!(
            b.as_circulant(1e-14).unwrap(),
            vec![4.0, 1.0, 0.0, 0.0, 1.0]
        );
        b.add(2, 2, 0.5);
        assert!(b.as_circulant(1e-14).is_none());
    }
}
