//! Circulant solves diagonalized by the discrete Fourier transform.
//!
//! For `C_ij = c[(j - i) mod n]` and the forward transform
//! `X_m = sum_j x_j exp(-2 pi i j m / n)`, the product `C x` transforms to
//! `lambda_m X_m` with `lambda_m = sum_l c_l exp(+2 pi i l m / n)`.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, FemError, Result};

/// Relative threshold below which a spectral or Schur pivot is treated as zero.
pub const SINGULARITY_THRESHOLD: f64 = 1e-13;

#[derive(Clone)]
struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPair {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    fn forward(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Normalized inverse transform, real part.
    fn inverse_real(&self, mut buf: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut buf);
        let s = 1.0 / buf.len() as f64;
        buf.into_iter().map(|c| c.re * s).collect()
    }

    /// Eigenvalues of the circulant with first row `c`.
    fn eigenvalues(&self, c: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.inverse.process(&mut buf);
        buf
    }
}

impl fmt::Debug for FftPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FftPair")
            .field("len", &self.forward.len())
            .finish()
    }
}

fn check_spectrum(eig: &[Complex64]) -> Result<()> {
    let max = eig.iter().fold(0.0f64, |m, e| m.max(e.norm()));
    for (index, e) in eig.iter().enumerate() {
        if e.norm() <= SINGULARITY_THRESHOLD * max || max == 0.0 {
            return Err(FemError::SingularCirculant {
                index,
                modulus: e.norm(),
                max,
            });
        }
    }
    Ok(())
}

/// Spectral factorization of a circulant matrix.
#[derive(Debug, Clone)]
pub struct CirculantFactor {
    fft: FftPair,
    eig: Vec<Complex64>,
}

impl CirculantFactor {
    pub fn new(first_row: &[f64]) -> Result<Self> {
        if first_row.is_empty() {
            return invalid("empty circulant");
        }
        let fft = FftPair::new(first_row.len());
        let eig = fft.eigenvalues(first_row);
        check_spectrum(&eig)?;
        Ok(Self { fft, eig })
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eig
    }

    pub fn solve(&self, z: &[f64]) -> Vec<f64> {
        let mut zh = self.fft.forward(z);
        for (v, l) in zh.iter_mut().zip(&self.eig) {
            *v /= l;
        }
        self.fft.inverse_real(zh)
    }
}

/// Solve `C x = z` for the circulant `C` with first row `c`.
pub fn circulant_solve(c: &[f64], z: &[f64]) -> Result<Vec<f64>> {
    if c.len() != z.len() {
        return invalid("circulant and right-hand side sizes differ");
    }
    Ok(CirculantFactor::new(c)?.solve(z))
}

/// `C x` computed in Fourier space.
pub fn circulant_matvec_fft(c: &[f64], x: &[f64]) -> Vec<f64> {
    let fft = FftPair::new(c.len());
    let eig = fft.eigenvalues(c);
    let mut xh = fft.forward(x);
    for (v, l) in xh.iter_mut().zip(&eig) {
        *v *= l;
    }
    fft.inverse_real(xh)
}

/// Fourier-space factorization of `M = [[A, B], [B, A]]` with circulant `A`, `B`.
#[derive(Debug, Clone)]
pub struct BlockCirculantFactor {
    fft: FftPair,
    da: Vec<Complex64>,
    db: Vec<Complex64>,
    schur: Vec<Complex64>,
}

impl BlockCirculantFactor {
    pub fn new(a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return invalid("block circulant needs two first rows of equal, nonzero length");
        }
        let fft = FftPair::new(a.len());
        let da = fft.eigenvalues(a);
        let db = fft.eigenvalues(b);
        check_spectrum(&da)?;
        // D_B D_A^{-1} D_B - D_A
        let schur: Vec<Complex64> = da.iter().zip(&db).map(|(a, b)| b * b / a - a).collect();
        let max = schur.iter().fold(0.0f64, |m, s| m.max(s.norm()));
        if let Some(index) = schur
            .iter()
            .position(|s| s.norm() <= SINGULARITY_THRESHOLD * max || max == 0.0)
        {
            return Err(FemError::SingularSchur { index });
        }
        Ok(Self { fft, da, db, schur })
    }

    pub fn n(&self) -> usize {
        self.da.len()
    }

    /// Solve `A x + B y = z1`, `B x + A y = z2`.
    pub fn solve(&self, z1: &[f64], z2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let z1h = self.fft.forward(z1);
        let z2h = self.fft.forward(z2);
        let mut xh = Vec::with_capacity(z1h.len());
        let mut yh = Vec::with_capacity(z1h.len());
        for m in 0..z1h.len() {
            let (a, b) = (self.da[m], self.db[m]);
            let y = (b / a * z1h[m] - z2h[m]) / self.schur[m];
            let x = (z1h[m] - b * y) / a;
            xh.push(x);
            yh.push(y);
        }
        (self.fft.inverse_real(xh), self.fft.inverse_real(yh))
    }
}

/// Solve `[[A, B], [B, A]] (x, y) = (z1, z2)` for circulant `A`, `B` given
/// by their first rows. With `z2 = 0` this is the classical
/// `y = (D_B D_A^{-1} D_B - D_A)^{-1} D_B D_A^{-1} z`, `x = D_A^{-1}(z - D_B y)`
/// evaluated frequency by frequency.
pub fn block_circulant_solve(
    a: &[f64],
    b: &[f64],
    z1: &[f64],
    z2: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if z1.len() != a.len() || z2.len() != a.len() {
        return invalid("right-hand side size does not match the blocks");
    }
    Ok(BlockCirculantFactor::new(a, b)?.solve(z1, z2))
}
