//! Structured solvers: FFT-diagonalized circulants, the block-circulant
//! system `[[A, B], [B, A]]`, and a direct periodic banded factorization
//! for the general case.

mod banded;
mod block;
mod circulant;
mod dense;
mod matrix;

pub use banded::PeriodicBandedLu;
pub use block::{BlockSystem, SolverPath};
pub use circulant::{
    block_circulant_solve, circulant_matvec_fft, circulant_solve, BlockCirculantFactor,
    CirculantFactor, SINGULARITY_THRESHOLD,
};
pub use dense::DenseLu;
pub use matrix::{Factorization, StructuredMatrix};

/// Factor a periodic banded matrix (falls back to dense LU for dense storage).
pub fn periodic_banded_factor(m: &StructuredMatrix) -> crate::Result<Factorization> {
    m.factor()
}
