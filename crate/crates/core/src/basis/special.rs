//! The polynomial `psi` and the bubble functions that generate the
//! node-value / bubble splitting of the Lagrange space.
//!
//! `psi` is stored through its Leibniz expansion
//! `psi(x) = sum_j c_j x^(k-j) (1-x)^j`, `j = 0..k-1`, whose coefficients are
//! computed once in exact rational arithmetic. The expansion has no
//! removable singularity at the endpoints and is defined for every degree.

use num_rational::Ratio;

use crate::error::{invalid, Result};

/// Leibniz-sum representation of `psi` for a fixed degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiPolynomial {
    degree: usize,
    coeffs: Vec<f64>,
}

impl PsiPolynomial {
    /// Builds the expansion for any degree `k >= 1` (even degrees included).
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return invalid("psi needs degree >= 1");
        }
        if k > 20 {
            return invalid("psi coefficients overflow exact arithmetic beyond degree 20");
        }
        let fact = |n: usize| -> i128 { (1..=n as i128).product() };
        let binom = |n: usize, r: usize| -> i128 { fact(n) / (fact(r) * fact(n - r)) };
        let coeffs = (0..k)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let c = Ratio::new(
                    sign * binom(k - 1, j) * fact(k + 1),
                    fact(k + 1 - j) * fact(j + 1),
                );
                *c.numer() as f64 / *c.denom() as f64
            })
            .collect();
        Ok(Self { degree: k, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients `c_j` of `x^(k-j) (1-x)^j`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self, x: f64) -> f64 {
        let k = self.degree as i32;
        let y = 1.0 - x;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * x.powi(k - j as i32) * y.powi(j as i32))
            .sum()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let k = self.degree as i32;
        let y = 1.0 - x;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let j = j as i32;
                let left = if k - j > 0 {
                    (k - j) as f64 * x.powi(k - j - 1) * y.powi(j)
                } else {
                    0.0
                };
                let right = if j > 0 {
                    j as f64 * x.powi(k - j) * y.powi(j - 1)
                } else {
                    0.0
                };
                c * (left - right)
            })
            .sum()
    }
}

fn check_psi_args(k: usize, x: f64) -> Result<()> {
    if k % 2 == 0 {
        return invalid(format!("psi is only used for odd degree, got k = {k}"));
    }
    if !(0.0..=1.0).contains(&x) {
        return invalid(format!("psi argument {x} outside [0, 1]"));
    }
    Ok(())
}

/// `psi(x)` for odd degree `k`.
pub fn psi(k: usize, x: f64) -> Result<f64> {
    check_psi_args(k, x)?;
    Ok(PsiPolynomial::new(k)?.value(x))
}

/// `psi'(x)` for odd degree `k`.
pub fn psi_prime(k: usize, x: f64) -> Result<f64> {
    check_psi_args(k, x)?;
    Ok(PsiPolynomial::new(k)?.derivative(x))
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Bubble `x (1 - x) b_{k-2, j-1}(x)` with `b` the Bernstein polynomials of degree `k - 2`.
pub fn bubble_basis(k: usize, j: usize, x: f64) -> Result<f64> {
    if k < 2 {
        return invalid(format!("bubble functions need degree >= 2, got {k}"));
    }
    if j == 0 || j > k - 1 {
        return invalid(format!("bubble index {j} outside 1..={}", k - 1));
    }
    let bern = binomial(k - 2, j - 1) * x.powi(j as i32 - 1) * (1.0 - x).powi((k - 1 - j) as i32);
    Ok(x * (1.0 - x) * bern)
}
