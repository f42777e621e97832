use crate::error::{invalid, Result};

/// Quadrature rule on the reference cell `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        2 * self.points.len() - 1
    }

    /// Integral of `f` over `[lo, hi]`.
    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let len = hi - lo;
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(lo + len * t))
            .sum::<f64>()
            * len
    }
}

/// Gauss–Legendre rule with `n_points` nodes, mapped to `[0, 1]`.
///
/// Nodes are found by Newton iteration on the Legendre recurrence; weights
/// follow from `2 / ((1 - x^2) P_n'(x)^2)` on `[-1, 1]`.
pub fn gauss_rule(n_points: usize) -> Result<QuadratureRule> {
    if n_points == 0 {
        return invalid("gauss rule needs at least one point");
    }
    let n = n_points;
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // symmetric pair on [-1, 1] mapped to [0, 1]
        points[i] = 0.5 * (1.0 - x);
        points[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.5;
    }
    Ok(QuadratureRule { points, weights })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
