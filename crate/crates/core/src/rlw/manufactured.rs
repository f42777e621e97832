//! Exact solution `u = e^t sin(2 pi (x - 2t))` on `[0, 1]` and the source
//! term that makes it solve the forced equation.

use std::f64::consts::PI;

pub fn manufactured_solution(x: f64, t: f64) -> f64 {
    t.exp() * (2.0 * PI * (x - 2.0 * t)).sin()
}

pub fn manufactured_solution_dx(x: f64, t: f64) -> f64 {
    2.0 * PI * t.exp() * (2.0 * PI * (x - 2.0 * t)).cos()
}

/// `f = u_t + u_x + u u_x - u_xxt` for the manufactured solution.
pub fn manufactured_forcing(x: f64, t: f64) -> f64 {
    let e = t.exp();
    let (s, c) = (2.0 * PI * (x - 2.0 * t)).sin_cos();
    let ut = e * (s - 4.0 * PI * c);
    let ux = 2.0 * PI * e * c;
    let uxxt = -4.0 * PI * PI * ut;
    ut + ux + e * s * ux - uxxt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_value() {
        let expect = -2.0 * PI - 16.0 * PI.powi(3);
        assert!((manufactured_forcing(0.0, 0.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn periodic_in_space() {
        for &(x, t) in &[(0.1, 0.0), (0.37, 0.5), (0.9, 1.0)] {
            let d = manufactured_forcing(x + 1.0, t) - manufactured_forcing(x, t);
            assert!(d.abs() < 1e-10 * manufactured_forcing(x, t).abs().max(1.0));
        }
    }
}
