use crate::basis::RuleKind;
use crate::error::{FemError, Result};
use crate::rlw::{energy, RlwState, RlwSystem};

use super::Direction;

const MAX_NEWTON: usize = 8;
const MAX_DEVIATION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSolution {
    pub gamma: f64,
    pub newton_iters: usize,
    /// `|E(y + gamma dt d) - E(y)|` after polishing.
    pub residual: f64,
}

/// Coefficients of `E(u + eps d) - E(u) = a1 eps + a2 eps^2 + a3 eps^3`.
pub fn energy_polynomial(sys: &RlwSystem, u: &[f64], du: &[f64]) -> (f64, f64, f64) {
    let s = sys.space();
    let tab = s.rule(RuleKind::Nonlinear);
    let nq = tab.rule().len();
    let w = tab.rule().weights();
    let (mut uv, mut dv, mut scratch) = (vec![0.0; nq], vec![0.0; nq], vec![0.0; nq]);
    let (mut a1, mut a2, mut a3) = (0.0, 0.0, 0.0);
    for c in 0..s.n_cells() {
        s.cell_values(RuleKind::Nonlinear, u, c, &mut uv, &mut scratch);
        s.cell_values(RuleKind::Nonlinear, du, c, &mut dv, &mut scratch);
        for q in 0..nq {
            let (v, d) = (uv[q], dv[q]);
            a1 += w[q] * (v + 0.5 * v * v) * d;
            a2 += w[q] * 0.5 * d * d * (1.0 + v);
            a3 += w[q] * d * d * d / 6.0;
        }
    }
    let h = s.h();
    (a1 * h, a2 * h, a3 * h)
}

/// Relaxation parameter restoring the energy of `y` along `d`.
///
/// The nontrivial roots of the cubic energy polynomial come from a stable
/// quadratic formula; the one nearest `gamma = 1` is polished by Newton on
/// the directly evaluated energy.
pub fn solve_gamma(sys: &RlwSystem, y: &RlwState, d: &Direction, dt: f64) -> Result<GammaSolution> {
    let u = y.u.coeffs();
    if d.du.iter().all(|v| *v == 0.0) {
        return Ok(GammaSolution {
            gamma: 1.0,
            newton_iters: 0,
            residual: 0.0,
        });
    }
    let (a1, a2, a3) = energy_polynomial(sys, u, &d.du);
    let candidates: Vec<f64> = if a3 == 0.0 {
        if a2 == 0.0 {
            return Err(FemError::NoRealRoot { discriminant: 0.0 });
        }
        vec![-a1 / a2]
    } else {
        let disc = a2 * a2 - 4.0 * a1 * a3;
        if disc < 0.0 {
            return Err(FemError::NoRealRoot { discriminant: disc });
        }
        let q = -0.5 * (a2 + a2.signum() * disc.sqrt());
        let mut r = vec![q / a3];
        if q != 0.0 {
            r.push(a1 / q);
        }
        r
    };
    let gamma0 = candidates
        .into_iter()
        .map(|eps| eps / dt)
        .min_by(|p, q| (p - 1.0).abs().total_cmp(&(q - 1.0).abs()))
        .expect("at least one candidate");
    if !(gamma0 > 0.0) || (gamma0 - 1.0).abs() > MAX_DEVIATION {
        return Err(FemError::RootRejected { gamma: gamma0 });
    }

    let space = sys.space();
    let e0 = energy(space, u);
    let tol = 1e-14 * e0.abs().max(1.0);
    let mut trial = u.to_vec();
    let g_of = |gamma: f64, trial: &mut Vec<f64>| {
        for ((t, a), b) in trial.iter_mut().zip(u).zip(&d.du) {
            *t = a + gamma * dt * b;
        }
        energy(space, trial) - e0
    };
    let mut gamma = gamma0;
    let mut g = g_of(gamma, &mut trial);
    let (mut best, mut best_g) = (gamma, g.abs());
    let mut iters = 0;
    while g.abs() > tol && iters < MAX_NEWTON {
        let slope = dt
            * space.integrate_fe_pair(RuleKind::Nonlinear, &trial, &d.du, |v, p| {
                (v + 0.5 * v * v) * p
            });
        if slope == 0.0 {
            break;
        }
        gamma -= g / slope;
        iters += 1;
        g = g_of(gamma, &mut trial);
        if g.abs() < best_g {
            best = gamma;
            best_g = g.abs();
        }
    }
    if !(best > 0.0) || (best - 1.0).abs() > MAX_DEVIATION {
        return Err(FemError::RootRejected { gamma: best });
    }
    Ok(GammaSolution {
        gamma: best,
        newton_iters: iters,
        residual: best_g,
    })
}
