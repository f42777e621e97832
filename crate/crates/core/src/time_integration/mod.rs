//! Explicit Runge–Kutta stepping with optional energy relaxation.
//!
//! With relaxation the step `y + dt d` is replaced by `y + gamma dt d`, with
//! `gamma` chosen so the energy of the new state equals the old one, and
//! time advances by `gamma dt`.

mod gamma;

pub use gamma::{energy_polynomial, solve_gamma, GammaSolution};

use crate::error::{invalid, Result};
use crate::rlw::{Invariants, RlwState, RlwSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl ButcherTableau {
    /// Validates an explicit tableau: `a` strictly lower triangular,
    /// `sum b = 1` and `c_i = sum_j a_ij`.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let s = b.len();
        if s == 0 || a.len() != s || c.len() != s || a.iter().any(|r| r.len() != s) {
            return invalid("tableau dimensions are inconsistent");
        }
        for (i, row) in a.iter().enumerate() {
            if row[i..].iter().any(|&v| v != 0.0) {
                return invalid("tableau is not explicit");
            }
            if (row.iter().sum::<f64>() - c[i]).abs() > 1e-14 {
                return invalid(format!("row sum of stage {i} differs from c"));
            }
        }
        if (b.iter().sum::<f64>() - 1.0).abs() > 1e-14 {
            return invalid("weights do not sum to one");
        }
        Ok(Self { a, b, c })
    }

    pub fn rk4() -> Self {
        Self::new(
            vec![
                vec![0.0; 4],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 0.5, 1.0],
        )
        .expect("classical tableau is valid")
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }
}

impl Default for ButcherTableau {
    fn default() -> Self {
        Self::rk4()
    }
}

/// Update direction `d = sum_i b_i f_i` of one step, split into blocks.
#[derive(Debug, Clone)]
pub struct Direction {
    pub du: Vec<f64>,
    pub dw: Vec<f64>,
}

/// One explicit step: returns the direction `d` so that `y + dt d` is the
/// standard update.
pub fn rk_step(sys: &RlwSystem, tab: &ButcherTableau, y: &RlwState, dt: f64) -> Result<Direction> {
    if !(dt > 0.0) {
        return invalid(format!("time step must be positive, got {dt}"));
    }
    let n = y.u.coeffs().len();
    let s = tab.stages();
    let mut fu: Vec<Vec<f64>> = Vec::with_capacity(s);
    let mut fw: Vec<Vec<f64>> = Vec::with_capacity(s);
    for i in 0..s {
        let mut stage = y.clone();
        stage.t = y.t + tab.c[i] * dt;
        for (j, aij) in tab.a[i][..i].iter().enumerate() {
            if *aij == 0.0 {
                continue;
            }
            for (c, d) in stage.u.coeffs_mut().iter_mut().zip(&fu[j]) {
                *c += dt * aij * d;
            }
            for (c, d) in stage.w.coeffs_mut().iter_mut().zip(&fw[j]) {
                *c += dt * aij * d;
            }
        }
        let (du, dw) = sys.ode_rhs(&stage)?;
        fu.push(du);
        fw.push(dw);
    }
    let mut d = Direction {
        du: vec![0.0; n],
        dw: vec![0.0; n],
    };
    for (i, bi) in tab.b.iter().enumerate() {
        for (acc, v) in d.du.iter_mut().zip(&fu[i]) {
            *acc += bi * v;
        }
        for (acc, v) in d.dw.iter_mut().zip(&fw[i]) {
            *acc += bi * v;
        }
    }
    Ok(d)
}

/// Snapshot taken after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub gamma: f64,
    pub invariants: Invariants,
    pub newton_iters: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_end: f64,
    pub relaxation: bool,
    /// Record every this many accepted steps; the first and last states are
    /// always recorded.
    pub record_every: usize,
}

/// Integrate from `y0` to `t_end`. The last step is shortened so the
/// unrelaxed trajectory lands on `t_end`; with relaxation the final time is
/// within one step of it.
pub fn evolve(
    sys: &RlwSystem,
    tab: &ButcherTableau,
    y0: RlwState,
    opts: EvolveOptions,
) -> Result<(Vec<StepRecord>, RlwState)> {
    let EvolveOptions {
        dt,
        t_end,
        relaxation,
        record_every,
    } = opts;
    if !(dt > 0.0) {
        return invalid(format!("time step must be positive, got {dt}"));
    }
    if !(t_end > y0.t) {
        return invalid("final time must exceed the initial time");
    }
    if record_every == 0 {
        return invalid("record stride must be at least one");
    }
    if relaxation && sys.is_forced() {
        return invalid("relaxation conserves energy and cannot be combined with forcing");
    }
    let mut y = y0;
    let mut records = vec![StepRecord {
        step: 0,
        t: y.t,
        gamma: 1.0,
        invariants: sys.functionals(&y),
        newton_iters: 0,
    }];
    let mut step = 0;
    while t_end - y.t > 1e-6 * dt {
        let h = dt.min(t_end - y.t);
        let d = rk_step(sys, tab, &y, h)?;
        let (gamma, iters) = if relaxation {
            let g = solve_gamma(sys, &y, &d, h)?;
            (g.gamma, g.newton_iters)
        } else {
            (1.0, 0)
        };
        y = y.axpy(gamma * h, &d.du, &d.dw, y.t + gamma * h);
        step += 1;
        let last = t_end - y.t <= 1e-6 * dt;
        if step % record_every == 0 || last {
            records.push(StepRecord {
                step,
                t: y.t,
                gamma,
                invariants: sys.functionals(&y),
                newton_iters: iters,
            });
        }
    }
    Ok((records, y))
}
