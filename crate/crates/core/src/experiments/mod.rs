//! Reproducible numerical experiments: the odd/even dichotomy table, RLW
//! manufactured convergence, long-time conservation, and impulse accuracy.
//! Every command returns a [`CsvTable`] whose comment lines echo the
//! resolved configuration.

mod config;
mod csv;
mod rates;

use std::sync::Arc;

use rayon::prelude::*;

pub use config::{Command, Domain, DtPolicy, RunConfig};
pub use csv::{format_value, CsvTable};
pub use rates::{
    dichotomy_theory, fitted_rate, impulse_theory, pairwise_rates, rlw_theory, RateRow, RateTable,
};

use crate::basis::{l2_norm_error, FeSpace, PeriodicMesh};
use crate::error::{invalid, Result};
use crate::linalg::SolverPath;
use crate::projection::GramOperator;
use crate::rlw::{
    assemble_rlw, manufactured_forcing, manufactured_solution, manufactured_solution_dx,
    Invariants, RlwState,
};
use crate::time_integration::{evolve, ButcherTableau, EvolveOptions, StepRecord};

/// Initial elevation of the conservation and impulse runs.
pub fn gaussian(x: f64) -> f64 {
    (-x * x / 10.0).exp()
}

fn sine(x: f64) -> f64 {
    (2.0 * std::f64::consts::PI * x).sin()
}

/// `||P[(Pu - u)_x]||` on `[0, 1]` for each grid.
pub fn dichotomy_rates(
    k: usize,
    ns: &[usize],
    u: impl Fn(f64) -> f64 + Copy + Sync,
) -> Result<RateTable> {
    let errors = ns
        .par_iter()
        .map(|&n| {
            let space = FeSpace::new(PeriodicMesh::unit(n)?, k)?;
            Ok(GramOperator::new(&space)?.dichotomy_norm(u))
        })
        .collect::<Result<Vec<f64>>>()?;
    let hs: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    Ok(RateTable::new(
        k,
        "dichotomy",
        dichotomy_theory(k),
        ns,
        &hs,
        &errors,
    ))
}

/// Errors of a manufactured-solution run at `t = 1` for one `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RlwConvergence {
    pub k: usize,
    pub dts: Vec<f64>,
    /// `||u - u~||`.
    pub u: RateTable,
    /// `||u_x - w~||`.
    pub w: RateTable,
    /// `||u_x - u~_x||` with the broken derivative.
    pub ux: RateTable,
}

/// Forced RLW on `[0, 1]` up to `t = 1` without relaxation.
pub fn rlw_convergence(k: usize, ns: &[usize], policy: DtPolicy) -> Result<RlwConvergence> {
    let t_end = 1.0;
    let runs = ns
        .par_iter()
        .map(|&n| {
            let h = 1.0 / n as f64;
            let dt = policy.dt(k, h);
            if t_end / dt < 8.0 - 1e-9 {
                return invalid(format!("time step {dt} gives fewer than 8 steps"));
            }
            let space = FeSpace::new(PeriodicMesh::unit(n)?, k)?;
            let forcing: crate::rlw::Forcing = Arc::new(manufactured_forcing);
            let sys = assemble_rlw(&space, Some(forcing), SolverPath::Auto)?;
            let y0 = RlwState::from_initial(&sys, |x| manufactured_solution(x, 0.0))?;
            let opts = EvolveOptions {
                dt,
                t_end,
                relaxation: false,
                record_every: usize::MAX,
            };
            let (_, y) = evolve(&sys, &ButcherTableau::rk4(), y0, opts)?;
            let t = y.t;
            let ux = |x: f64| manufactured_solution_dx(x, t);
            let (eu, eux) = l2_norm_error(&y.u, |x| manufactured_solution(x, t), Some(&ux));
            let (ew, _) = l2_norm_error(&y.w, ux, None);
            Ok((dt, eu, ew, eux.expect("derivative error requested")))
        })
        .collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    let col = |f: fn(&(f64, f64, f64, f64)) -> f64| runs.iter().map(f).collect::<Vec<_>>();
    let theory = rlw_theory(k);
    Ok(RlwConvergence {
        k,
        dts: col(|r| r.0),
        u: RateTable::new(k, "u", theory, ns, &hs, &col(|r| r.1)),
        w: RateTable::new(k, "w", theory, ns, &hs, &col(|r| r.2)),
        ux: RateTable::new(k, "ux", k as f64, ns, &hs, &col(|r| r.3)),
    })
}

/// Parameters of a single Gaussian-pulse run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseConfig {
    pub k: usize,
    pub n_cells: usize,
    pub domain: Domain,
    pub dt: f64,
    pub t_end: f64,
    pub relaxation: bool,
    pub record_every: usize,
}

/// Records of a Gaussian-pulse run and drift summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseRun {
    pub records: Vec<StepRecord>,
    pub final_time: f64,
}

impl PulseRun {
    pub fn initial(&self) -> Invariants {
        self.records[0].invariants
    }

    fn max_dev(&self, f: impl Fn(&StepRecord) -> f64) -> f64 {
        let f0 = f(&self.records[0]);
        self.records
            .iter()
            .fold(0.0, |m, r| m.max((f(r) - f0).abs()))
    }

    pub fn max_mass_error(&self) -> f64 {
        self.max_dev(|r| r.invariants.mass)
    }

    pub fn max_impulse_error(&self) -> f64 {
        self.max_dev(|r| r.invariants.impulse)
    }

    pub fn max_energy_error(&self) -> f64 {
        self.max_dev(|r| r.invariants.energy)
    }

    pub fn max_gamma_deviation(&self) -> f64 {
        self.records
            .iter()
            .fold(0.0, |m, r| m.max((r.gamma - 1.0).abs()))
    }
}

/// Gaussian initial pulse, unforced, with or without relaxation.
pub fn pulse_run(cfg: &PulseConfig) -> Result<PulseRun> {
    let mesh = PeriodicMesh::new(cfg.domain.a, cfg.domain.b, cfg.n_cells)?;
    let space = FeSpace::new(mesh, cfg.k)?;
    let sys = assemble_rlw(&space, None, SolverPath::Auto)?;
    let y0 = RlwState::from_initial(&sys, gaussian)?;
    let opts = EvolveOptions {
        dt: cfg.dt,
        t_end: cfg.t_end,
        relaxation: cfg.relaxation,
        record_every: cfg.record_every,
    };
    let (records, y) = evolve(&sys, &ButcherTableau::rk4(), y0, opts)?;
    Ok(PulseRun {
        records,
        final_time: y.t,
    })
}

/// `max_n |I(t_n) - I(0)|` over every step, for each grid.
pub fn impulse_rates(
    k: usize,
    ns: &[usize],
    dts: &[f64],
    domain: Domain,
    t_end: f64,
) -> Result<RateTable> {
    if dts.len() != ns.len() {
        return invalid("one time step per grid is required");
    }
    let errors = ns
        .par_iter()
        .zip(dts)
        .map(|(&n, &dt)| {
            let run = pulse_run(&PulseConfig {
                k,
                n_cells: n,
                domain,
                dt,
                t_end,
                relaxation: true,
                record_every: 1,
            })?;
            Ok(run.max_impulse_error())
        })
        .collect::<Result<Vec<f64>>>()?;
    let hs: Vec<f64> = ns.iter().map(|&n| domain.len() / n as f64).collect();
    Ok(RateTable::new(
        k,
        "impulse",
        impulse_theory(k),
        ns,
        &hs,
        &errors,
    ))
}

fn rate_columns() -> CsvTable {
    CsvTable::new(&["k", "N", "h", "error", "rate", "theory"])
}

fn push_rates(table: &mut CsvTable, t: &RateTable) {
    for r in &t.rows {
        table.push(vec![
            Some(t.k as f64),
            Some(r.n as f64),
            Some(r.h),
            Some(r.error),
            r.rate,
            None,
        ]);
    }
    // theory row: error and grid columns left empty
    table.push(vec![
        Some(t.k as f64),
        None,
        None,
        None,
        None,
        Some(t.theory),
    ]);
}

pub fn cmd_dichotomy_rates(cfg: &RunConfig) -> Result<CsvTable> {
    let mut table = rate_columns();
    cfg.echo(&mut table);
    let tables = cfg
        .ks
        .par_iter()
        .map(|&k| dichotomy_rates(k, &cfg.grids(k), sine))
        .collect::<Result<Vec<_>>>()?;
    for t in &tables {
        push_rates(&mut table, t);
    }
    Ok(table)
}

pub fn cmd_rlw_convergence(cfg: &RunConfig) -> Result<CsvTable> {
    let mut table = CsvTable::new(&[
        "k", "N", "h", "dt", "err_u", "rate_u", "err_w", "rate_w", "err_ux", "rate_ux", "theory",
    ]);
    cfg.echo(&mut table);
    table.comment(format!("dt_policy = {}", cfg.dt_policy().describe()));
    let runs = cfg
        .ks
        .par_iter()
        .map(|&k| rlw_convergence(k, &cfg.grids(k), cfg.dt_policy()))
        .collect::<Result<Vec<_>>>()?;
    for run in &runs {
        for (m, r) in run.u.rows.iter().enumerate() {
            let (w, ux) = (&run.w.rows[m], &run.ux.rows[m]);
            table.push(vec![
                Some(run.k as f64),
                Some(r.n as f64),
                Some(r.h),
                Some(run.dts[m]),
                Some(r.error),
                r.rate,
                Some(w.error),
                w.rate,
                Some(ux.error),
                ux.rate,
                None,
            ]);
        }
        let mut theory = vec![None; 11];
        theory[0] = Some(run.k as f64);
        theory[10] = Some(run.u.theory);
        table.push(theory);
    }
    Ok(table)
}

pub fn cmd_conservation(cfg: &RunConfig) -> Result<CsvTable> {
    let pulse = cfg.pulse_config()?;
    let run = pulse_run(&pulse)?;
    let mut table = CsvTable::new(&[
        "t",
        "mass_err",
        "impulse_err",
        "energy_err",
        "gamma_minus_1",
    ]);
    cfg.echo(&mut table);
    let i0 = run.initial();
    for r in &run.records {
        let inv = r.invariants;
        table.push(vec![
            Some(r.t),
            Some((inv.mass - i0.mass).abs()),
            Some((inv.impulse - i0.impulse).abs()),
            Some((inv.energy - i0.energy).abs()),
            Some(r.gamma - 1.0),
        ]);
    }
    Ok(table)
}

pub fn cmd_impulse_rates(cfg: &RunConfig) -> Result<CsvTable> {
    let mut table = rate_columns();
    cfg.echo(&mut table);
    let domain = cfg.domain();
    let t_end = cfg.t_end();
    let tables = cfg
        .ks
        .par_iter()
        .map(|&k| {
            let ns = cfg.grids(k);
            let dts: Vec<f64> = ns.iter().map(|&n| cfg.impulse_dt(k, n)).collect();
            impulse_rates(k, &ns, &dts, domain, t_end)
        })
        .collect::<Result<Vec<_>>>()?;
    for t in &tables {
        push_rates(&mut table, t);
    }
    Ok(table)
}

/// Dispatch on the configured command.
pub fn run(cfg: &RunConfig) -> Result<CsvTable> {
    cfg.validate()?;
    match cfg.command {
        Command::DichotomyRates => cmd_dichotomy_rates(cfg),
        Command::RlwConverge => cmd_rlw_convergence(cfg),
        Command::Conserve => cmd_conservation(cfg),
        Command::ImpulseRates => cmd_impulse_rates(cfg),
    }
}
