use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::csv::CsvTable;
use super::PulseConfig;
use crate::error::{invalid, FemError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    DichotomyRates,
    RlwConverge,
    Conserve,
    ImpulseRates,
}

impl Command {
    pub const ALL: [Command; 4] = [
        Command::DichotomyRates,
        Command::RlwConverge,
        Command::Conserve,
        Command::ImpulseRates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::DichotomyRates => "dichotomy-rates",
            Command::RlwConverge => "rlw-converge",
            Command::Conserve => "conserve",
            Command::ImpulseRates => "impulse-rates",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = FemError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| FemError::InvalidArgument(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub a: f64,
    pub b: f64,
}

impl Domain {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }
}

impl FromStr for Domain {
    type Err = FemError;

    /// Parses `a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || FemError::InvalidArgument(format!("domain must be `a,b`, got `{s}`"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let a = parts[0].parse().map_err(|_| bad())?;
        let b = parts[1].parse().map_err(|_| bad())?;
        Ok(Self { a, b })
    }
}

/// Time step selection for manufactured-solution runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtPolicy {
    Fixed(f64),
    /// `min(0.2 h^((k+1)/4), h/8)`, so that `dt^4` stays well below `h^(k+1)`.
    Scaled,
}

impl DtPolicy {
    /// Step for degree `k` and mesh size `h`, shortened so that `[0, 1]`
    /// splits into a whole number of steps.
    pub fn dt(&self, k: usize, h: f64) -> f64 {
        let raw = match *self {
            DtPolicy::Fixed(dt) => dt,
            DtPolicy::Scaled => (0.2 * h.powf((k as f64 + 1.0) / 4.0)).min(h / 8.0),
        };
        1.0 / (1.0 / raw - 1e-9).ceil()
    }

    pub fn describe(&self) -> String {
        match self {
            DtPolicy::Fixed(dt) => format!("fixed {dt}"),
            DtPolicy::Scaled => "min(0.2*h^((k+1)/4), h/8) rounded to divide T".to_string(),
        }
    }
}

/// Everything a command needs. Unset options fall back to per-command
/// defaults, desk scale unless `paper_scale` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub ks: Vec<usize>,
    pub ns: Option<Vec<usize>>,
    pub domain: Option<Domain>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub relaxation: bool,
    pub record_every: usize,
    pub out: Option<PathBuf>,
    pub paper_scale: bool,
    /// Reserved; every command is deterministic.
    pub seed: u64,
}

/// Grids of the published dichotomy table.
pub fn dichotomy_grids(k: usize) -> Vec<usize> {
    match k {
        1..=4 => vec![10, 20, 50, 100, 200],
        5 | 6 => vec![5, 10, 15, 20, 25],
        _ => vec![2, 4, 8, 10, 20],
    }
}

impl RunConfig {
    pub fn new(command: Command, paper_scale: bool) -> Self {
        let ks = match command {
            Command::DichotomyRates => (1..=7).collect(),
            Command::RlwConverge => (1..=6).collect(),
            Command::Conserve => vec![1],
            Command::ImpulseRates if paper_scale => vec![1, 2, 3, 4],
            Command::ImpulseRates => vec![1, 2, 3],
        };
        Self {
            command,
            ks,
            ns: None,
            domain: None,
            dt: None,
            t_end: None,
            relaxation: true,
            record_every: 1,
            out: None,
            paper_scale,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ks.is_empty() || self.ks.iter().any(|&k| k == 0 || k > 20) {
            return invalid("degrees must lie in 1..=20");
        }
        if let Some(ns) = &self.ns {
            if ns.is_empty() || ns.contains(&0) {
                return invalid("grid sizes must be positive");
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return invalid("dt must be positive");
            }
        }
        if let Some(t) = self.t_end {
            if !(t > 0.0 && t.is_finite()) {
                return invalid("t-end must be positive");
            }
        }
        if let Some(d) = self.domain {
            if !(d.b > d.a && d.a.is_finite() && d.b.is_finite()) {
                return invalid("domain must satisfy a < b");
            }
        }
        if self.record_every == 0 {
            return invalid("record-every must be at least one");
        }
        match self.command {
            Command::DichotomyRates | Command::RlwConverge => {
                if self.domain.is_some_and(|d| d != Domain::new(0.0, 1.0)) {
                    return invalid(format!("{} runs on [0,1]", self.command));
                }
                if self.command == Command::RlwConverge && self.t_end.is_some_and(|t| t != 1.0) {
                    return invalid("the manufactured solution is compared at t = 1");
                }
            }
            Command::Conserve => {
                if self.ks.len() != 1 || self.ns.as_ref().is_some_and(|n| n.len() != 1) {
                    return invalid("conserve takes a single k and a single N");
                }
            }
            Command::ImpulseRates => {}
        }
        if !self.relaxation && self.command == Command::ImpulseRates {
            return invalid("impulse-rates uses relaxed runs");
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        self.domain.unwrap_or(match self.command {
            Command::DichotomyRates | Command::RlwConverge => Domain::new(0.0, 1.0),
            Command::Conserve if self.paper_scale => Domain::new(-100.0, 100.0),
            _ => Domain::new(-50.0, 50.0),
        })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
            .unwrap_or(match (self.command, self.paper_scale) {
                (Command::Conserve, true) => 100.0,
                (Command::Conserve, false) => 20.0,
                (Command::ImpulseRates, true) => 10.0,
                (Command::ImpulseRates, false) => 5.0,
                _ => 1.0,
            })
    }

    pub fn dt_policy(&self) -> DtPolicy {
        self.dt.map_or(DtPolicy::Scaled, DtPolicy::Fixed)
    }

    /// Cell counts used for degree `k`.
    pub fn grids(&self, k: usize) -> Vec<usize> {
        if let Some(ns) = &self.ns {
            return ns.clone();
        }
        let len = self.domain().len();
        match (self.command, self.paper_scale) {
            (Command::DichotomyRates, _) => dichotomy_grids(k),
            (Command::RlwConverge, false) if k <= 3 => vec![16, 32, 64, 128],
            (Command::RlwConverge, false) => vec![8, 16, 32],
            (Command::RlwConverge, true) if k <= 3 => vec![16, 32, 64, 128, 256],
            (Command::RlwConverge, true) => vec![8, 16, 32, 64],
            (Command::Conserve, _) => vec![(len / 0.1).round() as usize],
            // h = 1/N per unit length
            (Command::ImpulseRates, true) if k == 4 => [100, 200, 400, 500, 800]
                .iter()
                .map(|&n| (len * n as f64).round() as usize)
                .collect(),
            (Command::ImpulseRates, true) => [100, 200, 500, 800, 1000]
                .iter()
                .map(|&n| (len * n as f64).round() as usize)
                .collect(),
            (Command::ImpulseRates, false) => desk_impulse_grids(k, len),
        }
    }

    /// Time step of a Gaussian-pulse run on `n` cells.
    pub fn impulse_dt(&self, k: usize, n: usize) -> f64 {
        if let Some(dt) = self.dt {
            return dt;
        }
        if self.paper_scale {
            let finest = self.grids(k).into_iter().max() == Some(n);
            return match k {
                3 if finest => 0.001,
                k if k >= 4 => 0.0005,
                _ => 0.01,
            };
        }
        desk_impulse_dt(k)
    }

    pub fn pulse_config(&self) -> Result<PulseConfig> {
        let k = self.ks[0];
        Ok(PulseConfig {
            k,
            n_cells: self.grids(k)[0],
            domain: self.domain(),
            dt: self.dt.unwrap_or(0.01),
            t_end: self.t_end(),
            relaxation: self.relaxation,
            record_every: self.record_every,
        })
    }

    /// Writes the resolved configuration as comment lines.
    pub fn echo(&self, table: &mut CsvTable) {
        let list = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let d = self.domain();
        table.comment(format!("command = {}", self.command));
        table.comment(format!("k = {}", list(&self.ks)));
        for &k in &self.ks {
            table.comment(format!("N[k={k}] = {}", list(&self.grids(k))));
        }
        table.comment(format!("domain = {},{}", d.a, d.b));
        match self.command {
            Command::Conserve => {
                table.comment(format!("dt = {}", self.dt.unwrap_or(0.01)));
            }
            Command::ImpulseRates => {
                for &k in &self.ks {
                    let dts: Vec<String> = self
                        .grids(k)
                        .iter()
                        .map(|&n| self.impulse_dt(k, n).to_string())
                        .collect();
                    table.comment(format!("dt[k={k}] = {}", dts.join(",")));
                }
            }
            Command::RlwConverge => {
                let dt = self.dt.map_or("policy".to_string(), |d| d.to_string());
                table.comment(format!("dt = {dt}"));
            }
            Command::DichotomyRates => {}
        }
        table.comment(format!("t_end = {}", self.t_end()));
        let relax =
            matches!(self.command, Command::Conserve | Command::ImpulseRates) && self.relaxation;
        table.comment(format!("relaxation = {relax}"));
        table.comment(format!("record_every = {}", self.record_every));
        table.comment(format!("paper_scale = {}", self.paper_scale));
        table.comment(format!("seed = {}", self.seed));
        if let Some(out) = &self.out {
            table.comment(format!("out = {}", out.display()));
        }
    }
}

/// Desk-scale impulse grids: mesh sizes chosen so the error is in its
/// asymptotic range and well above rounding.
fn desk_impulse_grids(k: usize, len: f64) -> Vec<usize> {
    let hs: &[f64] = match k {
        1 | 2 => &[0.4, 0.2, 0.1],
        _ => &[0.5, 0.25, 0.125],
    };
    hs.iter().map(|h| (len / h).round() as usize).collect()
}

// time error must stay below the 2k-order impulse error on the finest grid
fn desk_impulse_dt(k: usize) -> f64 {
    match k {
        1 | 2 => 0.01,
        _ => 0.0025,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_domain_and_command() {
        let d: Domain = "-50, 50".parse().unwrap();
        assert_eq!(d, Domain::new(-50.0, 50.0));
        assert!("1".parse::<Domain>().is_err());
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
    }

    #[test]
    fn scaled_policy_divides_unit_interval() {
        for k in 1..=6 {
            for n in [8, 16, 128] {
                let dt = DtPolicy::Scaled.dt(k, 1.0 / n as f64);
                let steps = 1.0 / dt;
                assert!((steps - steps.round()).abs() < 1e-9);
                assert!(dt <= 1.0 / (8.0 * n as f64) + 1e-15);
            }
        }
    }

    #[test]
    fn conserve_defaults() {
        let c = RunConfig::new(Command::Conserve, false)
            .pulse_config()
            .unwrap();
        assert_eq!((c.n_cells, c.dt, c.t_end), (1000, 0.01, 20.0));
        let p = RunConfig::new(Command::Conserve, true)
            .pulse_config()
            .unwrap();
        assert_eq!((p.n_cells, p.t_end), (2000, 100.0));
    }
}
