use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rlwfem::experiments::{run, Command, Domain, RunConfig};
use rlwfem::FemError;

/// Finite element experiments for the regularized long wave equation.
/// Results are written as CSV.
#[derive(Debug, Parser)]
#[command(name = "rlwfem", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Rates of ||P[(Pu - u)_x]|| for u = sin(2 pi x).
    DichotomyRates(Opts),
    /// Manufactured-solution convergence of the forced RLW scheme.
    RlwConverge(Opts),
    /// Invariant drift of a single Gaussian-pulse run.
    Conserve(Opts),
    /// Rates of the maximum impulse error of relaxed Gaussian-pulse runs.
    ImpulseRates(Opts),
}

#[derive(Debug, Args)]
struct Opts {
    /// Polynomial degrees, comma separated.
    #[arg(long = "k", value_delimiter = ',')]
    k: Option<Vec<usize>>,
    /// Cell counts, comma separated.
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Periodic domain `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<Domain>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<f64>,
    #[arg(long = "t-end", allow_hyphen_values = true)]
    t_end: Option<f64>,
    /// Energy relaxation (default on for pulse runs).
    #[arg(long, overrides_with = "no_relax")]
    relax: bool,
    #[arg(long = "no-relax", overrides_with = "relax")]
    no_relax: bool,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the full published parameters instead of desk-scale defaults.
    #[arg(long = "paper-scale")]
    paper_scale: bool,
    /// Keep every n-th step in time series.
    #[arg(long = "record-every")]
    record_every: Option<usize>,
}

fn config(command: Command, o: Opts) -> RunConfig {
    let mut cfg = RunConfig::new(command, o.paper_scale);
    if let Some(k) = o.k {
        cfg.ks = k;
    }
    cfg.ns = o.n;
    cfg.domain = o.domain;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    cfg.relaxation = !o.no_relax;
    if let Some(r) = o.record_every {
        cfg.record_every = r;
    }
    cfg.out = o.out;
    cfg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Sub::DichotomyRates(o) => (Command::DichotomyRates, o),
        Sub::RlwConverge(o) => (Command::RlwConverge, o),
        Sub::Conserve(o) => (Command::Conserve, o),
        Sub::ImpulseRates(o) => (Command::ImpulseRates, o),
    };
    let cfg = config(command, opts);
    let table = match run(&cfg) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let text = table.render();
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

fn fail(e: &FemError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_numerical() { 3 } else { 2 })
}
