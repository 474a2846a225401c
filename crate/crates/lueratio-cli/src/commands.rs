use lueratio::hankel::{self, default_precision};
use lueratio::limitdist;
use lueratio::montecarlo::{self, Plan};
use lueratio::painleve::SystemParams;
use rayon::prelude::*;

use crate::cache::{solve_cached, SolveKey, TrajectoryCache};
use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;
use crate::output::{self, Cell, Table};
use crate::validate;

/// Default right end of a trajectory when no --s grid is given.
pub const DEFAULT_X_MAX: f64 = 100.0;

/// Executes a validated config, writing its artifact.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let bytes = match cfg.command {
        Command::Painleve => painleve(cfg)?,
        Command::Validate => return validate_all(cfg),
        _ => output::render(cfg, &table(cfg)?)?,
    };
    output::emit(cfg.output_path.as_deref(), &bytes)
}

/// The rows of a tabular command, in grid order.
pub fn table(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.command {
        Command::LimitQ => limit_q(cfg),
        Command::HardEdge => hard_edge(cfg),
        Command::FiniteN => finite_n(cfg),
        Command::Mc => mc(cfg),
        Command::Painleve | Command::Validate => unreachable!("not a tabular command"),
    }
}

fn painleve(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let params = SystemParams::new(cfg.alpha, cfg.r[0])?;
    let x_max = cfg.s.last().copied().unwrap_or(DEFAULT_X_MAX);
    let key = SolveKey::new(params, x_max, cfg.tol, cfg.mode);
    let cache = cfg.cache_dir.as_ref().map(TrajectoryCache::new);
    let (traj, _hit) = solve_cached(&key, cache.as_ref())?;
    match cfg.format {
        Format::Json => {
            let v = serde_json::to_value(&traj).map_err(|e| CliError::io("json buffer", e))?;
            output::json_document(cfg, "trajectory", v)
        }
        Format::Csv => {
            let mut t = Table::new(&["x", "q1", "dq1", "q2", "dq2", "v"]);
            for s in &traj.nodes {
                t.push([s.x, s.q1, s.dq1, s.q2, s.dq2, s.v].map(Cell::Float).to_vec());
            }
            t.to_csv()
        }
    }
}

fn limit_q(cfg: &RunConfig) -> Result<Table, CliError> {
    let vals: Vec<_> = cfg.r.par_iter().map(|&r| limitdist::q_limit(r, cfg.alpha, cfg.tol)).collect::<Result<_, _>>()?;
    let mut t = Table::new(&["r", "q", "err"]);
    for (&r, v) in cfg.r.iter().zip(vals) {
        t.push(vec![Cell::Float(r), Cell::Float(v.value), Cell::Float(v.abs_err_estimate)]);
    }
    Ok(t)
}

fn hard_edge(cfg: &RunConfig) -> Result<Table, CliError> {
    let vals = limitdist::f_hard_edge_curve(&cfg.x, cfg.alpha, cfg.tol)?;
    let mut t = Table::new(&["x", "f", "err"]);
    for (&x, v) in cfg.x.iter().zip(vals) {
        t.push(vec![Cell::Float(x), Cell::Float(v.value), Cell::Float(v.abs_err_estimate)]);
    }
    Ok(t)
}

fn finite_n(cfg: &RunConfig) -> Result<Table, CliError> {
    let grid: Vec<(usize, f64)> = cfg.n.iter().flat_map(|&n| cfg.r.iter().map(move |&r| (n, r))).collect();
    let vals: Vec<_> = grid
        .par_iter()
        .map(|&(n, r)| {
            let p = cfg.precision_bits.unwrap_or_else(|| default_precision(n));
            hankel::q_finite(n, cfg.alpha, r, p, cfg.tol)
        })
        .collect::<Result<_, _>>()?;
    let mut t = Table::new(&["n", "r", "q", "err"]);
    for (&(n, r), v) in grid.iter().zip(vals) {
        t.push(vec![Cell::Int(n as u64), Cell::Float(r), Cell::Float(v.value), Cell::Float(v.abs_err_estimate)]);
    }
    Ok(t)
}

fn mc(cfg: &RunConfig) -> Result<Table, CliError> {
    let ratio = !cfg.r.is_empty();
    let mut t = Table::new(&[if ratio { "r" } else { "x" }, "p_hat", "stderr", "n", "alpha", "num_samples", "seed"]);
    for &n in &cfg.n {
        let plan = Plan { n, alpha: cfg.alpha, num_samples: cfg.samples, seed: cfg.seed, backend: cfg.backend, workers: cfg.workers };
        let rows: Vec<(f64, f64, f64)> = if ratio {
            montecarlo::estimate_ratio_with(&plan, &cfg.r)?.iter().map(|e| (e.r, e.p_hat, e.stderr)).collect()
        } else {
            montecarlo::estimate_hard_edge_with(&plan, &cfg.x)?.iter().map(|e| (e.x, e.p_hat, e.stderr)).collect()
        };
        for (g, p, se) in rows {
            t.push(vec![
                Cell::Float(g),
                Cell::Float(p),
                Cell::Float(se),
                Cell::Int(n as u64),
                Cell::Float(cfg.alpha),
                Cell::Int(cfg.samples as u64),
                Cell::Int(cfg.seed),
            ]);
        }
    }
    Ok(t)
}

/// Prints one line per criterion and fails with exit code 4 on any FAIL.
fn validate_all(cfg: &RunConfig) -> Result<(), CliError> {
    let ids: Vec<usize> = if cfg.criteria.is_empty() { (1..=validate::COUNT).collect() } else { cfg.criteria.clone() };
    let mut t = Table::new(&["criterion", "passed", "seconds"]);
    let mut failed = 0;
    for id in ids {
        let o = validate::run_criterion(id);
        println!("{}", o.line());
        failed += usize::from(!o.passed);
        t.push(vec![Cell::Int(id as u64), Cell::Bool(o.passed), Cell::Float(o.seconds)]);
    }
    if let Some(path) = cfg.output_path.as_deref() {
        output::emit(Some(path), &output::render(cfg, &t)?)?;
    }
    if failed > 0 {
        return Err(CliError::Validation(failed));
    }
    Ok(())
}
