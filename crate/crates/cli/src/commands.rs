//! One function per subcommand, each producing a CSV table.

use mixruin_core::{
    adjustment_exponential, adjustment_general, build_signed_kernel, conditional_model,
    estimate_ruin, mean_surplus, ruin_prob_mixed, solve_renewal, var_surplus, ModelSpec,
    RuinEstimate, SolverGrid, SolverSolution, DEFAULT_MIX_SAMPLES,
};
use mixruin_core::{Error, TailClosure};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

const DEFAULT_STEP: f64 = 0.01;
const DEFAULT_TOLERANCE: f64 = 1e-10;
const DEFAULT_MAX_ITERATIONS: usize = 100_000;

/// A finished table plus an optional human-readable summary for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    pub summary: Option<String>,
}

impl From<Table> for CommandOutput {
    fn from(table: Table) -> Self {
        Self {
            table,
            summary: None,
        }
    }
}

pub fn closed_form(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let values = closed_form_column(cfg)?;
    let mut table = Table::new(vec!["u", "psi_closed"]);
    for (u, psi) in cfg.u_grid.points().into_iter().zip(values) {
        table.push(vec![Cell::Num(u), Cell::Num(psi)]);
    }
    Ok(table.into())
}

pub fn solve(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let column = solver_column(cfg)?;
    let mut table = Table::new(vec!["u", "psi_solver", "residual"]);
    for (u, psi) in cfg.u_grid.points().into_iter().zip(column.values) {
        table.push(vec![Cell::Num(u), Cell::Num(psi), Cell::Num(column.residual)]);
    }
    Ok(table.into())
}

pub fn simulate(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let mut table = Table::new(vec!["u", "psi_mc", "ci_low", "ci_high", "n_paths", "seed"]);
    for (u, est) in cfg.u_grid.points().into_iter().zip(mc_column(cfg)?) {
        table.push(vec![
            Cell::Num(u),
            Cell::Num(est.estimate),
            Cell::Num(est.ci_low),
            Cell::Num(est.ci_high),
            Cell::Int(est.n_paths),
            Cell::Int(est.seed),
        ]);
    }
    Ok(table.into())
}

/// Cross-check of the three methods. Columns that do not apply to the model
/// are left out: the closed form needs exponential laws, the solver needs
/// `c > 0` and finitely many mixing atoms, simulation needs an `[mc]` section.
pub fn compare(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let closed = match closed_form_column(cfg) {
        Ok(v) => Some(v),
        Err(e) if e.code == crate::error::EXIT_UNSUPPORTED_LAW => None,
        Err(e) => return Err(e),
    };
    let solver = if cfg.model.c > 0.0 && cfg.model.mixing.atoms().is_some() {
        Some(solver_column(cfg)?.values)
    } else {
        None
    };
    let mc = match cfg.mc {
        Some(_) => Some(mc_column(cfg)?),
        None => None,
    };
    if closed.is_none() && solver.is_none() && mc.is_none() {
        return Err(CliError::out_of_scope(
            "nothing to compare: the closed form needs exponential laws, the solver needs c > 0 \
             and discrete mixing, and simulation needs an [mc] section",
        ));
    }

    let mut header = vec!["u"];
    if closed.is_some() {
        header.push("psi_closed");
    }
    if solver.is_some() {
        header.push("psi_solver");
    }
    if mc.is_some() {
        header.extend(["psi_mc", "ci_low", "ci_high"]);
    }
    let mut table = Table::new(header);
    let points = cfg.u_grid.points();
    let mut max_gap: f64 = 0.0;
    let mut covered = 0;
    for (i, &u) in points.iter().enumerate() {
        let mut row = vec![Cell::Num(u)];
        let reference = closed.as_ref().or(solver.as_ref()).map(|v| v[i]);
        if let Some(v) = &closed {
            row.push(Cell::Num(v[i]));
        }
        if let Some(v) = &solver {
            row.push(Cell::Num(v[i]));
        }
        if let (Some(c), Some(s)) = (&closed, &solver) {
            max_gap = max_gap.max((c[i] - s[i]).abs());
        }
        if let Some(est) = mc.as_ref().map(|m| m[i]) {
            row.extend([Cell::Num(est.estimate), Cell::Num(est.ci_low), Cell::Num(est.ci_high)]);
            if reference.is_some_and(|r| est.ci_low <= r && r <= est.ci_high) {
                covered += 1;
            }
        }
        table.push(row);
    }

    let mut parts = Vec::new();
    if closed.is_some() && solver.is_some() {
        parts.push(format!("max |closed - solver| = {max_gap:.3e}"));
    }
    if mc.is_some() && (closed.is_some() || solver.is_some()) {
        let name = if closed.is_some() { "closed form" } else { "solver" };
        parts.push(format!("MC 95% interval covers {name} at {covered}/{} nodes", points.len()));
    }
    Ok(CommandOutput {
        table,
        summary: (!parts.is_empty()).then(|| parts.join("; ")),
    })
}

/// `t,mean,variance` with the grid points used as times.
pub fn moments(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let mut table = Table::new(vec!["t", "mean", "variance"]);
    for t in cfg.u_grid.points() {
        let var = var_surplus(&cfg.model, t)?;
        table.push(vec![Cell::Num(t), Cell::Num(mean_surplus(&cfg.model, t)), Cell::Num(var)]);
    }
    Ok(table.into())
}

fn closed_form_column(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let samples = cfg.mix_samples.unwrap_or(DEFAULT_MIX_SAMPLES);
    cfg.u_grid
        .points()
        .into_iter()
        .map(|u| ruin_prob_mixed(&cfg.model, u, samples).map_err(CliError::from))
        .collect()
}

fn mc_column(cfg: &RunConfig) -> Result<Vec<RuinEstimate>, CliError> {
    let mc = cfg.mc()?;
    let seed = mc.seed()?;
    let horizon = mc.horizon(&cfg.model.mixing);
    cfg.u_grid
        .points()
        .into_iter()
        .map(|u| estimate_ruin(&cfg.model, Some(u), horizon, mc.paths, seed).map_err(CliError::from))
        .collect()
}

struct SolverColumn {
    values: Vec<f64>,
    /// Largest final residual over the atoms.
    residual: f64,
}

fn solver_column(cfg: &RunConfig) -> Result<SolverColumn, CliError> {
    let atoms = solve_atoms(cfg)?;
    let values = cfg
        .u_grid
        .points()
        .into_iter()
        .map(|u| atoms.iter().map(|(p, sol)| p * sol.value_at(u)).sum())
        .collect();
    let residual = atoms.iter().map(|(_, s)| s.residual).fold(0.0, f64::max);
    Ok(SolverColumn { values, residual })
}

/// Solve the renewal equation for every mixing atom; returns `(probability, solution)` pairs.
pub fn solve_atoms(cfg: &RunConfig) -> Result<Vec<(f64, SolverSolution)>, CliError> {
    let model = &cfg.model;
    if model.c <= 0.0 {
        return Err(CliError::out_of_scope(
            "the renewal solver needs c > 0; use the closed-form command for c = 0",
        ));
    }
    let atoms = model.mixing.atoms().ok_or_else(|| {
        CliError::out_of_scope(
            "the renewal solver needs degenerate or discrete mixing; \
             use closed-form or simulate for gamma mixing",
        )
    })?;
    atoms
        .iter()
        .map(|atom| {
            let cm = conditional_model(model, atom.gamma, atom.delta)?;
            let r = adjustment_coefficient(model, atom.gamma, atom.delta)?;
            let s = &cfg.solver;
            let tail = if cm.net_profit_margin() > 0.0 {
                s.closure(r)?
            } else {
                TailClosure::Zero
            };
            let u_max = s.u_max.unwrap_or_else(|| match r {
                Some(r) => (12.0 / r).max(40.0),
                None => 40.0,
            });
            let grid = SolverGrid::new(
                s.h.unwrap_or(DEFAULT_STEP),
                u_max,
                tail,
                s.tolerance.unwrap_or(DEFAULT_TOLERANCE),
                s.max_iterations.unwrap_or(DEFAULT_MAX_ITERATIONS),
            )?;
            let sol = solve_renewal(&build_signed_kernel(&cm), model.c, &grid)?;
            Ok((atom.prob, sol))
        })
        .collect()
}

/// `Ok(None)` when net profit fails or the claim law has no exponential moments.
fn adjustment_coefficient(model: &ModelSpec, gamma: f64, delta: f64) -> Result<Option<f64>, CliError> {
    let result = match model.exponential_rates() {
        Some((a, b)) => adjustment_exponential(model.c, a, b, gamma, delta),
        None => adjustment_general(&conditional_model(model, gamma, delta)?),
    };
    match result {
        Ok(adj) => Ok(Some(adj.r)),
        Err(Error::NetProfitViolated { .. } | Error::NoMgf(_) | Error::NoAdjustmentCoefficient) => {
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}
