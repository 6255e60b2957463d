use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{fit_grid_function, gauss_hermite, SpaceGrid, TimeGrid};
use crate::problem::{validate, ControlProblem};

use super::config::{FailurePolicy, SolverConfig};
use super::optimizer::{ControlOptimizer, OptimizerRegistry};
use super::point::{solve_point_with, PointContext, PointSolution, PointStatus};
use super::tables::{AdjointTable, PolicyTable};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepDiagnostics {
    pub max_inner_iters: usize,
    pub total_inner_iters: usize,
    /// Largest residual over converged points.
    pub max_residual: f64,
    pub limit_exceeded: usize,
    pub degenerate: usize,
    pub accepted_initial: usize,
    /// `status[i][k]` for every solved node.
    pub status: Vec<Vec<PointStatus>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub policy: PolicyTable,
    pub adjoint: AdjointTable,
    pub diagnostics: SweepDiagnostics,
}

/// Runs the backward recursion with the optimizer named in `cfg`.
pub fn backward_sweep(
    prob: &dyn ControlProblem,
    time_grid: TimeGrid,
    space_grid: SpaceGrid,
    cfg: &SolverConfig,
) -> Result<SweepOutput> {
    let registry = OptimizerRegistry::with_builtins();
    backward_sweep_with(
        prob,
        time_grid,
        space_grid,
        cfg,
        registry.get(&cfg.optimizer)?,
    )
}

/// Backward recursion: `P_N = h_x` on the grid, then for `i = N-1, ..., 0`
/// every node is solved against the spline of `P_{i+1}`.
///
/// Nodes within a time level are solved in parallel; rows are assembled in
/// node order so results do not depend on scheduling.
pub fn backward_sweep_with(
    prob: &dyn ControlProblem,
    time_grid: TimeGrid,
    space_grid: SpaceGrid,
    cfg: &SolverConfig,
    optimizer: &dyn ControlOptimizer,
) -> Result<SweepOutput> {
    validate(prob)?;
    cfg.validate()?;
    if (time_grid.horizon() - prob.horizon()).abs() > 1e-12 * prob.horizon() {
        return Err(Error::invalid(format!(
            "time grid horizon {} differs from problem horizon {}",
            time_grid.horizon(),
            prob.horizon()
        )));
    }
    let rule = gauss_hermite(cfg.quad_order)?;
    let n = time_grid.steps();
    let dt = time_grid.dt();
    let cs = prob.control_set();
    let fallback = cfg.initial_control.value(&cs);

    let mut p_rows = vec![Vec::new(); n + 1];
    let mut q_rows = vec![Vec::new(); n];
    let mut phi_rows: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut diag = SweepDiagnostics {
        status: vec![Vec::new(); n],
        ..Default::default()
    };

    p_rows[n] = space_grid
        .nodes()
        .map(|x| prob.terminal_cost_dx(x))
        .collect();
    if let Some(k) = p_rows[n].iter().position(|v| !v.is_finite()) {
        return Err(Error::non_finite("terminal adjoint h_x").at_point(n, space_grid.node(k)));
    }

    for i in (0..n).rev() {
        let p_next = fit_grid_function(space_grid, std::mem::take(&mut p_rows[i + 1]))?;
        let t = time_grid.t(i);
        let warm = if cfg.warm_start && i + 1 < n {
            Some(&phi_rows[i + 1])
        } else {
            None
        };

        let solutions: Vec<Result<PointSolution>> = (0..space_grid.len())
            .into_par_iter()
            .map(|k| {
                let x = space_grid.node(k);
                let ctx = PointContext {
                    prob,
                    t,
                    x,
                    dt,
                    p_next: &p_next,
                    rule: &rule,
                    adjoint_solve: cfg.adjoint_solve,
                    implicit_p_iters: cfg.implicit_p_iters,
                };
                let initial = warm.map_or(fallback, |row| row[k]);
                solve_point_with(&ctx, initial, cfg, optimizer).map_err(|e| e.at_point(i, x))
            })
            .collect();

        let mut p_row = Vec::with_capacity(space_grid.len());
        let mut q_row = Vec::with_capacity(space_grid.len());
        let mut phi_row = Vec::with_capacity(space_grid.len());
        let mut status_row = Vec::with_capacity(space_grid.len());
        for (k, sol) in solutions.into_iter().enumerate() {
            let sol = sol?;
            match sol.status {
                PointStatus::LimitExceeded => {
                    if cfg.failure_policy == FailurePolicy::FailFast {
                        return Err(Error::IterationLimitExceeded {
                            iters: sol.inner_iters,
                            residual: sol.residual,
                        }
                        .at_point(i, space_grid.node(k)));
                    }
                    diag.limit_exceeded += 1;
                }
                PointStatus::Degenerate => diag.degenerate += 1,
                PointStatus::AcceptedInitial => {
                    diag.accepted_initial += 1;
                    diag.max_residual = diag.max_residual.max(sol.residual);
                }
                PointStatus::Converged => diag.max_residual = diag.max_residual.max(sol.residual),
            }
            diag.max_inner_iters = diag.max_inner_iters.max(sol.inner_iters);
            diag.total_inner_iters += sol.inner_iters;
            p_row.push(sol.p);
            q_row.push(sol.q);
            phi_row.push(sol.control);
            status_row.push(sol.status);
        }
        p_rows[i + 1] = p_next.values().to_vec();
        p_rows[i] = p_row;
        q_rows[i] = q_row;
        phi_rows[i] = phi_row;
        diag.status[i] = status_row;
    }

    Ok(SweepOutput {
        policy: PolicyTable::new(time_grid, space_grid, cs, phi_rows)?,
        adjoint: AdjointTable {
            p: p_rows,
            q: q_rows,
        },
        diagnostics: diag,
    })
}
