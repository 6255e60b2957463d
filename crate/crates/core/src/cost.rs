//! Cost of a tabulated feedback policy, via the Euler scheme for the cost
//! BSDE `Y_i(x) = E[Y_{i+1}(X')] + f(t_i, x, φ_i(x))·Δt`, `Y_N = h`.

use rayon::prelude::*;

use crate::benchmarks::{BenchmarkRegistry, Overrides};
use crate::error::{Error, Result};
use crate::numerics::{cond_expect, fit_grid_function, gauss_hermite};
use crate::problem::{validate, ControlProblem};
use crate::solver::{PolicyTable, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CostResult {
    /// `Y_0` interpolated at the initial state.
    pub cost: f64,
    /// `y_table[i][k] = Y_i(x_k)`, `N+1` rows.
    pub y_table: Vec<Vec<f64>>,
}

pub fn evaluate_cost(
    prob: &dyn ControlProblem,
    tbl: &PolicyTable,
    cfg: &SolverConfig,
) -> Result<CostResult> {
    validate(prob)?;
    let rule = gauss_hermite(cfg.quad_order)?;
    let tg = tbl.time_grid;
    let sg = tbl.space_grid;
    let n = tg.steps();
    let dt = tg.dt();

    let mut rows = vec![Vec::new(); n + 1];
    rows[n] = sg.nodes().map(|x| prob.terminal_cost(x)).collect();
    if let Some(k) = rows[n].iter().position(|v| !v.is_finite()) {
        return Err(Error::non_finite("terminal cost h").at_point(n, sg.node(k)));
    }

    for i in (0..n).rev() {
        let y_next = fit_grid_function(sg, rows[i + 1].clone())?;
        let t = tg.t(i);
        let phi = tbl.row(i);
        rows[i] = (0..sg.len())
            .into_par_iter()
            .map(|k| {
                let x = sg.node(k);
                let u = phi[k];
                let b = prob.drift(t, x, u);
                let s = prob.diffusion(t, x, u);
                let f = prob.running_cost(t, x, u);
                let y = cond_expect(&y_next, x, b, s, dt, &rule) + f * dt;
                if y.is_finite() {
                    Ok(y)
                } else {
                    Err(Error::non_finite("cost recursion").at_point(i, x))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
    }

    let y0 = fit_grid_function(sg, rows[0].clone())?;
    Ok(CostResult {
        cost: y0.eval(prob.initial_state()),
        y_table: rows,
    })
}

/// Reference optimal cost of a registered benchmark.
pub fn analytic_cost(benchmark_id: &str, params: &Overrides) -> Result<Option<f64>> {
    let bench = BenchmarkRegistry::builtin().build(benchmark_id, params)?;
    Ok(Some(bench.reference_cost))
}

/// Closed-form optimal control `u*(t, x)` where one is known.
pub fn analytic_control(benchmark_id: &str, t: f64, x: f64) -> Result<Option<f64>> {
    let bench = BenchmarkRegistry::builtin().build(benchmark_id, &Overrides::default())?;
    Ok(bench.optimal_control.as_ref().map(|u| u(t, x)))
}
