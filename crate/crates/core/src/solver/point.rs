use crate::error::{finite, Error, Result};
use crate::numerics::{gauss_hermite, transition_moments, GridFunction, QuadratureRule};
use crate::problem::{hamiltonian_du, hamiltonian_dx, ControlProblem, HamiltonianPoint};

use super::config::{AdjointSolve, SolverConfig};
use super::optimizer::{ControlOptimizer, OptimizerRegistry};

/// Local data for one grid node at one time level.
pub struct PointContext<'a> {
    pub prob: &'a dyn ControlProblem,
    pub t: f64,
    pub x: f64,
    pub dt: f64,
    pub p_next: &'a GridFunction,
    pub rule: &'a QuadratureRule,
    pub adjoint_solve: AdjointSolve,
    pub implicit_p_iters: usize,
}

/// Adjoint pair and Hamiltonian gradient for a trial control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointEval {
    pub u: f64,
    pub p: f64,
    pub q: f64,
    pub h_u: f64,
    /// `E[P_{i+1}(X')]`, the explicit part of `p`.
    pub mean_next: f64,
}

impl PointContext<'_> {
    /// Solves the Q- and P-relations for control `u` and returns `H_u` there.
    pub fn evaluate(&self, u: f64) -> Result<AdjointEval> {
        let (t, x, dt) = (self.t, self.x, self.dt);
        let prob = self.prob;
        let b = finite(prob.drift(t, x, u), "drift")?;
        let s = finite(prob.diffusion(t, x, u), "diffusion")?;
        let m = transition_moments(self.p_next, x, b, s, dt, self.rule);
        let mean_next = finite(m.mean, "conditional expectation of P")?;
        let q = finite(m.weighted_increment, "Q (weighted increment expectation)")?;

        let p = match self.adjoint_solve {
            AdjointSolve::Exact => {
                let b_x = prob.drift_dx(t, x, u);
                let rest = q * prob.diffusion_dx(t, x, u) + prob.running_cost_dx(t, x, u);
                let denom = 1.0 - b_x * dt;
                if denom == 0.0 {
                    return Err(Error::non_finite("implicit P solve (1 - b_x·dt = 0)"));
                }
                (mean_next + rest * dt) / denom
            }
            AdjointSolve::FixedPoint => {
                let mut p = mean_next;
                for _ in 0..self.implicit_p_iters {
                    let hx = hamiltonian_dx(prob, &HamiltonianPoint::new(t, x, p, q, u))?;
                    p = mean_next + hx * dt;
                }
                p
            }
        };
        let p = finite(p, "implicit P solve")?;
        let h_u = hamiltonian_du(prob, &HamiltonianPoint::new(t, x, p, q, u))?;
        Ok(AdjointEval {
            u,
            p,
            q,
            h_u,
            mean_next,
        })
    }

    /// `p - E[P'] - H_x(p, q, u)·Δt`.
    pub fn implicit_residual(&self, ev: &AdjointEval) -> Result<f64> {
        let hx = hamiltonian_dx(
            self.prob,
            &HamiltonianPoint::new(self.t, self.x, ev.p, ev.q, ev.u),
        )?;
        Ok(ev.p - ev.mean_next - hx * self.dt)
    }

    /// Distance between `u` and its projected unit gradient step; zero exactly
    /// when the variational inequality holds at `u`.
    pub fn stationarity(&self, ev: &AdjointEval) -> f64 {
        (ev.u - self.prob.control_set().project(ev.u - ev.h_u)).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Converged,
    /// `|H_u| <= ε` at the starting control.
    AcceptedInitial,
    /// `H_u` does not depend on the control at this point; the starting
    /// control is kept.
    Degenerate,
    LimitExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSolution {
    pub control: f64,
    pub p: f64,
    pub q: f64,
    pub inner_iters: usize,
    /// Projected-gradient residual `|u - Π(u - H_u)|`; equals `|H_u|` in
    /// the interior.
    pub residual: f64,
    pub status: PointStatus,
}

impl PointSolution {
    pub(crate) fn from_eval(
        ctx: &PointContext<'_>,
        ev: &AdjointEval,
        inner_iters: usize,
        status: PointStatus,
    ) -> Self {
        Self {
            control: ev.u,
            p: ev.p,
            q: ev.q,
            inner_iters,
            residual: ctx.stationarity(ev),
            status,
        }
    }
}

/// Solves one node, reporting an iteration-cap hit as a status rather than
/// an error.
pub(crate) fn solve_point_with(
    ctx: &PointContext<'_>,
    initial: f64,
    cfg: &SolverConfig,
    optimizer: &dyn ControlOptimizer,
) -> Result<PointSolution> {
    let cs = ctx.prob.control_set();
    let u0 = cs.project(finite(initial, "initial control")?);
    let ev = ctx.evaluate(u0)?;
    if ev.h_u.abs() <= cfg.tolerance {
        return Ok(PointSolution::from_eval(
            ctx,
            &ev,
            0,
            PointStatus::AcceptedInitial,
        ));
    }
    if is_degenerate(ctx, &ev)? {
        return Ok(PointSolution::from_eval(
            ctx,
            &ev,
            0,
            PointStatus::Degenerate,
        ));
    }
    optimizer.optimize(ctx, ev, cfg)
}

fn is_degenerate(ctx: &PointContext<'_>, ev: &AdjointEval) -> Result<bool> {
    let cs = ctx.prob.control_set();
    let d = 1e-3 * (1.0 + ev.u.abs());
    let mut probe = cs.project(ev.u + d);
    if probe == ev.u {
        probe = cs.project(ev.u - d);
    }
    let other = ctx.evaluate(probe)?;
    let scale = ev.h_u.abs() + other.h_u.abs();
    Ok((other.h_u - ev.h_u).abs() <= 64.0 * f64::EPSILON * scale)
}

/// Solves the adjoint relations and the variational inequality at one node,
/// using the optimizer named in `cfg`.
pub fn solve_point(
    prob: &dyn ControlProblem,
    t: f64,
    dt: f64,
    x: f64,
    p_next: &GridFunction,
    cfg: &SolverConfig,
    initial: f64,
) -> Result<PointSolution> {
    cfg.validate()?;
    let rule = gauss_hermite(cfg.quad_order)?;
    let registry = OptimizerRegistry::with_builtins();
    let optimizer = registry.get(&cfg.optimizer)?;
    let ctx = PointContext {
        prob,
        t,
        x,
        dt,
        p_next,
        rule: &rule,
        adjoint_solve: cfg.adjoint_solve,
        implicit_p_iters: cfg.implicit_p_iters,
    };
    let sol = solve_point_with(&ctx, initial, cfg, optimizer)?;
    if sol.status == PointStatus::LimitExceeded {
        return Err(Error::IterationLimitExceeded {
            iters: sol.inner_iters,
            residual: sol.residual,
        });
    }
    Ok(sol)
}
