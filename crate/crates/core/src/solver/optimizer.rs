//! Inner optimizers for the per-node variational inequality
//! `H_u(u)·(v - u) >= 0` for all admissible `v`.
//!
//! Each strategy implements [`ControlOptimizer`] and is looked up by name in
//! an [`OptimizerRegistry`]; [`SolverConfig::optimizer`] selects one.

use crate::error::{Error, Result};
use crate::problem::ControlSet;

use super::config::SolverConfig;
use super::point::{AdjointEval, PointContext, PointSolution, PointStatus};

pub trait ControlOptimizer: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Runs from the already evaluated starting point `start`. Hitting the
    /// iteration cap is reported as [`PointStatus::LimitExceeded`].
    fn optimize(
        &self,
        ctx: &PointContext<'_>,
        start: AdjointEval,
        cfg: &SolverConfig,
    ) -> Result<PointSolution>;
}

/// Projected gradient descent with a constant step:
/// `u ← Π_U(u - ρ·H_u(u))`, stopping once `|Δu| <= ε`.
///
/// `(P, Q)` are recomputed at every iterate since the Euler stencil moves
/// with the control.
#[derive(Debug, Default, Clone, Copy)]
pub struct ProjectedGradient;

impl ControlOptimizer for ProjectedGradient {
    fn name(&self) -> &'static str {
        "gradient"
    }

    fn description(&self) -> &'static str {
        "projected constant-step gradient descent on H_u"
    }

    fn optimize(
        &self,
        ctx: &PointContext<'_>,
        start: AdjointEval,
        cfg: &SolverConfig,
    ) -> Result<PointSolution> {
        let cs = ctx.prob.control_set();
        let mut ev = start;
        for iter in 1..=cfg.max_inner_iters {
            let next = cs.project(ev.u - cfg.step_size * ev.h_u);
            let moved = (next - ev.u).abs();
            ev = ctx.evaluate(next)?;
            if moved <= cfg.tolerance {
                return Ok(PointSolution::from_eval(
                    ctx,
                    &ev,
                    iter,
                    PointStatus::Converged,
                ));
            }
        }
        Ok(PointSolution::from_eval(
            ctx,
            &ev,
            cfg.max_inner_iters,
            PointStatus::LimitExceeded,
        ))
    }
}

/// Bisection on the sign of `H_u`, assuming it increases in the control.
///
/// On an interval the endpoints are checked first, so a saturated optimum is
/// returned exactly at the bound. On the real line a bracket is grown
/// geometrically from the starting control.
#[derive(Debug, Default, Clone, Copy)]
pub struct Bisection;

const MAX_BRACKET_DOUBLINGS: usize = 128;

impl ControlOptimizer for Bisection {
    fn name(&self) -> &'static str {
        "bisection"
    }

    fn description(&self) -> &'static str {
        "bisection on sign(H_u), endpoints checked first on intervals"
    }

    fn optimize(
        &self,
        ctx: &PointContext<'_>,
        start: AdjointEval,
        cfg: &SolverConfig,
    ) -> Result<PointSolution> {
        let mut evals = 0usize;
        let (mut lo, mut hi) = match ctx.prob.control_set() {
            ControlSet::Interval { lower, upper } => {
                let at_lower = ctx.evaluate(lower)?;
                evals += 1;
                if at_lower.h_u >= 0.0 {
                    return Ok(PointSolution::from_eval(
                        ctx,
                        &at_lower,
                        evals,
                        PointStatus::Converged,
                    ));
                }
                let at_upper = ctx.evaluate(upper)?;
                evals += 1;
                if at_upper.h_u <= 0.0 {
                    return Ok(PointSolution::from_eval(
                        ctx,
                        &at_upper,
                        evals,
                        PointStatus::Converged,
                    ));
                }
                (at_lower, at_upper)
            }
            ControlSet::Unbounded => {
                let mut width = 1.0 + start.u.abs();
                let mut other = start;
                let mut found = false;
                for _ in 0..MAX_BRACKET_DOUBLINGS {
                    let trial = if start.h_u > 0.0 {
                        start.u - width
                    } else {
                        start.u + width
                    };
                    other = ctx.evaluate(trial)?;
                    evals += 1;
                    if other.h_u.signum() != start.h_u.signum() || other.h_u == 0.0 {
                        found = true;
                        break;
                    }
                    width *= 2.0;
                }
                if !found {
                    return Err(Error::invalid(
                        "bisection could not bracket a zero of H_u (is H_u monotone in u?)",
                    ));
                }
                if start.u < other.u {
                    (start, other)
                } else {
                    (other, start)
                }
            }
        };

        let mut best = if lo.h_u.abs() <= hi.h_u.abs() { lo } else { hi };
        while evals < cfg.max_inner_iters {
            let mid = 0.5 * (lo.u + hi.u);
            if mid <= lo.u || mid >= hi.u {
                // bracket exhausted at machine resolution
                return Ok(PointSolution::from_eval(
                    ctx,
                    &best,
                    evals,
                    PointStatus::Converged,
                ));
            }
            let ev = ctx.evaluate(mid)?;
            evals += 1;
            if ev.h_u.abs() < best.h_u.abs() {
                best = ev;
            }
            if ev.h_u.abs() <= cfg.tolerance {
                return Ok(PointSolution::from_eval(
                    ctx,
                    &ev,
                    evals,
                    PointStatus::Converged,
                ));
            }
            if ev.h_u > 0.0 {
                hi = ev;
            } else {
                lo = ev;
            }
        }
        Ok(PointSolution::from_eval(
            ctx,
            &best,
            evals,
            PointStatus::LimitExceeded,
        ))
    }
}

/// Named collection of inner optimizers.
pub struct OptimizerRegistry {
    entries: Vec<Box<dyn ControlOptimizer>>,
}

impl OptimizerRegistry {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// `gradient` and `bisection`.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ProjectedGradient));
        reg.register(Box::new(Bisection));
        reg
    }

    /// Adds a strategy, replacing any existing one with the same name.
    pub fn register(&mut self, optimizer: Box<dyn ControlOptimizer>) {
        self.entries.retain(|e| e.name() != optimizer.name());
        self.entries.push(optimizer);
    }

    pub fn get(&self, name: &str) -> Result<&dyn ControlOptimizer> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "optimizer",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|e| e.name())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn ControlOptimizer> {
        self.entries.iter().map(|e| e.as_ref())
    }
}

impl Default for OptimizerRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
