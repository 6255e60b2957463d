use crate::error::{Error, Result};
use crate::problem::ControlSet;

/// Starting control for the inner iteration when no warm start is available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialControl {
    Zero,
    /// Midpoint of a bounded control set; zero for an unbounded one.
    Midpoint,
    Custom(f64),
}

impl InitialControl {
    pub fn value(&self, cs: &ControlSet) -> f64 {
        let raw = match (*self, *cs) {
            (InitialControl::Zero, _) => 0.0,
            (InitialControl::Midpoint, ControlSet::Interval { lower, upper }) => {
                0.5 * (lower + upper)
            }
            (InitialControl::Midpoint, ControlSet::Unbounded) => 0.0,
            (InitialControl::Custom(v), _) => v,
        };
        cs.project(raw)
    }
}

/// How the implicit adjoint relation `p = E[P'] + H_x(p, ...)·Δt` is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjointSolve {
    /// `H_x` is affine in `p`, so the relation is solved in closed form.
    Exact,
    /// `implicit_p_iters` fixed-point passes seeded with `E[P']`.
    FixedPoint,
}

/// What the sweep does with a point whose inner iteration hits its cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailurePolicy {
    FailFast,
    /// Keep the last iterate, count the point, carry on.
    MarkAndContinue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Gradient step `ρ`.
    pub step_size: f64,
    /// Stopping threshold `ε` on successive controls (and on `|H_u|`).
    pub tolerance: f64,
    pub max_inner_iters: usize,
    pub implicit_p_iters: usize,
    pub quad_order: usize,
    pub initial_control: InitialControl,
    /// Name of a registered inner optimizer.
    pub optimizer: String,
    pub adjoint_solve: AdjointSolve,
    pub failure_policy: FailurePolicy,
    /// Seed each point with the control found at the same node one step later.
    pub warm_start: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step_size: 1.0,
            tolerance: 1e-8,
            max_inner_iters: 500,
            implicit_p_iters: 3,
            quad_order: 8,
            initial_control: InitialControl::Zero,
            optimizer: "gradient".to_string(),
            adjoint_solve: AdjointSolve::Exact,
            failure_policy: FailurePolicy::FailFast,
            warm_start: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::invalid(format!(
                "step size must be positive, got {}",
                self.step_size
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::invalid(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_inner_iters == 0 || self.implicit_p_iters == 0 {
            return Err(Error::invalid("iteration caps must be at least 1"));
        }
        if !(1..=crate::numerics::MAX_ORDER).contains(&self.quad_order) {
            return Err(Error::invalid(format!(
                "quadrature order must be in 1..={}, got {}",
                crate::numerics::MAX_ORDER,
                self.quad_order
            )));
        }
        if let InitialControl::Custom(v) = self.initial_control {
            if !v.is_finite() {
                return Err(Error::invalid("custom initial control must be finite"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = SolverConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.tolerance, 1e-8);
        assert_eq!(cfg.max_inner_iters, 500);
        assert_eq!(cfg.implicit_p_iters, 3);
        assert_eq!(cfg.quad_order, 8);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            SolverConfig {
                step_size: 0.0,
                ..Default::default()
            },
            SolverConfig {
                tolerance: -1.0,
                ..Default::default()
            },
            SolverConfig {
                max_inner_iters: 0,
                ..Default::default()
            },
            SolverConfig {
                implicit_p_iters: 0,
                ..Default::default()
            },
            SolverConfig {
                quad_order: 0,
                ..Default::default()
            },
            SolverConfig {
                initial_control: InitialControl::Custom(f64::NAN),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn initial_control_values() {
        let unit = ControlSet::interval(-1.0, 3.0).unwrap();
        assert_eq!(InitialControl::Midpoint.value(&unit), 1.0);
        assert_eq!(InitialControl::Midpoint.value(&ControlSet::Unbounded), 0.0);
        assert_eq!(InitialControl::Custom(7.0).value(&unit), 3.0);
        assert_eq!(InitialControl::Zero.value(&unit), 0.0);
    }
}
