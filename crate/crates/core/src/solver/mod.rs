//! Backward recursive sweep for the discrete Hamiltonian system.

mod config;
mod optimizer;
mod point;
mod sweep;
mod tables;

pub use config::{AdjointSolve, FailurePolicy, InitialControl, SolverConfig};
pub use optimizer::{Bisection, ControlOptimizer, OptimizerRegistry, ProjectedGradient};
pub use point::{solve_point, AdjointEval, PointContext, PointSolution, PointStatus};
pub use sweep::{backward_sweep, backward_sweep_with, SweepDiagnostics, SweepOutput};
pub use tables::{policy_as_controller, AdjointTable, FeedbackController, PolicyTable};
