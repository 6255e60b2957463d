//! Discrete stochastic-maximum-principle solver for scalar finite-horizon
//! stochastic optimal control problems with feedback controls.
//!
//! The backward sweep in [`solver`] computes the feedback policy `φ_i(x)` and
//! the adjoint pair `(P_i, Q_i)` on a time–space grid; [`cost`] evaluates the
//! resulting cost by an Euler scheme for the cost BSDE; [`benchmarks`] holds
//! the registered reference problems and convergence studies.

pub mod benchmarks;
pub mod cost;
pub mod error;
pub mod numerics;
pub mod problem;
pub mod solver;

pub use error::{Error, Result};
