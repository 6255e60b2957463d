//! Quadrature, grids and spline-backed grid functions.

mod expectation;
mod grid;
mod quadrature;
mod spline;

pub use expectation::{cond_expect, cond_expect_dw, transition_moments, TransitionMoments};
pub use grid::{SpaceGrid, TimeGrid, MIN_NODES};
pub use quadrature::{gauss_hermite, QuadratureRule, MAX_ORDER};
pub use spline::{fit_grid_function, GridFunction};
