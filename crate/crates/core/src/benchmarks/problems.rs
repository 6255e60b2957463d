//! Coefficients of the registered reference problems.

use crate::problem::{ControlProblem, ControlSet};

/// Which target path the Black–Scholes tracking problem follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackingVariant {
    A,
    B,
}

/// `dX = u·X dt + σ·X dW`, cost `½∫(X - η_t)² dt + ½∫u² dt`.
#[derive(Debug, Clone, Copy)]
pub struct BlackScholesTracking {
    pub variant: TrackingVariant,
    pub x0: f64,
    pub horizon: f64,
    pub sigma: f64,
}

impl BlackScholesTracking {
    /// Target path `η*_t`.
    pub fn target(&self, t: f64) -> f64 {
        let (x0, big_t, s2) = (self.x0, self.horizon, self.sigma * self.sigma);
        match self.variant {
            TrackingVariant::A => {
                ((s2 * t).exp() - (big_t - t).powi(2)) / (1.0 / x0 - big_t * t + t * t / 2.0) + 1.0
            }
            TrackingVariant::B => {
                let e_t = (-big_t).exp();
                ((s2 * t).exp() - (e_t - (-t).exp()).powi(2))
                    / (1.0 / x0 + 1.0 - (-t).exp() - t * e_t)
                    - (-t).exp()
            }
        }
    }

    /// Optimal deterministic control `u*_t`.
    pub fn optimal_control(&self, t: f64) -> f64 {
        let (x0, big_t) = (self.x0, self.horizon);
        match self.variant {
            TrackingVariant::A => (big_t - t) / (x0 - big_t * t + t * t / 2.0),
            TrackingVariant::B => {
                let e_t = (-big_t).exp();
                (e_t - (-t).exp()) / (1.0 / x0 + 1.0 - (-t).exp() - t * e_t)
            }
        }
    }
}

impl ControlProblem for BlackScholesTracking {
    fn drift(&self, _t: f64, x: f64, u: f64) -> f64 {
        u * x
    }
    fn diffusion(&self, _t: f64, x: f64, _u: f64) -> f64 {
        self.sigma * x
    }
    fn running_cost(&self, t: f64, x: f64, u: f64) -> f64 {
        let d = x - self.target(t);
        0.5 * d * d + 0.5 * u * u
    }
    fn terminal_cost(&self, _x: f64) -> f64 {
        0.0
    }
    fn drift_dx(&self, _t: f64, _x: f64, u: f64) -> f64 {
        u
    }
    fn drift_du(&self, _t: f64, x: f64, _u: f64) -> f64 {
        x
    }
    fn diffusion_dx(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        self.sigma
    }
    fn diffusion_du(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn running_cost_dx(&self, t: f64, x: f64, _u: f64) -> f64 {
        x - self.target(t)
    }
    fn running_cost_du(&self, _t: f64, _x: f64, u: f64) -> f64 {
        u
    }
    fn terminal_cost_dx(&self, _x: f64) -> f64 {
        0.0
    }
    fn control_set(&self) -> ControlSet {
        ControlSet::Unbounded
    }
    fn initial_state(&self) -> f64 {
        self.x0
    }
    fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// Inventory control: `dX = (u - r_t) dt + σ dW` with demand
/// `r_t = (T - t)/2`, cost `½∫(X - η_t)² dt + ½∫u² dt`,
/// `η_t = T·t/2 - t²/4 + 1`.
#[derive(Debug, Clone, Copy)]
pub struct Inventory {
    pub x0: f64,
    pub horizon: f64,
    pub sigma: f64,
}

impl Inventory {
    pub fn demand(&self, t: f64) -> f64 {
        (self.horizon - t) / 2.0
    }

    pub fn target(&self, t: f64) -> f64 {
        0.5 * self.horizon * t - 0.25 * t * t + 1.0
    }

    /// `T³/6 + (σ² - 2)·T²/4 + T`.
    pub fn reference_cost(&self) -> f64 {
        let big_t = self.horizon;
        big_t.powi(3) / 6.0 + (self.sigma * self.sigma - 2.0) / 4.0 * big_t * big_t + big_t
    }
}

impl ControlProblem for Inventory {
    fn drift(&self, t: f64, _x: f64, u: f64) -> f64 {
        u - self.demand(t)
    }
    fn diffusion(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        self.sigma
    }
    fn running_cost(&self, t: f64, x: f64, u: f64) -> f64 {
        let d = x - self.target(t);
        0.5 * d * d + 0.5 * u * u
    }
    fn terminal_cost(&self, _x: f64) -> f64 {
        0.0
    }
    fn drift_dx(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn drift_du(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        1.0
    }
    fn diffusion_dx(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn diffusion_du(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn running_cost_dx(&self, t: f64, x: f64, _u: f64) -> f64 {
        x - self.target(t)
    }
    fn running_cost_du(&self, _t: f64, _x: f64, u: f64) -> f64 {
        u
    }
    fn terminal_cost_dx(&self, _x: f64) -> f64 {
        0.0
    }
    fn control_set(&self) -> ControlSet {
        ControlSet::Unbounded
    }
    fn initial_state(&self) -> f64 {
        self.x0
    }
    fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// `dX = u dt + δ·u dW`, cost `½∫X² dt`.
#[derive(Debug, Clone, Copy)]
pub struct LinearQuadratic {
    pub x0: f64,
    pub horizon: f64,
    pub delta: f64,
}

impl LinearQuadratic {
    /// `½δ²(1 - e^{-T/δ²})`.
    pub fn reference_cost(&self) -> f64 {
        let d2 = self.delta * self.delta;
        0.5 * d2 * (1.0 - (-self.horizon / d2).exp())
    }
}

impl ControlProblem for LinearQuadratic {
    fn drift(&self, _t: f64, _x: f64, u: f64) -> f64 {
        u
    }
    fn diffusion(&self, _t: f64, _x: f64, u: f64) -> f64 {
        self.delta * u
    }
    fn running_cost(&self, _t: f64, x: f64, _u: f64) -> f64 {
        0.5 * x * x
    }
    fn terminal_cost(&self, _x: f64) -> f64 {
        0.0
    }
    fn drift_dx(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn drift_du(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        1.0
    }
    fn diffusion_dx(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn diffusion_du(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        self.delta
    }
    fn running_cost_dx(&self, _t: f64, x: f64, _u: f64) -> f64 {
        x
    }
    fn running_cost_du(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn terminal_cost_dx(&self, _x: f64) -> f64 {
        0.0
    }
    fn control_set(&self) -> ControlSet {
        ControlSet::Unbounded
    }
    fn initial_state(&self) -> f64 {
        self.x0
    }
    fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// Constrained portfolio: `dX = (α·u + γ)·X dt + β·u·X dW`, `u ∈ [-1, 1]`,
/// cost `½E[(X_T - κ)²]`.
#[derive(Debug, Clone, Copy)]
pub struct Portfolio {
    pub x0: f64,
    pub horizon: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ControlProblem for Portfolio {
    fn drift(&self, _t: f64, x: f64, u: f64) -> f64 {
        (self.alpha * u + self.gamma) * x
    }
    fn diffusion(&self, _t: f64, x: f64, u: f64) -> f64 {
        self.beta * u * x
    }
    fn running_cost(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn terminal_cost(&self, x: f64) -> f64 {
        0.5 * (x - self.kappa).powi(2)
    }
    fn drift_dx(&self, _t: f64, _x: f64, u: f64) -> f64 {
        self.alpha * u + self.gamma
    }
    fn drift_du(&self, _t: f64, x: f64, _u: f64) -> f64 {
        self.alpha * x
    }
    fn diffusion_dx(&self, _t: f64, _x: f64, u: f64) -> f64 {
        self.beta * u
    }
    fn diffusion_du(&self, _t: f64, x: f64, _u: f64) -> f64 {
        self.beta * x
    }
    fn running_cost_dx(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn running_cost_du(&self, _t: f64, _x: f64, _u: f64) -> f64 {
        0.0
    }
    fn terminal_cost_dx(&self, x: f64) -> f64 {
        x - self.kappa
    }
    fn control_set(&self) -> ControlSet {
        ControlSet::Interval {
            lower: -1.0,
            upper: 1.0,
        }
    }
    fn initial_state(&self) -> f64 {
        self.x0
    }
    fn horizon(&self) -> f64 {
        self.horizon
    }
}
