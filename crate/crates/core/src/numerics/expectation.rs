//! One-step conditional expectations over the Euler transition
//! `X' = x + b·Δt + σ·ΔW`, `ΔW ~ N(0, Δt)`.
//!
//! With `ΔW = √(2Δt)·s` the Gaussian expectation becomes a Gauss–Hermite
//! integral against `e^{-s²}` normalised by `1/√π`.

use std::f64::consts::PI;

use super::quadrature::QuadratureRule;
use super::spline::GridFunction;

/// `E[g(X')]` and `E[g(X')·ΔW] / Δt`, computed with one pass over the nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMoments {
    pub mean: f64,
    pub weighted_increment: f64,
}

pub fn transition_moments(
    gf: &GridFunction,
    x: f64,
    drift_val: f64,
    diff_val: f64,
    dt: f64,
    rule: &QuadratureRule,
) -> TransitionMoments {
    let centre = x + drift_val * dt;
    let scale = (2.0 * dt).sqrt();
    let mut mean = 0.0;
    let mut incr = 0.0;
    for (s, w) in rule.pairs() {
        let dw = scale * s;
        let v = w * gf.eval(centre + diff_val * dw);
        mean += v;
        incr += v * dw;
    }
    let norm = 1.0 / PI.sqrt();
    TransitionMoments {
        mean: mean * norm,
        weighted_increment: incr * norm / dt,
    }
}

/// `E_{t_i}^x[g(X')]`.
pub fn cond_expect(
    gf: &GridFunction,
    x: f64,
    drift_val: f64,
    diff_val: f64,
    dt: f64,
    rule: &QuadratureRule,
) -> f64 {
    transition_moments(gf, x, drift_val, diff_val, dt, rule).mean
}

/// `E_{t_i}^x[g(X')·ΔW] / Δt`.
pub fn cond_expect_dw(
    gf: &GridFunction,
    x: f64,
    drift_val: f64,
    diff_val: f64,
    dt: f64,
    rule: &QuadratureRule,
) -> f64 {
    transition_moments(gf, x, drift_val, diff_val, dt, rule).weighted_increment
}
