//! Controlled scalar SDE problems and their Hamiltonian.
//!
//! A problem is the state equation `dX = b(t,X,u) dt + σ(t,X,u) dW` on `[0, T]`
//! together with the cost `E[∫ f(t,X,u) dt + h(X_T)]`. Derivatives are supplied
//! analytically by the problem author; [`derivative_mismatch`] compares them
//! against central differences.

use std::sync::Arc;

use crate::error::{finite, Error, Result};

/// Coefficients of a scalar stochastic control problem.
///
/// Implementations must be pure: the solver evaluates them concurrently
/// from several worker threads.
pub trait ControlProblem: Send + Sync {
    fn drift(&self, t: f64, x: f64, u: f64) -> f64;
    fn diffusion(&self, t: f64, x: f64, u: f64) -> f64;
    fn running_cost(&self, t: f64, x: f64, u: f64) -> f64;
    fn terminal_cost(&self, x: f64) -> f64;

    fn drift_dx(&self, t: f64, x: f64, u: f64) -> f64;
    fn drift_du(&self, t: f64, x: f64, u: f64) -> f64;
    fn diffusion_dx(&self, t: f64, x: f64, u: f64) -> f64;
    fn diffusion_du(&self, t: f64, x: f64, u: f64) -> f64;
    fn running_cost_dx(&self, t: f64, x: f64, u: f64) -> f64;
    fn running_cost_du(&self, t: f64, x: f64, u: f64) -> f64;
    fn terminal_cost_dx(&self, x: f64) -> f64;

    fn control_set(&self) -> ControlSet;
    fn initial_state(&self) -> f64;
    fn horizon(&self) -> f64;
}

/// Checks the problem-level invariants (`T > 0`, finite `x_0`, valid control set).
pub fn validate(prob: &dyn ControlProblem) -> Result<()> {
    let horizon = prob.horizon();
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::invalid(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if !prob.initial_state().is_finite() {
        return Err(Error::invalid("initial state must be finite"));
    }
    if let ControlSet::Interval { lower, upper } = prob.control_set() {
        ControlSet::interval(lower, upper)?;
    }
    Ok(())
}

/// Convex admissible control set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlSet {
    Unbounded,
    Interval { lower: f64, upper: f64 },
}

impl ControlSet {
    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::invalid(format!(
                "control interval needs finite lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(ControlSet::Interval { lower, upper })
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, v: f64) -> f64 {
        match *self {
            ControlSet::Unbounded => v,
            ControlSet::Interval { lower, upper } => v.clamp(lower, upper),
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        match *self {
            ControlSet::Unbounded => v.is_finite(),
            ControlSet::Interval { lower, upper } => (lower..=upper).contains(&v),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, ControlSet::Interval { .. })
    }
}

/// Projects `v` onto `cs`; rejects non-finite input.
pub fn project(cs: &ControlSet, v: f64) -> Result<f64> {
    finite(v, "projection input")?;
    Ok(cs.project(v))
}

/// Arguments of the Hamiltonian `H(t, x, p, q, u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianPoint {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    pub q: f64,
    pub u: f64,
}

impl HamiltonianPoint {
    pub fn new(t: f64, x: f64, p: f64, q: f64, u: f64) -> Self {
        Self { t, x, p, q, u }
    }

    fn check(&self) -> Result<()> {
        for (v, name) in [
            (self.t, "t"),
            (self.x, "x"),
            (self.p, "p"),
            (self.q, "q"),
            (self.u, "u"),
        ] {
            finite(v, &format!("Hamiltonian argument {name}"))?;
        }
        Ok(())
    }
}

fn combine(pt: &HamiltonianPoint, terms: [(f64, &str); 3]) -> Result<f64> {
    pt.check()?;
    let [(b, b_name), (s, s_name), (f, f_name)] = terms;
    finite(b, b_name)?;
    finite(s, s_name)?;
    finite(f, f_name)?;
    finite(pt.p * b + pt.q * s + f, "Hamiltonian")
}

/// `H = p·b + q·σ + f`.
pub fn hamiltonian(prob: &dyn ControlProblem, pt: &HamiltonianPoint) -> Result<f64> {
    let HamiltonianPoint { t, x, u, .. } = *pt;
    combine(
        pt,
        [
            (prob.drift(t, x, u), "drift"),
            (prob.diffusion(t, x, u), "diffusion"),
            (prob.running_cost(t, x, u), "running cost"),
        ],
    )
}

/// `H_x = p·b_x + q·σ_x + f_x`.
pub fn hamiltonian_dx(prob: &dyn ControlProblem, pt: &HamiltonianPoint) -> Result<f64> {
    let HamiltonianPoint { t, x, u, .. } = *pt;
    combine(
        pt,
        [
            (prob.drift_dx(t, x, u), "drift_dx"),
            (prob.diffusion_dx(t, x, u), "diffusion_dx"),
            (prob.running_cost_dx(t, x, u), "running_cost_dx"),
        ],
    )
}

/// `H_u = p·b_u + q·σ_u + f_u`.
pub fn hamiltonian_du(prob: &dyn ControlProblem, pt: &HamiltonianPoint) -> Result<f64> {
    let HamiltonianPoint { t, x, u, .. } = *pt;
    combine(
        pt,
        [
            (prob.drift_du(t, x, u), "drift_du"),
            (prob.diffusion_du(t, x, u), "diffusion_du"),
            (prob.running_cost_du(t, x, u), "running_cost_du"),
        ],
    )
}

/// Absolute gaps between the analytic derivatives and central differences,
/// each scaled by `1 + |analytic|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeMismatch {
    pub drift_dx: f64,
    pub drift_du: f64,
    pub diffusion_dx: f64,
    pub diffusion_du: f64,
    pub running_cost_dx: f64,
    pub running_cost_du: f64,
    pub terminal_cost_dx: f64,
}

impl DerivativeMismatch {
    pub fn max(&self) -> f64 {
        self.named().iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    pub fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("drift_dx", self.drift_dx),
            ("drift_du", self.drift_du),
            ("diffusion_dx", self.diffusion_dx),
            ("diffusion_du", self.diffusion_du),
            ("running_cost_dx", self.running_cost_dx),
            ("running_cost_du", self.running_cost_du),
            ("terminal_cost_dx", self.terminal_cost_dx),
        ]
    }
}

pub fn derivative_mismatch(
    prob: &dyn ControlProblem,
    t: f64,
    x: f64,
    u: f64,
    step: f64,
) -> DerivativeMismatch {
    let gap = |analytic: f64, plus: f64, minus: f64| {
        let fd = (plus - minus) / (2.0 * step);
        (analytic - fd).abs() / (1.0 + analytic.abs())
    };
    let dx = |g: &dyn Fn(f64, f64, f64) -> f64| (g(t, x + step, u), g(t, x - step, u));
    let du = |g: &dyn Fn(f64, f64, f64) -> f64| (g(t, x, u + step), g(t, x, u - step));

    let b = |t, x, u| prob.drift(t, x, u);
    let s = |t, x, u| prob.diffusion(t, x, u);
    let f = |t, x, u| prob.running_cost(t, x, u);

    let (bp, bm) = dx(&b);
    let (bup, bum) = du(&b);
    let (sp, sm) = dx(&s);
    let (sup, sum) = du(&s);
    let (fp, fm) = dx(&f);
    let (fup, fum) = du(&f);

    DerivativeMismatch {
        drift_dx: gap(prob.drift_dx(t, x, u), bp, bm),
        drift_du: gap(prob.drift_du(t, x, u), bup, bum),
        diffusion_dx: gap(prob.diffusion_dx(t, x, u), sp, sm),
        diffusion_du: gap(prob.diffusion_du(t, x, u), sup, sum),
        running_cost_dx: gap(prob.running_cost_dx(t, x, u), fp, fm),
        running_cost_du: gap(prob.running_cost_du(t, x, u), fup, fum),
        terminal_cost_dx: gap(
            prob.terminal_cost_dx(x),
            prob.terminal_cost(x + step),
            prob.terminal_cost(x - step),
        ),
    }
}

type Coef = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
type TerminalCoef = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A problem assembled from closures, for user-defined models.
///
/// ```
/// use smp_control::problem::{ControlSet, FnProblem};
///
/// // dX = u dt + 0.5 u dW, cost ½∫X² dt
/// let prob = FnProblem::builder(1.0, 1.0)
///     .drift(|_, _, u| u, |_, _, _| 0.0, |_, _, _| 1.0)
///     .diffusion(|_, _, u| 0.5 * u, |_, _, _| 0.0, |_, _, _| 0.5)
///     .running_cost(|_, x, _| 0.5 * x * x, |_, x, _| x, |_, _, _| 0.0)
///     .control_set(ControlSet::Unbounded)
///     .build()
///     .unwrap();
/// # let _ = prob;
/// ```
#[derive(Clone)]
pub struct FnProblem {
    drift: [Coef; 3],
    diffusion: [Coef; 3],
    running: [Coef; 3],
    terminal: [TerminalCoef; 2],
    control_set: ControlSet,
    initial_state: f64,
    horizon: f64,
}

impl FnProblem {
    pub fn builder(initial_state: f64, horizon: f64) -> FnProblemBuilder {
        let zero: Coef = Arc::new(|_, _, _| 0.0);
        let zero_terminal: TerminalCoef = Arc::new(|_| 0.0);
        FnProblemBuilder {
            inner: FnProblem {
                drift: [zero.clone(), zero.clone(), zero.clone()],
                diffusion: [zero.clone(), zero.clone(), zero.clone()],
                running: [zero.clone(), zero.clone(), zero],
                terminal: [zero_terminal.clone(), zero_terminal],
                control_set: ControlSet::Unbounded,
                initial_state,
                horizon,
            },
        }
    }
}

/// Builder for [`FnProblem`]; unset coefficients default to zero.
pub struct FnProblemBuilder {
    inner: FnProblem,
}

fn coef(g: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Coef {
    Arc::new(g)
}

impl FnProblemBuilder {
    /// `b`, `b_x`, `b_u`.
    pub fn drift(
        mut self,
        value: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        dx: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        du: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.inner.drift = [coef(value), coef(dx), coef(du)];
        self
    }

    /// `σ`, `σ_x`, `σ_u`.
    pub fn diffusion(
        mut self,
        value: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        dx: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        du: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.inner.diffusion = [coef(value), coef(dx), coef(du)];
        self
    }

    /// `f`, `f_x`, `f_u`.
    pub fn running_cost(
        mut self,
        value: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        dx: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        du: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.inner.running = [coef(value), coef(dx), coef(du)];
        self
    }

    /// `h`, `h_x`.
    pub fn terminal_cost(
        mut self,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dx: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.inner.terminal = [Arc::new(value), Arc::new(dx)];
        self
    }

    pub fn control_set(mut self, cs: ControlSet) -> Self {
        self.inner.control_set = cs;
        self
    }

    pub fn build(self) -> Result<FnProblem> {
        validate(&self.inner)?;
        Ok(self.inner)
    }
}

impl ControlProblem for FnProblem {
    fn drift(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.drift[0])(t, x, u)
    }
    fn diffusion(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.diffusion[0])(t, x, u)
    }
    fn running_cost(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.running[0])(t, x, u)
    }
    fn terminal_cost(&self, x: f64) -> f64 {
        (self.terminal[0])(x)
    }
    fn drift_dx(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.drift[1])(t, x, u)
    }
    fn drift_du(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.drift[2])(t, x, u)
    }
    fn diffusion_dx(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.diffusion[1])(t, x, u)
    }
    fn diffusion_du(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.diffusion[2])(t, x, u)
    }
    fn running_cost_dx(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.running[1])(t, x, u)
    }
    fn running_cost_du(&self, t: f64, x: f64, u: f64) -> f64 {
        (self.running[2])(t, x, u)
    }
    fn terminal_cost_dx(&self, x: f64) -> f64 {
        (self.terminal[1])(x)
    }
    fn control_set(&self) -> ControlSet {
        self.control_set
    }
    fn initial_state(&self) -> f64 {
        self.initial_state
    }
    fn horizon(&self) -> f64 {
        self.horizon
    }
}
