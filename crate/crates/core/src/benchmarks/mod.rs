//! Registered reference problems with closed-form (or reference) optimal
//! costs, and convergence studies over a sequence of time resolutions.
//!
//! | id              | dynamics                          | control set |
//! |-----------------|-----------------------------------|-------------|
//! | `bs-tracking-a` | `dX = uX dt + σX dW`, target (a)  | ℝ           |
//! | `bs-tracking-b` | same, target (b)                  | ℝ           |
//! | `inventory`     | `dX = (u - r_t) dt + σ dW`        | ℝ           |
//! | `lq`            | `dX = u dt + δu dW`               | ℝ           |
//! | `portfolio`     | `dX = (αu + γ)X dt + βuX dW`      | `[-1, 1]`   |

mod convergence;
mod problems;

use std::sync::Arc;

pub use convergence::{fit_rate, run_convergence, run_convergence_for, ConvergenceReport};
pub use problems::{BlackScholesTracking, Inventory, LinearQuadratic, Portfolio, TrackingVariant};

use crate::cost::{evaluate_cost, CostResult};
use crate::error::{Error, Result};
use crate::numerics::{SpaceGrid, TimeGrid};
use crate::problem::ControlProblem;
use crate::solver::{backward_sweep, FailurePolicy, SolverConfig, SweepOutput};

pub type FeedbackLaw = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A fully wired reference problem.
#[derive(Clone)]
pub struct Benchmark {
    pub id: &'static str,
    pub problem: Arc<dyn ControlProblem>,
    pub reference_cost: f64,
    pub default_config: SolverConfig,
    pub space_grid: SpaceGrid,
    /// Closed-form optimal control `u*(t, x)`, when known.
    pub optimal_control: Option<FeedbackLaw>,
    /// Model parameters, for display.
    pub params: Vec<(&'static str, f64)>,
}

impl std::fmt::Debug for Benchmark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Benchmark")
            .field("id", &self.id)
            .field("reference_cost", &self.reference_cost)
            .field("default_config", &self.default_config)
            .field("space_grid", &self.space_grid)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

/// Result of solving a benchmark at one time resolution.
#[derive(Debug, Clone)]
pub struct BenchmarkRun {
    pub n: usize,
    pub sweep: SweepOutput,
    pub cost: CostResult,
    pub abs_error: f64,
}

impl Benchmark {
    pub fn time_grid(&self, n: usize) -> Result<TimeGrid> {
        TimeGrid::new(n, self.problem.horizon())
    }

    /// Backward sweep plus cost evaluation with the default configuration.
    pub fn solve(&self, n: usize) -> Result<BenchmarkRun> {
        let tg = self.time_grid(n)?;
        let sweep = backward_sweep(
            self.problem.as_ref(),
            tg,
            self.space_grid,
            &self.default_config,
        )?;
        let cost = evaluate_cost(self.problem.as_ref(), &sweep.policy, &self.default_config)?;
        Ok(BenchmarkRun {
            n,
            abs_error: (self.reference_cost - cost.cost).abs(),
            sweep,
            cost,
        })
    }
}

/// Caller-supplied adjustments to a benchmark's defaults.
///
/// `sigma` applies to `inventory` only; everything else is grid or solver
/// configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub sigma: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub space_step: Option<f64>,
    pub quad_order: Option<usize>,
    pub step_size: Option<f64>,
    pub tolerance: Option<f64>,
    pub max_inner_iters: Option<usize>,
    pub optimizer: Option<String>,
    pub failure_policy: Option<FailurePolicy>,
}

impl Overrides {
    fn apply(
        &self,
        mut cfg: SolverConfig,
        domain: (f64, f64, f64),
    ) -> Result<(SolverConfig, SpaceGrid)> {
        if let Some(v) = self.quad_order {
            cfg.quad_order = v;
        }
        if let Some(v) = self.step_size {
            cfg.step_size = v;
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.max_inner_iters {
            cfg.max_inner_iters = v;
        }
        if let Some(v) = &self.optimizer {
            cfg.optimizer = v.clone();
        }
        if let Some(v) = self.failure_policy {
            cfg.failure_policy = v;
        }
        cfg.validate()?;
        let grid = SpaceGrid::new(
            self.x_min.unwrap_or(domain.0),
            self.x_max.unwrap_or(domain.1),
            self.space_step.unwrap_or(domain.2),
        )?;
        Ok((cfg, grid))
    }

    fn reject_sigma(&self, id: &str) -> Result<()> {
        match self.sigma {
            Some(_) => Err(Error::invalid(format!(
                "benchmark '{id}' does not accept a sigma override"
            ))),
            None => Ok(()),
        }
    }
}

/// Constructs one named benchmark.
pub trait BenchmarkFactory: Send + Sync {
    fn id(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, overrides: &Overrides) -> Result<Benchmark>;
}

struct TrackingFactory {
    variant: TrackingVariant,
}

impl BenchmarkFactory for TrackingFactory {
    fn id(&self) -> &'static str {
        match self.variant {
            TrackingVariant::A => "bs-tracking-a",
            TrackingVariant::B => "bs-tracking-b",
        }
    }

    fn summary(&self) -> &'static str {
        match self.variant {
            TrackingVariant::A => "Black-Scholes tracking, target (a); x0=1, T=1, sigma=0.1",
            TrackingVariant::B => "Black-Scholes tracking, target (b); x0=1, T=1, sigma=0.1",
        }
    }

    fn build(&self, overrides: &Overrides) -> Result<Benchmark> {
        overrides.reject_sigma(self.id())?;
        let prob = BlackScholesTracking {
            variant: self.variant,
            x0: 1.0,
            horizon: 1.0,
            sigma: 0.1,
        };
        // reference values for x0 = 1, T = 1, sigma = 0.1
        let reference_cost = match self.variant {
            TrackingVariant::A => 0.514898066090988,
            TrackingVariant::B => 0.345819897539892,
        };
        let cfg = SolverConfig {
            step_size: 1.0,
            ..SolverConfig::default()
        };
        let (cfg, grid) = overrides.apply(cfg, (0.0, 4.0, 0.05))?;
        Ok(Benchmark {
            id: self.id(),
            reference_cost,
            default_config: cfg,
            space_grid: grid,
            optimal_control: Some(Arc::new(move |t, _x| prob.optimal_control(t))),
            params: vec![("x0", prob.x0), ("T", prob.horizon), ("sigma", prob.sigma)],
            problem: Arc::new(prob),
        })
    }
}

struct InventoryFactory;

impl BenchmarkFactory for InventoryFactory {
    fn id(&self) -> &'static str {
        "inventory"
    }

    fn summary(&self) -> &'static str {
        "inventory control; x0=0, T=1, sigma=0.1 (override with sigma)"
    }

    fn build(&self, overrides: &Overrides) -> Result<Benchmark> {
        let sigma = overrides.sigma.unwrap_or(0.1);
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::invalid(format!(
                "sigma must be non-negative, got {sigma}"
            )));
        }
        let prob = Inventory {
            x0: 0.0,
            horizon: 1.0,
            sigma,
        };
        let cfg = SolverConfig {
            step_size: 1.0,
            ..SolverConfig::default()
        };
        let (cfg, grid) = overrides.apply(cfg, (-3.0, 3.0, 0.05))?;
        let horizon = prob.horizon;
        Ok(Benchmark {
            id: self.id(),
            reference_cost: prob.reference_cost(),
            default_config: cfg,
            space_grid: grid,
            optimal_control: Some(Arc::new(move |t, _x| horizon - t)),
            params: vec![("x0", prob.x0), ("T", prob.horizon), ("sigma", prob.sigma)],
            problem: Arc::new(prob),
        })
    }
}

struct LqFactory;

impl BenchmarkFactory for LqFactory {
    fn id(&self) -> &'static str {
        "lq"
    }

    fn summary(&self) -> &'static str {
        "linear-quadratic with control-dependent noise; x0=1, T=1, delta=2"
    }

    fn build(&self, overrides: &Overrides) -> Result<Benchmark> {
        overrides.reject_sigma(self.id())?;
        let prob = LinearQuadratic {
            x0: 1.0,
            horizon: 1.0,
            delta: 2.0,
        };
        // H_u has slope up to ~3.7 in u here, so ρ must stay below ~0.55
        let cfg = SolverConfig {
            step_size: 0.5,
            max_inner_iters: 5000,
            ..SolverConfig::default()
        };
        let (cfg, grid) = overrides.apply(cfg, (-4.0, 4.0, 0.05))?;
        let d2 = prob.delta * prob.delta;
        Ok(Benchmark {
            id: self.id(),
            reference_cost: prob.reference_cost(),
            default_config: cfg,
            space_grid: grid,
            optimal_control: Some(Arc::new(move |_t, x| -x / d2)),
            params: vec![("x0", prob.x0), ("T", prob.horizon), ("delta", prob.delta)],
            problem: Arc::new(prob),
        })
    }
}

struct PortfolioFactory;

impl BenchmarkFactory for PortfolioFactory {
    fn id(&self) -> &'static str {
        "portfolio"
    }

    fn summary(&self) -> &'static str {
        "constrained portfolio, u in [-1,1]; x0=6, kappa=20, alpha=0.25, gamma=1, beta=sqrt(2)/2"
    }

    fn build(&self, overrides: &Overrides) -> Result<Benchmark> {
        overrides.reject_sigma(self.id())?;
        let prob = Portfolio {
            x0: 6.0,
            horizon: 1.0,
            kappa: 20.0,
            alpha: 0.25,
            beta: std::f64::consts::FRAC_1_SQRT_2,
            gamma: 1.0,
        };
        let cfg = SolverConfig {
            optimizer: "bisection".to_string(),
            ..SolverConfig::default()
        };
        let (cfg, grid) = overrides.apply(cfg, (0.0, 80.0, 0.25))?;
        Ok(Benchmark {
            id: self.id(),
            // fine-mesh reference value; no closed form is available
            reference_cost: 6.00909101172000,
            default_config: cfg,
            space_grid: grid,
            optimal_control: None,
            params: vec![
                ("x0", prob.x0),
                ("T", prob.horizon),
                ("kappa", prob.kappa),
                ("alpha", prob.alpha),
                ("beta", prob.beta),
                ("gamma", prob.gamma),
            ],
            problem: Arc::new(prob),
        })
    }
}

/// Benchmarks registered by id.
pub struct BenchmarkRegistry {
    factories: Vec<Box<dyn BenchmarkFactory>>,
}

impl BenchmarkRegistry {
    pub fn empty() -> Self {
        Self {
            factories: Vec::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(TrackingFactory {
            variant: TrackingVariant::A,
        }));
        reg.register(Box::new(TrackingFactory {
            variant: TrackingVariant::B,
        }));
        reg.register(Box::new(InventoryFactory));
        reg.register(Box::new(LqFactory));
        reg.register(Box::new(PortfolioFactory));
        reg
    }

    pub fn register(&mut self, factory: Box<dyn BenchmarkFactory>) {
        self.factories.retain(|f| f.id() != factory.id());
        self.factories.push(factory);
    }

    pub fn get(&self, id: &str) -> Result<&dyn BenchmarkFactory> {
        self.factories
            .iter()
            .find(|f| f.id() == id)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: "benchmark",
                name: id.to_string(),
            })
    }

    pub fn build(&self, id: &str, overrides: &Overrides) -> Result<Benchmark> {
        self.get(id)?.build(overrides)
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn BenchmarkFactory> {
        self.factories.iter().map(|f| f.as_ref())
    }
}

impl Default for BenchmarkRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Builds a registered benchmark.
pub fn build_benchmark(id: &str, overrides: &Overrides) -> Result<Benchmark> {
    BenchmarkRegistry::builtin().build(id, overrides)
}
