use smp_control::benchmarks::{build_benchmark, fit_rate, Overrides};
use smp_control::cost::{analytic_control, analytic_cost, evaluate_cost};
use smp_control::numerics::{SpaceGrid, TimeGrid};
use smp_control::problem::{ControlProblem, ControlSet, FnProblem};
use smp_control::solver::{backward_sweep, PolicyTable, SolverConfig};
use smp_control::Error;

/// `prob` with `shift` added to the terminal cost.
struct Shifted<'a> {
    inner: &'a dyn ControlProblem,
    shift: f64,
}

impl ControlProblem for Shifted<'_> {
    fn drift(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.drift(t, x, u)
    }
    fn diffusion(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.diffusion(t, x, u)
    }
    fn running_cost(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.running_cost(t, x, u)
    }
    fn terminal_cost(&self, x: f64) -> f64 {
        self.inner.terminal_cost(x) + self.shift
    }
    fn drift_dx(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.drift_dx(t, x, u)
    }
    fn drift_du(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.drift_du(t, x, u)
    }
    fn diffusion_dx(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.diffusion_dx(t, x, u)
    }
    fn diffusion_du(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.diffusion_du(t, x, u)
    }
    fn running_cost_dx(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.running_cost_dx(t, x, u)
    }
    fn running_cost_du(&self, t: f64, x: f64, u: f64) -> f64 {
        self.inner.running_cost_du(t, x, u)
    }
    fn terminal_cost_dx(&self, x: f64) -> f64 {
        self.inner.terminal_cost_dx(x)
    }
    fn control_set(&self) -> ControlSet {
        self.inner.control_set()
    }
    fn initial_state(&self) -> f64 {
        self.inner.initial_state()
    }
    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }
}

#[test]
fn constant_terminal_cost_is_returned() {
    let prob = FnProblem::builder(0.3, 2.0)
        .drift(|_, x, u| u * x, |_, _, u| u, |_, x, _| x)
        .diffusion(|_, x, _| 0.4 * x, |_, _, _| 0.4, |_, _, _| 0.0)
        .terminal_cost(|_| 2.75, |_| 0.0)
        .control_set(ControlSet::Unbounded)
        .build()
        .unwrap();
    let tg = TimeGrid::new(12, 2.0).unwrap();
    let sg = SpaceGrid::new(-1.0, 1.0, 0.05).unwrap();
    let tbl = PolicyTable::from_fn(tg, sg, ControlSet::Unbounded, |t, x| (t - x).sin()).unwrap();
    let c = evaluate_cost(&prob, &tbl, &SolverConfig::default()).unwrap();
    assert!((c.cost - 2.75).abs() < 1e-12);
    assert!(c.y_table.iter().flatten().all(|v| (v - 2.75).abs() < 1e-12));
}

#[test]
fn deterministic_cost_matches_forward_simulation() {
    let b = build_benchmark(
        "inventory",
        &Overrides {
            sigma: Some(0.0),
            ..Overrides::default()
        },
    )
    .unwrap();
    let prob = b.problem.as_ref();
    for n in [8, 16, 37] {
        let tg = b.time_grid(n).unwrap();
        // State-independent control keeps Y_i quadratic, which the spline carries exactly.
        let tbl =
            PolicyTable::from_fn(tg, b.space_grid, prob.control_set(), |t, _| 1.0 - t).unwrap();
        let c = evaluate_cost(prob, &tbl, &b.default_config).unwrap();
        let dt = tg.dt();
        let (mut x, mut total) = (prob.initial_state(), 0.0);
        for i in 0..n {
            let t = tg.t(i);
            let u = 1.0 - t;
            total += prob.running_cost(t, x, u) * dt;
            x += prob.drift(t, x, u) * dt;
        }
        total += prob.terminal_cost(x);
        assert!(
            (c.cost - total).abs() <= 1e-10,
            "N={n}: {} vs {total}",
            c.cost
        );
    }
}

#[test]
fn lq_linear_feedback_cost_matches_discrete_moments() {
    let o = Overrides {
        x_min: Some(-12.0),
        x_max: Some(12.0),
        ..Overrides::default()
    };
    let b = build_benchmark("lq", &o).unwrap();
    for n in [8, 16] {
        let tg = b.time_grid(n).unwrap();
        let tbl =
            PolicyTable::from_fn(tg, b.space_grid, ControlSet::Unbounded, |_, x| -x / 4.0).unwrap();
        let c = evaluate_cost(b.problem.as_ref(), &tbl, &b.default_config).unwrap();
        // X' = X(1 - dt/4) - (δ/4)·X·ΔW with δ = 2, so E[X'²] = g·E[X²].
        let dt = tg.dt();
        let g = (1.0 - dt / 4.0).powi(2) + dt / 4.0;
        let want: f64 = (0..n).map(|i| 0.5 * g.powi(i as i32) * dt).sum();
        assert!((c.cost - want).abs() <= 1e-9, "N={n}: {} vs {want}", c.cost);
    }
}

#[test]
fn lq_linear_feedback_cost_converges_first_order() {
    let b = build_benchmark("lq", &Overrides::default()).unwrap();
    let j_star = 2.0 * (1.0 - (-0.25f64).exp());
    assert!((b.reference_cost - j_star).abs() < 1e-15);
    let ns = [8, 16, 32, 64, 128];
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let tbl = PolicyTable::from_fn(
                b.time_grid(n).unwrap(),
                b.space_grid,
                ControlSet::Unbounded,
                |_, x| -x / 4.0,
            )
            .unwrap();
            (evaluate_cost(b.problem.as_ref(), &tbl, &b.default_config)
                .unwrap()
                .cost
                - j_star)
                .abs()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    let rate = fit_rate(&ns, &errs).unwrap();
    assert!((0.9..=1.1).contains(&rate), "rate {rate}");
}

#[test]
fn terminal_shift_moves_cost_by_shift() {
    let b = build_benchmark("portfolio", &Overrides::default()).unwrap();
    let tg = b.time_grid(8).unwrap();
    let out = backward_sweep(b.problem.as_ref(), tg, b.space_grid, &b.default_config).unwrap();
    let base = evaluate_cost(b.problem.as_ref(), &out.policy, &b.default_config).unwrap();
    for shift in [-3.5, 0.25, 17.0] {
        let shifted = Shifted {
            inner: b.problem.as_ref(),
            shift,
        };
        let c = evaluate_cost(&shifted, &out.policy, &b.default_config).unwrap();
        assert!((c.cost - base.cost - shift).abs() <= 1e-10, "shift {shift}");
    }
}

#[test]
fn terminal_row_of_cost_is_terminal_cost() {
    let b = build_benchmark("portfolio", &Overrides::default()).unwrap();
    let tbl = PolicyTable::from_fn(
        b.time_grid(4).unwrap(),
        b.space_grid,
        b.problem.control_set(),
        |_, _| 0.5,
    )
    .unwrap();
    let c = evaluate_cost(b.problem.as_ref(), &tbl, &b.default_config).unwrap();
    let want: Vec<f64> = b
        .space_grid
        .nodes()
        .map(|x| b.problem.terminal_cost(x))
        .collect();
    assert_eq!(c.y_table[4], want);
}

#[test]
fn reference_costs() {
    let none = Overrides::default();
    assert_eq!(
        analytic_cost("bs-tracking-a", &none).unwrap(),
        Some(0.514898066090988)
    );
    assert_eq!(
        analytic_cost("bs-tracking-b", &none).unwrap(),
        Some(0.345819897539892)
    );
    assert_eq!(
        analytic_cost("portfolio", &none).unwrap(),
        Some(6.00909101172000)
    );
    let inv = analytic_cost("inventory", &none).unwrap().unwrap();
    assert!((inv - (1.0 / 6.0 + (0.01 - 2.0) / 4.0 + 1.0)).abs() < 1e-15);
    let loud = Overrides {
        sigma: Some(0.3),
        ..Overrides::default()
    };
    let inv = analytic_cost("inventory", &loud).unwrap().unwrap();
    assert!((inv - (1.0 / 6.0 + (0.09 - 2.0) / 4.0 + 1.0)).abs() < 1e-15);
    let lq = analytic_cost("lq", &none).unwrap().unwrap();
    assert!((lq - 2.0 * (1.0 - (-0.25f64).exp())).abs() < 1e-15);
    assert!(matches!(
        analytic_cost("nope", &none),
        Err(Error::Unknown { .. })
    ));
}

#[test]
fn reference_controls() {
    assert!((analytic_control("inventory", 0.25, 3.0).unwrap().unwrap() - 0.75).abs() < 1e-15);
    assert!((analytic_control("lq", 0.1, 2.0).unwrap().unwrap() + 0.5).abs() < 1e-15);
    assert!(
        (analytic_control("bs-tracking-a", 0.0, 1.0)
            .unwrap()
            .unwrap()
            - 1.0)
            .abs()
            < 1e-15
    );
    assert_eq!(analytic_control("portfolio", 0.0, 6.0).unwrap(), None);
    assert!(analytic_control("nope", 0.0, 0.0).is_err());
}

#[test]
fn benchmark_control_sets() {
    let none = Overrides::default();
    assert_eq!(
        build_benchmark("lq", &none).unwrap().problem.control_set(),
        ControlSet::Unbounded
    );
    assert_eq!(
        build_benchmark("portfolio", &none)
            .unwrap()
            .problem
            .control_set(),
        ControlSet::Interval {
            lower: -1.0,
            upper: 1.0
        }
    );
}

#[test]
fn sigma_override_is_inventory_only() {
    let o = Overrides {
        sigma: Some(0.2),
        ..Overrides::default()
    };
    assert!(build_benchmark("inventory", &o).is_ok());
    for id in ["lq", "portfolio", "bs-tracking-a", "bs-tracking-b"] {
        assert!(
            matches!(build_benchmark(id, &o), Err(Error::InvalidArgument(_))),
            "{id}"
        );
    }
}
