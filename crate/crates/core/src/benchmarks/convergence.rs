use rayon::prelude::*;

use super::{build_benchmark, Benchmark, Overrides};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub benchmark_id: String,
    pub n_values: Vec<usize>,
    pub costs: Vec<f64>,
    pub reference: f64,
    /// `|reference - cost|` per resolution.
    pub errors: Vec<f64>,
    /// Negated least-squares slope of `ln(error)` against `ln(N)`.
    pub rate: f64,
    /// Points per resolution whose inner iteration hit its cap.
    pub limit_exceeded: Vec<usize>,
}

/// Least-squares slope of `ln e` on `ln N`, negated.
pub fn fit_rate(n_values: &[usize], errors: &[f64]) -> Result<f64> {
    if n_values.len() != errors.len() || n_values.len() < 2 {
        return Err(Error::invalid(
            "rate fit needs at least two (N, error) pairs",
        ));
    }
    if errors.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::invalid("rate fit needs positive finite errors"));
    }
    let xs: Vec<f64> = n_values.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("rate fit needs distinct N values"));
    }
    Ok(-sxy / sxx)
}

fn check_n_values(n_values: &[usize]) -> Result<()> {
    if n_values.len() < 2 {
        return Err(Error::invalid(
            "convergence study needs at least two N values",
        ));
    }
    if n_values.iter().any(|&n| n < 2) {
        return Err(Error::invalid("every N must be at least 2"));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("N values must be strictly increasing"));
    }
    Ok(())
}

pub fn run_convergence(
    id: &str,
    n_values: &[usize],
    overrides: &Overrides,
) -> Result<ConvergenceReport> {
    check_n_values(n_values)?;
    let bench = build_benchmark(id, overrides)?;
    run_convergence_for(&bench, n_values)
}

/// Solves `bench` at every `N` (concurrently) and fits the rate.
pub fn run_convergence_for(bench: &Benchmark, n_values: &[usize]) -> Result<ConvergenceReport> {
    check_n_values(n_values)?;
    let runs = n_values
        .par_iter()
        .map(|&n| {
            bench.solve(n).map_err(|e| Error::AtResolution {
                n,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let costs: Vec<f64> = runs.iter().map(|r| r.cost.cost).collect();
    let errors: Vec<f64> = runs.iter().map(|r| r.abs_error).collect();
    let rate = fit_rate(n_values, &errors)?;
    Ok(ConvergenceReport {
        benchmark_id: bench.id.to_string(),
        n_values: n_values.to_vec(),
        costs,
        reference: bench.reference_cost,
        errors,
        rate,
        limit_exceeded: runs
            .iter()
            .map(|r| r.sweep.diagnostics.limit_exceeded)
            .collect(),
    })
}
