//! Front end for the `smpc` binary: configuration, reports and table files.

pub mod config;
pub mod error;
pub mod report;
pub mod tables;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use smp_control::benchmarks::{build_benchmark, run_convergence_for, BenchmarkRegistry};

pub use config::{config_path, parse_config, Command, RunConfig};
pub use error::{CliError, Result};
pub use report::{emit_report, ReportFormat};
pub use tables::{load_tables, persist_tables, LoadedTables};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "SMPC_WORKERS";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_output(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cfg.output {
        Some(path) => fs::write(path, text).map_err(io_err(path)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

/// Executes a resolved configuration, writing reports to `output` or `stdout`.
///
/// Output is written before an [`CliError::IterationLimit`] is returned, so a
/// run under `on-limit = continue` still leaves its results behind.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    if cfg.print_config {
        return stdout
            .write_all(cfg.to_config_text().as_bytes())
            .map_err(io_err(Path::new("<stdout>")));
    }
    let id = cfg.benchmark.as_deref().unwrap_or_default();
    let limit_hits = match cfg.command {
        Command::ListBenchmarks => {
            let mut text = String::new();
            for f in BenchmarkRegistry::builtin().iter() {
                text.push_str(&format!("{:<16}{}\n", f.id(), f.summary()));
            }
            write_output(cfg, &text, stdout)?;
            0
        }
        Command::Solve => {
            let n = cfg.n.unwrap_or_default();
            let bench = build_benchmark(id, &cfg.overrides)?;
            let solved = bench.solve(n)?;
            let d = &solved.sweep.diagnostics;
            let text = format!(
                "benchmark = {id}\nN = {n}\ncost = {:.12e}\nreference = {:.12e}\nabs_error = {:.12e}\nmax_inner_iters = {}\nlimit_exceeded = {}\ndegenerate = {}\n",
                solved.cost.cost, bench.reference_cost, solved.abs_error, d.max_inner_iters, d.limit_exceeded, d.degenerate
            );
            if cfg.emit_tables {
                let path = cfg
                    .tables_out
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{id}-N{n}.csv")));
                persist_tables(
                    &solved.sweep.policy,
                    &solved.sweep.adjoint,
                    Some(&solved.cost),
                    &path,
                )?;
            }
            write_output(cfg, &text, stdout)?;
            d.limit_exceeded
        }
        Command::Convergence => {
            if cfg.emit_tables {
                return Err(CliError::Usage(
                    "--emit-tables applies to solve; run solve per N to keep tables".into(),
                ));
            }
            let bench = build_benchmark(id, &cfg.overrides)?;
            let report = run_convergence_for(&bench, &cfg.n_values)?;
            let format = if cfg.pretty {
                ReportFormat::Pretty
            } else {
                ReportFormat::Csv
            };
            write_output(cfg, &emit_report(&report, format), stdout)?;
            report.limit_exceeded.iter().sum()
        }
    };
    if limit_hits > 0 {
        return Err(CliError::IterationLimit { count: limit_hits });
    }
    Ok(())
}
