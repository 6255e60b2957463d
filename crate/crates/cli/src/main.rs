use std::process::ExitCode;

use smp_control_cli::{config_path, parse_config, run, CliError, WORKERS_ENV};

const HELP: &str = "\
usage: smpc <solve|convergence|list-benchmarks> [--config FILE] [--KEY VALUE]...

keys (also accepted as `key = value` lines in FILE; flags win):
  --benchmark ID         benchmark id (see list-benchmarks)
  --n N                  time steps (solve)
  --n-values A,B,...     time-step ladder (convergence)
  --sigma S              noise level (inventory only)
  --x-min A --x-max B    spatial domain
  --h H                  spatial step
  --quad-order K         Gauss-Hermite nodes
  --step-size R          projected-gradient step
  --tolerance E          inner stopping tolerance
  --max-inner-iters M    inner iteration cap
  --optimizer NAME       gradient | bisection
  --on-limit POLICY      fail | continue
  --output PATH          write the report to PATH instead of stdout
  --emit-tables          persist the solve tables as CSV
  --tables-out PATH      table file (default <id>-N<n>.csv)
  --pretty               human-readable convergence table
  --print-config         print the resolved config and exit

environment: SMPC_WORKERS sets the worker thread count.
";

fn configure_workers() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{WORKERS_ENV} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{WORKERS_ENV}: {e}")))
}

fn real_main() -> Result<(), CliError> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.iter().any(|a| a == "--help" || a == "-h") {
        print!("{HELP}");
        return Ok(());
    }
    let text = match config_path(&argv)? {
        Some(path) => {
            Some(std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?)
        }
        None => None,
    };
    let cfg = parse_config(&argv, text.as_deref())?;
    configure_workers()?;
    run(&cfg, &mut std::io::stdout().lock())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("smpc: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
