//! Run configuration: flat `key = value` files overridden by `--key value` flags.
//!
//! Every file key has a matching long flag with the same name. Boolean keys
//! take `true`/`false` in a file and no value on the command line.

use std::fmt::Write as _;
use std::path::PathBuf;

use smp_control::benchmarks::Overrides;
use smp_control::solver::FailurePolicy;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Convergence,
    ListBenchmarks,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Convergence => "convergence",
            Command::ListBenchmarks => "list-benchmarks",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "solve" => Some(Command::Solve),
            "convergence" => Some(Command::Convergence),
            "list-benchmarks" => Some(Command::ListBenchmarks),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub benchmark: Option<String>,
    pub n: Option<usize>,
    pub n_values: Vec<usize>,
    pub overrides: Overrides,
    /// Report destination; stdout when absent.
    pub output: Option<PathBuf>,
    pub emit_tables: bool,
    /// Table file written by `solve` when `emit_tables` is set.
    pub tables_out: Option<PathBuf>,
    pub pretty: bool,
    pub print_config: bool,
}

impl RunConfig {
    fn empty(command: Command) -> Self {
        Self {
            command,
            benchmark: None,
            n: None,
            n_values: Vec::new(),
            overrides: Overrides::default(),
            output: None,
            emit_tables: false,
            tables_out: None,
            pretty: false,
            print_config: false,
        }
    }

    /// Renders the resolved configuration in config-file syntax.
    ///
    /// Parsing the result yields the same configuration (minus `print-config`).
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let o = &self.overrides;
        let _ = writeln!(s, "command = {}", self.command.name());
        if let Some(v) = &self.benchmark {
            let _ = writeln!(s, "benchmark = {v}");
        }
        if let Some(v) = self.n {
            let _ = writeln!(s, "n = {v}");
        }
        if !self.n_values.is_empty() {
            let list: Vec<String> = self.n_values.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(s, "n-values = {}", list.join(","));
        }
        let floats = [
            ("sigma", o.sigma),
            ("x-min", o.x_min),
            ("x-max", o.x_max),
            ("h", o.space_step),
            ("step-size", o.step_size),
            ("tolerance", o.tolerance),
        ];
        for (key, v) in floats {
            if let Some(v) = v {
                let _ = writeln!(s, "{key} = {v:?}");
            }
        }
        if let Some(v) = o.quad_order {
            let _ = writeln!(s, "quad-order = {v}");
        }
        if let Some(v) = o.max_inner_iters {
            let _ = writeln!(s, "max-inner-iters = {v}");
        }
        if let Some(v) = &o.optimizer {
            let _ = writeln!(s, "optimizer = {v}");
        }
        if let Some(v) = o.failure_policy {
            let _ = writeln!(s, "on-limit = {}", policy_name(v));
        }
        if let Some(v) = &self.output {
            let _ = writeln!(s, "output = {}", v.display());
        }
        let _ = writeln!(s, "emit-tables = {}", self.emit_tables);
        if let Some(v) = &self.tables_out {
            let _ = writeln!(s, "tables-out = {}", v.display());
        }
        let _ = writeln!(s, "pretty = {}", self.pretty);
        s
    }

    fn validate(&self) -> Result<()> {
        match self.command {
            Command::ListBenchmarks => Ok(()),
            Command::Solve => {
                if self.benchmark.is_none() {
                    return Err(usage("solve requires --benchmark"));
                }
                if !self.n_values.is_empty() {
                    return Err(usage("--n-values conflicts with solve; use --n"));
                }
                match self.n {
                    None => Err(usage("solve requires --n")),
                    Some(n) if n < 1 => Err(usage("--n must be at least 1")),
                    Some(_) => Ok(()),
                }
            }
            Command::Convergence => {
                if self.benchmark.is_none() {
                    return Err(usage("convergence requires --benchmark"));
                }
                if self.n.is_some() {
                    return Err(usage("--n conflicts with convergence; use --n-values"));
                }
                if self.n_values.len() < 2 {
                    return Err(usage("convergence requires at least two --n-values"));
                }
                Ok(())
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn policy_name(p: FailurePolicy) -> &'static str {
    match p {
        FailurePolicy::FailFast => "fail",
        FailurePolicy::MarkAndContinue => "continue",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Value,
    Bool,
}

const KEYS: &[(&str, Kind)] = &[
    ("command", Kind::Value),
    ("benchmark", Kind::Value),
    ("n", Kind::Value),
    ("n-values", Kind::Value),
    ("sigma", Kind::Value),
    ("x-min", Kind::Value),
    ("x-max", Kind::Value),
    ("h", Kind::Value),
    ("quad-order", Kind::Value),
    ("step-size", Kind::Value),
    ("tolerance", Kind::Value),
    ("max-inner-iters", Kind::Value),
    ("optimizer", Kind::Value),
    ("on-limit", Kind::Value),
    ("output", Kind::Value),
    ("emit-tables", Kind::Bool),
    ("tables-out", Kind::Value),
    ("pretty", Kind::Bool),
];

fn key_kind(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, kind)| *kind)
}

/// Sets one key. Errors are bare messages; callers attach flag or line context.
fn apply_key(
    cfg: &mut RunConfig,
    command: &mut Option<Command>,
    key: &str,
    value: &str,
) -> std::result::Result<(), String> {
    fn num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
        v.parse().map_err(|_| format!("invalid value '{v}'"))
    }
    fn float(v: &str) -> std::result::Result<f64, String> {
        let x: f64 = num(v)?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("invalid value '{v}'"))
        }
    }
    fn boolean(v: &str) -> std::result::Result<bool, String> {
        match v {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(format!("expected true or false, got '{v}'")),
        }
    }
    let o = &mut cfg.overrides;
    match key {
        "command" => {
            *command =
                Some(Command::parse(value).ok_or_else(|| format!("unknown command '{value}'"))?)
        }
        "benchmark" => cfg.benchmark = Some(value.to_string()),
        "n" => cfg.n = Some(num(value)?),
        "n-values" => {
            cfg.n_values = value
                .split(',')
                .map(|s| num::<usize>(s.trim()))
                .collect::<std::result::Result<_, _>>()?
        }
        "sigma" => o.sigma = Some(float(value)?),
        "x-min" => o.x_min = Some(float(value)?),
        "x-max" => o.x_max = Some(float(value)?),
        "h" => o.space_step = Some(float(value)?),
        "quad-order" => o.quad_order = Some(num(value)?),
        "step-size" => o.step_size = Some(float(value)?),
        "tolerance" => o.tolerance = Some(float(value)?),
        "max-inner-iters" => o.max_inner_iters = Some(num(value)?),
        "optimizer" => o.optimizer = Some(value.to_string()),
        "on-limit" => {
            o.failure_policy = Some(match value {
                "fail" => FailurePolicy::FailFast,
                "continue" => FailurePolicy::MarkAndContinue,
                _ => return Err(format!("expected fail or continue, got '{value}'")),
            })
        }
        "output" => cfg.output = Some(PathBuf::from(value)),
        "emit-tables" => cfg.emit_tables = boolean(value)?,
        "tables-out" => cfg.tables_out = Some(PathBuf::from(value)),
        "pretty" => cfg.pretty = boolean(value)?,
        _ => return Err(format!("unknown key '{key}'")),
    }
    Ok(())
}

/// Location of the config file named by `--config`, if any.
pub fn config_path(argv: &[String]) -> Result<Option<PathBuf>> {
    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            return match it.next() {
                Some(p) => Ok(Some(PathBuf::from(p))),
                None => Err(usage("--config needs a value")),
            };
        }
        if let Some(p) = arg.strip_prefix("--config=") {
            return Ok(Some(PathBuf::from(p)));
        }
    }
    Ok(None)
}

/// Resolves a [`RunConfig`] from arguments (program name excluded) and the
/// text of the file named by `--config`.
pub fn parse_config(argv: &[String], config_text: Option<&str>) -> Result<RunConfig> {
    let mut cfg = RunConfig::empty(Command::Solve);
    let mut command = None;

    if let Some(text) = config_text {
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::ConfigFile {
                    line,
                    message: format!("expected 'key = value', got '{content}'"),
                })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k| k == key) {
                return Err(CliError::ConfigFile {
                    line,
                    message: format!("duplicate key '{key}'"),
                });
            }
            seen.push(key.to_string());
            apply_key(&mut cfg, &mut command, key, value)
                .map_err(|message| CliError::ConfigFile { line, message })?;
        }
    }

    let mut positional = None;
    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        let Some(flag) = arg.strip_prefix("--") else {
            if positional.is_some() {
                return Err(usage(format!("unexpected argument '{arg}'")));
            }
            positional =
                Some(Command::parse(arg).ok_or_else(|| usage(format!("unknown command '{arg}'")))?);
            continue;
        };
        let (name, inline) = match flag.split_once('=') {
            Some((n, v)) => (n, Some(v)),
            None => (flag, None),
        };
        match name {
            "config" => {
                if inline.is_none() {
                    it.next();
                }
                continue;
            }
            "print-config" => {
                cfg.print_config = true;
                continue;
            }
            "command" => {
                return Err(usage(
                    "--command: give the command as a positional argument",
                ))
            }
            _ => {}
        }
        let value = match (key_kind(name), inline) {
            (None, _) => return Err(usage(format!("unknown flag '--{name}'"))),
            (Some(_), Some(v)) => v.to_string(),
            (Some(Kind::Bool), None) => "true".to_string(),
            (Some(Kind::Value), None) => it
                .next()
                .cloned()
                .ok_or_else(|| usage(format!("--{name} needs a value")))?,
        };
        apply_key(&mut cfg, &mut command, name, &value)
            .map_err(|m| usage(format!("--{name}: {m}")))?;
    }

    cfg.command = positional
        .or(command)
        .ok_or_else(|| usage("missing command (solve, convergence, list-benchmarks)"))?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn solve_lq() {
        let cfg = parse_config(&args("solve --benchmark lq --n 64"), None).unwrap();
        assert_eq!(cfg.command, Command::Solve);
        assert_eq!(cfg.benchmark.as_deref(), Some("lq"));
        assert_eq!(cfg.n, Some(64));
        assert_eq!(cfg.overrides, Overrides::default());
    }

    #[test]
    fn convergence_with_sigma() {
        let cfg = parse_config(
            &args("convergence --benchmark inventory --sigma 0.3 --n-values 8,16,32,64,128"),
            None,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::Convergence);
        assert_eq!(cfg.overrides.sigma, Some(0.3));
        assert_eq!(cfg.n_values, vec![8, 16, 32, 64, 128]);
    }

    #[test]
    fn n_conflicts_with_convergence() {
        let err = parse_config(
            &args("convergence --benchmark lq --n 8 --n-values 8,16"),
            None,
        )
        .unwrap_err();
        assert!(
            matches!(&err, CliError::Usage(m) if m.contains("--n")),
            "{err}"
        );
    }

    #[test]
    fn convergence_needs_two_resolutions() {
        assert!(parse_config(&args("convergence --benchmark lq --n-values 8"), None).is_err());
        assert!(parse_config(&args("convergence --benchmark lq"), None).is_err());
    }

    #[test]
    fn unknown_flag_is_named() {
        let err = parse_config(&args("solve --benchmark lq --n 8 --bogus 1"), None).unwrap_err();
        assert!(
            matches!(&err, CliError::Usage(m) if m.contains("--bogus")),
            "{err}"
        );
    }

    #[test]
    fn flags_override_file() {
        let text = "command = solve\nbenchmark = lq\nn = 16\nstep-size = 0.25 # smaller\n";
        let cfg = parse_config(&args("--n 32"), Some(text)).unwrap();
        assert_eq!(cfg.n, Some(32));
        assert_eq!(cfg.overrides.step_size, Some(0.25));
    }

    #[test]
    fn file_errors_carry_line() {
        let err = parse_config(&[], Some("# header\nbenchmark = lq\nfoo = 1\n")).unwrap_err();
        assert!(matches!(err, CliError::ConfigFile { line: 3, .. }), "{err}");
        let err = parse_config(&[], Some("benchmark lq\n")).unwrap_err();
        assert!(matches!(err, CliError::ConfigFile { line: 1, .. }), "{err}");
        let err = parse_config(&[], Some("n = 1\nn = 2\n")).unwrap_err();
        assert!(matches!(err, CliError::ConfigFile { line: 2, .. }), "{err}");
    }

    #[test]
    fn printed_config_reparses() {
        let cfg = parse_config(
            &args("convergence --benchmark portfolio --n-values 8,16 --h 0.5 --on-limit continue --pretty --print-config"),
            None,
        )
        .unwrap();
        let again = parse_config(&[], Some(&cfg.to_config_text())).unwrap();
        assert_eq!(
            again,
            RunConfig {
                print_config: false,
                ..cfg
            }
        );
    }

    #[test]
    fn config_path_is_found() {
        assert_eq!(
            config_path(&args("convergence --config a.cfg --pretty")).unwrap(),
            Some(PathBuf::from("a.cfg"))
        );
        assert_eq!(
            config_path(&args("--config=b.cfg")).unwrap(),
            Some(PathBuf::from("b.cfg"))
        );
        assert!(config_path(&args("--config")).is_err());
    }
}
