use std::fmt::Write as _;

use smp_control::benchmarks::ConvergenceReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    /// Aligned table, one column per resolution.
    Pretty,
}

pub const REPORT_HEADER: &str = "benchmark,N,cost,reference,abs_error,rate";

/// 13 significant digits.
fn num(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn emit_report(report: &ConvergenceReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => csv(report),
        ReportFormat::Pretty => pretty(report),
    }
}

fn csv(r: &ConvergenceReport) -> String {
    let mut s = String::new();
    s.push_str(REPORT_HEADER);
    s.push('\n');
    for ((n, cost), err) in r.n_values.iter().zip(&r.costs).zip(&r.errors) {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.benchmark_id,
            n,
            num(*cost),
            num(r.reference),
            num(*err),
            num(r.rate)
        );
    }
    s
}

fn pretty(r: &ConvergenceReport) -> String {
    const LABEL: usize = 12;
    const CELL: usize = 12;
    let mut s = String::new();
    let _ = writeln!(s, "{}  reference cost {:.9e}", r.benchmark_id, r.reference);
    let _ = write!(s, "{:<LABEL$}", "N");
    for n in &r.n_values {
        let _ = write!(s, "{n:>CELL$}");
    }
    let _ = writeln!(s, "{:>CELL$}", "CR");
    let _ = write!(s, "{:<LABEL$}", "cost");
    for c in &r.costs {
        let _ = write!(s, "{:>CELL$}", format!("{c:.4e}"));
    }
    s.push('\n');
    let _ = write!(s, "{:<LABEL$}", "|J*-J|");
    for e in &r.errors {
        let _ = write!(s, "{:>CELL$}", format!("{e:.3e}"));
    }
    let _ = writeln!(s, "{:>CELL$}", format!("{:.4}", r.rate));
    if r.limit_exceeded.iter().any(|&c| c > 0) {
        let _ = write!(s, "{:<LABEL$}", "limit hits");
        for c in &r.limit_exceeded {
            let _ = write!(s, "{c:>CELL$}");
        }
        s.push('\n');
    }
    s
}
