//! CSV persistence of policy, adjoint and cost tables.
//!
//! One row per `(i, x_k)`. Rows with `i = N` leave `phi` and `q` empty since
//! those tables have only `N` rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use smp_control::cost::CostResult;
use smp_control::solver::{AdjointTable, PolicyTable};

use crate::error::{CliError, Result};

pub const TABLE_HEADER: &str = "i,t,x,phi,p,q";
pub const TABLE_HEADER_WITH_COST: &str = "i,t,x,phi,p,q,y";

/// Tables as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTables {
    /// `t_0..t_N`.
    pub times: Vec<f64>,
    pub nodes: Vec<f64>,
    pub phi: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    pub y: Option<Vec<Vec<f64>>>,
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_tables(
    policy: &PolicyTable,
    adjoint: &AdjointTable,
    cost: Option<&CostResult>,
) -> Result<String> {
    let tg = policy.time_grid;
    let sg = policy.space_grid;
    let n = tg.steps();
    let shape_ok = adjoint.p.len() == n + 1
        && adjoint.q.len() == n
        && adjoint
            .p
            .iter()
            .chain(&adjoint.q)
            .all(|r| r.len() == sg.len())
        && cost.is_none_or(|c| {
            c.y_table.len() == n + 1 && c.y_table.iter().all(|r| r.len() == sg.len())
        });
    if !shape_ok {
        return Err(smp_control::Error::InvalidArgument(
            "adjoint or cost table shape does not match the policy".into(),
        )
        .into());
    }

    let mut s = String::new();
    s.push_str(if cost.is_some() {
        TABLE_HEADER_WITH_COST
    } else {
        TABLE_HEADER
    });
    s.push('\n');
    for i in 0..=n {
        let t = num(tg.t(i));
        for k in 0..sg.len() {
            let (phi, q) = if i < n {
                (num(policy.phi[i][k]), num(adjoint.q[i][k]))
            } else {
                (String::new(), String::new())
            };
            let _ = write!(
                s,
                "{i},{t},{},{phi},{},{q}",
                num(sg.node(k)),
                num(adjoint.p[i][k])
            );
            if let Some(c) = cost {
                let _ = write!(s, ",{}", num(c.y_table[i][k]));
            }
            s.push('\n');
        }
    }
    Ok(s)
}

pub fn persist_tables(
    policy: &PolicyTable,
    adjoint: &AdjointTable,
    cost: Option<&CostResult>,
    path: &Path,
) -> Result<()> {
    let text = render_tables(policy, adjoint, cost)?;
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_tables(path: &Path) -> Result<LoadedTables> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_tables(&text, path)
}

/// Parses the output of [`render_tables`]; `path` is used in error messages only.
pub fn parse_tables(text: &str, path: &Path) -> Result<LoadedTables> {
    let bad = |line: usize, message: String| CliError::TableFormat {
        path: PathBuf::from(path),
        line,
        message,
    };
    let mut lines = text.lines();
    let has_y = match lines.next() {
        Some(TABLE_HEADER) => false,
        Some(TABLE_HEADER_WITH_COST) => true,
        other => return Err(bad(1, format!("unexpected header {other:?}"))),
    };
    let width = if has_y { 7 } else { 6 };

    // i, t, x, phi, p, q, y
    type Row = (usize, f64, f64, Option<f64>, f64, Option<f64>, Option<f64>);
    let mut rows: Vec<Row> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let lno = idx + 2;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != width {
            return Err(bad(
                lno,
                format!("expected {width} columns, got {}", cells.len()),
            ));
        }
        let float = |c: &str| -> Result<f64> {
            c.parse::<f64>()
                .map_err(|_| bad(lno, format!("invalid number '{c}'")))
        };
        let opt = |c: &str| -> Result<Option<f64>> {
            if c.is_empty() {
                Ok(None)
            } else {
                float(c).map(Some)
            }
        };
        let i: usize = cells[0]
            .parse()
            .map_err(|_| bad(lno, format!("invalid time index '{}'", cells[0])))?;
        let y = if has_y { Some(float(cells[6])?) } else { None };
        rows.push((
            i,
            float(cells[1])?,
            float(cells[2])?,
            opt(cells[3])?,
            float(cells[4])?,
            opt(cells[5])?,
            y,
        ));
    }

    let n = rows
        .last()
        .map(|r| r.0)
        .ok_or_else(|| bad(2, "no data rows".into()))?;
    if !rows.len().is_multiple_of(n + 1) {
        return Err(bad(
            rows.len() + 1,
            "row count is not (N+1) times the node count".into(),
        ));
    }
    let m = rows.len() / (n + 1);
    let mut out = LoadedTables {
        times: Vec::with_capacity(n + 1),
        nodes: rows[..m].iter().map(|r| r.2).collect(),
        phi: vec![Vec::with_capacity(m); n],
        p: vec![Vec::with_capacity(m); n + 1],
        q: vec![Vec::with_capacity(m); n],
        y: has_y.then(|| vec![Vec::with_capacity(m); n + 1]),
    };
    for (j, &(i, t, x, phi, p, q, y)) in rows.iter().enumerate() {
        let lno = j + 2;
        let (want_i, k) = (j / m, j % m);
        if i != want_i || x != out.nodes[k] {
            return Err(bad(lno, format!("expected row ({want_i}, x_{k})")));
        }
        if k == 0 {
            out.times.push(t);
        } else if t != out.times[i] {
            return Err(bad(lno, "time differs within one time index".into()));
        }
        match (i < n, phi, q) {
            (true, Some(phi), Some(q)) => {
                out.phi[i].push(phi);
                out.q[i].push(q);
            }
            (false, None, None) => {}
            (true, ..) => {
                return Err(bad(
                    lno,
                    "phi and q are required before the last time index".into(),
                ))
            }
            (false, ..) => {
                return Err(bad(
                    lno,
                    "phi and q must be empty at the last time index".into(),
                ))
            }
        }
        out.p[i].push(p);
        if let (Some(table), Some(y)) = (out.y.as_mut(), y) {
            table[i].push(y);
        }
    }
    Ok(out)
}
