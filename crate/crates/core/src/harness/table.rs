use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::config::TableFormat;
use crate::error::{FracError, Result};
use crate::kernels::KernelMode;
use crate::spatial::{H1Kind, SolverMode};
use crate::steppers::ProblemKind;

/// Which resolution a study refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyAxis {
    Time,
    Space,
    Both,
}

/// One `(α, γ, N, M)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub alpha: f64,
    pub gamma: f64,
    /// The grading as written in the configuration, e.g. `opt`.
    pub gamma_label: String,
    pub n: usize,
    pub m: usize,
    pub e1: Option<f64>,
    /// `log2(E1(M, N/2) / E1(M, N))`.
    pub order_tau: Option<f64>,
    /// `log2(E1(M/2, N) / E1(M, N))`.
    pub order_h: Option<f64>,
    pub expected_order: Option<f64>,
    pub seconds: f64,
    pub solver_iterations: usize,
    pub error: Option<String>,
}

impl ErrorRow {
    /// The order along the refined axis: temporal when available, otherwise spatial.
    pub fn order(&self) -> Option<f64> {
        self.order_tau.or(self.order_h)
    }
}

/// Run metadata kept with the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableMeta {
    pub problem: ProblemKind,
    pub axis: StudyAxis,
    pub kernel: KernelMode,
    pub solver_mode: SolverMode,
    pub solver_tolerance: f64,
    pub norm: H1Kind,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
    pub meta: TableMeta,
}

/// `log2(coarse / fine)`.
pub fn convergence_order(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 0.0 && fine > 0.0 && coarse.is_finite() && fine.is_finite()).then(|| (coarse / fine).log2())
}

/// Five significant digits with a two-digit exponent, e.g. `3.6943e-01`.
pub fn format_sci(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.4e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

fn fmt_order(v: Option<f64>) -> String {
    v.map(|o| format!("{o:.2}")).unwrap_or_default()
}

impl ErrorTable {
    /// Fill `order_tau` and `order_h` wherever the half-resolution row exists.
    pub fn compute_orders(&mut self) {
        let find = |rows: &[ErrorRow], r: &ErrorRow, n: usize, m: usize| -> Option<f64> {
            rows.iter()
                .find(|o| o.alpha == r.alpha && o.gamma_label == r.gamma_label && o.n == n && o.m == m)
                .and_then(|o| o.e1)
        };
        let snapshot = self.rows.clone();
        for r in &mut self.rows {
            let Some(e) = r.e1 else { continue };
            r.order_tau = (r.n % 2 == 0)
                .then(|| find(&snapshot, r, r.n / 2, r.m))
                .flatten()
                .and_then(|c| convergence_order(c, e));
            r.order_h = (r.m % 2 == 0)
                .then(|| find(&snapshot, r, r.n, r.m / 2))
                .flatten()
                .and_then(|c| convergence_order(c, e));
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ErrorRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// Row lookup by `(α, γ label, N, M)`.
    pub fn find(&self, alpha: f64, gamma_label: &str, n: usize, m: usize) -> Option<&ErrorRow> {
        self.rows
            .iter()
            .find(|r| (r.alpha - alpha).abs() < 1e-12 && r.gamma_label == gamma_label && r.n == n && r.m == m)
    }
}

const COLUMNS: [&str; 8] = ["alpha", "gamma", "N", "M", "E1", "order", "expected_order", "seconds"];

fn cells(r: &ErrorRow) -> [String; 8] {
    [
        format!("{}", r.alpha),
        format!("{:.4}", r.gamma),
        r.n.to_string(),
        r.m.to_string(),
        match (&r.e1, &r.error) {
            (Some(e), _) => format_sci(*e),
            (None, Some(_)) => "failed".into(),
            (None, None) => String::new(),
        },
        fmt_order(r.order()),
        fmt_order(r.expected_order),
        format!("{:.3}", r.seconds),
    ]
}

/// Render the table with a fixed column order.
pub fn emit_table(table: &ErrorTable, format: TableFormat) -> Result<String> {
    if table.rows.is_empty() {
        return Err(FracError::EmptyTable);
    }
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(&COLUMNS.join(","));
            out.push('\n');
            for r in &table.rows {
                out.push_str(&cells(r).join(","));
                out.push('\n');
            }
        }
        TableFormat::Markdown => {
            let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
            for r in &table.rows {
                let mut c = cells(r);
                if c[5].is_empty() {
                    c[5] = "*".into();
                }
                let _ = writeln!(out, "| {} |", c.join(" | "));
            }
        }
    }
    Ok(out)
}

/// Write the rendered table to `path`.
pub fn write_table(table: &ErrorTable, format: TableFormat, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, emit_table(table, format)?)?;
    Ok(())
}

/// Whitespace-separated columns for log-log plots of `E1` against `N` and `M`.
pub fn plot_data(table: &ErrorTable) -> Result<String> {
    if table.rows.is_empty() {
        return Err(FracError::EmptyTable);
    }
    let mut out = String::from("# alpha gamma N M E1 log2_N log2_M log2_E1\n");
    for r in &table.rows {
        if let Some(e) = r.e1 {
            let _ = writeln!(
                out,
                "{} {:.6} {} {} {:.10e} {:.6} {:.6} {:.6}",
                r.alpha,
                r.gamma,
                r.n,
                r.m,
                e,
                (r.n as f64).log2(),
                (r.m as f64).log2(),
                e.log2()
            );
        }
    }
    Ok(out)
}

/// Side-by-side layout: one block per `α`, one `E1 | Order` pair per grading.
pub fn layout_markdown(table: &ErrorTable) -> Result<String> {
    if table.rows.is_empty() {
        return Err(FracError::EmptyTable);
    }
    let by_space = table.meta.axis == StudyAxis::Space;
    let key = |r: &ErrorRow| if by_space { r.m } else { r.n };
    let mut alphas: Vec<f64> = Vec::new();
    for r in &table.rows {
        if !alphas.contains(&r.alpha) {
            alphas.push(r.alpha);
        }
    }
    let mut out = String::new();
    for (bi, &alpha) in alphas.iter().enumerate() {
        let rows: Vec<&ErrorRow> = table.rows.iter().filter(|r| r.alpha == alpha).collect();
        let mut grads: Vec<(&str, f64)> = Vec::new();
        let mut keys: Vec<usize> = Vec::new();
        for r in &rows {
            if !grads.iter().any(|g| g.0 == r.gamma_label) {
                grads.push((&r.gamma_label, r.gamma));
            }
            if !keys.contains(&key(r)) {
                keys.push(key(r));
            }
        }
        keys.sort_unstable();
        if bi > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "alpha = {alpha}\n");
        let (axis_name, order_name) = if by_space { ("M", "Order_h") } else { ("N", "Order_tau") };
        let _ = write!(out, "| {axis_name} |");
        for (_, g) in &grads {
            let _ = write!(out, " E1 (gamma={g:.2}) | {order_name} |");
        }
        out.push('\n');
        let _ = writeln!(out, "|---|{}", "---|---|".repeat(grads.len()));
        for k in &keys {
            let _ = write!(out, "| {k} |");
            for (label, _) in &grads {
                let cell = rows.iter().find(|r| r.gamma_label == *label && key(r) == *k);
                let (e, o) = match cell {
                    Some(r) => (
                        r.e1.map(format_sci).unwrap_or_else(|| "failed".into()),
                        r.order().map(|o| format!("{o:.2}")).unwrap_or_else(|| "*".into()),
                    ),
                    None => (String::new(), String::new()),
                };
                let _ = write!(out, " {e} | {o} |");
            }
            out.push('\n');
        }
    }
    Ok(out)
}
