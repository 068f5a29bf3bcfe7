//! Diagnostics time series as CSV (one row per snapshot, fixed column
//! order, full-precision scientific notation for byte-stable reruns).

use std::path::Path;

use crate::error::Error;
use crate::integrator::DiagnosticsRow;
use crate::Result;

pub const CSV_HEADER: &str = "time,l2,l2_plus,l2_minus,linf,hk,w1h2_plus,w1h2_minus,w2h2_plus,w2h2_minus,xi10_plus,xi10_minus,mass_drift,hartree_w2inf";

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn render_csv(rows: &[DiagnosticsRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let cols = [
            fmt(row.time),
            fmt(row.l2),
            fmt(row.l2_plus),
            fmt(row.l2_minus),
            fmt(row.linf),
            fmt(row.hk),
            fmt(row.w1h2_plus),
            fmt(row.w1h2_minus),
            fmt(row.w2h2_plus),
            fmt(row.w2h2_minus),
            fmt(row.xi10_plus),
            fmt(row.xi10_minus),
            fmt(row.mass_drift),
            row.hartree_w2inf.map(fmt).unwrap_or_default(),
        ];
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(rows: &[DiagnosticsRow], path: &Path) -> Result<()> {
    super::atomic_write(path, render_csv(rows).as_bytes())
}

/// Parse a diagnostics CSV back into rows (used by analysis and tests).
pub fn read_csv(path: &Path) -> Result<Vec<DiagnosticsRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(Error::Format("bad diagnostics header".into())),
    }
    let mut rows = vec![];
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 14 {
            return Err(Error::Format(format!(
                "expected 14 columns, found {}",
                cols.len()
            )));
        }
        let p = |i: usize| -> Result<f64> {
            cols[i]
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("bad float in column {i}: {e}")))
        };
        rows.push(DiagnosticsRow {
            time: p(0)?,
            l2: p(1)?,
            l2_plus: p(2)?,
            l2_minus: p(3)?,
            linf: p(4)?,
            hk: p(5)?,
            w1h2_plus: p(6)?,
            w1h2_minus: p(7)?,
            w2h2_plus: p(8)?,
            w2h2_minus: p(9)?,
            xi10_plus: p(10)?,
            xi10_minus: p(11)?,
            mass_drift: p(12)?,
            hartree_w2inf: if cols[13].is_empty() {
                None
            } else {
                Some(p(13)?)
            },
        });
    }
    Ok(rows)
}
