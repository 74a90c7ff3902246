//! Deterministic artifact serialization.
//!
//! CSV: comma-separated, header row, LF line endings, floats with 17
//! significant digits. JSON: UTF-8 with sorted keys (every document is
//! routed through a `serde_json::Value`, whose object maps are ordered).
//! Identical inputs produce byte-identical output.

use serde::Serialize;
use serde_json::Value;

use crate::chaos::{LyapunovReport, SweepTable};
use crate::error::{Error, Result};
use crate::euler::Trajectory;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory CSV: columns `t, p_1, ..., p_n`, one row per sampled step.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let n = tr.states.first().map(|s| s.len()).unwrap_or(0);
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",p_{i}"));
    }
    out.push('\n');
    for (t, state) in tr.times.iter().zip(&tr.states) {
        out.push_str(&fmt_float(*t));
        for x in state {
            out.push(',');
            out.push_str(&fmt_float(*x));
        }
        out.push('\n');
    }
    out
}

/// JSON text with sorted keys and a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let v: Value = serde_json::to_value(value)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    let mut s = serde_json::to_string_pretty(&v)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Drift summary document keyed by observable name.
pub fn drift_json(tr: &Trajectory) -> Result<String> {
    to_json_string(&tr.drifts)
}

/// Lyapunov report document.
pub fn lyapunov_json(report: &LyapunovReport) -> Result<String> {
    to_json_string(report)
}

/// Sweep table CSV: grid coordinates, seed, estimate, convergence flag,
/// and budget. Diverged rows print `nan`.
pub fn sweep_csv(table: &SweepTable) -> String {
    let (c1, c2) = table.coord_names;
    let mut out = format!("{c1},{c2},seed,mle,converged,t_end,step\n");
    for row in &table.rows {
        let mle = match row.mle {
            Some(v) => fmt_float(v),
            None => "nan".to_string(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_float(row.coord1),
            fmt_float(row.coord2),
            row.seed,
            mle,
            row.converged,
            fmt_float(row.t_end),
            fmt_float(row.step),
        ));
    }
    out
}

/// Sweep summary JSON: per-row data plus aggregate min/max of the
/// successful estimates.
pub fn sweep_json(table: &SweepTable) -> Result<String> {
    let estimates: Vec<f64> = table.rows.iter().filter_map(|r| r.mle).collect();
    let aggregate = if estimates.is_empty() {
        serde_json::json!({ "count": 0 })
    } else {
        let min = estimates.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = estimates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        serde_json::json!({ "count": estimates.len(), "mle_min": min, "mle_max": max })
    };
    to_json_string(&serde_json::json!({
        "coord_names": [table.coord_names.0, table.coord_names.1],
        "rows": serde_json::to_value(&table.rows)
            .map_err(|e| Error::InvalidInput(e.to_string()))?,
        "aggregate": aggregate,
    }))
}
