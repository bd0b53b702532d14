//! CSV and JSON export of benchmark results.
//!
//! Floats are written in scientific notation with 17 significant digits, so
//! a parsed CSV reproduces every aggregate bit-exactly.

use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::bench::{AmplitudeFit, CellStats, TrialFailure, TrialOutcome, TrialSet};

pub const CSV_HEADER: &str = "amplitude,ell,j0_mode,trials,delta_c,err_q95,\
n_orac_exact_median,n_orac_exact_min,n_orac_exact_max,n_orac_paper_median,\
coverage_rate,seed";

#[derive(Debug)]
pub enum ExportError {
    Format(String),
}

impl fmt::Display for ExportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExportError::Format(msg) => write!(f, "malformed CSV: {msg}"),
        }
    }
}

impl std::error::Error for ExportError {}

/// 17 significant digits: enough to reconstruct the exact f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders cell statistics as CSV; an empty slice yields just the header.
pub fn stats_to_csv(stats: &[CellStats]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in stats {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(s.amplitude),
            s.ell,
            s.j0_mode,
            s.trials,
            fmt_f64(s.delta_c),
            fmt_f64(s.err_q),
            s.n_exact_median,
            s.n_exact_min,
            s.n_exact_max,
            s.n_paper_median,
            fmt_f64(s.coverage_rate),
            s.seed,
        ));
    }
    out
}

/// Parses CSV produced by [`stats_to_csv`] back into cell statistics.
pub fn parse_csv(text: &str) -> Result<Vec<CellStats>, ExportError> {
    let bad = |msg: String| ExportError::Format(msg);
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        Some(h) => return Err(bad(format!("unexpected header {h:?}"))),
        None => return Err(bad("empty input".into())),
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(bad(format!("row {} has {} fields, want 12", k + 1, fields.len())));
        }
        let f = |i: usize| -> Result<f64, ExportError> {
            fields[i].parse().map_err(|e| bad(format!("row {} field {i}: {e}", k + 1)))
        };
        let u = |i: usize| -> Result<u64, ExportError> {
            fields[i].parse().map_err(|e| bad(format!("row {} field {i}: {e}", k + 1)))
        };
        rows.push(CellStats {
            amplitude: f(0)?,
            ell: u(1)? as u32,
            j0_mode: u(2)? as u32,
            trials: u(3)? as u32,
            delta_c: f(4)?,
            err_q: f(5)?,
            n_exact_median: u(6)?,
            n_exact_min: u(7)?,
            n_exact_max: u(8)?,
            n_paper_median: u(9)?,
            coverage_rate: f(10)?,
            seed: u(11)?,
        });
    }
    Ok(rows)
}

/// Per-trial record for the JSON document, tagged with its cell.
#[derive(Serialize)]
struct TrialRecord<'a> {
    amplitude: f64,
    ell: u32,
    #[serde(flatten)]
    outcome: &'a TrialOutcome,
}

#[derive(Serialize)]
struct FailureRecord<'a> {
    amplitude: f64,
    ell: u32,
    #[serde(flatten)]
    failure: &'a TrialFailure,
}

/// Builds the single JSON document: config echo, per-cell records mirroring
/// the CSV, scaling fits, and (when `include_trials`) per-trial records.
pub fn bench_json(
    set: &TrialSet,
    stats: &[CellStats],
    fits: &[AmplitudeFit],
    include_trials: bool,
) -> serde_json::Value {
    let mut doc = json!({
        "config": set.config,
        "cells": stats,
        "fits": fits,
    });
    if include_trials {
        let trials: Vec<TrialRecord> = set
            .cells
            .iter()
            .flat_map(|c| {
                c.outcomes
                    .iter()
                    .map(move |o| TrialRecord { amplitude: c.amplitude, ell: c.ell, outcome: o })
            })
            .collect();
        let failures: Vec<FailureRecord> = set
            .cells
            .iter()
            .flat_map(|c| {
                c.failures
                    .iter()
                    .map(move |f| FailureRecord { amplitude: c.amplitude, ell: c.ell, failure: f })
            })
            .collect();
        doc["trials"] = serde_json::to_value(trials).expect("trial records serialize");
        doc["failures"] = serde_json::to_value(failures).expect("failure records serialize");
    }
    doc
}
