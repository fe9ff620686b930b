//! The three report files. Everything written here is a pure function of
//! the configuration and the outcome, so equal runs give equal bytes.

use std::fs;
use std::io;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::ScenarioConfig;
use crate::experiments::Outcome;

pub const REPORT_FILE: &str = "report.json";
pub const RESULTS_FILE: &str = "results.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Columns appended to every experiment's own.
pub const TRAILING_COLUMNS: [&str; 2] = ["kind", "flags"];

pub fn write_all(
    dir: &Path,
    config: &ScenarioConfig,
    outcome: &Outcome,
    seed_overridden: bool,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_csv(&dir.join(RESULTS_FILE), outcome)?;
    write_json(&dir.join(REPORT_FILE), &report(config, outcome))?;
    write_json(
        &dir.join(MANIFEST_FILE),
        &manifest(config, outcome, seed_overridden),
    )
}

fn write_csv(path: &Path, outcome: &Outcome) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(outcome.columns.iter().chain(TRAILING_COLUMNS.iter()))?;
    for row in &outcome.rows {
        let kind = row.kind.map_or("", |k| k.as_str());
        let flags = row.flags.join(";");
        w.write_record(
            row.cells
                .iter()
                .map(String::as_str)
                .chain([kind, flags.as_str()]),
        )?;
    }
    w.flush()
}

fn write_json(path: &Path, value: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)
}

fn report(config: &ScenarioConfig, outcome: &Outcome) -> Value {
    let rows: Vec<Value> = outcome
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let cells: Map<String, Value> = outcome
                .columns
                .iter()
                .zip(&row.cells)
                .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                .collect();
            let reports: Vec<Value> = row
                .reports
                .iter()
                .map(|(label, r)| json!({"label": label, "report": r}))
                .collect();
            json!({
                "row": i,
                "cells": cells,
                "kind": row.kind.map(|k| k.as_str()),
                "flags": row.flags,
                "tainted": row.is_tainted(),
                "reports": reports,
            })
        })
        .collect();
    json!({
        "name": config.name,
        "experiment": config.experiment.kind(),
        "rows": rows,
    })
}

fn manifest(config: &ScenarioConfig, outcome: &Outcome, seed_overridden: bool) -> Value {
    json!({
        "name": config.name,
        "schema": config.schema,
        "experiment": config.experiment.kind(),
        "code_version": env!("CARGO_PKG_VERSION"),
        "seeds": {
            "solver": config.solver.seed,
            "overridden": seed_overridden,
            "derivation": "splitmix64 over (seed, stream tag, index)",
        },
        "config": config,
        "columns": outcome.columns.iter().chain(TRAILING_COLUMNS.iter()).collect::<Vec<_>>(),
        "rows": outcome.rows.len(),
        "tainted_rows": outcome.rows.iter().filter(|r| r.is_tainted()).count(),
        "summary": outcome.summary,
        "failures": outcome.failures,
    })
}
