//! The report envelope shared by every subcommand.

use std::io::Write;

use anyhow::Result;
use parabolic_lab_core::holder::GridFunction;
use serde::Serialize;
use serde_json::Value;

use crate::io::{write_comments, write_grid_csv, write_trajectory_csv};

/// One asserted property: `measured` compared against `bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub measured: f64,
    pub bound: f64,
}

impl Check {
    /// Holds iff `measured < bound`.
    pub fn below(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), holds: measured < bound, measured, bound }
    }

    /// Holds iff `measured ≤ bound`.
    pub fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), holds: measured <= bound, measured, bound }
    }

    /// Holds iff `measured ≥ bound`.
    pub fn at_least(name: &str, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), holds: measured >= bound, measured, bound }
    }

    /// A yes/no property, recorded as `1 ≤ 1` or `0 ≤ 1`.
    pub fn flag(name: &str, holds: bool) -> Self {
        Self { name: name.into(), holds, measured: holds as u8 as f64, bound: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub seed: u64,
    pub config: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub status: Status,
}

impl Report {
    pub fn new(subcommand: &str, seed: u64, config: Value, result: Value, checks: Vec<Check>) -> Self {
        let status = if checks.iter().all(|c| c.holds) { Status::Pass } else { Status::Violation };
        Self { tool: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), subcommand: subcommand.into(), seed, config, result, checks, status }
    }
}

/// The plot-ready table written by `--format csv`.
pub enum Table {
    Grid(GridFunction),
    Trajectory(Vec<(f64, String, f64)>),
    Rows { header: Vec<&'static str>, rows: Vec<Vec<String>> },
}

impl Table {
    pub fn rows(header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Table::Rows { header, rows }
    }
}

/// CSV with the envelope (config, seed, checks, status) as `#` comments.
pub fn write_csv<W: Write>(report: &Report, table: &Table, mut w: W) -> Result<()> {
    let mut head = vec![
        format!("{} {} {}", report.tool, report.version, report.subcommand),
        format!("seed {}", report.seed),
        format!("config {}", crate::canonical::to_string(&report.config)?.trim_end()),
    ];
    for c in &report.checks {
        head.push(format!("check {} holds={} measured={:e} bound={:e}", c.name, c.holds, c.measured, c.bound));
    }
    head.push(format!("status {}", if report.status == Status::Pass { "pass" } else { "violation" }));
    write_comments(&mut w, &head)?;
    match table {
        Table::Grid(u) => write_grid_csv(u, w),
        Table::Trajectory(rows) => write_trajectory_csv(rows.iter().cloned(), w),
        Table::Rows { header, rows } => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(header)?;
            for r in rows {
                out.write_record(r)?;
            }
            out.flush()?;
            Ok(())
        }
    }
}
