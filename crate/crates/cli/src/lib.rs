//! Scenario-driven front end for the `symform` formation library.
//!
//! Scenarios are JSON files (see [`scenario`]). [`runner::run`] simulates one
//! and writes `trace.csv`, `reference.csv` for maneuvers, `metrics.json`,
//! the resolved `scenario.json` and two SVG plots. [`runner::verify`] checks
//! the structural invariants of the scenario's Laplacian and
//! [`runner::sweep`] repeats that for a range of cycle orders.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod output;
pub mod runner;
pub mod scenario;

pub use error::CliError;
pub use output::{read_csv, Table};
pub use runner::{run, run_all, simulate, sweep, verify, verify_strict, Check, MetricsReport, RunOutput, SweepRow};
pub use scenario::{load_scenario, load_scenario_with, parse_scenario, resolve, Overrides, Scenario, ScenarioFile};
