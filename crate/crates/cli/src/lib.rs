//! Experiment harness for the network decomposition library: config files,
//! metric sweeps with CSV/JSON output, SVG snapshots, and a self-check
//! suite. The `netdecomp` binary is a thin wrapper over this crate.

pub mod config;
pub mod error;
pub mod experiment;
pub mod selftest;
pub mod svg;

pub use config::{AlgorithmKind, ExperimentConfig, SweepVariable};
pub use error::{CliError, Result};
pub use experiment::{
    decompose_once, decompose_report, parse_csv, run_experiment, sim_setup, to_csv,
    to_realizations_csv, DecomposeOutcome, SweepOutput, SweepRow, CSV_HEADER,
    REALIZATIONS_CSV_HEADER,
};
pub use svg::{render_snapshot, SnapshotStyle};
