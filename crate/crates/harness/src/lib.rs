//! Experiment harness around `prlab-core`: JSON experiment configs, a
//! deterministic parallel trial runner, CSV/summary emitters, and a
//! wrapper that runs every brute-force verifier in one shot.

pub mod config;
pub mod emit;
pub mod runner;
pub mod verify;

pub use config::{Config, EvalConfig, ExperimentConfig};
pub use emit::{csv_string, summary_json, wilson95};
pub use runner::{run_config, TrialRecord};
pub use verify::{all_pass, render_reports, verify_all, VerifySettings};
