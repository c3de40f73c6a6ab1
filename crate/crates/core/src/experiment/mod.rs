//! Config-driven Monte Carlo batches: one game per `(k, trial)` cell, an
//! empirical threshold, and reproducible CSV/JSON outputs.
//!
//! Cell `(trial, k)` plays with seed `derive_seed(master, [trial, k])`; its
//! graph comes from `derive_seed(master, [trial, GRAPH_TAG])` (trial 0 for
//! every cell when the graph is shared), so each trial sees the same graph
//! at every `k`.

mod config;
mod output;
mod run;

pub use config::{ExperimentConfig, KRange};
pub use output::{
    build_summary, emit_outputs, preflight_output, read_csv, write_csv, OutputFiles, Summary, CSV_FILE, CSV_HEADER,
    SUMMARY_FILE,
};
pub use run::{
    estimate_threshold, game_seed, graph_seed, run_experiment, summarize, KSummary, ThresholdEstimate, TrialRecord,
    CURVE_TOLERANCE, GRAPH_TAG,
};
