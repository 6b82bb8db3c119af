//! Seeded Monte Carlo experiments over scenarios, estimators and a swept
//! parameter, with CSV persistence.

mod config;
mod csv;
mod runner;
mod summary;

pub use config::{DSize, EstimatorKind, ExperimentConfig, SweepParam};
pub use csv::{read_results, write_results, write_summary, CSV_HEADER, SUMMARY_HEADER};
pub use runner::{run, trial_seed, PointFailure, RunReport, TrialResult};
pub use summary::{summarize, MetricSummary, SummaryRow};
