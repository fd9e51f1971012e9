//! Experiment harness for target-size JPEG search: image ingestion, the
//! quality-factor coverage study, seeded multi-run benchmarks, the result
//! store and report emission.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod ingest;
pub mod qf;
pub mod report;
pub mod store;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, Outcome};
pub use ingest::load_image;
pub use qf::{analyze_qf, QfMode};
pub use report::{emit_report, ReportFormat};
pub use store::ResultStore;
