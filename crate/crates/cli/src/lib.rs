//! Batch front end: configuration, the experiment pipeline and the report
//! files behind the `patrol` binary.

pub mod config;
pub mod pipeline;

pub use config::{EnvironmentSource, GeneratedEnvironment, Metric, ScenarioConfig, StartPolicy};
pub use pipeline::{run_batch, run_pipeline, ScenarioOutcome, Status};
