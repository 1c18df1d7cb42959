//! Experiment runner and report emission for the `qtorus` command.

pub mod config;
pub mod emit;
pub mod report;
pub mod run;
pub mod sweep;

pub use config::{ExperimentConfig, Target, Task};
pub use emit::{emit, Format};
pub use report::{Check, InstanceRecord, VerificationReport, SCHEMA_VERSION};
pub use run::{load_store, run};
pub use sweep::{Bounds, Filters, Sweep};
