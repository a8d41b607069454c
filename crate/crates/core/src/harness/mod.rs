//! Experiment specs, Monte Carlo dispatch and CSV reports.

pub mod report;
pub mod run;
pub mod spec;

pub use report::{format_float, write_csv, Cell, MetricReport};
pub use run::{child_seed, header, run_experiment, run_experiment_jobs};
pub use spec::{parse_spec, ExperimentSpec, ParamValue, ScenarioConfig, ScenarioId, SpecErrors, SpecIssue, SweepAxis};
