//! Config-driven scenario runner, report formats, and the experiment
//! registry behind the command-line interface.

mod config;
mod experiments;
mod report;
mod scenario;

pub use config::{AuditKind, ScenarioConfig};
pub use experiments::{
    builtin_roster, list_experiments, run_experiment, run_experiment_with_workers,
    TWO_AGENT_RATIO_BOUND,
};
pub use report::{AuditOutcome, CriterionLine, ExperimentReport, SummaryReport, TrialRow};
pub use scenario::{resolve_workers, run_scenario, run_scenario_with_workers, scenario};
