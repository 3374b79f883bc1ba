//! Machine-readable run reports and the flat per-trial table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::harness::config::ScenarioConfig;

/// One line of the flat table; the column order is fixed:
/// trial, stream_index, mechanism_welfare, optimal_welfare, envy_free.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub stream_index: u64,
    pub mechanism_welfare: f64,
    pub optimal_welfare: f64,
    pub envy_free: bool,
}

/// Per-audit point estimates and confidence intervals.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditOutcome {
    WelfareRatio {
        estimate: f64,
        ci_lo: f64,
        ci_hi: f64,
        mean_mechanism_welfare: f64,
        mean_optimal_welfare: f64,
    },
    Envy {
        ef_frequency: f64,
        ci_lo: f64,
        ci_hi: f64,
        envy_free_trials: usize,
    },
    Dsic {
        instances_checked: usize,
        witnesses: usize,
        max_gain: f64,
        evaluations: usize,
        budget_exhausted: bool,
        examples: Vec<crate::audit::DeviationReport>,
    },
    Bic {
        pass: bool,
        rows: Vec<crate::audit::BicRow>,
    },
    Pareto {
        alpha: f64,
        instances_checked: usize,
        passes: usize,
    },
}

/// Everything one scenario run produced. Identical (config, seed, version)
/// triples reproduce the report bit for bit, except `elapsed_ms`.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryReport {
    pub library_version: String,
    pub seed: u64,
    pub trials: usize,
    pub elapsed_ms: u128,
    pub config: ScenarioConfig,
    pub audits: BTreeMap<String, AuditOutcome>,
    pub table: Vec<TrialRow>,
}

impl SummaryReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rendering of the flat table, header included.
    pub fn table_csv(&self) -> String {
        let mut out = String::from("trial,stream_index,mechanism_welfare,optimal_welfare,envy_free\n");
        for row in &self.table {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.trial,
                row.stream_index,
                row.mechanism_welfare,
                row.optimal_welfare,
                u8::from(row.envy_free)
            ));
        }
        out
    }

    /// Copy with the elapsed time zeroed, for reproducibility comparisons.
    pub fn without_elapsed(&self) -> SummaryReport {
        let mut clone = self.clone();
        clone.elapsed_ms = 0;
        clone
    }
}

/// One pass/fail line of a registry experiment.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionLine {
    pub label: String,
    pub passed: bool,
    pub details: String,
}

impl CriterionLine {
    pub fn new(label: impl Into<String>, passed: bool, details: impl Into<String>) -> Self {
        CriterionLine { label: label.into(), passed, details: details.into() }
    }

    pub fn render(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] {}: {}", self.label, self.details)
    }
}

/// Outcome of one named registry experiment.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub passed: bool,
    pub lines: Vec<CriterionLine>,
    pub elapsed_ms: u128,
}

impl ExperimentReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&line.render());
            out.push('\n');
        }
        out.push_str(&format!(
            "{}: {} ({} ms)\n",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_ms
        ));
        out
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
