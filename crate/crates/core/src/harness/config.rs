//! Scenario configuration: a single TOML document with nested sections.
//! Unknown keys are rejected so a config file can never silently drift.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::mech::MechanismSpec;

/// Audits a scenario can run per trial batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditKind {
    WelfareRatio,
    Envy,
    Dsic,
    Bic,
    Pareto,
}

impl AuditKind {
    pub fn key(&self) -> &'static str {
        match self {
            AuditKind::WelfareRatio => "welfare-ratio",
            AuditKind::Envy => "envy",
            AuditKind::Dsic => "dsic",
            AuditKind::Bic => "bic",
            AuditKind::Pareto => "pareto",
        }
    }
}

/// A reproducible experiment description: everything a run depends on except
/// the worker count, which never changes estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    /// One distribution shared by all agents...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionSpec>,
    /// ...or one per agent (required by weighted-ranking).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distributions: Option<Vec<DistributionSpec>>,
    pub mechanism: MechanismSpec,
    #[serde(default)]
    pub audits: Vec<AuditKind>,
    /// Scale factor for the alpha-Pareto audit; defaults to 0.95.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pareto_alpha: Option<f64>,
    /// Evaluation budget per instance for the deviation search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation_budget: Option<usize>,
    /// Default output path; the CLI --out flag overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidConfig(vec![e.to_string()]))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// The per-agent distribution list implied by the config.
    pub fn agent_distributions(&self) -> Vec<DistributionSpec> {
        match (&self.distribution, &self.distributions) {
            (Some(d), None) => vec![d.clone(); self.n],
            (None, Some(ds)) => ds.clone(),
            _ => unreachable!("validated"),
        }
    }

    /// Distribution list handed to the mechanism dispatcher.
    pub fn mechanism_distributions(&self) -> Vec<DistributionSpec> {
        match (&self.distribution, &self.distributions) {
            (Some(d), None) => vec![d.clone()],
            (None, Some(ds)) => ds.clone(),
            _ => unreachable!("validated"),
        }
    }

    /// Collect every violated constraint; errors list all of them at once.
    pub fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if self.n == 0 {
            violations.push("n must be at least 1".to_string());
        }
        if self.m == 0 {
            violations.push("m must be at least 1".to_string());
        }
        if self.trials == 0 {
            violations.push("trials must be at least 1".to_string());
        }
        match (&self.distribution, &self.distributions) {
            (Some(_), Some(_)) => violations.push(
                "give either [distribution] or [[distributions]], not both".to_string(),
            ),
            (None, None) => violations.push(
                "a [distribution] or [[distributions]] section is required".to_string(),
            ),
            (None, Some(ds)) if ds.len() != self.n => violations.push(format!(
                "{} distributions listed for n = {} agents",
                ds.len(),
                self.n
            )),
            _ => {}
        }
        match &self.mechanism {
            MechanismSpec::PickR { r } => {
                if r.len() != self.n {
                    violations.push(format!("pick-r has {} shares for n = {}", r.len(), self.n));
                }
            }
            MechanismSpec::QtS { s } => {
                if s.len() != self.n {
                    violations.push(format!("qt-s has {} thresholds for n = {}", s.len(), self.n));
                }
                if self.distributions.is_some() {
                    violations.push(
                        "qt-s uses one common distribution; give [distribution]".to_string(),
                    );
                }
            }
            MechanismSpec::Exchange { .. } | MechanismSpec::PickingExchange { .. } => {
                if self.n != 2 {
                    violations.push(format!(
                        "{} requires exactly 2 agents, got n = {}",
                        self.mechanism.kind(),
                        self.n
                    ));
                }
            }
            MechanismSpec::WeightedRanking { weights } => {
                if self.distributions.as_ref().map(|d| d.len()) != Some(self.n) {
                    violations.push(
                        "weighted-ranking needs [[distributions]], one per agent".to_string(),
                    );
                }
                if let Some(w) = weights {
                    if w.len() != self.n {
                        violations.push(format!(
                            "weighted-ranking has {} weights for n = {}",
                            w.len(),
                            self.n
                        ));
                    }
                }
            }
            MechanismSpec::SerialDictator { quotas } => {
                if quotas.len() != self.n {
                    violations.push(format!(
                        "serial-dictator has {} quotas for n = {}",
                        quotas.len(),
                        self.n
                    ));
                }
                if quotas.iter().sum::<usize>() != self.m {
                    violations.push("serial-dictator quotas must sum to m".to_string());
                }
            }
            MechanismSpec::Ranking | MechanismSpec::WelfareMax => {}
        }
        if let Some(alpha) = self.pareto_alpha {
            if !(alpha > 0.0 && alpha <= 1.0) {
                violations.push(format!("pareto-alpha must lie in (0,1], got {alpha}"));
            }
        }
        if self.audits.contains(&AuditKind::Pareto) {
            let count = (self.n as f64).powi(self.m as i32);
            if count > 1e5 {
                violations.push(format!(
                    "pareto audit enumerates n^m allocations per trial; {count:.0} is too many (limit 1e5)"
                ));
            }
        }
        if self.audits.contains(&AuditKind::Bic) && self.distributions.is_some() {
            violations.push("the bic audit needs one common [distribution]".to_string());
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(violations))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
n = 2
m = 100
trials = 10
seed = 7
audits = ["welfare-ratio", "envy"]

[distribution.uniform-interval]
lo = 0.0
hi = 1.0

[mechanism.pick-r]
r = [0.5, 0.5]
"#;

    #[test]
    fn parses_and_round_trips() {
        let config = ScenarioConfig::from_toml_str(GOOD).unwrap();
        assert_eq!(config.n, 2);
        assert_eq!(config.audits, vec![AuditKind::WelfareRatio, AuditKind::Envy]);
        let text = config.to_toml_string();
        let back = ScenarioConfig::from_toml_str(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = GOOD.replace("seed = 7", "seed = 7\nworker_count = 3");
        let err = ScenarioConfig::from_toml_str(&bad).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)), "{err}");
    }

    #[test]
    fn violations_are_listed_together() {
        let bad = GOOD
            .replace("trials = 10", "trials = 0")
            .replace("r = [0.5, 0.5]", "r = [0.5, 0.25, 0.25]");
        match ScenarioConfig::from_toml_str(&bad).unwrap_err() {
            Error::InvalidConfig(v) => {
                assert_eq!(v.len(), 2, "{v:?}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn weighted_ranking_needs_per_agent_distributions() {
        let bad = GOOD.replace(
            "[mechanism.pick-r]\nr = [0.5, 0.5]",
            "[mechanism.weighted-ranking]",
        );
        assert!(ScenarioConfig::from_toml_str(&bad).is_err());
    }
}
