//! Allocation mechanisms: pure functions from reported bids (plus, where a
//! rule needs it, distribution knowledge) to an allocation of all items.

mod exchange;
mod picking;
mod ranking;
mod selector;
mod weights;

pub use exchange::{run_exchange, run_picking_exchange};
pub use picking::{pick_quotas, run_pick_r, run_qt_s, run_serial_dictator, run_welfare_max};
pub use ranking::{ranks_of_bids, run_ranking, run_weighted_ranking, virtual_value};
pub use selector::{integral_condition_a, select_two_agent_r, SelectedR, SelectorBranch, TWO_AGENT_OPTIMAL_R};
pub use weights::{solve_weights, weighted_win_probabilities};

use serde::{Deserialize, Serialize};

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};

/// An n-by-m table of nonnegative, finite values or bids.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationMatrix {
    n: usize,
    m: usize,
    v: Vec<f64>,
}

impl ValuationMatrix {
    pub fn new(n: usize, m: usize, flat: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "valuation matrix needs n >= 1 agents and m >= 1 items".into(),
            ));
        }
        if flat.len() != n * m {
            return Err(Error::InvalidArgument(format!(
                "valuation matrix needs {n}x{m} = {} entries, got {}",
                n * m,
                flat.len()
            )));
        }
        if flat.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidArgument(
                "valuations must be finite and nonnegative".into(),
            ));
        }
        Ok(ValuationMatrix { n, m, v: flat })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidArgument("ragged valuation rows".into()));
        }
        Self::new(n, m, rows.concat())
    }

    /// Draw an n-by-m matrix i.i.d. from one distribution.
    pub fn sample_iid(
        dist: &DistributionSpec,
        n: usize,
        m: usize,
        rng: &mut crate::rng::RandomStream,
    ) -> Self {
        let mut v = vec![0.0; n * m];
        dist.sample_into(rng, &mut v);
        ValuationMatrix { n, m, v }
    }

    /// Draw each agent's row from that agent's own distribution.
    pub fn sample_per_agent(
        dists: &[DistributionSpec],
        m: usize,
        rng: &mut crate::rng::RandomStream,
    ) -> Self {
        let n = dists.len();
        let mut v = vec![0.0; n * m];
        for (i, d) in dists.iter().enumerate() {
            d.sample_into(rng, &mut v[i * m..(i + 1) * m]);
        }
        ValuationMatrix { n, m, v }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn value(&self, agent: usize, item: usize) -> f64 {
        self.v[agent * self.m + item]
    }

    pub fn row(&self, agent: usize) -> &[f64] {
        &self.v[agent * self.m..(agent + 1) * self.m]
    }

    /// Copy with one agent's row replaced; used by deviation searches.
    pub fn with_row(&self, agent: usize, row: &[f64]) -> Result<Self> {
        if row.len() != self.m {
            return Err(Error::InvalidArgument("replacement row has wrong length".into()));
        }
        let mut out = self.clone();
        out.v[agent * self.m..(agent + 1) * self.m].copy_from_slice(row);
        if row.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidArgument(
                "valuations must be finite and nonnegative".into(),
            ));
        }
        Ok(out)
    }
}

/// A total assignment of items to agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    n: usize,
    owner: Vec<usize>,
}

impl Allocation {
    pub fn new(n: usize, owner: Vec<usize>) -> Result<Self> {
        if owner.iter().any(|&i| i >= n) {
            return Err(Error::InvalidArgument("owner index out of range".into()));
        }
        Ok(Allocation { n, owner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, item: usize) -> usize {
        self.owner[item]
    }

    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    /// Items held by one agent, ascending.
    pub fn bundle(&self, agent: usize) -> Vec<usize> {
        (0..self.owner.len()).filter(|&j| self.owner[j] == agent).collect()
    }

    /// Number of items held by each agent.
    pub fn bundle_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n];
        for &o in &self.owner {
            sizes[o] += 1;
        }
        sizes
    }
}

/// Menu of bundles a picking component offers its designated picker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Menu {
    /// Arbitrary list of bundles; allowed for components of at most 3 items.
    Explicit { entries: Vec<Vec<usize>> },
    /// All subsets of the component with exactly `k` items.
    FixedCardinality { k: usize },
}

/// Sub-mechanism applied to one component of a picking-exchange partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum ComponentRule {
    Picking {
        picker: usize,
        menu: Menu,
    },
    Exchange {
        first_endowment: Vec<usize>,
        second_endowment: Vec<usize>,
    },
}

/// One component of a picking-exchange mechanism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub items: Vec<usize>,
    pub rule: ComponentRule,
}

/// A tagged description of one mechanism and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum MechanismSpec {
    /// Quota serial dictatorship with share vector r (r_i >= 0, sum = 1).
    PickR { r: Vec<f64> },
    /// Quantile-threshold rule; needs the generating distribution.
    QtS { s: Vec<f64> },
    /// Two-agent endowment exchange.
    Exchange {
        first_endowment: Vec<usize>,
        second_endowment: Vec<usize>,
    },
    /// Two-agent composition of per-component picking and exchange rules.
    PickingExchange { components: Vec<ComponentSpec> },
    /// Ordinal ranking rule; distribution-free.
    Ranking,
    /// Ranking on weighted virtual values; needs per-agent distributions.
    /// Omitted weights are solved so each agent wins an item w.p. 1/n.
    WeightedRanking { weights: Option<Vec<f64>> },
    /// Each item to its highest bidder.
    WelfareMax,
    /// Quota serial dictatorship with explicit integer quotas.
    SerialDictator { quotas: Vec<usize> },
}

impl MechanismSpec {
    /// Short tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            MechanismSpec::PickR { .. } => "pick-r",
            MechanismSpec::QtS { .. } => "qt-s",
            MechanismSpec::Exchange { .. } => "exchange",
            MechanismSpec::PickingExchange { .. } => "picking-exchange",
            MechanismSpec::Ranking => "ranking",
            MechanismSpec::WeightedRanking { .. } => "weighted-ranking",
            MechanismSpec::WelfareMax => "welfare-max",
            MechanismSpec::SerialDictator { .. } => "serial-dictator",
        }
    }

    /// True when running the mechanism requires distribution knowledge.
    pub fn needs_distributions(&self) -> bool {
        matches!(
            self,
            MechanismSpec::QtS { .. } | MechanismSpec::WeightedRanking { .. }
        )
    }
}

/// Evaluate any mechanism on a bid profile. `dists` supplies distribution
/// knowledge where the rule needs it: one entry shared by all agents, or one
/// entry per agent.
pub fn run_mechanism(
    spec: &MechanismSpec,
    bids: &ValuationMatrix,
    dists: Option<&[DistributionSpec]>,
) -> Result<Allocation> {
    let per_agent = |n: usize| -> Result<Vec<DistributionSpec>> {
        match dists {
            Some(ds) if ds.len() == n => Ok(ds.to_vec()),
            Some(ds) if ds.len() == 1 => Ok(vec![ds[0].clone(); n]),
            Some(ds) => Err(Error::InvalidMechanism(format!(
                "{} distributions supplied for {n} agents",
                ds.len()
            ))),
            None => Err(Error::InvalidMechanism(format!(
                "mechanism {:?} requires distribution knowledge",
                spec.kind()
            ))),
        }
    };
    match spec {
        MechanismSpec::PickR { r } => run_pick_r(r, bids),
        MechanismSpec::QtS { s } => match dists {
            Some([d]) => run_qt_s(s, d, bids),
            Some(_) => Err(Error::InvalidMechanism(
                "qt-s uses one common distribution".into(),
            )),
            None => Err(Error::InvalidMechanism(
                "qt-s requires distribution knowledge".into(),
            )),
        },
        MechanismSpec::Exchange { first_endowment, second_endowment } => {
            run_exchange(first_endowment, second_endowment, bids)
        }
        MechanismSpec::PickingExchange { components } => run_picking_exchange(components, bids),
        MechanismSpec::Ranking => run_ranking(bids),
        MechanismSpec::WeightedRanking { weights } => {
            let ds = per_agent(bids.n())?;
            let w = match weights {
                Some(w) => w.clone(),
                None => solve_weights(&ds)?,
            };
            run_weighted_ranking(bids, &ds, &w)
        }
        MechanismSpec::WelfareMax => Ok(run_welfare_max(bids)),
        MechanismSpec::SerialDictator { quotas } => run_serial_dictator(quotas, bids),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_matrix_validates() {
        assert!(ValuationMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, -1.0]]).is_err());
        assert!(ValuationMatrix::from_rows(&[vec![1.0], vec![2.0, 3.0]]).is_err());
        assert!(ValuationMatrix::new(0, 0, vec![]).is_err());
        let v = ValuationMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(v.value(1, 0), 3.0);
        assert_eq!(v.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn mechanism_spec_serde_round_trip() {
        let spec = MechanismSpec::PickingExchange {
            components: vec![
                ComponentSpec {
                    items: vec![0, 1],
                    rule: ComponentRule::Exchange {
                        first_endowment: vec![0],
                        second_endowment: vec![1],
                    },
                },
                ComponentSpec {
                    items: vec![2],
                    rule: ComponentRule::Picking {
                        picker: 0,
                        menu: Menu::Explicit { entries: vec![vec![], vec![2]] },
                    },
                },
            ],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: MechanismSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
    }
}
