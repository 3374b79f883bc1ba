//! Desk-scale audit of the two-agent welfare ceiling: enumerate the
//! picking and exchange building blocks on small components of adversarial
//! values and report the best Monte Carlo welfare ratio any composition
//! attains.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Monte Carlo score of one sub-mechanism on one component size.
#[derive(Clone, Debug)]
pub struct CandidateScore {
    pub description: String,
    pub per_item_welfare: f64,
}

/// All candidate sub-mechanisms evaluated on components of one size.
#[derive(Clone, Debug)]
pub struct SizeTable {
    pub size: usize,
    pub scores: Vec<CandidateScore>,
    pub best: CandidateScore,
    pub optimal_per_item: f64,
}

/// Outcome of the enumeration audit.
#[derive(Clone, Debug)]
pub struct CeilingReport {
    pub p: f64,
    pub delta: f64,
    pub m_small: usize,
    pub trials: usize,
    pub sizes: Vec<SizeTable>,
    /// Best welfare ratio over every component partition and every choice of
    /// sub-mechanism per component.
    pub best_ratio: f64,
    /// Component sizes of the best partition (values are exchangeable across
    /// items, so only sizes matter).
    pub best_partition: Vec<usize>,
    /// Best sub-mechanism description per component of the best partition.
    pub best_rules: Vec<String>,
}

const MAX_M_SMALL: usize = 6;

fn subset_items(mask: u32, size: usize) -> Vec<usize> {
    (0..size).filter(|j| mask >> j & 1 == 1).collect()
}

fn describe_mask(mask: u32, size: usize) -> String {
    if mask == 0 {
        return "-".to_string();
    }
    subset_items(mask, size)
        .iter()
        .map(|j| j.to_string())
        .collect::<Vec<_>>()
        .join("")
}

fn describe_menu(menu: &[u32], size: usize, picker: usize) -> String {
    let entries: Vec<String> = menu.iter().map(|&b| describe_mask(b, size)).collect();
    format!("picking(picker={picker}, menu=[{}])", entries.join(","))
}

/// Menus sorted so that equal-value ties resolve to the lexicographically
/// smallest bundle (compared as sorted item lists).
fn sort_menu(menu: &mut [u32], size: usize) {
    menu.sort_by_key(|&b| subset_items(b, size));
}

struct SizeDraws {
    trials: usize,
    size: usize,
    /// sums[agent][trial * 2^size + mask] = that agent's value for `mask`.
    sums: [Vec<f64>; 2],
}

impl SizeDraws {
    fn generate(dist: &DistributionSpec, size: usize, trials: usize, seed: u64) -> Self {
        let masks = 1usize << size;
        let mut sums = [vec![0.0f64; trials * masks], vec![0.0f64; trials * masks]];
        let mut rng = RandomStream::new(seed, size as u64);
        let mut vals = vec![0.0f64; size];
        for t in 0..trials {
            for agent in 0..2 {
                dist.sample_into(&mut rng, &mut vals);
                let base = t * masks;
                for mask in 1..masks {
                    let low = mask.trailing_zeros() as usize;
                    sums[agent][base + mask] =
                        sums[agent][base + (mask & (mask - 1))] + vals[low];
                }
            }
        }
        SizeDraws { trials, size, sums }
    }

    fn optimal_total(&self) -> f64 {
        // Per-item max needs the singleton sums.
        let masks = 1usize << self.size;
        let mut total = 0.0;
        for t in 0..self.trials {
            let base = t * masks;
            for j in 0..self.size {
                let m = 1usize << j;
                total += self.sums[0][base + m].max(self.sums[1][base + m]);
            }
        }
        total
    }

    fn picking_total(&self, menu: &[u32], picker: usize) -> f64 {
        let masks = 1usize << self.size;
        let full = masks - 1;
        let own = &self.sums[picker];
        let other = &self.sums[1 - picker];
        let mut total = 0.0;
        for t in 0..self.trials {
            let base = t * masks;
            let mut best = menu[0];
            let mut best_val = own[base + menu[0] as usize];
            for &entry in &menu[1..] {
                let v = own[base + entry as usize];
                if v > best_val {
                    best_val = v;
                    best = entry;
                }
            }
            let rest = full ^ best as usize;
            total += best_val + other[base + rest];
        }
        total
    }

    fn exchange_total(&self, first_size: usize) -> f64 {
        let masks = 1usize << self.size;
        let full = masks - 1;
        let mask_s = (1usize << first_size) - 1;
        let mask_t = full ^ mask_s;
        let mut total = 0.0;
        for t in 0..self.trials {
            let base = t * masks;
            let v1s = self.sums[0][base + mask_s];
            let v1t = self.sums[0][base + mask_t];
            let v2s = self.sums[1][base + mask_s];
            let v2t = self.sums[1][base + mask_t];
            total += if v1t > v1s && v2s > v2t { v1t + v2s } else { v1s + v2t };
        }
        total
    }
}

fn candidates_for_size(size: usize) -> Vec<(String, Candidate)> {
    let mut out = Vec::new();
    if size <= 3 {
        // Every nonempty collection of subsets, for either picker.
        let n_subsets = 1usize << size;
        for picker in 0..2usize {
            for selection in 1u32..(1u32 << n_subsets) {
                let mut menu: Vec<u32> = (0..n_subsets as u32)
                    .filter(|b| selection >> b & 1 == 1)
                    .collect();
                sort_menu(&mut menu, size);
                out.push((
                    describe_menu(&menu, size, picker),
                    Candidate::Picking { menu, picker },
                ));
            }
        }
    } else {
        // Larger components: menus of all subsets of one fixed cardinality.
        for picker in 0..2usize {
            for k in 0..=size {
                let mut menu: Vec<u32> = (0..1u32 << size)
                    .filter(|b| b.count_ones() as usize == k)
                    .collect();
                sort_menu(&mut menu, size);
                out.push((
                    format!("picking(picker={picker}, all-subsets-of-size-{k})"),
                    Candidate::Picking { menu, picker },
                ));
            }
        }
    }
    // Ordered endowment splits; values are i.i.d. across items, so one
    // representative per (l, k) size pair covers all bipartitions.
    for first in 1..size {
        out.push((
            format!("exchange(l={first}, k={})", size - first),
            Candidate::Exchange { first },
        ));
    }
    out
}

enum Candidate {
    Picking { menu: Vec<u32>, picker: usize },
    Exchange { first: usize },
}

fn integer_partitions(total: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    out
}

/// Enumerate every picking/exchange composition on `m_small` adversarial
/// items, scoring each building block by shared-draw Monte Carlo, and return
/// the best welfare ratio found.
pub fn ceiling_audit(
    p: f64,
    delta: f64,
    m_small: usize,
    trials: usize,
    seed: u64,
) -> Result<CeilingReport> {
    if m_small == 0 || m_small > MAX_M_SMALL {
        return Err(Error::InstanceTooLarge {
            what: "ceiling_audit component enumeration".into(),
            size: m_small as f64,
            limit: MAX_M_SMALL as f64,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let dist = DistributionSpec::adversarial(p, delta)?;
    let mut sizes = Vec::with_capacity(m_small);
    let mut best_totals = vec![0.0f64; m_small + 1];
    let mut opt_totals = vec![0.0f64; m_small + 1];
    let mut best_descriptions = vec![String::new(); m_small + 1];
    for size in 1..=m_small {
        let draws = SizeDraws::generate(&dist, size, trials, seed);
        let opt_total = draws.optimal_total();
        let mut scores = Vec::new();
        let mut best_total = f64::NEG_INFINITY;
        let mut best_desc = String::new();
        for (description, cand) in candidates_for_size(size) {
            let total = match &cand {
                Candidate::Picking { menu, picker } => draws.picking_total(menu, *picker),
                Candidate::Exchange { first } => draws.exchange_total(*first),
            };
            if total > best_total {
                best_total = total;
                best_desc = description.clone();
            }
            scores.push(CandidateScore {
                description,
                per_item_welfare: total / (trials * size) as f64,
            });
        }
        best_totals[size] = best_total;
        opt_totals[size] = opt_total;
        best_descriptions[size] = best_desc.clone();
        sizes.push(SizeTable {
            size,
            best: CandidateScore {
                description: best_desc,
                per_item_welfare: best_total / (trials * size) as f64,
            },
            optimal_per_item: opt_total / (trials * size) as f64,
            scores,
        });
    }
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_partition = Vec::new();
    for partition in integer_partitions(m_small) {
        let welfare: f64 = partition.iter().map(|&s| best_totals[s]).sum();
        let optimal: f64 = partition.iter().map(|&s| opt_totals[s]).sum();
        let ratio = welfare / optimal;
        if ratio > best_ratio {
            best_ratio = ratio;
            best_partition = partition;
        }
    }
    let best_rules = best_partition
        .iter()
        .map(|&s| best_descriptions[s].clone())
        .collect();
    Ok(CeilingReport {
        p,
        delta,
        m_small,
        trials,
        sizes,
        best_ratio,
        best_partition,
        best_rules,
    })
}
