//! Two-agent exchange mechanisms and picking-exchange compositions.

use crate::error::{Error, Result};
use crate::mech::{Allocation, ComponentRule, ComponentSpec, Menu, ValuationMatrix};

fn bundle_value(bids: &ValuationMatrix, agent: usize, items: &[usize]) -> f64 {
    items.iter().map(|&j| bids.value(agent, j)).sum()
}

fn check_bipartition(first: &[usize], second: &[usize], items: &[usize]) -> Result<()> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::InvalidMechanism(
            "exchange endowments must both be nonempty".into(),
        ));
    }
    let mut all: Vec<usize> = first.iter().chain(second).copied().collect();
    all.sort_unstable();
    let mut expect = items.to_vec();
    expect.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) || all != expect {
        return Err(Error::InvalidMechanism(
            "exchange endowments must partition the component's items".into(),
        ));
    }
    Ok(())
}

/// Endowment exchange on two agents: agent 1 holds `first`, agent 2 holds
/// `second`, and the bundles swap only when both agents strictly prefer the
/// other's endowment. Indifference means no trade.
pub fn run_exchange(first: &[usize], second: &[usize], bids: &ValuationMatrix) -> Result<Allocation> {
    if bids.n() != 2 {
        return Err(Error::InvalidMechanism(format!(
            "exchange is a two-agent mechanism, got n = {}",
            bids.n()
        )));
    }
    let items: Vec<usize> = (0..bids.m()).collect();
    check_bipartition(first, second, &items)?;
    let mut owner = vec![0usize; bids.m()];
    assign_exchange(first, second, bids, &mut owner);
    Allocation::new(2, owner)
}

fn assign_exchange(first: &[usize], second: &[usize], bids: &ValuationMatrix, owner: &mut [usize]) {
    let v1s = bundle_value(bids, 0, first);
    let v1t = bundle_value(bids, 0, second);
    let v2s = bundle_value(bids, 1, first);
    let v2t = bundle_value(bids, 1, second);
    let trade = v1t > v1s && v2s > v2t;
    for &j in first {
        owner[j] = usize::from(trade);
    }
    for &j in second {
        owner[j] = usize::from(!trade);
    }
}

/// Normalized menu entries for a component: each entry a sorted subset of the
/// component's items. Explicit menus are limited to components of size <= 3;
/// larger components must use fixed-cardinality menus.
fn menu_entries(menu: &Menu, items: &[usize]) -> Result<Vec<Vec<usize>>> {
    match menu {
        Menu::Explicit { entries } => {
            if items.len() > 3 {
                return Err(Error::InvalidMechanism(format!(
                    "explicit menus are limited to components of size <= 3, got {}",
                    items.len()
                )));
            }
            if entries.is_empty() {
                return Err(Error::InvalidMechanism("menu has no entries".into()));
            }
            let mut out = Vec::with_capacity(entries.len());
            for e in entries {
                let mut e = e.clone();
                e.sort_unstable();
                e.dedup();
                if e.iter().any(|j| !items.contains(j)) {
                    return Err(Error::InvalidMechanism(
                        "menu entry mentions an item outside its component".into(),
                    ));
                }
                out.push(e);
            }
            out.sort();
            out.dedup();
            Ok(out)
        }
        Menu::FixedCardinality { k } => {
            if *k > items.len() {
                return Err(Error::InvalidMechanism(format!(
                    "fixed-cardinality menu k = {k} exceeds component size {}",
                    items.len()
                )));
            }
            let mut sorted = items.to_vec();
            sorted.sort_unstable();
            Ok(subsets_of_size(&sorted, *k))
        }
    }
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - current.len() {
                break;
            }
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

fn assign_picking(
    picker: usize,
    menu: &Menu,
    items: &[usize],
    bids: &ValuationMatrix,
    owner: &mut [usize],
) -> Result<()> {
    if picker > 1 {
        return Err(Error::InvalidMechanism("picker must be agent 0 or 1".into()));
    }
    let entries = menu_entries(menu, items)?;
    // Highest bid total wins; ties go to the lexicographically smallest
    // entry, which is the first of equal value in the sorted entry list.
    let mut best = 0usize;
    let mut best_value = f64::NEG_INFINITY;
    for (idx, e) in entries.iter().enumerate() {
        let val = bundle_value(bids, picker, e);
        if val > best_value {
            best_value = val;
            best = idx;
        }
    }
    let chosen = &entries[best];
    for &j in items {
        owner[j] = if chosen.contains(&j) { picker } else { 1 - picker };
    }
    Ok(())
}

/// Picking-exchange mechanism: the items are partitioned into components and
/// each component is allocated by its own picking menu or endowment exchange.
pub fn run_picking_exchange(components: &[ComponentSpec], bids: &ValuationMatrix) -> Result<Allocation> {
    if bids.n() != 2 {
        return Err(Error::InvalidMechanism(format!(
            "picking-exchange is a two-agent mechanism, got n = {}",
            bids.n()
        )));
    }
    let mut seen = vec![false; bids.m()];
    for c in components {
        for &j in &c.items {
            if j >= bids.m() || seen[j] {
                return Err(Error::InvalidMechanism(
                    "components must partition the item set".into(),
                ));
            }
            seen[j] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidMechanism(
            "components must cover every item".into(),
        ));
    }
    let mut owner = vec![0usize; bids.m()];
    for c in components {
        match &c.rule {
            ComponentRule::Picking { picker, menu } => {
                assign_picking(*picker, menu, &c.items, bids, &mut owner)?;
            }
            ComponentRule::Exchange { first_endowment, second_endowment } => {
                check_bipartition(first_endowment, second_endowment, &c.items)?;
                assign_exchange(first_endowment, second_endowment, bids, &mut owner);
            }
        }
    }
    Allocation::new(2, owner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(rows: &[Vec<f64>]) -> ValuationMatrix {
        ValuationMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn exchange_trades_when_both_prefer() {
        let a = run_exchange(&[0], &[1], &v(&[vec![0.2, 0.9], vec![0.7, 0.3]])).unwrap();
        assert_eq!(a.owners(), &[1, 0]);
    }

    #[test]
    fn exchange_keeps_endowments_when_one_objects() {
        let a = run_exchange(&[0], &[1], &v(&[vec![0.9, 0.2], vec![0.7, 0.3]])).unwrap();
        assert_eq!(a.owners(), &[0, 1]);
    }

    #[test]
    fn exchange_indifference_means_no_trade() {
        let a = run_exchange(&[0], &[1], &v(&[vec![0.5, 0.5], vec![0.1, 0.9]])).unwrap();
        assert_eq!(a.owners(), &[0, 1]);
    }

    #[test]
    fn exchange_rejects_non_bipartition() {
        let bids = v(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(run_exchange(&[0], &[0], &bids).is_err());
        assert!(run_exchange(&[0, 1], &[], &bids).is_err());
        assert!(run_exchange(&[0], &[1], &v(&[vec![1.0], vec![1.0], vec![1.0]])).is_err());
    }

    #[test]
    fn picking_menu_takes_argmax_entry() {
        let comp = ComponentSpec {
            items: vec![0, 1],
            rule: ComponentRule::Picking {
                picker: 0,
                menu: Menu::Explicit { entries: vec![vec![0], vec![1]] },
            },
        };
        let a = run_picking_exchange(&[comp], &v(&[vec![3.0, 7.0], vec![1.0, 1.0]])).unwrap();
        assert_eq!(a.owners(), &[1, 0]);
    }

    #[test]
    fn single_exchange_component_matches_run_exchange() {
        let bids = v(&[vec![0.2, 0.9], vec![0.7, 0.3]]);
        let comp = ComponentSpec {
            items: vec![0, 1],
            rule: ComponentRule::Exchange {
                first_endowment: vec![0],
                second_endowment: vec![1],
            },
        };
        let composed = run_picking_exchange(&[comp], &bids).unwrap();
        let direct = run_exchange(&[0], &[1], &bids).unwrap();
        assert_eq!(composed.owners(), direct.owners());
    }

    #[test]
    fn take_if_positive_menus_on_singletons() {
        // Menu {empty, {j}} per item: the picker takes an item iff its bid
        // beats zero; a zero bid ties with the empty entry, which wins.
        let comps = vec![
            ComponentSpec {
                items: vec![0],
                rule: ComponentRule::Picking {
                    picker: 0,
                    menu: Menu::Explicit { entries: vec![vec![], vec![0]] },
                },
            },
            ComponentSpec {
                items: vec![1],
                rule: ComponentRule::Picking {
                    picker: 0,
                    menu: Menu::Explicit { entries: vec![vec![], vec![1]] },
                },
            },
        ];
        let a = run_picking_exchange(&comps, &v(&[vec![0.4, 0.0], vec![1.0, 1.0]])).unwrap();
        assert_eq!(a.owners(), &[0, 1]);
    }

    #[test]
    fn explicit_menu_rejected_on_large_component() {
        let comp = ComponentSpec {
            items: vec![0, 1, 2, 3],
            rule: ComponentRule::Picking {
                picker: 0,
                menu: Menu::Explicit { entries: vec![vec![0]] },
            },
        };
        let bids = v(&[vec![1.0; 4], vec![1.0; 4]]);
        assert!(run_picking_exchange(&[comp], &bids).is_err());
    }

    #[test]
    fn components_must_partition_items() {
        let bids = v(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let overlap = vec![
            ComponentSpec {
                items: vec![0, 1],
                rule: ComponentRule::Picking {
                    picker: 0,
                    menu: Menu::FixedCardinality { k: 1 },
                },
            },
            ComponentSpec {
                items: vec![1],
                rule: ComponentRule::Picking {
                    picker: 0,
                    menu: Menu::FixedCardinality { k: 0 },
                },
            },
        ];
        assert!(run_picking_exchange(&overlap, &bids).is_err());
        let missing = vec![ComponentSpec {
            items: vec![0],
            rule: ComponentRule::Picking {
                picker: 0,
                menu: Menu::FixedCardinality { k: 1 },
            },
        }];
        assert!(run_picking_exchange(&missing, &bids).is_err());
    }
}
