use rayon::prelude::*;

use super::{intervened_by_items, relation, CandidateSpace, Item};
use crate::intervention::InterventionSet;
use crate::model::{ComputationalSystem, ModelError, Value};
use crate::re::{HypothesisFamily, IOClass};

pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest number of candidate sets (summed over cardinalities) the
    /// search agrees to enumerate.
    pub cap: u128,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { cap: DEFAULT_CAP, parallel: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("cardinality {cardinality} needs {count} candidate sets, cap is {cap}")]
    TooLarge { cardinality: usize, count: u128, cap: u128 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// First set (in enumeration order) per class among the `k`-element sets
/// whose smallest item index is `first`.
fn scan_first(
    sys: &ComputationalSystem,
    space: &CandidateSpace,
    items: &[Item],
    probes: &[Vec<Value>],
    horizon: u64,
    classes: &[&IOClass],
    first: usize,
    k: usize,
) -> Vec<Option<Vec<usize>>> {
    let mut found: Vec<Option<Vec<usize>>> = vec![None; classes.len()];
    let mut remaining = classes.len();
    let mut chosen = vec![first];
    let mut picked: Vec<Item> = Vec::with_capacity(k);

    fn clash(items: &[Item], chosen: &[usize], j: usize) -> bool {
        let last = items[*chosen.last().expect("nonempty")];
        last.node == items[j].node && last.time == items[j].time
    }

    // iterative lexicographic enumeration of the remaining k - 1 indices
    let n = items.len();
    let mut next = first + 1;
    loop {
        if chosen.len() == k {
            picked.clear();
            picked.extend(chosen.iter().map(|&i| items[i]));
            let h = intervened_by_items(sys, space, &picked);
            if let Ok(rel) = relation(&h, probes, horizon) {
                for (c, class) in classes.iter().enumerate() {
                    if found[c].is_none() && class.contains(&rel, sys.alphabet()) {
                        found[c] = Some(chosen.clone());
                        remaining -= 1;
                    }
                }
                if remaining == 0 {
                    return found;
                }
            }
            let last = chosen.pop().expect("nonempty");
            if chosen.is_empty() {
                return found;
            }
            next = last + 1;
            continue;
        }
        // advance `next` past items sharing (node, time) with the last pick
        while next < n && clash(items, &chosen, next) {
            next += 1;
        }
        if next + (k - chosen.len()) <= n {
            chosen.push(next);
            next += 1;
        } else {
            let last = chosen.pop().expect("nonempty");
            if chosen.is_empty() {
                return found;
            }
            next = last + 1;
        }
    }
}

/// Minimum-cardinality sets of at most `limit` items for each class, ties
/// broken by the lexicographic (node, time, catalog index) order of the
/// sorted items. Each candidate set is simulated once and checked against
/// every unresolved class.
pub fn batch_min(
    sys: &ComputationalSystem,
    classes: &[&IOClass],
    probes: &[Vec<Value>],
    horizon: u64,
    limit: usize,
    space: &CandidateSpace,
    cfg: &SearchConfig,
) -> Result<Vec<Option<InterventionSet>>, SearchError> {
    space.validate(sys)?;
    let items = space.items();
    let n = items.len();
    let mut result: Vec<Option<Vec<usize>>> = vec![None; classes.len()];
    let mut total: u128 = 0;

    if !probes.is_empty() && horizon > 0 {
        let empty = relation(sys, probes, horizon).ok();
        for (c, class) in classes.iter().enumerate() {
            if empty.as_ref().is_some_and(|rel| class.contains(rel, sys.alphabet())) {
                result[c] = Some(Vec::new());
            }
        }
        total += 1;
    }

    for k in 1..=limit.min(n) {
        let open: Vec<usize> = (0..classes.len()).filter(|&c| result[c].is_none()).collect();
        if open.is_empty() {
            break;
        }
        total = total.saturating_add(binom(n as u128, k as u128));
        if total > cfg.cap {
            return Err(SearchError::TooLarge { cardinality: k, count: total, cap: cfg.cap });
        }
        let mut pending: Vec<&IOClass> = open.iter().map(|&c| classes[c]).collect();
        let mut pending_ids = open;
        let chunk = if cfg.parallel { rayon::current_num_threads().max(1) * 2 } else { 1 };
        let mut first = 0;
        while first + k <= n && !pending.is_empty() {
            let end = (first + chunk).min(n + 1 - k);
            let scan = |i: usize| scan_first(sys, space, &items, probes, horizon, &pending, i, k);
            let partial: Vec<Vec<Option<Vec<usize>>>> = if cfg.parallel {
                (first..end).into_par_iter().map(scan).collect()
            } else {
                (first..end).map(scan).collect()
            };
            let mut resolved = vec![false; pending.len()];
            for found in &partial {
                for (c, f) in found.iter().enumerate() {
                    if !resolved[c] {
                        if let Some(set) = f {
                            result[pending_ids[c]] = Some(set.clone());
                            resolved[c] = true;
                        }
                    }
                }
            }
            let keep: Vec<usize> = (0..pending.len()).filter(|&c| !resolved[c]).collect();
            pending = keep.iter().map(|&c| pending[c]).collect();
            pending_ids = keep.iter().map(|&c| pending_ids[c]).collect();
            first = end;
        }
    }

    Ok(result
        .into_iter()
        .map(|r| r.map(|idx| space.to_set(&idx.iter().map(|&i| items[i]).collect::<Vec<_>>()).expect("distinct")))
        .collect())
}

pub fn min_interventions(
    sys: &ComputationalSystem,
    class: &IOClass,
    probes: &[Vec<Value>],
    horizon: u64,
    limit: usize,
    space: &CandidateSpace,
    cfg: &SearchConfig,
) -> Result<Option<InterventionSet>, SearchError> {
    Ok(batch_min(sys, &[class], probes, horizon, limit, space, cfg)?.pop().flatten())
}

/// Minima for every class of `fam`, in family order.
pub fn family_minima(
    sys: &ComputationalSystem,
    fam: &HypothesisFamily,
    limit: usize,
    cfg: &SearchConfig,
) -> Result<Vec<Option<InterventionSet>>, SearchError> {
    let classes: Vec<&IOClass> = fam.classes().iter().map(|(_, c)| c).collect();
    batch_min(sys, &classes, &fam.probes, fam.horizon, limit, &fam.space, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(220, 3), 1_750_540);
        assert_eq!(binom(3, 5), 0);
    }
}
