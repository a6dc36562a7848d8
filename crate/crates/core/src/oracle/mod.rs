//! Ground-truth decision procedures on finite instances: exhaustive minimal
//! intervention search, the class-membership oracle, node activation by
//! product-space search, and bounded multiplicative approximation checks.

mod active;
mod approx;
mod search;

use std::collections::BTreeMap;
use std::ops::Range;

pub use active::{naive_ever_active, node_ever_active, ActiveReport};
pub use approx::{k_approx_check, ApproxError, ApproxVerdict};
pub use search::{batch_min, family_minima, min_interventions, SearchConfig, SearchError, DEFAULT_CAP};

use crate::intervention::{apply, Intervened, Intervention, InterventionError, InterventionSet};
use crate::model::{run, ComputationalSystem, Dynamics, IORelation, ModelError, NodeFunction, NodeId, SimError, Value};
use crate::re::{ClassKey, HypothesisFamily};

/// One enumerable intervention: catalog entry `cat` of `node`, at `time`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item {
    pub node: NodeId,
    pub time: u64,
    pub cat: usize,
}

/// The finite space minimality is judged over: eligible nodes, a window of
/// step indices, and a replacement catalog per node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateSpace {
    nodes: Vec<NodeId>,
    times: Range<u64>,
    catalog: BTreeMap<NodeId, Vec<NodeFunction>>,
}

impl CandidateSpace {
    pub fn new(nodes: Vec<NodeId>, times: Range<u64>, catalog: BTreeMap<NodeId, Vec<NodeFunction>>) -> CandidateSpace {
        let mut nodes = nodes;
        nodes.sort_unstable();
        nodes.dedup();
        CandidateSpace { nodes, times, catalog }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn times(&self) -> Range<u64> {
        self.times.clone()
    }

    pub fn catalog(&self, node: NodeId) -> &[NodeFunction] {
        self.catalog.get(&node).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn catalog_map(&self) -> &BTreeMap<NodeId, Vec<NodeFunction>> {
        &self.catalog
    }

    /// Every item, ordered by (node, time, catalog index).
    pub fn items(&self) -> Vec<Item> {
        let mut out = Vec::new();
        for &node in &self.nodes {
            let n = self.catalog(node).len();
            for time in self.times.clone() {
                for cat in 0..n {
                    out.push(Item { node, time, cat });
                }
            }
        }
        out
    }

    pub fn function(&self, item: &Item) -> Option<&NodeFunction> {
        self.catalog(item.node).get(item.cat)
    }

    pub fn contains(&self, item: &Item) -> bool {
        self.nodes.binary_search(&item.node).is_ok()
            && self.times.contains(&item.time)
            && item.cat < self.catalog(item.node).len()
    }

    /// Catalog index of `f` at `node`.
    pub fn index_of(&self, node: NodeId, f: &NodeFunction) -> Option<usize> {
        self.catalog(node).iter().position(|g| g == f)
    }

    /// Every catalog function must be a valid replacement at its node.
    pub fn validate(&self, sys: &ComputationalSystem) -> Result<(), ModelError> {
        for (&node, fs) in &self.catalog {
            for f in fs {
                sys.check_replacement(node, f)?;
            }
        }
        for &n in &self.nodes {
            if n >= sys.len() {
                return Err(ModelError::UnknownNode(n));
            }
        }
        Ok(())
    }

    pub fn to_set(&self, items: &[Item]) -> Result<InterventionSet, InterventionError> {
        InterventionSet::new(
            items
                .iter()
                .map(|it| Intervention {
                    node: it.node,
                    time: it.time,
                    replacement: self.function(it).expect("item from this space").clone(),
                })
                .collect(),
        )
    }
}

/// I/O relation over probes assumed distinct and nonempty.
pub(crate) fn relation<D: Dynamics + ?Sized>(
    d: &D,
    probes: &[Vec<Value>],
    horizon: u64,
) -> Result<IORelation, SimError> {
    let results = probes.iter().map(|p| run(d, p, horizon)).collect::<Result<Vec<_>, _>>()?;
    Ok(IORelation { probes: probes.to_vec(), horizon, results })
}

pub(crate) fn intervened_by_items<'a>(
    sys: &'a ComputationalSystem,
    space: &'a CandidateSpace,
    items: &[Item],
) -> Intervened<'a> {
    Intervened::from_refs(
        sys,
        items.iter().map(|it| (it.node, it.time, space.function(it).expect("item from this space"))).collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("no class with key {0}")]
    UnknownClass(ClassKey),
    #[error(transparent)]
    Intervention(#[from] InterventionError),
}

/// Whether intervening with `zs` moves the system's I/O relation on the
/// family probes into class `key`. Runs that fail to simulate are not
/// members.
pub fn membership_oracle(
    sys: &ComputationalSystem,
    zs: &InterventionSet,
    key: &ClassKey,
    fam: &HypothesisFamily,
) -> Result<bool, OracleError> {
    let class = fam.class(key).ok_or_else(|| OracleError::UnknownClass(key.clone()))?;
    let h = apply(sys, zs)?;
    Ok(match crate::model::io_map(&h, &fam.probes, fam.horizon) {
        Ok(rel) => class.contains(&rel, sys.alphabet()),
        Err(_) => false,
    })
}
