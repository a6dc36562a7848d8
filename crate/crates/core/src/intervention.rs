//! Single-time replacements of node functions, and differences between I/O
//! relations.

use std::collections::BTreeSet;

use crate::model::{ComputationalSystem, Dynamics, IORelation, ModelError, NodeFunction, NodeId, Value};

/// Replace `node`'s function by `replacement` for the update at step `time`
/// (the one computing state `time + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Intervention {
    pub node: NodeId,
    pub time: u64,
    pub replacement: NodeFunction,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InterventionError {
    #[error("two interventions at node {node}, time {time}")]
    Duplicate { node: NodeId, time: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Interventions with pairwise distinct (node, time), kept sorted by
/// (node, time).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct InterventionSet {
    items: Vec<Intervention>,
}

impl InterventionSet {
    pub fn empty() -> InterventionSet {
        InterventionSet::default()
    }

    pub fn new(mut items: Vec<Intervention>) -> Result<InterventionSet, InterventionError> {
        items.sort_by_key(|z| (z.node, z.time));
        for w in items.windows(2) {
            if (w[0].node, w[0].time) == (w[1].node, w[1].time) {
                return Err(InterventionError::Duplicate { node: w[0].node, time: w[0].time });
            }
        }
        Ok(InterventionSet { items })
    }

    pub fn items(&self) -> &[Intervention] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Checks every item against the system's nodes and arities.
    pub fn validate(&self, sys: &ComputationalSystem) -> Result<(), InterventionError> {
        for z in &self.items {
            sys.check_replacement(z.node, &z.replacement)?;
        }
        Ok(())
    }
}

/// A base system seen through a set of function overrides.
#[derive(Clone, Debug)]
pub struct Intervened<'a> {
    base: &'a ComputationalSystem,
    overrides: Vec<(NodeId, u64, &'a NodeFunction)>,
}

impl<'a> Intervened<'a> {
    /// Overrides are assumed valid: distinct (node, time) and matching arity.
    pub(crate) fn from_refs(base: &'a ComputationalSystem, overrides: Vec<(NodeId, u64, &'a NodeFunction)>) -> Self {
        Intervened { base, overrides }
    }

    pub fn base(&self) -> &ComputationalSystem {
        self.base
    }
}

impl Dynamics for Intervened<'_> {
    fn system(&self) -> &ComputationalSystem {
        self.base
    }

    fn function_at(&self, node: NodeId, time: u64) -> &NodeFunction {
        for &(v, t, f) in &self.overrides {
            if v == node && t == time {
                return f;
            }
        }
        self.base.function(node)
    }
}

pub fn apply<'a>(sys: &'a ComputationalSystem, zs: &'a InterventionSet) -> Result<Intervened<'a>, InterventionError> {
    zs.validate(sys)?;
    Ok(Intervened::from_refs(sys, zs.items.iter().map(|z| (z.node, z.time, &z.replacement)).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub probe: Vec<Value>,
    pub node: NodeId,
    pub before: Option<Value>,
    pub after: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiffError {
    #[error("relations use different probes")]
    ProbeMismatch,
    #[error("relations use different horizons")]
    HorizonMismatch,
    #[error("relations observe different output nodes")]
    OutputMismatch,
}

/// Every (probe, output node) cell where the two relations disagree, in probe
/// order then node order.
pub fn diff_io(a: &IORelation, b: &IORelation) -> Result<Vec<Disagreement>, DiffError> {
    if a.probes != b.probes {
        return Err(DiffError::ProbeMismatch);
    }
    if a.horizon != b.horizon {
        return Err(DiffError::HorizonMismatch);
    }
    let mut out = Vec::new();
    for (i, (ra, rb)) in a.results.iter().zip(&b.results).enumerate() {
        if ra.nodes != rb.nodes {
            return Err(DiffError::OutputMismatch);
        }
        for (k, &node) in ra.nodes.iter().enumerate() {
            if ra.values[k] != rb.values[k] {
                out.push(Disagreement {
                    probe: a.probes[i].clone(),
                    node,
                    before: ra.values[k].clone(),
                    after: rb.values[k].clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Output nodes with at least one disagreeing cell.
pub fn affected_nodes(diff: &[Disagreement]) -> BTreeSet<NodeId> {
    diff.iter().map(|d| d.node).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{io_map, Alphabet, SystemBuilder};

    fn chain() -> ComputationalSystem {
        let mut b = SystemBuilder::new(Alphabet::integers(5));
        let a = b.node("a");
        let c = b.node("c");
        b.edge(a, c).input_at(a, 0, 0).output(c);
        b.function(a, NodeFunction::select(2, 1));
        b.function(c, NodeFunction::select(2, 0));
        b.build().unwrap()
    }

    fn probes() -> Vec<Vec<Value>> {
        (1..5).map(|i| vec![Value::Sym(i)]).collect()
    }

    #[test]
    fn empty_set_is_identity() {
        let s = chain();
        let zs = InterventionSet::empty();
        let h = apply(&s, &zs).unwrap();
        assert_eq!(io_map(&h, &probes(), 4).unwrap(), io_map(&s, &probes(), 4).unwrap());
    }

    #[test]
    fn duplicate_rejected() {
        let z = |t| Intervention { node: 0, time: t, replacement: NodeFunction::select(2, 0) };
        assert!(InterventionSet::new(vec![z(1), z(2)]).is_ok());
        assert_eq!(InterventionSet::new(vec![z(1), z(1)]), Err(InterventionError::Duplicate { node: 0, time: 1 }));
    }

    #[test]
    fn arity_checked_on_apply() {
        let s = chain();
        let zs =
            InterventionSet::new(vec![Intervention { node: 1, time: 0, replacement: NodeFunction::select(3, 0) }])
                .unwrap();
        assert!(matches!(apply(&s, &zs), Err(InterventionError::Model(ModelError::ArityMismatch { .. }))));
    }

    #[test]
    fn override_only_at_its_time() {
        let s = chain();
        let zs = InterventionSet::new(vec![Intervention {
            node: 1,
            time: 1,
            replacement: NodeFunction::constant(2, Value::Sym(4)),
        }])
        .unwrap();
        let h = apply(&s, &zs).unwrap();
        let base = io_map(&s, &probes(), 4).unwrap();
        let after = io_map(&h, &probes(), 4).unwrap();
        let d = diff_io(&base, &after).unwrap();
        // c would have stored the relayed value at time 2; the constant wins
        assert_eq!(d.len(), 3);
        assert_eq!(affected_nodes(&d).into_iter().collect::<Vec<_>>(), vec![1]);

        let late = InterventionSet::new(vec![Intervention {
            node: 1,
            time: 9,
            replacement: NodeFunction::constant(2, Value::Sym(4)),
        }])
        .unwrap();
        let h = apply(&s, &late).unwrap();
        assert!(diff_io(&base, &io_map(&h, &probes(), 4).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn diff_requires_same_probes() {
        let s = chain();
        let a = io_map(&s, &probes(), 4).unwrap();
        let b = io_map(&s, &probes()[..2], 4).unwrap();
        assert_eq!(diff_io(&a, &b), Err(DiffError::ProbeMismatch));
        let c = io_map(&s, &probes(), 5).unwrap();
        assert_eq!(diff_io(&a, &c), Err(DiffError::HorizonMismatch));
    }
}
