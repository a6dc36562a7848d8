//! I/O classes and hypothesis families.

use std::collections::BTreeSet;
use std::fmt;

use crate::intervention::diff_io;
use crate::model::{Alphabet, IORelation, NodeId, Rational, Value};
use crate::oracle::CandidateSpace;

/// Index of a class within a family: a short vector of integers, read by
/// solver programs through `ARG`/`ARGC`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey(pub Vec<i64>);

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One required cell of an exact pattern: output `node` on probe number
/// `probe` must be `value` (`None` meaning "did not fire").
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCell {
    pub probe: usize,
    pub node: NodeId,
    pub value: Option<Value>,
}

/// A decidable predicate over I/O relations sharing the family's probes and
/// horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IOClass {
    /// Every listed cell matches; unlisted cells are unconstrained.
    Exact(Vec<PatternCell>),
    /// Cells that differ from `base` all belong to `nodes` (the base itself
    /// is a member).
    AffectedSubset { base: IORelation, nodes: BTreeSet<NodeId> },
    /// The relation differs from `base`, and the output nodes with a
    /// differing cell are exactly `nodes`.
    AffectedExactly { base: IORelation, nodes: BTreeSet<NodeId> },
    /// On every probe each listed node fires with `factor` times the numeric
    /// value of the probe symbol at `source_pos`.
    Scaled { factor: Rational, source_pos: usize, nodes: Vec<NodeId> },
}

impl IOClass {
    pub fn contains(&self, rel: &IORelation, alphabet: &Alphabet) -> bool {
        match self {
            IOClass::Exact(cells) => cells.iter().all(|c| {
                rel.results.get(c.probe).is_some_and(|r| {
                    r.nodes.iter().position(|n| *n == c.node).is_some_and(|k| r.values[k] == c.value)
                })
            }),
            IOClass::AffectedSubset { base, nodes } => match diff_io(base, rel) {
                Ok(d) => d.iter().all(|x| nodes.contains(&x.node)),
                Err(_) => false,
            },
            IOClass::AffectedExactly { base, nodes } => match diff_io(base, rel) {
                Ok(d) => !d.is_empty() && d.iter().map(|x| x.node).collect::<BTreeSet<_>>() == *nodes,
                Err(_) => false,
            },
            IOClass::Scaled { factor, source_pos, nodes } => rel.probes.iter().zip(&rel.results).all(|(p, r)| {
                let Some(src) = p.get(*source_pos).and_then(|x| alphabet.numeric(x)) else {
                    return false;
                };
                let want = factor * src;
                nodes.iter().all(|n| r.get(*n).and_then(|v| alphabet.numeric(v)).is_some_and(|got| got == want))
            }),
        }
    }
}

/// Indexed family of I/O classes over a common probe set, horizon, and
/// intervention search space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisFamily {
    pub probes: Vec<Vec<Value>>,
    pub horizon: u64,
    pub space: CandidateSpace,
    classes: Vec<(ClassKey, IOClass)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("duplicate class key {0}")]
    DuplicateKey(ClassKey),
    #[error("family has no probes")]
    NoProbes,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
}

impl HypothesisFamily {
    pub fn new(
        probes: Vec<Vec<Value>>,
        horizon: u64,
        space: CandidateSpace,
        classes: Vec<(ClassKey, IOClass)>,
    ) -> Result<HypothesisFamily, FamilyError> {
        if probes.is_empty() {
            return Err(FamilyError::NoProbes);
        }
        if horizon == 0 {
            return Err(FamilyError::ZeroHorizon);
        }
        let mut seen = BTreeSet::new();
        for (k, _) in &classes {
            if !seen.insert(k.clone()) {
                return Err(FamilyError::DuplicateKey(k.clone()));
            }
        }
        Ok(HypothesisFamily { probes, horizon, space, classes })
    }

    pub fn classes(&self) -> &[(ClassKey, IOClass)] {
        &self.classes
    }

    pub fn keys(&self) -> impl Iterator<Item = &ClassKey> {
        self.classes.iter().map(|(k, _)| k)
    }

    pub fn class(&self, key: &ClassKey) -> Option<&IOClass> {
        self.classes.iter().find(|(k, _)| k == key).map(|(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Same family restricted to the given keys (in family order).
    pub fn restrict(&self, keys: &[ClassKey]) -> HypothesisFamily {
        HypothesisFamily {
            probes: self.probes.clone(),
            horizon: self.horizon,
            space: self.space.clone(),
            classes: self.classes.iter().filter(|(k, _)| keys.contains(k)).cloned().collect(),
        }
    }
}
