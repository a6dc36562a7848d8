//! Two-source, two-sink network-coding butterfly.
//!
//! Sources go through two phases so that every reader sees the bit it needs
//! at a distinct step: a source stores `1 + bit` at time 1 (read by the
//! coding node) and `3 + bit` at time 2 (read by its sink). The coding node
//! stores the XOR of the two bits at time 2, and each sink recovers the
//! missing bit and emits `1 + 2a + b` at time 3.

use std::collections::BTreeMap;

use crate::model::{io_map, Alphabet, ComputationalSystem, NodeFunction, SystemBuilder, Value};
use crate::oracle::CandidateSpace;
use crate::re::{Bounds, ClassKey, HypothesisFamily, IOClass, SolverProgram};

use super::{parse_solver, ExemplarError, Instance};

pub const SOLVER_TEXT: &str = include_str!("../../solvers/butterfly.solver");

pub const S1: usize = 0;
pub const S2: usize = 1;
pub const M: usize = 2;
pub const T1: usize = 3;
pub const T2: usize = 4;

fn source_table() -> NodeFunction {
    // arguments: self, input bit
    NodeFunction::tabulate(2, 5, |a| match a[0] {
        0 if a[1] <= 1 => 1 + a[1],
        0 => 0,
        1 | 2 => a[0] + 2,
        s => s,
    })
}

fn coder_table() -> NodeFunction {
    // arguments: s1, s2, self
    NodeFunction::tabulate(3, 5, |a| {
        if (1..=2).contains(&a[0]) && (1..=2).contains(&a[1]) {
            (a[0] - 1) ^ (a[1] - 1)
        } else {
            a[2]
        }
    })
}

fn sink_table(top: bool) -> NodeFunction {
    // arguments: own source, coder, self
    NodeFunction::tabulate(3, 5, move |a| {
        if a[2] != 0 {
            return a[2];
        }
        if !(3..=4).contains(&a[0]) {
            return 0;
        }
        let known = a[0] - 3;
        let other = known ^ (a[1] % 2);
        let (x, y) = if top { (known, other) } else { (other, known) };
        1 + 2 * x + y
    })
}

/// Nodes `s1, s2, m, t1, t2` over symbols `0..=4`; input position 0 is bit
/// `a` (read by `s1`), position 1 is bit `b` (read by `s2`).
pub fn build_butterfly() -> ComputationalSystem {
    let mut b = SystemBuilder::new(Alphabet::integers(5));
    for name in ["s1", "s2", "m", "t1", "t2"] {
        b.node(name);
    }
    b.edge(S1, M).edge(S2, M).edge(S1, T1).edge(S2, T2).edge(M, T1).edge(M, T2);
    b.input_at(S1, 0, 0).input_at(S2, 0, 1);
    b.function(S1, source_table()).function(S2, source_table()).function(M, coder_table());
    b.function(T1, sink_table(true)).function(T2, sink_table(false));
    b.output(T1).output(T2);
    b.build().expect("butterfly is well formed")
}

pub fn butterfly_solver() -> SolverProgram {
    parse_solver(SOLVER_TEXT)
}

pub fn bit_pairs() -> Vec<Vec<Value>> {
    [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(a, b)| vec![Value::Sym(a), Value::Sym(b)]).collect()
}

/// Classes `1`, `2`, `3`: relations differing from the original exactly at
/// `t1`, exactly at `t2`, and at both sinks. Any node may take any constant
/// during steps `0..5`.
pub fn butterfly_instance() -> Result<Instance, ExemplarError> {
    let sys = build_butterfly();
    let probes = bit_pairs();
    let horizon = 8;
    let base = io_map(&sys, &probes, horizon)?;
    let mut catalog = BTreeMap::new();
    for v in 0..sys.len() {
        let arity = sys.arity(v);
        catalog.insert(v, (0..5).map(|s| NodeFunction::constant(arity, Value::Sym(s))).collect());
    }
    let space = CandidateSpace::new((0..sys.len()).collect(), 0..5, catalog);
    let classes = [(1, vec![T1]), (2, vec![T2]), (3, vec![T1, T2])]
        .into_iter()
        .map(|(p, nodes)| {
            (ClassKey(vec![p]), IOClass::AffectedExactly { base: base.clone(), nodes: nodes.into_iter().collect() })
        })
        .collect();
    let family = HypothesisFamily::new(probes, horizon, space, classes)?;
    Ok(Instance { system: sys, family, solver: butterfly_solver(), bounds: Bounds { l: 2, m: super::DEFAULT_M, q: 0 } })
}
