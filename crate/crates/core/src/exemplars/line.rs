//! Message relayed along the diagonal of an `N x N` grid.

use std::collections::BTreeMap;

use crate::model::{Alphabet, ComputationalSystem, NodeFunction, Rational, Value};
use crate::oracle::CandidateSpace;
use crate::re::{Bounds, ClassKey, HypothesisFamily, IOClass, SolverProgram};

use super::{parse_solver, ExemplarError, Instance};

pub const SOLVER_TEXT: &str = include_str!("../../solvers/line.solver");

pub fn node_id(n: usize, r: usize, c: usize) -> usize {
    r * n + c
}

/// Grid over digits `0..=9`.
pub fn build_line(n: usize) -> Result<ComputationalSystem, ExemplarError> {
    build_line_with(n, 10)
}

/// `N x N` grid, nodes `r{r}c{c}` with id `r N + c` and coordinate `(r, c)`,
/// linked to their four grid neighbours in both directions and along the
/// diagonal chain `(k, k) -> (k + 1, k + 1)`. Node `(0, 0)` loads the single
/// input symbol at step 0, each diagonal node relays its diagonal
/// predecessor, and every other node holds the zero symbol. The output is
/// `(N - 1, N - 1)`.
pub fn build_line_with(n: usize, symbols: usize) -> Result<ComputationalSystem, ExemplarError> {
    if n < 2 {
        return Err(ExemplarError::BadParameter(format!("grid size {n} is below 2")));
    }
    if symbols < 2 {
        return Err(ExemplarError::BadParameter("alphabet needs a nonzero symbol".into()));
    }
    let mut b = crate::model::SystemBuilder::new(Alphabet::integers(symbols));
    for r in 0..n {
        for c in 0..n {
            let v = b.node(format!("r{r}c{c}"));
            b.set_coord(v, r as i64, c as i64);
        }
    }
    for r in 0..n {
        for c in 0..n {
            let v = node_id(n, r, c);
            if r + 1 < n {
                b.edge(v, node_id(n, r + 1, c)).edge(node_id(n, r + 1, c), v);
            }
            if c + 1 < n {
                b.edge(v, node_id(n, r, c + 1)).edge(node_id(n, r, c + 1), v);
            }
        }
    }
    for k in 0..n - 1 {
        b.edge(node_id(n, k, k), node_id(n, k + 1, k + 1));
    }
    b.input_at(0, 0, 0);
    for r in 0..n {
        for c in 0..n {
            let v = node_id(n, r, c);
            let arity = b.arity(v);
            let f = if r == 0 && c == 0 {
                NodeFunction::select(arity, arity - 1)
            } else if r == c {
                let pred = node_id(n, r - 1, c - 1);
                let k = b.in_neighbors(v).iter().position(|&u| u == pred).expect("diagonal edge");
                NodeFunction::select(arity, k)
            } else {
                NodeFunction::constant(arity, Value::Sym(0))
            };
            b.function(v, f);
        }
    }
    b.output(node_id(n, n - 1, n - 1));
    Ok(b.build()?)
}

pub fn line_solver() -> SolverProgram {
    parse_solver(SOLVER_TEXT)
}

/// Reverse-engineering instance: every node observed, class `(i, j)` holding
/// the I/O relations in which node `(i, j)` reproduces the input symbol, and
/// each node replaceable by a relay of any in-neighbour during steps
/// `0..N`.
pub fn line_instance(n: usize, limit: usize) -> Result<Instance, ExemplarError> {
    let base = build_line_with(n, 4)?;
    let all: Vec<usize> = (0..n * n).collect();
    let sys = base.with_outputs(&all)?;
    let probes: Vec<Vec<Value>> = (1..4).map(|s| vec![Value::Sym(s)]).collect();
    let mut catalog = BTreeMap::new();
    for v in 0..sys.len() {
        let arity = sys.arity(v);
        catalog.insert(v, (0..sys.in_neighbors(v).len()).map(|k| NodeFunction::select(arity, k)).collect());
    }
    let space = CandidateSpace::new(all, 0..n as u64, catalog);
    let mut classes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            classes.push((
                ClassKey(vec![i as i64, j as i64]),
                IOClass::Scaled { factor: Rational::from_integer(1.into()), source_pos: 0, nodes: vec![node_id(n, i, j)] },
            ));
        }
    }
    let family = HypothesisFamily::new(probes, n as u64 + 1, space, classes)?;
    Ok(Instance { system: sys, family, solver: line_solver(), bounds: Bounds { l: limit, m: super::DEFAULT_M, q: 0 } })
}
