use std::collections::HashSet;

use super::alphabet::Value;
use super::function::{EvalError, NodeFunction};
use super::system::{ComputationalSystem, NodeId};

/// Anything that can be stepped like a system: the plain system, or a system
/// with some functions replaced at particular times.
pub trait Dynamics: Sync {
    fn system(&self) -> &ComputationalSystem;
    /// Function used by `node` for the update computing state `time + 1`.
    fn function_at(&self, node: NodeId, time: u64) -> &NodeFunction;
}

impl Dynamics for ComputationalSystem {
    fn system(&self) -> &ComputationalSystem {
        self
    }

    fn function_at(&self, node: NodeId, _time: u64) -> &NodeFunction {
        self.function(node)
    }
}

impl<D: Dynamics + ?Sized> Dynamics for &D {
    fn system(&self) -> &ComputationalSystem {
        (**self).system()
    }

    fn function_at(&self, node: NodeId, time: u64) -> &NodeFunction {
        (**self).function_at(node, time)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("node {node} at time {time}: {source}")]
    Eval { node: NodeId, time: u64, source: EvalError },
    #[error("node {node} at time {time} reads input position {pos}, input has length {len}")]
    InputPosition { node: NodeId, time: u64, pos: usize, len: usize },
    #[error("input symbol at position {0} is outside the alphabet")]
    BadInputSymbol(usize),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("probe list is empty")]
    NoProbes,
    #[error("duplicate probe at index {0}")]
    DuplicateProbe(usize),
    #[error("state has {found} values, system has {expected} nodes")]
    StateShape { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemState {
    pub stored: Vec<Value>,
    pub time: u64,
    /// Per output node (in `outputs()` order): first nonzero value and the
    /// time at which it was stored.
    pub first_nonzero: Vec<Option<(Value, u64)>>,
}

impl SystemState {
    pub fn initial(sys: &ComputationalSystem) -> SystemState {
        SystemState {
            stored: sys.initial().to_vec(),
            time: 0,
            first_nonzero: vec![None; sys.outputs().len()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    Timeout,
}

/// First nonzero transmission of each output node; `None` for nodes that did
/// not fire within the horizon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComputationOutput {
    pub nodes: Vec<NodeId>,
    pub values: Vec<Option<Value>>,
}

impl ComputationOutput {
    pub fn status(&self) -> Status {
        if self.values.iter().all(Option::is_some) {
            Status::Complete
        } else {
            Status::Timeout
        }
    }

    pub fn is_complete(&self) -> bool {
        self.status() == Status::Complete
    }

    pub fn get(&self, node: NodeId) -> Option<&Value> {
        let k = self.nodes.iter().position(|n| *n == node)?;
        self.values[k].as_ref()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IORelation {
    pub probes: Vec<Vec<Value>>,
    pub horizon: u64,
    pub results: Vec<ComputationOutput>,
}

pub fn default_horizon(sys: &ComputationalSystem, input_len: usize) -> u64 {
    (input_len + sys.len() + sys.edges().len()) as u64
}

fn check_input(sys: &ComputationalSystem, input: &[Value]) -> Result<(), SimError> {
    match input.iter().position(|x| !sys.alphabet().contains(x)) {
        Some(p) => Err(SimError::BadInputSymbol(p)),
        None => Ok(()),
    }
}

fn input_symbol(sys: &ComputationalSystem, v: NodeId, time: u64, input: &[Value]) -> Result<Value, SimError> {
    match sys.schedule().lookup(v, time) {
        None => Ok(sys.alphabet().zero()),
        Some((pos, _)) if pos < input.len() => Ok(input[pos].clone()),
        Some((_, true)) => Ok(sys.alphabet().zero()),
        Some((pos, false)) => Err(SimError::InputPosition { node: v, time, pos, len: input.len() }),
    }
}

/// Computes the stored values at `time + 1` from those at `time`, with the
/// input symbol delivered to each receiving node supplied explicitly.
pub fn step_with_inputs<D: Dynamics + ?Sized>(
    d: &D,
    stored: &[Value],
    time: u64,
    inputs: &[Value],
) -> Result<Vec<Value>, SimError> {
    let sys = d.system();
    let mut next = Vec::with_capacity(sys.len());
    let mut args = Vec::new();
    for v in 0..sys.len() {
        args.clear();
        args.extend(sys.in_neighbors(v).iter().map(|&u| stored[u].clone()));
        args.push(stored[v].clone());
        if sys.receives_input(v) {
            args.push(inputs[v].clone());
        }
        let f = d.function_at(v, time);
        next.push(f.eval(&args, sys.alphabet()).map_err(|source| SimError::Eval { node: v, time, source })?);
    }
    Ok(next)
}

fn advance<D: Dynamics + ?Sized>(
    d: &D,
    stored: &[Value],
    time: u64,
    input: &[Value],
    args: &mut Vec<Value>,
    next: &mut Vec<Value>,
) -> Result<(), SimError> {
    let sys = d.system();
    next.clear();
    for v in 0..sys.len() {
        args.clear();
        args.extend(sys.in_neighbors(v).iter().map(|&u| stored[u].clone()));
        args.push(stored[v].clone());
        if sys.receives_input(v) {
            args.push(input_symbol(sys, v, time, input)?);
        }
        let f = d.function_at(v, time);
        next.push(f.eval(args, sys.alphabet()).map_err(|source| SimError::Eval { node: v, time, source })?);
    }
    Ok(())
}

fn record(sys: &ComputationalSystem, st: &mut SystemState) {
    for (k, &o) in sys.outputs().iter().enumerate() {
        if st.first_nonzero[k].is_none() && !sys.alphabet().is_zero(&st.stored[o]) {
            st.first_nonzero[k] = Some((st.stored[o].clone(), st.time));
        }
    }
}

/// One synchronous update of every node.
pub fn step<D: Dynamics + ?Sized>(d: &D, st: &SystemState, input: &[Value]) -> Result<SystemState, SimError> {
    let sys = d.system();
    if st.stored.len() != sys.len() {
        return Err(SimError::StateShape { expected: sys.len(), found: st.stored.len() });
    }
    check_input(sys, input)?;
    let mut next = Vec::with_capacity(sys.len());
    advance(d, &st.stored, st.time, input, &mut Vec::new(), &mut next)?;
    let mut out = SystemState { stored: next, time: st.time + 1, first_nonzero: st.first_nonzero.clone() };
    record(sys, &mut out);
    Ok(out)
}

/// States at times `0..=horizon`, without stopping early.
pub fn trace<D: Dynamics + ?Sized>(d: &D, input: &[Value], horizon: u64) -> Result<Vec<SystemState>, SimError> {
    let sys = d.system();
    check_input(sys, input)?;
    let mut states = vec![SystemState::initial(sys)];
    for _ in 0..horizon {
        let next = step(d, states.last().expect("nonempty"), input)?;
        states.push(next);
    }
    Ok(states)
}

/// Steps until every output node has fired or `horizon` steps have run.
pub fn run<D: Dynamics + ?Sized>(d: &D, input: &[Value], horizon: u64) -> Result<ComputationOutput, SimError> {
    let sys = d.system();
    if horizon == 0 {
        return Err(SimError::ZeroHorizon);
    }
    check_input(sys, input)?;
    let outs = sys.outputs();
    let mut values: Vec<Option<Value>> = vec![None; outs.len()];
    let mut pending = outs.len();
    let mut cur = sys.initial().to_vec();
    let mut next = Vec::with_capacity(sys.len());
    let mut args = Vec::new();
    for t in 0..horizon {
        advance(d, &cur, t, input, &mut args, &mut next)?;
        std::mem::swap(&mut cur, &mut next);
        for (k, &o) in outs.iter().enumerate() {
            if values[k].is_none() && !sys.alphabet().is_zero(&cur[o]) {
                values[k] = Some(cur[o].clone());
                pending -= 1;
            }
        }
        if pending == 0 {
            break;
        }
    }
    Ok(ComputationOutput { nodes: outs.to_vec(), values })
}

/// Extensional I/O map over a probe set.
pub fn io_map<D: Dynamics + ?Sized>(d: &D, probes: &[Vec<Value>], horizon: u64) -> Result<IORelation, SimError> {
    if probes.is_empty() {
        return Err(SimError::NoProbes);
    }
    if horizon == 0 {
        return Err(SimError::ZeroHorizon);
    }
    let mut seen = HashSet::new();
    for (i, p) in probes.iter().enumerate() {
        if !seen.insert(p) {
            return Err(SimError::DuplicateProbe(i));
        }
    }
    let results = probes.iter().map(|p| run(d, p, horizon)).collect::<Result<Vec<_>, _>>()?;
    Ok(IORelation { probes: probes.to_vec(), horizon, results })
}
