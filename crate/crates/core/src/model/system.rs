use std::collections::{BTreeSet, HashMap, HashSet};

use super::alphabet::{Alphabet, Value};
use super::function::{Body, Builtin, NodeFunction};
use super::ModelError;

pub type NodeId = usize;

/// Delivers input position `pos` to `node` during the update at `time`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScheduleEntry {
    pub node: NodeId,
    pub time: u64,
    pub pos: usize,
}

/// Delivers position `offset + stride * t` to `node` at every time `t`, and
/// the zero symbol once the input is exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stream {
    pub node: NodeId,
    pub offset: usize,
    pub stride: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InputSchedule {
    entries: Vec<ScheduleEntry>,
    streams: Vec<Stream>,
}

impl InputSchedule {
    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    pub fn streams(&self) -> &[Stream] {
        &self.streams
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.streams.is_empty()
    }

    /// Input position read by `node` at `time`, if any. Stream positions may
    /// lie past the end of the input; explicit entries must not.
    pub(crate) fn lookup(&self, node: NodeId, time: u64) -> Option<(usize, bool)> {
        if let Some(s) = self.streams.iter().find(|s| s.node == node) {
            return Some((s.offset + s.stride * time as usize, true));
        }
        self.entries
            .iter()
            .find(|e| e.node == node && e.time == time)
            .map(|e| (e.pos, false))
    }

    fn receivers(&self) -> HashSet<NodeId> {
        self.entries.iter().map(|e| e.node).chain(self.streams.iter().map(|s| s.node)).collect()
    }
}

/// A finite directed graph whose nodes hold alphabet symbols and update
/// synchronously. Node ids are dense indices `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationalSystem {
    alphabet: Alphabet,
    names: Vec<String>,
    coords: Vec<Option<(i64, i64)>>,
    edges: Vec<(NodeId, NodeId)>,
    in_nbrs: Vec<Vec<NodeId>>,
    functions: Vec<NodeFunction>,
    initial: Vec<Value>,
    schedule: InputSchedule,
    receives: Vec<bool>,
    outputs: Vec<NodeId>,
}

impl ComputationalSystem {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coord(&self, v: NodeId) -> Option<(i64, i64)> {
        self.coords.get(v).copied().flatten()
    }

    pub fn node_at(&self, a: i64, b: i64) -> Option<NodeId> {
        self.coords.iter().position(|c| *c == Some((a, b)))
    }

    /// Edges sorted by (src, dst).
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Incoming neighbours of `v` in ascending id order.
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.in_nbrs[v]
    }

    pub fn function(&self, v: NodeId) -> &NodeFunction {
        &self.functions[v]
    }

    pub fn initial(&self) -> &[Value] {
        &self.initial
    }

    pub fn schedule(&self) -> &InputSchedule {
        &self.schedule
    }

    pub fn receives_input(&self, v: NodeId) -> bool {
        self.receives[v]
    }

    /// Output nodes in ascending id order.
    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    /// Number of arguments node `v`'s function takes.
    pub fn arity(&self, v: NodeId) -> usize {
        self.in_nbrs[v].len() + 1 + usize::from(self.receives[v])
    }

    /// Argument index at which `v` sees the stored value of `u`, the self
    /// slot when `u == v` and `u` is not an in-neighbour.
    pub fn arg_index(&self, v: NodeId, u: NodeId) -> Option<usize> {
        match self.in_nbrs[v].binary_search(&u) {
            Ok(k) => Some(k),
            Err(_) if u == v => Some(self.in_nbrs[v].len()),
            Err(_) => None,
        }
    }

    pub fn self_index(&self, v: NodeId) -> usize {
        self.in_nbrs[v].len()
    }

    pub fn input_index(&self, v: NodeId) -> Option<usize> {
        self.receives[v].then(|| self.in_nbrs[v].len() + 1)
    }

    /// Same system with a different output set.
    pub fn with_outputs(&self, outputs: &[NodeId]) -> Result<ComputationalSystem, ModelError> {
        let mut out: BTreeSet<NodeId> = BTreeSet::new();
        for &o in outputs {
            if o >= self.len() {
                return Err(ModelError::UnknownNode(o));
            }
            out.insert(o);
        }
        if out.is_empty() {
            return Err(ModelError::NoOutputs);
        }
        let mut s = self.clone();
        s.outputs = out.into_iter().collect();
        Ok(s)
    }

    pub fn with_initial(&self, initial: Vec<Value>) -> Result<ComputationalSystem, ModelError> {
        for (v, x) in initial.iter().enumerate() {
            if !self.alphabet.contains(x) {
                return Err(ModelError::InitialOutside(v));
            }
        }
        let mut s = self.clone();
        s.initial = initial;
        Ok(s)
    }

    /// Checks that `f` could replace node `v`'s function.
    pub fn check_replacement(&self, v: NodeId, f: &NodeFunction) -> Result<(), ModelError> {
        if v >= self.len() {
            return Err(ModelError::UnknownNode(v));
        }
        check_function(&self.alphabet, v, self.arity(v), f)
    }
}

fn check_function(alphabet: &Alphabet, v: NodeId, arity: usize, f: &NodeFunction) -> Result<(), ModelError> {
    if f.arity() != arity {
        return Err(ModelError::ArityMismatch { node: v, expected: arity, found: f.arity() });
    }
    f.check_shape().map_err(|reason| ModelError::BadFunction { node: v, reason })?;
    match f.body() {
        Body::Table(t) => match alphabet.size() {
            Some(n) if n == t.base() => Ok(()),
            Some(n) => Err(ModelError::BadFunction {
                node: v,
                reason: format!("table over {} symbols, alphabet has {n}", t.base()),
            }),
            None => Err(ModelError::BadFunction { node: v, reason: "tables need a finite alphabet".into() }),
        },
        Body::Builtin(Builtin::Const(c)) if !alphabet.contains(c) => Err(ModelError::BadFunction {
            node: v,
            reason: "constant outside the alphabet".into(),
        }),
        Body::Builtin(_) => Ok(()),
    }
}

/// Incremental construction of a [`ComputationalSystem`]. Functions are
/// checked against the final in-degree and input schedule in [`build`].
///
/// [`build`]: SystemBuilder::build
#[derive(Clone, Debug)]
pub struct SystemBuilder {
    alphabet: Alphabet,
    names: Vec<String>,
    coords: Vec<Option<(i64, i64)>>,
    initial: Vec<Value>,
    functions: Vec<Option<NodeFunction>>,
    edges: Vec<(NodeId, NodeId)>,
    entries: Vec<ScheduleEntry>,
    streams: Vec<Stream>,
    outputs: Vec<NodeId>,
}

impl SystemBuilder {
    pub fn new(alphabet: Alphabet) -> SystemBuilder {
        SystemBuilder {
            alphabet,
            names: Vec::new(),
            coords: Vec::new(),
            initial: Vec::new(),
            functions: Vec::new(),
            edges: Vec::new(),
            entries: Vec::new(),
            streams: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Adds a node initialised to the zero symbol.
    pub fn node(&mut self, name: impl Into<String>) -> NodeId {
        let zero = self.alphabet.zero();
        self.node_with_init(name, zero)
    }

    pub fn node_with_init(&mut self, name: impl Into<String>, init: Value) -> NodeId {
        self.names.push(name.into());
        self.coords.push(None);
        self.initial.push(init);
        self.functions.push(None);
        self.names.len() - 1
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn set_coord(&mut self, v: NodeId, a: i64, b: i64) -> &mut Self {
        self.coords[v] = Some((a, b));
        self
    }

    pub fn set_initial(&mut self, v: NodeId, init: Value) -> &mut Self {
        self.initial[v] = init;
        self
    }

    pub fn edge(&mut self, src: NodeId, dst: NodeId) -> &mut Self {
        self.edges.push((src, dst));
        self
    }

    pub fn input_at(&mut self, node: NodeId, time: u64, pos: usize) -> &mut Self {
        self.entries.push(ScheduleEntry { node, time, pos });
        self
    }

    pub fn stream(&mut self, node: NodeId, offset: usize, stride: usize) -> &mut Self {
        self.streams.push(Stream { node, offset, stride });
        self
    }

    pub fn output(&mut self, node: NodeId) -> &mut Self {
        self.outputs.push(node);
        self
    }

    pub fn function(&mut self, v: NodeId, f: NodeFunction) -> &mut Self {
        self.functions[v] = Some(f);
        self
    }

    /// Sorted in-neighbours of `v` given the edges added so far.
    pub fn in_neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let mut n: Vec<NodeId> = self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect();
        n.sort_unstable();
        n.dedup();
        n
    }

    pub fn receives_input(&self, v: NodeId) -> bool {
        self.entries.iter().any(|e| e.node == v) || self.streams.iter().any(|s| s.node == v)
    }

    /// Arity node `v` will have given the edges and schedule added so far.
    pub fn arity(&self, v: NodeId) -> usize {
        self.in_neighbors(v).len() + 1 + usize::from(self.receives_input(v))
    }

    pub fn build(self) -> Result<ComputationalSystem, ModelError> {
        let n = self.names.len();
        let mut seen = HashSet::new();
        for name in &self.names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateNodeName(name.clone()));
            }
        }
        let mut edges = self.edges.clone();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(ModelError::DanglingEdge(a, b));
            }
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(ModelError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut in_nbrs = vec![Vec::new(); n];
        for &(a, b) in &edges {
            in_nbrs[b].push(a);
        }
        for l in &mut in_nbrs {
            l.sort_unstable();
        }

        let mut slots: HashMap<(NodeId, u64), ()> = HashMap::new();
        for e in &self.entries {
            if e.node >= n {
                return Err(ModelError::UnknownNode(e.node));
            }
            if slots.insert((e.node, e.time), ()).is_some() {
                return Err(ModelError::DuplicateSchedule { node: e.node, time: e.time });
            }
        }
        let mut stream_nodes = HashSet::new();
        for s in &self.streams {
            if s.node >= n {
                return Err(ModelError::UnknownNode(s.node));
            }
            if s.stride == 0 {
                return Err(ModelError::BadStride);
            }
            if !stream_nodes.insert(s.node) || self.entries.iter().any(|e| e.node == s.node) {
                return Err(ModelError::StreamConflict(s.node));
            }
        }
        let mut entries = self.entries.clone();
        entries.sort_unstable();
        let mut streams = self.streams.clone();
        streams.sort_unstable();
        let schedule = InputSchedule { entries, streams };
        let rec = schedule.receivers();
        let receives: Vec<bool> = (0..n).map(|v| rec.contains(&v)).collect();

        for (v, x) in self.initial.iter().enumerate() {
            if !self.alphabet.contains(x) {
                return Err(ModelError::InitialOutside(v));
            }
        }
        let mut functions = Vec::with_capacity(n);
        for (v, f) in self.functions.into_iter().enumerate() {
            let f = f.ok_or(ModelError::MissingFunction(v))?;
            let arity = in_nbrs[v].len() + 1 + usize::from(receives[v]);
            check_function(&self.alphabet, v, arity, &f)?;
            functions.push(f);
        }

        let mut outputs: Vec<NodeId> = self.outputs.clone();
        for &o in &outputs {
            if o >= n {
                return Err(ModelError::UnknownNode(o));
            }
        }
        outputs.sort_unstable();
        outputs.dedup();
        if outputs.is_empty() {
            return Err(ModelError::NoOutputs);
        }

        Ok(ComputationalSystem {
            alphabet: self.alphabet,
            names: self.names,
            coords: self.coords,
            edges,
            in_nbrs,
            functions,
            initial: self.initial,
            schedule,
            receives,
            outputs,
        })
    }
}
