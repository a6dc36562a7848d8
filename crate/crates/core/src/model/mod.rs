//! Computational systems on finite directed graphs and their synchronous
//! simulation.

mod alphabet;
mod function;
mod sim;
mod system;

pub use alphabet::{format_rational, parse_rational, Alphabet, FiniteAlphabet, Rational, Value};
pub use function::{modp, sigma, Body, Builtin, EvalError, NodeFunction, Table};
pub use sim::{
    default_horizon, io_map, run, step, step_with_inputs, trace, ComputationOutput, Dynamics, IORelation, SimError,
    Status, SystemState,
};
pub use system::{ComputationalSystem, InputSchedule, NodeId, ScheduleEntry, Stream, SystemBuilder};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("alphabet has no symbols")]
    EmptyAlphabet,
    #[error("invalid symbol label {0:?}")]
    BadSymbolLabel(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("zero symbol {0:?} is not in the alphabet")]
    ZeroNotInAlphabet(String),
    #[error("duplicate node name {0:?}")]
    DuplicateNodeName(String),
    #[error("edge {0} -> {1} references an undeclared node")]
    DanglingEdge(usize, usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    #[error("node {0} has no function")]
    MissingFunction(usize),
    #[error("node {node}: function arity {found}, expected {expected}")]
    ArityMismatch { node: usize, expected: usize, found: usize },
    #[error("node {node}: {reason}")]
    BadFunction { node: usize, reason: String },
    #[error("node {0}: initial value outside the alphabet")]
    InitialOutside(usize),
    #[error("system has no output nodes")]
    NoOutputs,
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("node {node} has two input entries at time {time}")]
    DuplicateSchedule { node: usize, time: u64 },
    #[error("node {0} mixes a stream with other input entries")]
    StreamConflict(usize),
    #[error("stream stride must be positive")]
    BadStride,
}
