//! Solver program interpreter.

use crate::intervention::InterventionSet;
use crate::model::{io_map, ComputationalSystem, NodeFunction, Rational};
use crate::oracle::{intervened_by_items, Item};

use super::family::{ClassKey, HypothesisFamily};
use super::program::{Instr, SolverProgram, REGISTERS};

pub const DEFAULT_FUEL: u64 = 100_000;
const STACK_LIMIT: usize = 1024;

/// Oracle query allowance. The `limit + 1`-th query faults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    limit: u64,
    used: u64,
}

impl OracleBudget {
    pub fn new(limit: u64) -> OracleBudget {
        OracleBudget { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn charge(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverOutcome {
    Solution(InterventionSet),
    NoSolution,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Fault {
    #[error("class {0} is not in the family")]
    NotInFamily(ClassKey),
    #[error("oracle budget of {limit} queries exceeded at instruction {pc}")]
    BudgetExceeded { pc: usize, limit: u64 },
    #[error("instruction budget exhausted")]
    OutOfFuel,
    #[error("instruction {pc}: stack underflow")]
    StackUnderflow { pc: usize },
    #[error("instruction {pc}: stack overflow")]
    StackOverflow { pc: usize },
    #[error("instruction {pc}: arithmetic overflow")]
    Overflow { pc: usize },
    #[error("instruction {pc}: division by zero")]
    DivisionByZero { pc: usize },
    #[error("instruction {pc}: class argument {index} out of range")]
    BadArgument { pc: usize, index: i64 },
    #[error("instruction {pc}: {what} {value} out of range")]
    OutOfRange { pc: usize, what: &'static str, value: i64 },
    #[error("instruction {pc}: invalid intervention ({reason})")]
    InvalidIntervention { pc: usize, reason: String },
    #[error("execution ran past the last instruction")]
    FellOff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// The bound `L`, readable through `LIMIT`.
    pub limit: usize,
    pub fuel: u64,
}

impl RunConfig {
    pub fn new(limit: usize) -> RunConfig {
        RunConfig { limit, fuel: DEFAULT_FUEL }
    }
}

/// Answers whether intervening with the given items lands in the class at
/// the given family position.
pub trait MembershipOracle {
    fn query(&mut self, items: &[Item], class: usize) -> bool;
}

/// Oracle backed by simulation over the family's probes.
pub struct SimOracle<'a> {
    pub sys: &'a ComputationalSystem,
    pub fam: &'a HypothesisFamily,
}

impl MembershipOracle for SimOracle<'_> {
    fn query(&mut self, items: &[Item], class: usize) -> bool {
        let h = intervened_by_items(self.sys, &self.fam.space, items);
        match io_map(&h, &self.fam.probes, self.fam.horizon) {
            Ok(rel) => self.fam.classes()[class].1.contains(&rel, self.sys.alphabet()),
            Err(_) => false,
        }
    }
}

pub fn run_solver(
    prog: &SolverProgram,
    key: &ClassKey,
    sys: &ComputationalSystem,
    fam: &HypothesisFamily,
    budget: &mut OracleBudget,
    cfg: RunConfig,
) -> Result<SolverOutcome, Fault> {
    run_solver_with(prog, key, sys, fam, budget, cfg, &mut SimOracle { sys, fam })
}

struct Machine<'a> {
    stack: Vec<i64>,
    pc: usize,
    sys: &'a ComputationalSystem,
    fam: &'a HypothesisFamily,
}

impl Machine<'_> {
    fn pop(&mut self) -> Result<i64, Fault> {
        self.stack.pop().ok_or(Fault::StackUnderflow { pc: self.pc })
    }

    fn push(&mut self, x: i64) -> Result<(), Fault> {
        if self.stack.len() >= STACK_LIMIT {
            return Err(Fault::StackOverflow { pc: self.pc });
        }
        self.stack.push(x);
        Ok(())
    }

    fn node(&self, x: i64) -> Result<usize, Fault> {
        if x >= 0 && (x as usize) < self.sys.len() {
            Ok(x as usize)
        } else {
            Err(Fault::OutOfRange { pc: self.pc, what: "node", value: x })
        }
    }

    fn arith(&mut self, f: impl Fn(i64, i64) -> Option<i64>) -> Result<(), Fault> {
        let b = self.pop()?;
        let a = self.pop()?;
        let r = f(a, b).ok_or(Fault::Overflow { pc: self.pc })?;
        self.push(r)
    }

    fn catalog_index(&self, v: usize, f: &NodeFunction) -> i64 {
        self.fam.space.index_of(v, f).map_or(-1, |i| i as i64)
    }
}

pub fn run_solver_with(
    prog: &SolverProgram,
    key: &ClassKey,
    sys: &ComputationalSystem,
    fam: &HypothesisFamily,
    budget: &mut OracleBudget,
    cfg: RunConfig,
    oracle: &mut dyn MembershipOracle,
) -> Result<SolverOutcome, Fault> {
    let pidx = fam.keys().position(|k| k == key).ok_or_else(|| Fault::NotInFamily(key.clone()))?;
    let code = prog.code();
    let mut regs = [0i64; REGISTERS as usize];
    let mut working: Vec<Item> = Vec::new();
    let mut m = Machine { stack: Vec::new(), pc: 0, sys, fam };
    let mut fuel = cfg.fuel;

    loop {
        if fuel == 0 {
            return Err(Fault::OutOfFuel);
        }
        fuel -= 1;
        let pc = m.pc;
        let ins = *code.get(pc).ok_or(Fault::FellOff)?;
        let mut next = pc + 1;
        match ins {
            Instr::Halt => {
                working.sort();
                let set = fam.space.to_set(&working).map_err(|e| Fault::InvalidIntervention {
                    pc,
                    reason: e.to_string(),
                })?;
                return Ok(SolverOutcome::Solution(set));
            }
            Instr::NoSol => return Ok(SolverOutcome::NoSolution),
            Instr::Push(x) => m.push(x)?,
            Instr::Pop => {
                m.pop()?;
            }
            Instr::Dup => {
                let x = m.pop()?;
                m.push(x)?;
                m.push(x)?;
            }
            Instr::Swap => {
                let b = m.pop()?;
                let a = m.pop()?;
                m.push(b)?;
                m.push(a)?;
            }
            Instr::Over => {
                let b = m.pop()?;
                let a = m.pop()?;
                m.push(a)?;
                m.push(b)?;
                m.push(a)?;
            }
            Instr::Pick(k) => {
                let len = m.stack.len() as u64;
                if k >= len {
                    return Err(Fault::StackUnderflow { pc });
                }
                let x = m.stack[(len - 1 - k) as usize];
                m.push(x)?;
            }
            Instr::Add => m.arith(i64::checked_add)?,
            Instr::Sub => m.arith(i64::checked_sub)?,
            Instr::Mul => m.arith(i64::checked_mul)?,
            Instr::Div | Instr::Mod => {
                let b = m.pop()?;
                let a = m.pop()?;
                if b == 0 {
                    return Err(Fault::DivisionByZero { pc });
                }
                let r = if ins == Instr::Div { a.checked_div_euclid(b) } else { a.checked_rem_euclid(b) };
                m.push(r.ok_or(Fault::Overflow { pc })?)?;
            }
            Instr::Eq => m.arith(|a, b| Some(i64::from(a == b)))?,
            Instr::Lt => m.arith(|a, b| Some(i64::from(a < b)))?,
            Instr::Gt => m.arith(|a, b| Some(i64::from(a > b)))?,
            Instr::Min => m.arith(|a, b| Some(a.min(b)))?,
            Instr::Max => m.arith(|a, b| Some(a.max(b)))?,
            Instr::Abs => {
                let a = m.pop()?;
                m.push(a.checked_abs().ok_or(Fault::Overflow { pc })?)?;
            }
            Instr::Not => {
                let a = m.pop()?;
                m.push(i64::from(a == 0))?;
            }
            Instr::Jmp(t) => next = t as usize,
            Instr::Jz(t) => {
                if m.pop()? == 0 {
                    next = t as usize;
                }
            }
            Instr::Jnz(t) => {
                if m.pop()? != 0 {
                    next = t as usize;
                }
            }
            Instr::Load(r) => m.push(regs[r as usize])?,
            Instr::Store(r) => regs[r as usize] = m.pop()?,
            Instr::Arg => {
                let k = m.pop()?;
                let x = usize::try_from(k)
                    .ok()
                    .and_then(|k| key.0.get(k))
                    .ok_or(Fault::BadArgument { pc, index: k })?;
                m.push(*x)?;
            }
            Instr::Argc => m.push(key.0.len() as i64)?,
            Instr::Pidx => m.push(pidx as i64)?,
            Instr::Limit => m.push(cfg.limit as i64)?,
            Instr::NodeAt => {
                let b = m.pop()?;
                let a = m.pop()?;
                m.push(sys.node_at(a, b).map_or(-1, |v| v as i64))?;
            }
            Instr::Coord => {
                let v = m.pop()?;
                let v = m.node(v)?;
                let (a, b) = sys.coord(v).ok_or(Fault::OutOfRange { pc, what: "coordinate of node", value: v as i64 })?;
                m.push(a)?;
                m.push(b)?;
            }
            Instr::StepLeft => {
                let v = m.pop()?;
                let v = m.node(v)?;
                let left = sys.coord(v).and_then(|(a, b)| {
                    sys.in_neighbors(v).iter().copied().find(|&u| sys.coord(u) == Some((a - 1, b)))
                });
                m.push(left.map_or(-1, |u| u as i64))?;
            }
            Instr::Output => {
                let k = m.pop()?;
                let o = usize::try_from(k)
                    .ok()
                    .and_then(|k| sys.outputs().get(k))
                    .ok_or(Fault::OutOfRange { pc, what: "output index", value: k })?;
                m.push(*o as i64)?;
            }
            Instr::RelayIdx => {
                let u = m.pop()?;
                let v = m.pop()?;
                let v = m.node(v)?;
                let u = m.node(u)?;
                let idx = match sys.arg_index(v, u) {
                    Some(k) => m.catalog_index(v, &NodeFunction::select(sys.arity(v), k)),
                    None => -1,
                };
                m.push(idx)?;
            }
            Instr::ConstIdx => {
                let den = m.pop()?;
                let num = m.pop()?;
                let v = m.pop()?;
                let v = m.node(v)?;
                let idx = if den == 0 {
                    -1
                } else {
                    match sys.alphabet().from_rational(Rational::new(num.into(), den.into())) {
                        Some(val) => m.catalog_index(v, &NodeFunction::constant(sys.arity(v), val)),
                        None => -1,
                    }
                };
                m.push(idx)?;
            }
            Instr::Emit => {
                let cat = m.pop()?;
                let t = m.pop()?;
                let v = m.pop()?;
                let bad = |reason: String| Fault::InvalidIntervention { pc, reason };
                if v < 0 || t < 0 || cat < 0 {
                    return Err(bad(format!("negative operand in ({v}, {t}, {cat})")));
                }
                let item = Item { node: v as usize, time: t as u64, cat: cat as usize };
                if !fam.space.contains(&item) {
                    return Err(bad(format!("({v}, {t}, {cat}) is outside the candidate space")));
                }
                if working.iter().any(|w| w.node == item.node && w.time == item.time) {
                    return Err(bad(format!("second intervention at node {v}, time {t}")));
                }
                working.push(item);
            }
            Instr::Oracle => {
                let p = m.pop()?;
                let class = usize::try_from(p)
                    .ok()
                    .filter(|&c| c < fam.len())
                    .ok_or(Fault::OutOfRange { pc, what: "class index", value: p })?;
                if !budget.charge() {
                    return Err(Fault::BudgetExceeded { pc, limit: budget.limit() });
                }
                let mut sorted = working.clone();
                sorted.sort();
                let yes = oracle.query(&sorted, class);
                m.push(i64::from(yes))?;
            }
            Instr::Clear => working.clear(),
        }
        m.pc = next;
    }
}
