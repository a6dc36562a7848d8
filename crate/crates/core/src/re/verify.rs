//! Verification of reverse-engineering claims against brute-force ground
//! truth.

use std::fmt;

use rayon::prelude::*;

use crate::intervention::apply;
use crate::model::{io_map, ComputationalSystem};
use crate::oracle::{family_minima, SearchConfig, SearchError};

use super::family::{ClassKey, HypothesisFamily};
use super::interp::{run_solver, Fault, OracleBudget, RunConfig, SolverOutcome, DEFAULT_FUEL};
use super::program::SolverProgram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    EncodingTooLarge,
    BudgetExceeded,
    WrongClass,
    NotMinimal,
    MissedSolution,
    RuntimeFault,
}

impl Reason {
    pub fn name(&self) -> &'static str {
        match self {
            Reason::EncodingTooLarge => "EncodingTooLarge",
            Reason::BudgetExceeded => "BudgetExceeded",
            Reason::WrongClass => "WrongClass",
            Reason::NotMinimal => "NotMinimal",
            Reason::MissedSolution => "MissedSolution",
            Reason::RuntimeFault => "RuntimeFault",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject(Reason),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Accept => f.write_str("Accept"),
            Outcome::Reject(r) => write!(f, "Reject {r}"),
        }
    }
}

/// What happened for one class index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub key: ClassKey,
    /// Size of the solver's set, `None` for a declared "no solution".
    pub solver: Result<Option<usize>, Fault>,
    /// Brute-force minimum within the bound, `None` if none exists.
    pub minimum: Option<usize>,
    pub oracle_used: u64,
    pub failure: Option<Reason>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub bits: u64,
    pub evidence: Vec<Evidence>,
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        self.outcome == Outcome::Accept
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest intervention set size considered.
    pub l: usize,
    /// Largest admissible program encoding, in bits.
    pub m: u64,
    /// Oracle queries allowed per class index.
    pub q: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub search: SearchConfig,
    pub fuel: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { search: SearchConfig::default(), fuel: DEFAULT_FUEL }
    }
}

fn check_one(
    prog: &SolverProgram,
    sys: &ComputationalSystem,
    fam: &HypothesisFamily,
    bounds: &Bounds,
    cfg: &VerifyConfig,
    key: &ClassKey,
    minimum: Option<usize>,
) -> Evidence {
    let mut budget = OracleBudget::new(bounds.q);
    let run = run_solver(prog, key, sys, fam, &mut budget, RunConfig { limit: bounds.l, fuel: cfg.fuel });
    let mut ev = Evidence { key: key.clone(), solver: Ok(None), minimum, oracle_used: budget.used(), failure: None };
    match run {
        Err(f) => {
            ev.failure =
                Some(if matches!(f, Fault::BudgetExceeded { .. }) { Reason::BudgetExceeded } else { Reason::RuntimeFault });
            ev.solver = Err(f);
        }
        Ok(SolverOutcome::NoSolution) => {
            if minimum.is_some() {
                ev.failure = Some(Reason::MissedSolution);
            }
        }
        Ok(SolverOutcome::Solution(zs)) => {
            ev.solver = Ok(Some(zs.len()));
            let class = fam.class(key).expect("key from family");
            // recompute membership from scratch rather than trusting the oracle
            let member = apply(sys, &zs)
                .ok()
                .and_then(|h| io_map(&h, &fam.probes, fam.horizon).ok())
                .is_some_and(|rel| class.contains(&rel, sys.alphabet()));
            ev.failure = if zs.len() > bounds.l {
                Some(Reason::NotMinimal)
            } else if !member {
                Some(Reason::WrongClass)
            } else if minimum != Some(zs.len()) {
                Some(Reason::NotMinimal)
            } else {
                None
            };
        }
    }
    ev
}

/// Checks that `prog` reverse engineers `sys` with respect to `fam` within
/// the bounds: encoding at most `m` bits, at most `q` oracle queries per
/// class, and for every class a minimum-size intervention set (if one of at
/// most `l` items exists) or "no solution" (if none does). Minimality is
/// judged over the family's candidate space.
pub fn verify_re(
    prog: &SolverProgram,
    sys: &ComputationalSystem,
    fam: &HypothesisFamily,
    bounds: &Bounds,
    cfg: &VerifyConfig,
) -> Result<Verdict, SearchError> {
    let bits = prog.encoded_bits();
    if bits > bounds.m {
        return Ok(Verdict { outcome: Outcome::Reject(Reason::EncodingTooLarge), bits, evidence: Vec::new() });
    }
    let minima = family_minima(sys, fam, bounds.l, &cfg.search)?;
    let keys: Vec<&ClassKey> = fam.keys().collect();
    let evidence: Vec<Evidence> = keys
        .par_iter()
        .zip(minima.par_iter())
        .map(|(key, min)| check_one(prog, sys, fam, bounds, cfg, key, min.as_ref().map(|z| z.len())))
        .collect();
    let outcome = match evidence.iter().find_map(|e| e.failure) {
        Some(r) => Outcome::Reject(r),
        None => Outcome::Accept,
    };
    Ok(Verdict { outcome, bits, evidence })
}
