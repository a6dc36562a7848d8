//! Toy reward circuit: a hotspot signal `I_HS` and a coldspot signal `I_CS`
//! combined downstream by difference (PFC link) and by ratio or difference
//! (OFC link).
//!
//! Node `A` (the coldspot ancestor) loads `I_CS` at step 0 and feeds two
//! coldspot relays, one per downstream link. The hotspot `HS` loads `I_HS`
//! at step 1 so both arrive at the links together; the links fire at time 3.
//! Input position 0 carries `I_HS`, position 1 carries `I_CS`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::model::{Alphabet, Builtin, ComputationalSystem, NodeFunction, Rational, SystemBuilder, Value};
use crate::oracle::CandidateSpace;
use crate::re::{Bounds, ClassKey, HypothesisFamily, IOClass, SolverProgram};

use super::{parse_solver, ExemplarError, Instance};

pub const DIFFERENCE_SOLVER_TEXT: &str = include_str!("../../solvers/reward_difference.solver");
pub const RATIO_SOLVER_TEXT: &str = include_str!("../../solvers/reward_ratio.solver");

pub const A: usize = 0;
pub const HS: usize = 1;
pub const CS_PFC: usize = 2;
pub const CS_OFC: usize = 3;
pub const PFC: usize = 4;
pub const OFC: usize = 5;

/// Hotspot level used by the shipped family.
pub const FAMILY_HS: i64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RewardVariant {
    Ratio,
    Difference,
}

impl RewardVariant {
    pub fn name(&self) -> &'static str {
        match self {
            RewardVariant::Ratio => "ratio",
            RewardVariant::Difference => "difference",
        }
    }

    pub fn parse(s: &str) -> Option<RewardVariant> {
        match s {
            "ratio" => Some(RewardVariant::Ratio),
            "difference" => Some(RewardVariant::Difference),
            _ => None,
        }
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn build_reward(variant: RewardVariant) -> ComputationalSystem {
    let mut b = SystemBuilder::new(Alphabet::rational());
    for name in ["A", "HS", "CS_pfc", "CS_ofc", "PFC", "OFC"] {
        b.node(name);
    }
    b.edge(A, CS_PFC).edge(A, CS_OFC).edge(HS, PFC).edge(CS_PFC, PFC).edge(HS, OFC).edge(CS_OFC, OFC);
    b.input_at(A, 0, 1).input_at(HS, 1, 0);
    b.function(A, NodeFunction::select(2, 1)).function(HS, NodeFunction::select(2, 1));
    b.function(CS_PFC, NodeFunction::select(2, 0)).function(CS_OFC, NodeFunction::select(2, 0));
    let diff = || NodeFunction::builtin(3, Builtin::Affine { offset: Rational::zero(), coeffs: vec![q(1), q(-1), q(0)] });
    b.function(PFC, diff());
    b.function(
        OFC,
        match variant {
            RewardVariant::Ratio => NodeFunction::builtin(3, Builtin::Ratio { num: 0, den: 1 }),
            RewardVariant::Difference => diff(),
        },
    );
    b.output(PFC).output(OFC);
    b.build().expect("reward circuit is well formed")
}

pub fn reward_solver(variant: RewardVariant) -> SolverProgram {
    parse_solver(match variant {
        RewardVariant::Ratio => RATIO_SOLVER_TEXT,
        RewardVariant::Difference => DIFFERENCE_SOLVER_TEXT,
    })
}

/// Input `(I_HS, I_CS)`.
pub fn reward_input(hs: &Rational, cs: &Rational) -> Vec<Value> {
    vec![Value::Num(hs.clone()), Value::Num(cs.clone())]
}

/// Attenuation levels used by the shipped family.
pub fn default_gammas() -> Vec<Rational> {
    vec![Rational::zero(), Rational::new(1.into(), 4.into()), Rational::new(1.into(), 2.into())]
}

/// Classes keyed `(gamma num, gamma den, I_HS)`: both links carry
/// `(1 - gamma) I_HS` on every probe. Probes fix `I_HS` and vary `I_CS` over
/// `1, 2, 3`. Every node may be clamped to `0`, `I_HS`, `gamma I_HS` or
/// `1 / (1 - gamma)` during steps `0..3`.
pub fn reward_instance(variant: RewardVariant, gammas: &[Rational]) -> Result<Instance, ExemplarError> {
    let sys = build_reward(variant);
    let hs = q(FAMILY_HS);
    let mut consts = vec![Rational::zero(), hs.clone()];
    let mut classes = Vec::new();
    for g in gammas {
        if *g < Rational::zero() || *g >= Rational::one() {
            return Err(ExemplarError::BadParameter(format!("gamma {g} is outside [0, 1)")));
        }
        consts.push(g * &hs);
        consts.push(Rational::one() / (Rational::one() - g));
        let key = ClassKey(vec![
            i64::try_from(g.numer()).map_err(|_| ExemplarError::BadParameter("gamma too large".into()))?,
            i64::try_from(g.denom()).map_err(|_| ExemplarError::BadParameter("gamma too large".into()))?,
            FAMILY_HS,
        ]);
        classes.push((
            key,
            IOClass::Scaled { factor: Rational::one() - g, source_pos: 0, nodes: vec![PFC, OFC] },
        ));
    }
    consts.sort();
    consts.dedup();
    let mut catalog = BTreeMap::new();
    for v in 0..sys.len() {
        let arity = sys.arity(v);
        catalog.insert(v, consts.iter().map(|c| NodeFunction::constant(arity, Value::Num(c.clone()))).collect());
    }
    let space = CandidateSpace::new((0..sys.len()).collect(), 0..3, catalog);
    let probes = (1..=3).map(|cs| reward_input(&hs, &q(cs))).collect();
    let family = HypothesisFamily::new(probes, 4, space, classes)?;
    Ok(Instance { system: sys, family, solver: reward_solver(variant), bounds: Bounds { l: 2, m: super::DEFAULT_M, q: 0 } })
}
