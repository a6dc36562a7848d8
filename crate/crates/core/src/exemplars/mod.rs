//! Shipped example systems with their hypothesis families and solvers.

pub mod butterfly;
pub mod fft;
pub mod line;
pub mod reward;

use crate::model::{ComputationalSystem, ModelError, SimError};
use crate::re::{parse_asm, Bounds, FamilyError, HypothesisFamily, SolverProgram};

pub use reward::RewardVariant;

/// Program size bound, in bits, used by every shipped instance.
pub const DEFAULT_M: u64 = 512;

#[derive(Debug, thiserror::Error)]
pub enum ExemplarError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("unknown exemplar `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// A system together with a family to reverse engineer and a solver for it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub system: ComputationalSystem,
    pub family: HypothesisFamily,
    pub solver: SolverProgram,
    pub bounds: Bounds,
}

pub(crate) fn parse_solver(text: &str) -> SolverProgram {
    parse_asm(text).expect("shipped solver assembles")
}

/// Names accepted by [`named`].
pub const NAMES: &[&str] = &["line4", "line8", "butterfly", "fft4", "fft8", "reward-difference", "reward-ratio"];

/// Looks up a shipped instance. `line<N>` works for any `N >= 2` and uses
/// `L = N - 1`.
pub fn named(name: &str) -> Result<Instance, ExemplarError> {
    if let Some(n) = name.strip_prefix("line") {
        let n: usize = n.parse().map_err(|_| ExemplarError::Unknown(name.into()))?;
        return line::line_instance(n, n.saturating_sub(1));
    }
    match name {
        "butterfly" => butterfly::butterfly_instance(),
        "fft4" => fft::fft_instance(4, 17, 4),
        "fft8" => fft::fft_instance(8, 17, 2),
        "reward-difference" => reward::reward_instance(RewardVariant::Difference, &reward::default_gammas()),
        "reward-ratio" => reward::reward_instance(RewardVariant::Ratio, &reward::default_gammas()),
        _ => Err(ExemplarError::Unknown(name.into())),
    }
}
