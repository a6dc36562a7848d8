use num_traits::{One, Signed};

use crate::model::{run, ComputationalSystem, Rational, SimError, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxVerdict {
    pub holds: bool,
    /// First violating probe with the reference value and the system output.
    pub counterexample: Option<(Vec<Value>, Rational, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ApproxError {
    #[error("approximation factor must be at least 1")]
    BadFactor,
    #[error("system timed out on probe {0}")]
    Timeout(usize),
    #[error("system output on probe {0} has no numeric value")]
    NonNumeric(usize),
    #[error("probe {index}: {source}")]
    Sim { index: usize, source: SimError },
}

/// Checks `|f(x)| / k <= |C(x)| <= k |f(x)|` on every probe, where `C(x)` is
/// the first output node's first nonzero transmission.
pub fn k_approx_check(
    sys: &ComputationalSystem,
    f: impl Fn(&[Value]) -> Rational,
    k: &Rational,
    probes: &[Vec<Value>],
    horizon: u64,
) -> Result<ApproxVerdict, ApproxError> {
    if *k < Rational::one() {
        return Err(ApproxError::BadFactor);
    }
    let out = sys.outputs()[0];
    for (i, x) in probes.iter().enumerate() {
        let res = run(sys, x, horizon).map_err(|source| ApproxError::Sim { index: i, source })?;
        let c = res.get(out).ok_or(ApproxError::Timeout(i))?;
        let c = sys.alphabet().numeric(c).ok_or(ApproxError::NonNumeric(i))?;
        let fx = f(x);
        let (ca, fa) = (c.abs(), fx.abs());
        if !(&fa / k <= ca && ca <= k * &fa) {
            return Ok(ApproxVerdict { holds: false, counterexample: Some((x.clone(), fx, c)) });
        }
    }
    Ok(ApproxVerdict { holds: true, counterexample: None })
}
