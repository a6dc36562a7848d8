//! Radix-2 decimation-in-time FFT network over the prime field `F_q`.
//!
//! Every node uses offset encoding: symbol `0` means "not computed yet" and
//! symbol `v + 1` carries field element `v`, so a computed zero still counts
//! as a nonzero transmission.

use std::collections::BTreeMap;

use crate::model::{io_map, Alphabet, Builtin, ComputationalSystem, NodeFunction, SystemBuilder, Value};
use crate::oracle::CandidateSpace;
use crate::re::{Bounds, ClassKey, HypothesisFamily, IOClass, SolverProgram};

use super::{parse_solver, ExemplarError, Instance};

pub const SOLVER_TEXT: &str = include_str!("../../solvers/fft.solver");

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Multiplicative order of `w` modulo `q`, `None` if `w` is not a unit.
pub fn order_mod(w: u64, q: u64) -> Option<u64> {
    let w = w % q;
    if w == 0 {
        return None;
    }
    let mut x = w;
    for k in 1..q {
        if x == 1 {
            return Some(k);
        }
        x = x * w % q;
    }
    None
}

pub fn bit_reverse(r: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        r.reverse_bits() >> (usize::BITS - bits)
    }
}

pub fn node_id(n: usize, stage: usize, row: usize) -> usize {
    stage * n + row
}

/// Stages `0..=m` for `N = 2^m`; node `s{s}r{r}` has id `s N + r` and
/// coordinate `(s, r)`. Stage 0 row `r` latches input `x[bitrev(r)]`. Stage
/// `s` pairs rows `r` and `r ^ h` (`h = 2^(s-1)`); with `k = r mod h` and
/// twiddle `w = omega^(k N / 2h)`, the row with bit `s - 1` clear computes
/// `u + w v` and its partner `u - w v`. Outputs are the stage-`m` nodes, in
/// natural order `X_k = sum_n x_n omega^(n k)`.
pub fn build_fft(n: usize, q: u64, omega: u64) -> Result<ComputationalSystem, ExemplarError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(ExemplarError::BadParameter(format!("size {n} is not a power of two >= 2")));
    }
    if !is_prime(q) || q > (1 << 20) {
        return Err(ExemplarError::BadParameter(format!("modulus {q} is not a supported prime")));
    }
    if order_mod(omega, q) != Some(n as u64) {
        return Err(ExemplarError::BadParameter(format!("{omega} does not have order {n} modulo {q}")));
    }
    let m = n.trailing_zeros() as usize;
    let mut b = SystemBuilder::new(Alphabet::integers(q as usize + 1));
    for s in 0..=m {
        for r in 0..n {
            let v = b.node(format!("s{s}r{r}"));
            b.set_coord(v, s as i64, r as i64);
        }
    }
    for r in 0..n {
        b.input_at(node_id(n, 0, r), 0, bit_reverse(r, m as u32));
        b.function(node_id(n, 0, r), NodeFunction::builtin(2, Builtin::Latch { hold: 0, src: 1, offset: 1 }));
    }
    for s in 1..=m {
        let h = 1usize << (s - 1);
        for r in 0..n {
            let partner = r ^ h;
            b.edge(node_id(n, s - 1, r), node_id(n, s, r));
            b.edge(node_id(n, s - 1, partner), node_id(n, s, r));
            let k = r % h;
            let w = pow_mod(omega, (k * n / (2 * h)) as u64, q) as i64;
            let q = q as i64;
            // arguments: lower-id predecessor, higher-id predecessor, self
            let coeffs = if r & h == 0 { vec![1, w, 0] } else { vec![1, (q - w) % q, 0] };
            b.function(node_id(n, s, r), NodeFunction::builtin(3, Builtin::OffsetLinmod { modulus: q, coeffs }));
        }
    }
    for r in 0..n {
        b.output(node_id(n, m, r));
    }
    Ok(b.build()?)
}

pub fn fft_solver() -> SolverProgram {
    parse_solver(SOLVER_TEXT)
}

/// Output rows affected by the stage-`s` node in row `r`.
pub fn descendants(n: usize, stage: usize, row: usize) -> Vec<usize> {
    let step = 1usize << stage;
    (0..n).filter(|x| x % step == row % step).collect()
}

/// Probe inputs over field values: all zeros, an impulse, a ramp, and
/// squares plus three.
pub fn fft_probes(n: usize, q: u64) -> Vec<Vec<Value>> {
    let sym = |x: u64| Value::Sym((x % q) as u32);
    vec![
        (0..n).map(|_| sym(0)).collect(),
        (0..n).map(|i| sym(u64::from(i == 0))).collect(),
        (0..n).map(|i| sym(i as u64 + 1)).collect(),
        (0..n).map(|i| sym((i * i) as u64 + 3)).collect(),
    ]
}

/// One class per nonempty set of output rows (keyed by the sorted rows): the
/// relations differing from the original at exactly those outputs. Any node
/// may take any symbol as a constant during steps `0..=m`.
pub fn fft_instance(n: usize, q: u64, omega: u64) -> Result<Instance, ExemplarError> {
    let sys = build_fft(n, q, omega)?;
    let m = n.trailing_zeros() as u64;
    let probes = fft_probes(n, q);
    let horizon = m + 3;
    let base = io_map(&sys, &probes, horizon)?;
    let mut catalog = BTreeMap::new();
    for v in 0..sys.len() {
        let arity = sys.arity(v);
        catalog.insert(v, (0..=q as u32).map(|s| NodeFunction::constant(arity, Value::Sym(s))).collect());
    }
    let space = CandidateSpace::new((0..sys.len()).collect(), 0..m + 1, catalog);
    let outs = sys.outputs().to_vec();
    let mut classes = Vec::new();
    for mask in 1u64..(1 << n) {
        let rows: Vec<i64> = (0..n).filter(|r| mask >> r & 1 == 1).map(|r| r as i64).collect();
        let nodes = rows.iter().map(|&r| outs[r as usize]).collect();
        classes.push((ClassKey(rows), IOClass::AffectedExactly { base: base.clone(), nodes }));
    }
    let family = HypothesisFamily::new(probes, horizon, space, classes)?;
    Ok(Instance { system: sys, family, solver: fft_solver(), bounds: Bounds { l: 1, m: super::DEFAULT_M, q: 1 } })
}
