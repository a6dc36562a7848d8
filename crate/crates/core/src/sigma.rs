//! Saturated-linear sigma-processor nets over the rationals, their embedding
//! as computational systems, and a direct reference evaluator.

use num_traits::Zero;

use crate::model::{Alphabet, Builtin, ComputationalSystem, NodeFunction, Rational, SystemBuilder, Value};

pub use crate::model::sigma;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SigmaError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// `x -> sigma(A x + d b + v b' + c)` on `n` neurons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaNet {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    b2: Vec<Rational>,
    c: Vec<Rational>,
}

impl SigmaNet {
    pub fn new(
        a: Vec<Vec<Rational>>,
        b: Vec<Rational>,
        b2: Vec<Rational>,
        c: Vec<Rational>,
    ) -> Result<SigmaNet, SigmaError> {
        let n = a.len();
        if n == 0 {
            return Err(SigmaError::Dimension("net has no neurons".into()));
        }
        if a.iter().any(|row| row.len() != n) {
            return Err(SigmaError::Dimension("A is not square".into()));
        }
        if b.len() != n || b2.len() != n || c.len() != n {
            return Err(SigmaError::Dimension("vector length differs from neuron count".into()));
        }
        Ok(SigmaNet { a, b, b2, c })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn b_prime(&self) -> &[Rational] {
        &self.b2
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }
}

/// One step of the net evaluated directly.
pub fn reference_net_step(
    net: &SigmaNet,
    x: &[Rational],
    d: &Rational,
    v: &Rational,
) -> Result<Vec<Rational>, SigmaError> {
    if x.len() != net.len() {
        return Err(SigmaError::Dimension(format!("state has {} entries, net has {}", x.len(), net.len())));
    }
    Ok((0..net.len())
        .map(|i| {
            let mut acc = net.c[i].clone() + d * &net.b[i] + v * &net.b2[i];
            for (j, xj) in x.iter().enumerate() {
                acc += &net.a[i][j] * xj;
            }
            sigma(&acc)
        })
        .collect())
}

/// Node ids of the embedding: neurons are `0..n`; `n` relays the data
/// track, `n + 1` the validation track.
pub fn data_node(net: &SigmaNet) -> usize {
    net.len()
}

pub fn valid_node(net: &SigmaNet) -> usize {
    net.len() + 1
}

/// Embeds `net` over the rational alphabet. The input is two-track: position
/// `2t` carries `d_t` and `2t + 1` carries `v_t`. The two relay nodes add
/// one step of latency, so the neuron values at time `k` equal the `k`-th
/// reference iterate over inputs `(0, 0), (d_0, v_0), (d_1, v_1), ...`.
pub fn build_sigma_cs(net: &SigmaNet) -> ComputationalSystem {
    let n = net.len();
    let mut bld = SystemBuilder::new(Alphabet::rational());
    for i in 0..n {
        bld.node(format!("x{i}"));
    }
    let dn = bld.node("d");
    let vn = bld.node("v");
    bld.stream(dn, 0, 2).stream(vn, 1, 2);
    bld.function(dn, NodeFunction::select(2, 1));
    bld.function(vn, NodeFunction::select(2, 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                bld.edge(j, i);
            }
        }
        bld.edge(dn, i).edge(vn, i);
    }
    for i in 0..n {
        // arguments: other neurons ascending, d, v, self
        let mut coeffs: Vec<Rational> = (0..n).filter(|&j| j != i).map(|j| net.a[i][j].clone()).collect();
        coeffs.push(net.b[i].clone());
        coeffs.push(net.b2[i].clone());
        coeffs.push(net.a[i][i].clone());
        bld.function(i, NodeFunction::builtin(n + 2, Builtin::Sigma { offset: net.c[i].clone(), coeffs }));
        bld.output(i);
    }
    bld.build().expect("sigma embedding is well formed")
}

/// Interleaves the two tracks into one input string.
pub fn two_track(d: &[Rational], v: &[Rational]) -> Vec<Value> {
    let len = d.len().max(v.len());
    let get = |t: &[Rational], k: usize| Value::Num(t.get(k).cloned().unwrap_or_else(Rational::zero));
    (0..len).flat_map(|k| [get(d, k), get(v, k)]).collect()
}
