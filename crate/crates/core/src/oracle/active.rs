use std::collections::{HashMap, HashSet};

use crate::automata::shortlex_words;
use crate::model::{step, step_with_inputs, ComputationalSystem, NodeId, SystemState, Value};

use super::search::SearchError;
use crate::model::ModelError;

/// Result of an activation search. When `active` is false, `closed` tells
/// whether the search saturated (no longer horizon could change the answer
/// for inputs up to the length bound) or merely ran out of horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveReport {
    pub active: bool,
    pub witness: Option<Vec<Value>>,
    pub closed: bool,
}

/// Input position read by each receiving node at time `t`, for inputs of
/// length `len`. `Err` when an explicit entry points past the end, where
/// simulation would stop.
fn reads_at(sys: &ComputationalSystem, t: u64, len: usize) -> Result<Vec<(NodeId, Option<usize>)>, ()> {
    let mut out = Vec::new();
    for v in 0..sys.len() {
        if !sys.receives_input(v) {
            continue;
        }
        match sys.schedule().lookup(v, t) {
            None => out.push((v, None)),
            Some((p, _)) if p < len => out.push((v, Some(p))),
            Some((_, true)) => out.push((v, None)),
            Some((_, false)) => return Err(()),
        }
    }
    Ok(out)
}

type Key = (Vec<u32>, Vec<(usize, u32)>);

fn syms(stored: &[Value]) -> Vec<u32> {
    stored
        .iter()
        .map(|v| match v {
            Value::Sym(s) => *s,
            Value::Num(_) => unreachable!("finite alphabet"),
        })
        .collect()
}

/// Whether some input of length `<= max_len` makes node `v` store a nonzero
/// value at some time in `0..=horizon`. Explores, per input length, the
/// product of global states with the input positions that will be read
/// again; the witness is the shortlex-least such input (positions that are
/// never read hold the first symbol).
pub fn node_ever_active(
    sys: &ComputationalSystem,
    v: NodeId,
    max_len: usize,
    horizon: u64,
) -> Result<ActiveReport, SearchError> {
    let fa = sys.alphabet().as_finite().ok_or_else(|| ModelError::BadFunction {
        node: v,
        reason: "activation search needs a finite alphabet".into(),
    })?;
    if v >= sys.len() {
        return Err(ModelError::UnknownNode(v).into());
    }
    let base = fa.len() as u32;
    let zero = fa.zero_index();
    let mut all_closed = true;

    if sys.initial()[v] != Value::Sym(zero) {
        return Ok(ActiveReport { active: true, witness: Some(Vec::new()), closed: true });
    }

    for len in 0..=max_len {
        // last time each position is read before the horizon
        let mut schedule = Vec::new();
        let mut last_read = vec![None::<u64>; len];
        let mut stop_at = horizon;
        for t in 0..horizon {
            match reads_at(sys, t, len) {
                Ok(r) => {
                    for (_, p) in &r {
                        if let Some(p) = p {
                            last_read[*p] = Some(t);
                        }
                    }
                    schedule.push(r);
                }
                Err(()) => {
                    stop_at = t;
                    break;
                }
            }
        }
        let input_free_from = last_read.iter().flatten().map(|t| t + 1).max().unwrap_or(0);

        let mut frontier: HashMap<Key, Vec<Option<u32>>> = HashMap::new();
        frontier.insert((syms(sys.initial()), Vec::new()), vec![None; len]);
        let mut best: Option<Vec<u32>> = None;
        let mut seen_sets: HashSet<Vec<Vec<u32>>> = HashSet::new();
        let mut closed = stop_at < horizon;

        for t in 0..stop_at {
            if frontier.is_empty() {
                closed = true;
                break;
            }
            if t >= input_free_from {
                let mut set: Vec<Vec<u32>> = frontier.keys().map(|k| k.0.clone()).collect();
                set.sort_unstable();
                if !seen_sets.insert(set) {
                    closed = true;
                    break;
                }
            }
            let reads = &schedule[t as usize];
            let mut next: HashMap<Key, Vec<Option<u32>>> = HashMap::new();
            let mut entries: Vec<(Key, Vec<Option<u32>>)> = frontier.drain().collect();
            entries.sort_unstable_by(|a, b| a.1.cmp(&b.1));
            for ((stored, _), assign) in entries {
                let mut fresh: Vec<usize> =
                    reads.iter().filter_map(|(_, p)| *p).filter(|p| assign[*p].is_none()).collect();
                fresh.sort_unstable();
                fresh.dedup();
                let combos = base.pow(fresh.len() as u32);
                let stored_v: Vec<Value> = stored.iter().map(|s| Value::Sym(*s)).collect();
                for c in 0..combos {
                    let mut a = assign.clone();
                    let mut rest = c;
                    for &p in fresh.iter().rev() {
                        a[p] = Some(rest % base);
                        rest /= base;
                    }
                    let mut inputs = vec![Value::Sym(zero); sys.len()];
                    for (node, p) in reads {
                        if let Some(p) = p {
                            inputs[*node] = Value::Sym(a[*p].expect("assigned"));
                        }
                    }
                    let Ok(after) = step_with_inputs(sys, &stored_v, t, &inputs) else {
                        continue;
                    };
                    let after = syms(&after);
                    if after[v] != zero {
                        let w: Vec<u32> = a.iter().map(|x| x.unwrap_or(0)).collect();
                        if best.as_ref().is_none_or(|b| w < *b) {
                            best = Some(w);
                        }
                    }
                    let needed: Vec<(usize, u32)> = (0..len)
                        .filter(|&p| last_read[p].is_some_and(|lr| lr > t))
                        .filter_map(|p| a[p].map(|s| (p, s)))
                        .collect();
                    let key = (after, needed);
                    match next.get(&key) {
                        Some(prev) if *prev <= a => {}
                        _ => {
                            next.insert(key, a);
                        }
                    }
                }
            }
            frontier = next;
        }
        if let Some(w) = best {
            return Ok(ActiveReport {
                active: true,
                witness: Some(w.into_iter().map(Value::Sym).collect()),
                closed: true,
            });
        }
        if frontier.is_empty() {
            closed = true;
        }
        all_closed &= closed;
    }
    Ok(ActiveReport { active: false, witness: None, closed: all_closed })
}

/// Reference answer by simulating every input of length `<= max_len` in
/// shortlex order; a simulation error ends that run.
pub fn naive_ever_active(sys: &ComputationalSystem, v: NodeId, max_len: usize, horizon: u64) -> Option<Vec<Value>> {
    let base = sys.alphabet().size()?;
    for w in shortlex_words(base, max_len) {
        let input: Vec<Value> = w.iter().map(|&s| Value::Sym(s as u32)).collect();
        let mut st = SystemState::initial(sys);
        if !sys.alphabet().is_zero(&st.stored[v]) {
            return Some(input);
        }
        for _ in 0..horizon {
            match step(sys, &st, &input) {
                Ok(next) => st = next,
                Err(_) => break,
            }
            if !sys.alphabet().is_zero(&st.stored[v]) {
                return Some(input);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Alphabet, NodeFunction, SystemBuilder};

    #[test]
    fn constant_zero_never_active() {
        let mut b = SystemBuilder::new(Alphabet::integers(3));
        let v = b.node("v");
        b.output(v).function(v, NodeFunction::constant(1, Value::Sym(0)));
        let s = b.build().unwrap();
        let r = node_ever_active(&s, 0, 3, 5).unwrap();
        assert!(!r.active);
        assert!(r.closed);
    }

    #[test]
    fn gated_two_symbol_witness() {
        // v becomes 1 only when it reads b right after a
        let mut b = SystemBuilder::new(Alphabet::finite(&["0", "a", "b", "1"], "0").unwrap());
        let m = b.node("m");
        let v = b.node("v");
        b.edge(m, v).stream(m, 0, 1).stream(v, 0, 1).output(v);
        b.function(m, NodeFunction::select(2, 1));
        b.function(v, NodeFunction::tabulate(3, 4, |a| u32::from(a[0] == 1 && a[2] == 2) * 3));
        let s = b.build().unwrap();
        let r = node_ever_active(&s, v, 2, 4).unwrap();
        assert!(r.active);
        assert_eq!(r.witness, Some(vec![Value::Sym(1), Value::Sym(2)]));
        assert_eq!(naive_ever_active(&s, v, 2, 4), r.witness);
    }
}
