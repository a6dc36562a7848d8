//! Conversions between deterministic finite automata and computational
//! systems, and bounded language-equivalence checks.

use std::collections::HashMap;

use crate::model::{
    step_with_inputs, trace, Alphabet, ComputationalSystem, ModelError, NodeFunction, SimError, SystemBuilder, Value,
};

/// Largest table (rows) or transition count the conversions will build.
pub const SIZE_LIMIT: usize = 1 << 24;

pub const START: &str = "start";
pub const FIN: &str = "fin";
pub const BLANK: &str = "blank";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutomataError {
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("letter {0:?} collides with a reserved symbol")]
    NameCollision(String),
    #[error("system alphabet is not finite")]
    NotFinite,
    #[error("construction needs {0} entries, limit is {SIZE_LIMIT}")]
    TooLarge(u128),
    #[error("system alphabet lacks symbol {0:?}")]
    MissingSymbol(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// A complete DFA. States and letters are named; `delta[q][a]` is the
/// successor of state `q` on letter `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<String>,
    letters: Vec<String>,
    start: usize,
    delta: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(
        states: Vec<String>,
        letters: Vec<String>,
        start: usize,
        delta: Vec<Vec<usize>>,
        accepting: Vec<bool>,
    ) -> Result<Dfa, AutomataError> {
        let bad = |m: &str| Err(AutomataError::Malformed(m.to_string()));
        if states.is_empty() {
            return bad("no states");
        }
        if start >= states.len() {
            return bad("start state out of range");
        }
        if accepting.len() != states.len() || delta.len() != states.len() {
            return bad("per-state tables have the wrong length");
        }
        for row in &delta {
            if row.len() != letters.len() || row.iter().any(|&q| q >= states.len()) {
                return bad("transition function is not total");
            }
        }
        for names in [&states, &letters] {
            let mut seen = std::collections::HashSet::new();
            if names.iter().any(|n| n.is_empty() || n.contains(char::is_whitespace) || !seen.insert(n)) {
                return bad("names must be distinct and nonblank");
            }
        }
        Ok(Dfa { states, letters, start, delta, accepting })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.start, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run(word)]
    }

    /// Acceptance of a word given by letter names; `None` if a name is not a
    /// letter.
    pub fn accepts_labels<S: AsRef<str>>(&self, word: &[S]) -> Option<bool> {
        let idx = word.iter().map(|l| self.letter_index(l.as_ref())).collect::<Option<Vec<_>>>()?;
        Some(self.accepts(&idx))
    }
}

fn check_size(n: u128) -> Result<usize, AutomataError> {
    if n > SIZE_LIMIT as u128 {
        Err(AutomataError::TooLarge(n))
    } else {
        Ok(n as usize)
    }
}

/// Symbol set of the converted system: the DFA letters, `0` and `1` (added
/// when absent; `0` is the zero symbol), then `start`, `fin`, `blank`.
pub fn dfa_alphabet_labels(d: &Dfa) -> Result<Vec<String>, AutomataError> {
    let mut labels: Vec<String> = d.letters.clone();
    for reserved in [START, FIN, BLANK] {
        if labels.iter().any(|l| l == reserved) {
            return Err(AutomataError::NameCollision(reserved.to_string()));
        }
    }
    for extra in ["0", "1"] {
        if !labels.iter().any(|l| l == extra) {
            labels.push(extra.to_string());
        }
    }
    labels.extend([START, FIN, BLANK].map(String::from));
    Ok(labels)
}

/// Builds the system simulating `d`: one node per state plus an output node
/// `o`. Every node reads the whole input, one symbol per step. Feeding
/// `w` followed by `fin`, the state node for the current DFA state is the
/// only non-`blank` node, and after `|w| + 2` steps `o` stores `1` iff `d`
/// accepts `w` (otherwise `0`).
pub fn dfa_to_cs(d: &Dfa) -> Result<ComputationalSystem, AutomataError> {
    let labels = dfa_alphabet_labels(d)?;
    let alphabet = Alphabet::finite(&labels, "0")?;
    let fa = alphabet.as_finite().expect("finite");
    let sym = |l: &str| fa.index_of(l).expect("label present");
    let (start, fin, blank, one, zero) = (sym(START), sym(FIN), sym(BLANK), sym("1"), sym("0"));
    // alphabet index of each DFA letter
    let letter_sym: Vec<u32> = d.letters.iter().map(|l| sym(l)).collect();
    let mut sym_letter: HashMap<u32, usize> = HashMap::new();
    for (a, s) in letter_sym.iter().enumerate() {
        sym_letter.insert(*s, a);
    }
    let base = labels.len();

    let nq = d.states.len();
    let mut b = SystemBuilder::new(alphabet.clone());
    for (q, name) in d.states.iter().enumerate() {
        let init = if q == d.start { start } else { blank };
        b.node_with_init(name.clone(), Value::Sym(init));
    }
    let o = b.node(unique_name(&d.states, "o"));
    b.set_initial(o, Value::Sym(blank));

    let mut edges = std::collections::BTreeSet::new();
    for q in 0..nq {
        edges.insert((q, q));
        for &r in &d.delta[q] {
            edges.insert((q, r));
        }
        if d.accepting[q] {
            edges.insert((q, o));
        }
    }
    for &(u, v) in &edges {
        b.edge(u, v);
    }
    for v in 0..=nq {
        b.stream(v, 0, 1);
    }

    for s in 0..nq {
        let nbrs = b.in_neighbors(s);
        let arity = nbrs.len() + 2;
        check_size(base as u128 * (base as u128).pow(arity as u32 - 1))?;
        let f = NodeFunction::tabulate(arity, base, |args| {
            let xs = &args[..nbrs.len()];
            let dsym = args[arity - 1];
            let mut active = xs.iter().enumerate().filter(|(_, x)| **x != blank);
            let (Some((j, &x)), None) = (active.next(), active.next()) else {
                return blank;
            };
            let sj = nbrs[j];
            let moves = match sym_letter.get(&x) {
                Some(&a) => d.delta[sj][a] == s,
                None => x == start && s == d.start,
            };
            if moves {
                dsym
            } else {
                blank
            }
        });
        b.function(s, f);
    }
    let onbrs = b.in_neighbors(o);
    let arity = onbrs.len() + 2;
    check_size((base as u128).pow(arity as u32))?;
    let fo = NodeFunction::tabulate(arity, base, |args| {
        if args[..onbrs.len()].contains(&fin) {
            one
        } else {
            zero
        }
    });
    b.function(o, fo);
    b.output(o);
    Ok(b.build()?)
}

fn unique_name(taken: &[String], want: &str) -> String {
    let mut name = want.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Which input vectors become letters of the DFA built by [`cs_to_dfa`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LetterSet {
    /// Every assignment of symbols to the input-receiving nodes.
    All,
    /// Every receiving node reads the same symbol.
    Uniform,
}

/// DFA over the global states `S^V` of a finite system. A letter assigns a
/// symbol to each input-receiving node (nodes without input are fixed at the
/// zero symbol); state and letter indices are mixed-radix with node 0 most
/// significant. Accepting states are those whose first output coordinate
/// stores `1`.
pub fn cs_to_dfa(sys: &ComputationalSystem, letters: LetterSet) -> Result<Dfa, AutomataError> {
    let fa = sys.alphabet().as_finite().ok_or(AutomataError::NotFinite)?;
    let base = fa.len();
    let n = sys.len();
    let receivers: Vec<usize> = (0..n).filter(|&v| sys.receives_input(v)).collect();
    let nstates = check_size((base as u128).pow(n as u32))?;
    let nletters = match letters {
        LetterSet::All => check_size((base as u128).pow(receivers.len() as u32))?,
        LetterSet::Uniform => base,
    };
    check_size(nstates as u128 * nletters as u128)?;
    let one = fa.index_of("1").ok_or_else(|| AutomataError::MissingSymbol("1".into()))?;
    let out = sys.outputs()[0];

    let decode = |mut idx: usize, len: usize| -> Vec<u32> {
        let mut v = vec![0u32; len];
        for k in (0..len).rev() {
            v[k] = (idx % base) as u32;
            idx /= base;
        }
        v
    };
    let encode = |v: &[Value]| -> usize {
        v.iter().fold(0usize, |acc, x| match x {
            Value::Sym(s) => acc * base + *s as usize,
            Value::Num(_) => unreachable!("finite alphabet"),
        })
    };
    let label_vec = |v: &[u32]| {
        if v.is_empty() {
            "()".to_string()
        } else {
            v.iter().map(|s| fa.label(*s)).collect::<Vec<_>>().join(",")
        }
    };

    let zero = sys.alphabet().zero();
    let letter_inputs: Vec<Vec<Value>> = (0..nletters)
        .map(|a| {
            let mut inputs = vec![zero.clone(); n];
            match letters {
                LetterSet::All => {
                    for (k, s) in decode(a, receivers.len()).into_iter().enumerate() {
                        inputs[receivers[k]] = Value::Sym(s);
                    }
                }
                LetterSet::Uniform => {
                    for &r in &receivers {
                        inputs[r] = Value::Sym(a as u32);
                    }
                }
            }
            inputs
        })
        .collect();
    let letter_names: Vec<String> = match letters {
        LetterSet::All => (0..nletters).map(|a| label_vec(&decode(a, receivers.len()))).collect(),
        LetterSet::Uniform => (0..nletters).map(|a| fa.label(a as u32).to_string()).collect(),
    };

    let mut delta = Vec::with_capacity(nstates);
    let mut accepting = Vec::with_capacity(nstates);
    let mut names = Vec::with_capacity(nstates);
    for q in 0..nstates {
        let syms = decode(q, n);
        let stored: Vec<Value> = syms.iter().map(|s| Value::Sym(*s)).collect();
        accepting.push(syms[out] == one);
        names.push(label_vec(&syms));
        let mut row = Vec::with_capacity(nletters);
        for inputs in &letter_inputs {
            let next = step_with_inputs(sys, &stored, 0, inputs)?;
            row.push(encode(&next));
        }
        delta.push(row);
    }
    let start = encode(sys.initial());
    Dfa::new(names, letter_names, start, delta, accepting)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivVerdict {
    Equivalent,
    /// Shortlex-first word (as DFA letter indices) on which the two disagree.
    Counterexample(Vec<usize>),
}

/// Words over `k` letters of length `0..=max_len`, shortlex order.
pub fn shortlex_words(k: usize, max_len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=max_len).flat_map(move |len| {
        let total = if k == 0 && len > 0 { 0 } else { k.pow(len as u32) };
        (0..total).map(move |mut i| {
            let mut w = vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = i % k;
                i /= k;
            }
            w
        })
    })
}

/// Whether `sys`, fed `word` followed by `fin` one symbol per step, has its
/// first output node storing `1` after `|word| + 2` steps.
pub fn system_accepts(sys: &ComputationalSystem, word: &[Value]) -> Result<bool, AutomataError> {
    let fin = sys.alphabet().parse_symbol(FIN).ok_or_else(|| AutomataError::MissingSymbol(FIN.into()))?;
    let one = sys.alphabet().parse_symbol("1").ok_or_else(|| AutomataError::MissingSymbol("1".into()))?;
    let mut input = word.to_vec();
    input.push(fin);
    let states = trace(sys, &input, word.len() as u64 + 2)?;
    let last = states.last().expect("nonempty trace");
    Ok(last.stored[sys.outputs()[0]] == one)
}

/// Compares `d` against `sys` on every word of length `<= max_len`.
pub fn accept_equiv(d: &Dfa, sys: &ComputationalSystem, max_len: usize) -> Result<EquivVerdict, AutomataError> {
    let syms: Vec<Value> = d
        .letters
        .iter()
        .map(|l| sys.alphabet().parse_symbol(l).ok_or_else(|| AutomataError::MissingSymbol(l.clone())))
        .collect::<Result<_, _>>()?;
    for w in shortlex_words(d.letters.len(), max_len) {
        let input: Vec<Value> = w.iter().map(|&a| syms[a].clone()).collect();
        if d.accepts(&w) != system_accepts(sys, &input)? {
            return Ok(EquivVerdict::Counterexample(w));
        }
    }
    Ok(EquivVerdict::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity() -> Dfa {
        Dfa::new(
            vec!["even".into(), "odd".into()],
            vec!["0".into(), "1".into()],
            0,
            vec![vec![0, 1], vec![1, 0]],
            vec![true, false],
        )
        .unwrap()
    }

    #[test]
    fn parity_system_shape() {
        let s = dfa_to_cs(&parity()).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.alphabet().size(), Some(5));
        assert_eq!(accept_equiv(&parity(), &s, 6).unwrap(), EquivVerdict::Equivalent);
    }

    #[test]
    fn reserved_names_collide() {
        let d = Dfa::new(vec!["q".into()], vec!["fin".into()], 0, vec![vec![0]], vec![true]).unwrap();
        assert_eq!(dfa_to_cs(&d), Err(AutomataError::NameCollision("fin".into())));
    }

    #[test]
    fn malformed_rejected() {
        assert!(Dfa::new(vec!["q".into()], vec!["a".into()], 1, vec![vec![0]], vec![true]).is_err());
        assert!(Dfa::new(vec!["q".into()], vec!["a".into()], 0, vec![vec![1]], vec![true]).is_err());
    }

    #[test]
    fn shortlex_counts() {
        assert_eq!(shortlex_words(2, 6).count(), 127);
        assert_eq!(shortlex_words(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        let w: Vec<_> = shortlex_words(2, 2).collect();
        assert_eq!(w[1], vec![0]);
        assert_eq!(w[3], vec![0, 0]);
    }

    #[test]
    fn one_node_dfa_from_system() {
        let mut b = SystemBuilder::new(Alphabet::integers(2));
        let v = b.node("v");
        b.output(v).function(v, NodeFunction::select(1, 0));
        let s = b.build().unwrap();
        let d = cs_to_dfa(&s, LetterSet::All).unwrap();
        assert_eq!(d.states().len(), 2);
        assert_eq!(d.letters().len(), 1);
    }

    #[test]
    fn parity_dfa_from_system_has_125_states() {
        let s = dfa_to_cs(&parity()).unwrap();
        let d = cs_to_dfa(&s, LetterSet::All).unwrap();
        assert_eq!(d.states().len(), 125);
        assert_eq!(d.letters().len(), 125);
    }

    #[test]
    fn rational_system_rejected() {
        let mut b = SystemBuilder::new(Alphabet::rational());
        let v = b.node("v");
        b.output(v).function(v, NodeFunction::select(1, 0));
        let s = b.build().unwrap();
        assert_eq!(cs_to_dfa(&s, LetterSet::All), Err(AutomataError::NotFinite));
    }
}
