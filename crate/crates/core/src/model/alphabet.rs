//! Alphabets and the symbol values stored at nodes.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ModelError;

pub type Rational = BigRational;

/// A symbol held by a node.
///
/// Finite alphabets store the symbol's index into the alphabet; the rational
/// alphabet stores the exact value itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Sym(u32),
    Num(Rational),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Num(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Value {
        Value::Num(Rational::new(BigInt::from(num), BigInt::from(den)))
    }
}

/// A finite, ordered list of labelled symbols with a distinguished zero.
///
/// Labels that parse as rationals (`3`, `-1/2`) carry that numeric value and
/// can be consumed by arithmetic builtins; other labels (`blank`, `fin`) are
/// purely symbolic.
#[derive(Clone, Debug)]
pub struct FiniteAlphabet {
    labels: Vec<String>,
    zero: u32,
    index: HashMap<String, u32>,
    numeric: Vec<Option<Rational>>,
    ints: Vec<Option<i64>>,
    by_int: HashMap<i64, u32>,
    by_value: HashMap<Rational, u32>,
}

impl PartialEq for FiniteAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.zero == other.zero
    }
}

impl Eq for FiniteAlphabet {}

impl FiniteAlphabet {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn zero_index(&self) -> u32 {
        self.zero
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn label(&self, idx: u32) -> &str {
        &self.labels[idx as usize]
    }

    pub fn int_of(&self, idx: u32) -> Option<i64> {
        self.ints.get(idx as usize).copied().flatten()
    }

    pub fn numeric_of(&self, idx: u32) -> Option<&Rational> {
        self.numeric.get(idx as usize).and_then(|v| v.as_ref())
    }

    pub fn from_int(&self, n: i64) -> Option<u32> {
        self.by_int.get(&n).copied()
    }

    pub fn from_rational(&self, r: &Rational) -> Option<u32> {
        self.by_value.get(r).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Finite(FiniteAlphabet),
    Rational,
}

impl Alphabet {
    /// Builds a finite alphabet; `zero` must be one of `labels`.
    pub fn finite<S: AsRef<str>>(labels: &[S], zero: &str) -> Result<Alphabet, ModelError> {
        if labels.is_empty() {
            return Err(ModelError::EmptyAlphabet);
        }
        let mut index = HashMap::new();
        let mut numeric = Vec::with_capacity(labels.len());
        let mut ints = Vec::with_capacity(labels.len());
        let mut by_int = HashMap::new();
        let mut by_value = HashMap::new();
        let mut owned = Vec::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let l = l.as_ref();
            if l.is_empty() || l.contains(char::is_whitespace) {
                return Err(ModelError::BadSymbolLabel(l.to_string()));
            }
            if index.insert(l.to_string(), i as u32).is_some() {
                return Err(ModelError::DuplicateSymbol(l.to_string()));
            }
            let num = parse_rational(l);
            if let Some(r) = &num {
                if by_value.insert(r.clone(), i as u32).is_some() {
                    return Err(ModelError::DuplicateSymbol(l.to_string()));
                }
                let as_int = if r.is_integer() { r.to_integer().to_i64() } else { None };
                if let Some(n) = as_int {
                    by_int.insert(n, i as u32);
                }
                ints.push(as_int);
            } else {
                ints.push(None);
            }
            numeric.push(num);
            owned.push(l.to_string());
        }
        let zero = *index
            .get(zero)
            .ok_or_else(|| ModelError::ZeroNotInAlphabet(zero.to_string()))?;
        Ok(Alphabet::Finite(FiniteAlphabet {
            labels: owned,
            zero,
            index,
            numeric,
            ints,
            by_int,
            by_value,
        }))
    }

    /// `{0, 1, ..., n-1}` with `0` as zero.
    pub fn integers(n: usize) -> Alphabet {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Alphabet::finite(&labels, "0").expect("integer labels are distinct")
    }

    pub fn rational() -> Alphabet {
        Alphabet::Rational
    }

    pub fn as_finite(&self) -> Option<&FiniteAlphabet> {
        match self {
            Alphabet::Finite(f) => Some(f),
            Alphabet::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Alphabet::Finite(_))
    }

    /// Number of symbols, `None` for the rational alphabet.
    pub fn size(&self) -> Option<usize> {
        self.as_finite().map(|f| f.len())
    }

    pub fn zero(&self) -> Value {
        match self {
            Alphabet::Finite(f) => Value::Sym(f.zero),
            Alphabet::Rational => Value::Num(Rational::zero()),
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match (self, v) {
            (Alphabet::Finite(f), Value::Sym(i)) => *i == f.zero,
            (Alphabet::Rational, Value::Num(r)) => r.is_zero(),
            _ => false,
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Alphabet::Finite(f), Value::Sym(i)) => (*i as usize) < f.len(),
            (Alphabet::Rational, Value::Num(_)) => true,
            _ => false,
        }
    }

    /// All symbols of a finite alphabet in index order.
    pub fn symbols(&self) -> Vec<Value> {
        match self {
            Alphabet::Finite(f) => (0..f.len() as u32).map(Value::Sym).collect(),
            Alphabet::Rational => Vec::new(),
        }
    }

    pub fn parse_symbol(&self, text: &str) -> Option<Value> {
        match self {
            Alphabet::Finite(f) => f.index_of(text).map(Value::Sym),
            Alphabet::Rational => parse_rational(text).map(Value::Num),
        }
    }

    pub fn format(&self, v: &Value) -> String {
        match (self, v) {
            (Alphabet::Finite(f), Value::Sym(i)) if (*i as usize) < f.len() => f.label(*i).to_string(),
            (_, Value::Num(r)) => format_rational(r),
            (_, Value::Sym(i)) => format!("#{i}"),
        }
    }

    /// Numeric reading of a symbol, if it has one.
    pub fn numeric(&self, v: &Value) -> Option<Rational> {
        match (self, v) {
            (Alphabet::Finite(f), Value::Sym(i)) => f.numeric_of(*i).cloned(),
            (Alphabet::Rational, Value::Num(r)) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn int_value(&self, v: &Value) -> Option<i64> {
        match (self, v) {
            (Alphabet::Finite(f), Value::Sym(i)) => f.int_of(*i),
            (Alphabet::Rational, Value::Num(r)) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn from_int(&self, n: i64) -> Option<Value> {
        match self {
            Alphabet::Finite(f) => f.from_int(n).map(Value::Sym),
            Alphabet::Rational => Some(Value::int(n)),
        }
    }

    pub fn from_rational(&self, r: Rational) -> Option<Value> {
        match self {
            Alphabet::Finite(f) => f.from_rational(&r).map(Value::Sym),
            Alphabet::Rational => Some(Value::Num(r)),
        }
    }
}

/// Parses `n`, `-n`, or `num/den` (den nonzero) into a normalized rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    fn int(s: &str) -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }
    match text.split_once('/') {
        None => int(text).map(Rational::from_integer),
        Some((n, d)) => {
            let n = int(n)?;
            let d = int(d)?;
            if d.is_zero() || d.is_negative() {
                return None;
            }
            Some(Rational::new(n, d))
        }
    }
}

/// Canonical text for a rational: `n` for integers, otherwise `num/den` in
/// lowest terms with a positive denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Sym(i) => write!(f, "#{i}"),
            Value::Num(r) => f.write_str(&format_rational(r)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_must_belong() {
        assert!(matches!(
            Alphabet::finite(&["a", "b"], "0"),
            Err(ModelError::ZeroNotInAlphabet(_))
        ));
    }

    #[test]
    fn duplicates_rejected() {
        assert!(Alphabet::finite(&["0", "1", "1"], "0").is_err());
        // same numeric value under two spellings
        assert!(Alphabet::finite(&["0", "1/2", "2/4"], "0").is_err());
        assert!(Alphabet::finite::<&str>(&[], "0").is_err());
    }

    #[test]
    fn numeric_labels() {
        let a = Alphabet::finite(&["0", "1", "blank", "3/2"], "0").unwrap();
        let f = a.as_finite().unwrap();
        assert_eq!(f.int_of(1), Some(1));
        assert_eq!(f.int_of(2), None);
        assert_eq!(a.from_int(1), Some(Value::Sym(1)));
        assert_eq!(a.from_rational(Rational::new(3.into(), 2.into())), Some(Value::Sym(3)));
        assert!(a.is_zero(&Value::Sym(0)));
        assert_eq!(a.parse_symbol("blank"), Some(Value::Sym(2)));
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("2/4").map(|r| format_rational(&r)), Some("1/2".into()));
        assert_eq!(parse_rational("-3").map(|r| format_rational(&r)), Some("-3".into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("1/-2").is_none());
        assert!(parse_rational("x").is_none());
        assert!(parse_rational("").is_none());
    }
}
