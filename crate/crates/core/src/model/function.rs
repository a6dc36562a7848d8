//! Node update functions.
//!
//! Argument order for every function is fixed: stored values of incoming
//! neighbours in ascending node id, then the node's own stored value, then
//! (for nodes that ever receive input) the delivered input symbol.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::alphabet::{format_rational, Alphabet, Rational, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeFunction {
    arity: usize,
    body: Body,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Body {
    Table(Table),
    Builtin(Builtin),
}

/// Total lookup table over `Alphabet^arity`, rows in mixed-radix order with
/// the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    base: usize,
    rows: Vec<u32>,
}

/// Built-in closed-form node functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Constant symbol.
    Const(Value),
    /// Relay argument `k` unchanged.
    Select(usize),
    /// `(offset + sum c_k a_k) mod modulus` over integer-valued symbols.
    Linmod { modulus: i64, offset: i64, coeffs: Vec<i64> },
    /// Presence-gated field arithmetic with offset encoding: symbol `0` means
    /// "nothing yet", symbol `v + 1` carries field element `v`. Yields `0` while
    /// any argument with a nonzero coefficient is absent, otherwise
    /// `(sum c_k (a_k - 1) mod modulus) + 1`.
    OffsetLinmod { modulus: i64, coeffs: Vec<i64> },
    /// `a_hold` when it is nonzero, otherwise `a_src + offset`.
    Latch { hold: usize, src: usize, offset: i64 },
    /// `offset + sum c_k a_k` in exact rationals.
    Affine { offset: Rational, coeffs: Vec<Rational> },
    /// Saturated-linear sigma applied to an affine form.
    Sigma { offset: Rational, coeffs: Vec<Rational> },
    /// `a_num / a_den`; a zero numerator yields zero, a zero denominator with
    /// nonzero numerator is an error.
    Ratio { num: usize, den: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("result {0} is not a symbol of the alphabet")]
    OutsideAlphabet(String),
    #[error("argument {0} has no numeric value")]
    NonNumeric(usize),
    #[error("argument {0} is not an integer")]
    NonInteger(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic overflow")]
    Overflow,
    #[error("table lookup needs finite-alphabet arguments")]
    BadTableArgument,
}

/// Saturated-linear activation: 0 below 0, identity on [0,1], 1 above 1.
pub fn sigma(x: &Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else if *x > Rational::one() {
        Rational::one()
    } else {
        x.clone()
    }
}

impl Table {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    fn lookup(&self, args: &[Value]) -> Result<u32, EvalError> {
        let mut idx = 0usize;
        for a in args {
            match a {
                Value::Sym(s) if (*s as usize) < self.base => idx = idx * self.base + *s as usize,
                _ => return Err(EvalError::BadTableArgument),
            }
        }
        Ok(self.rows[idx])
    }
}

impl NodeFunction {
    /// Table from a row vector; `rows.len()` must equal `base^arity`.
    pub fn table(arity: usize, base: usize, rows: Vec<u32>) -> Option<NodeFunction> {
        let expected = base.checked_pow(arity as u32)?;
        if rows.len() != expected || rows.iter().any(|r| *r as usize >= base) {
            return None;
        }
        Some(NodeFunction { arity, body: Body::Table(Table { base, rows }) })
    }

    /// Tabulates `f` over every argument tuple of a finite alphabet.
    pub fn tabulate(arity: usize, base: usize, mut f: impl FnMut(&[u32]) -> u32) -> NodeFunction {
        let total = base.pow(arity as u32);
        let mut rows = Vec::with_capacity(total);
        let mut args = vec![0u32; arity];
        for _ in 0..total {
            rows.push(f(&args));
            for k in (0..arity).rev() {
                args[k] += 1;
                if (args[k] as usize) < base {
                    break;
                }
                args[k] = 0;
            }
        }
        NodeFunction::table(arity, base, rows).expect("tabulated function is closed")
    }

    pub fn builtin(arity: usize, b: Builtin) -> NodeFunction {
        NodeFunction { arity, body: Body::Builtin(b) }
    }

    pub fn constant(arity: usize, v: Value) -> NodeFunction {
        Self::builtin(arity, Builtin::Const(v))
    }

    pub fn select(arity: usize, k: usize) -> NodeFunction {
        Self::builtin(arity, Builtin::Select(k))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn as_table(&self) -> Option<&Table> {
        match &self.body {
            Body::Table(t) => Some(t),
            Body::Builtin(_) => None,
        }
    }

    pub fn as_builtin(&self) -> Option<&Builtin> {
        match &self.body {
            Body::Builtin(b) => Some(b),
            Body::Table(_) => None,
        }
    }

    /// Structural problems independent of any system: argument indices in
    /// range, coefficient vectors as long as the arity, positive moduli.
    pub fn check_shape(&self) -> Result<(), String> {
        let n = self.arity;
        let idx = |k: usize, what: &str| {
            if k < n {
                Ok(())
            } else {
                Err(format!("{what} argument {k} out of range for arity {n}"))
            }
        };
        let len = |l: usize| {
            if l == n {
                Ok(())
            } else {
                Err(format!("{l} coefficients for arity {n}"))
            }
        };
        match &self.body {
            Body::Table(t) => {
                if t.rows.len() != t.base.pow(n as u32) {
                    return Err("table size does not match arity".into());
                }
                Ok(())
            }
            Body::Builtin(b) => match b {
                Builtin::Const(_) => Ok(()),
                Builtin::Select(k) => idx(*k, "select"),
                Builtin::Linmod { modulus, coeffs, .. } | Builtin::OffsetLinmod { modulus, coeffs } => {
                    if *modulus < 1 {
                        return Err("modulus must be positive".into());
                    }
                    len(coeffs.len())
                }
                Builtin::Latch { hold, src, .. } => {
                    idx(*hold, "latch hold")?;
                    idx(*src, "latch source")
                }
                Builtin::Affine { coeffs, .. } | Builtin::Sigma { coeffs, .. } => len(coeffs.len()),
                Builtin::Ratio { num, den } => {
                    idx(*num, "ratio numerator")?;
                    idx(*den, "ratio denominator")
                }
            },
        }
    }

    /// Evaluates the function on `args` (length must equal the arity).
    pub fn eval(&self, args: &[Value], alphabet: &Alphabet) -> Result<Value, EvalError> {
        debug_assert_eq!(args.len(), self.arity);
        match &self.body {
            Body::Table(t) => t.lookup(args).map(Value::Sym),
            Body::Builtin(b) => eval_builtin(b, args, alphabet),
        }
    }
}

fn int_arg(alphabet: &Alphabet, args: &[Value], k: usize) -> Result<i64, EvalError> {
    alphabet.int_value(&args[k]).ok_or_else(|| match alphabet.numeric(&args[k]) {
        Some(_) => EvalError::NonInteger(k),
        None => EvalError::NonNumeric(k),
    })
}

fn num_arg(alphabet: &Alphabet, args: &[Value], k: usize) -> Result<Rational, EvalError> {
    alphabet.numeric(&args[k]).ok_or(EvalError::NonNumeric(k))
}

fn back_int(alphabet: &Alphabet, n: i64) -> Result<Value, EvalError> {
    alphabet.from_int(n).ok_or_else(|| EvalError::OutsideAlphabet(n.to_string()))
}

fn back_rational(alphabet: &Alphabet, r: Rational) -> Result<Value, EvalError> {
    let text = format_rational(&r);
    alphabet.from_rational(r).ok_or(EvalError::OutsideAlphabet(text))
}

fn affine(alphabet: &Alphabet, args: &[Value], offset: &Rational, coeffs: &[Rational]) -> Result<Rational, EvalError> {
    let mut acc = offset.clone();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc += c * num_arg(alphabet, args, k)?;
    }
    Ok(acc)
}

fn eval_builtin(b: &Builtin, args: &[Value], alphabet: &Alphabet) -> Result<Value, EvalError> {
    match b {
        Builtin::Const(v) => Ok(v.clone()),
        Builtin::Select(k) => Ok(args[*k].clone()),
        Builtin::Linmod { modulus, offset, coeffs } => {
            let mut acc = *offset as i128;
            for (k, c) in coeffs.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                let a = int_arg(alphabet, args, k)? as i128;
                acc = (acc + (*c as i128) * a).rem_euclid(*modulus as i128);
            }
            back_int(alphabet, acc.rem_euclid(*modulus as i128) as i64)
        }
        Builtin::OffsetLinmod { modulus, coeffs } => {
            let mut acc: i128 = 0;
            for (k, c) in coeffs.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                if alphabet.is_zero(&args[k]) {
                    return Ok(alphabet.zero());
                }
                let a = int_arg(alphabet, args, k)? as i128 - 1;
                acc = (acc + (*c as i128) * a).rem_euclid(*modulus as i128);
            }
            back_int(alphabet, acc as i64 + 1)
        }
        Builtin::Latch { hold, src, offset } => {
            if !alphabet.is_zero(&args[*hold]) {
                return Ok(args[*hold].clone());
            }
            let s = int_arg(alphabet, args, *src)?;
            let r = s.checked_add(*offset).ok_or(EvalError::Overflow)?;
            back_int(alphabet, r)
        }
        Builtin::Affine { offset, coeffs } => {
            let r = affine(alphabet, args, offset, coeffs)?;
            back_rational(alphabet, r)
        }
        Builtin::Sigma { offset, coeffs } => {
            let r = affine(alphabet, args, offset, coeffs)?;
            back_rational(alphabet, sigma(&r))
        }
        Builtin::Ratio { num, den } => {
            let n = num_arg(alphabet, args, *num)?;
            if n.is_zero() {
                return back_rational(alphabet, Rational::zero());
            }
            let d = num_arg(alphabet, args, *den)?;
            if d.is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            back_rational(alphabet, n / d)
        }
    }
}

impl Builtin {
    pub fn id(&self) -> &'static str {
        match self {
            Builtin::Const(_) => "const",
            Builtin::Select(_) => "select",
            Builtin::Linmod { .. } => "linmod",
            Builtin::OffsetLinmod { .. } => "olinmod",
            Builtin::Latch { .. } => "latch",
            Builtin::Affine { .. } => "affine",
            Builtin::Sigma { .. } => "sigma",
            Builtin::Ratio { .. } => "ratio",
        }
    }
}

/// Integer `n mod m` in `[0, m)`.
pub fn modp(n: i64, m: i64) -> i64 {
    n.mod_floor(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sigma_pieces() {
        assert_eq!(sigma(&q(-1, 1)), q(0, 1));
        assert_eq!(sigma(&q(1, 2)), q(1, 2));
        assert_eq!(sigma(&q(2, 1)), q(1, 1));
        assert_eq!(sigma(&q(0, 1)), q(0, 1));
        assert_eq!(sigma(&q(1, 1)), q(1, 1));
    }

    #[test]
    fn tabulate_order() {
        let f = NodeFunction::tabulate(2, 3, |a| (a[0] * 3 + a[1]) % 3);
        assert_eq!(f.as_table().unwrap().rows(), &[0, 1, 2, 0, 1, 2, 0, 1, 2]);
        let a = Alphabet::integers(3);
        assert_eq!(f.eval(&[Value::Sym(2), Value::Sym(1)], &a).unwrap(), Value::Sym(1));
    }

    #[test]
    fn table_rejects_non_total() {
        assert!(NodeFunction::table(2, 2, vec![0, 1, 1]).is_none());
        assert!(NodeFunction::table(1, 2, vec![0, 2]).is_none());
    }

    #[test]
    fn linmod_xor() {
        let a = Alphabet::integers(2);
        let f = NodeFunction::builtin(3, Builtin::Linmod { modulus: 2, offset: 0, coeffs: vec![1, 1, 0] });
        let s = |i| Value::Sym(i);
        assert_eq!(f.eval(&[s(1), s(1), s(1)], &a).unwrap(), s(0));
        assert_eq!(f.eval(&[s(1), s(0), s(0)], &a).unwrap(), s(1));
    }

    #[test]
    fn offset_linmod_gates_on_absent() {
        let a = Alphabet::integers(6);
        let f = NodeFunction::builtin(3, Builtin::OffsetLinmod { modulus: 5, coeffs: vec![1, 2, 0] });
        let s = |i| Value::Sym(i);
        assert_eq!(f.eval(&[s(0), s(3), s(4)], &a).unwrap(), s(0));
        // (2 + 2*4) mod 5 = 0 -> symbol 1
        assert_eq!(f.eval(&[s(3), s(5), s(0)], &a).unwrap(), s(1));
    }

    #[test]
    fn ratio_rules() {
        let a = Alphabet::rational();
        let f = NodeFunction::builtin(2, Builtin::Ratio { num: 0, den: 1 });
        assert_eq!(f.eval(&[Value::int(4), Value::int(2)], &a).unwrap(), Value::int(2));
        assert_eq!(f.eval(&[Value::int(0), Value::int(0)], &a).unwrap(), Value::int(0));
        assert_eq!(f.eval(&[Value::int(4), Value::int(0)], &a), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn outside_alphabet_reported() {
        let a = Alphabet::integers(3);
        let f = NodeFunction::builtin(1, Builtin::Latch { hold: 0, src: 0, offset: 5 });
        assert!(matches!(f.eval(&[Value::Sym(0)], &a), Err(EvalError::OutsideAlphabet(_))));
    }

    #[test]
    fn shape_checks() {
        assert!(NodeFunction::select(2, 2).check_shape().is_err());
        let bad = NodeFunction::builtin(2, Builtin::Affine { offset: q(0, 1), coeffs: vec![q(1, 1)] });
        assert!(bad.check_shape().is_err());
    }
}
