//! Line-oriented text formats: systems (`csys v1`), intervention sets
//! (`zset v1`), hypothesis families (`family v1`) and automata (`dfa v1`).
//!
//! All four share the lexical rules: `#` starts a comment when it begins a
//! token, tokens are separated by whitespace, and blank lines are ignored.
//! Errors are reported as [`Diagnostic`]s with a 1-based line and column.

mod csys;
mod dfa;
mod family;
mod zset;

use std::fmt;

use crate::model::{format_rational, parse_rational, Alphabet, Body, Builtin, NodeFunction, Rational, Value};

pub use csys::{parse_csys, print_csys};
pub use dfa::{parse_dfa, print_dfa};
pub use family::{parse_family, print_family, FamilyDocument};
pub use zset::{parse_zset, print_zset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Code {
    BadHeader,
    UnknownSection,
    Syntax,
    BadSymbol,
    BadNumber,
    DuplicateName,
    UnknownNode,
    DanglingEdge,
    UnknownFunction,
    NonTotalTable,
    ArityMismatch,
    Invalid,
}

impl Code {
    pub fn id(&self) -> &'static str {
        match self {
            Code::BadHeader => "E01",
            Code::UnknownSection => "E02",
            Code::Syntax => "E03",
            Code::BadSymbol => "E04",
            Code::BadNumber => "E05",
            Code::DuplicateName => "E06",
            Code::UnknownNode => "E07",
            Code::DanglingEdge => "E08",
            Code::UnknownFunction => "E09",
            Code::NonTotalTable => "E10",
            Code::ArityMismatch => "E11",
            Code::Invalid => "E12",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Code::BadHeader => "missing or unsupported header",
            Code::UnknownSection => "unknown section",
            Code::Syntax => "syntax error",
            Code::BadSymbol => "symbol not in alphabet",
            Code::BadNumber => "bad number",
            Code::DuplicateName => "duplicate definition",
            Code::UnknownNode => "unknown node",
            Code::DanglingEdge => "dangling edge endpoint",
            Code::UnknownFunction => "unresolved function reference",
            Code::NonTotalTable => "non-total table",
            Code::ArityMismatch => "arity mismatch",
            Code::Invalid => "invalid document",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostic {
    pub code: Code,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: error[{}]: {}", self.line, self.col, self.code.id(), self.code.describe())?;
        if !self.message.is_empty() {
            write!(f, ": {}", self.message)?;
        }
        Ok(())
    }
}

pub(crate) fn diag(code: Code, at: Pos, message: impl Into<String>) -> Diagnostic {
    Diagnostic { code, line: at.line, col: at.col, message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Tok<'a> {
    pub text: &'a str,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub(crate) struct Line<'a> {
    pub indented: bool,
    pub toks: Vec<Tok<'a>>,
}

impl<'a> Line<'a> {
    pub fn pos(&self) -> Pos {
        self.toks[0].pos
    }

    /// Position just past the last token, for "missing operand" errors.
    pub fn end(&self) -> Pos {
        let t = self.toks.last().expect("nonempty line");
        Pos { line: t.pos.line, col: t.pos.col + t.text.chars().count() }
    }
}

pub(crate) fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut toks = Vec::new();
        let mut start: Option<usize> = None;
        let col_of = |b: usize| raw[..b].chars().count() + 1;
        let bytes: Vec<(usize, char)> = raw.char_indices().chain(std::iter::once((raw.len(), ' '))).collect();
        for &(b, c) in &bytes {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    toks.push(Tok { text: &raw[s..b], pos: Pos { line: i + 1, col: col_of(s) } });
                }
            } else if start.is_none() {
                if c == '#' {
                    break;
                }
                start = Some(b);
            }
        }
        if let Some(s) = start {
            toks.push(Tok { text: &raw[s..], pos: Pos { line: i + 1, col: col_of(s) } });
        }
        if !toks.is_empty() {
            out.push(Line { indented: raw.starts_with(char::is_whitespace), toks });
        }
    }
    out
}

/// Checks the `<kind> v1` header line and returns the remaining lines.
pub(crate) fn header<'a>(text: &'a str, kind: &str) -> Result<Vec<Line<'a>>, Diagnostic> {
    let mut lines = lex(text);
    if lines.is_empty() {
        return Err(diag(Code::BadHeader, Pos { line: 1, col: 1 }, format!("expected `{kind} v1`")));
    }
    let first = lines.remove(0);
    let words: Vec<&str> = first.toks.iter().map(|t| t.text).collect();
    if words != [kind, "v1"] {
        return Err(diag(Code::BadHeader, first.pos(), format!("expected `{kind} v1`, found `{}`", words.join(" "))));
    }
    Ok(lines)
}

pub(crate) fn int<T: std::str::FromStr>(t: &Tok) -> Result<T, Diagnostic> {
    t.text.parse().map_err(|_| diag(Code::BadNumber, t.pos, format!("`{}`", t.text)))
}

pub(crate) fn rational(t: &Tok) -> Result<Rational, Diagnostic> {
    parse_rational(t.text).ok_or_else(|| diag(Code::BadNumber, t.pos, format!("`{}` is not a rational", t.text)))
}

pub(crate) fn symbol(alphabet: &Alphabet, t: &Tok) -> Result<Value, Diagnostic> {
    alphabet.parse_symbol(t.text).ok_or_else(|| diag(Code::BadSymbol, t.pos, format!("`{}`", t.text)))
}

pub(crate) fn need<'t, 'a>(line: &'t Line<'a>, k: usize, what: &str) -> Result<&'t Tok<'a>, Diagnostic> {
    line.toks.get(k).ok_or_else(|| diag(Code::Syntax, line.end(), format!("missing {what}")))
}

pub(crate) fn exact_len(line: &Line, n: usize) -> Result<(), Diagnostic> {
    match line.toks.get(n) {
        Some(t) => Err(diag(Code::Syntax, t.pos, format!("unexpected `{}`", t.text))),
        None if line.toks.len() < n => Err(diag(Code::Syntax, line.end(), "missing operand")),
        None => Ok(()),
    }
}

/// Parses an inline function spec (`select 1`, `const 3`, `table 0 1 1 0`,
/// ...) for a function of the given arity.
pub(crate) fn parse_spec(toks: &[Tok], arity: usize, alphabet: &Alphabet, end: Pos) -> Result<NodeFunction, Diagnostic> {
    let Some(kind) = toks.first() else {
        return Err(diag(Code::Syntax, end, "missing function"));
    };
    let args = &toks[1..];
    let count = |n: usize| -> Result<(), Diagnostic> {
        match args.get(n) {
            Some(t) => Err(diag(Code::Syntax, t.pos, format!("unexpected `{}`", t.text))),
            None if args.len() < n => Err(diag(Code::Syntax, end, format!("`{}` needs {n} operands", kind.text))),
            None => Ok(()),
        }
    };
    let coeffs_len = |n: usize| -> Result<(), Diagnostic> {
        if n == arity {
            Ok(())
        } else {
            Err(diag(Code::ArityMismatch, kind.pos, format!("{n} coefficients for arity {arity}")))
        }
    };
    let index = |t: &Tok| -> Result<usize, Diagnostic> {
        let k: usize = int(t)?;
        if k < arity {
            Ok(k)
        } else {
            Err(diag(Code::ArityMismatch, t.pos, format!("argument {k} out of range for arity {arity}")))
        }
    };
    let b = match kind.text {
        "const" => {
            count(1)?;
            Builtin::Const(symbol(alphabet, &args[0])?)
        }
        "select" => {
            count(1)?;
            Builtin::Select(index(&args[0])?)
        }
        "linmod" => {
            if args.len() < 2 {
                return Err(diag(Code::Syntax, end, "`linmod` needs a modulus and an offset"));
            }
            coeffs_len(args.len() - 2)?;
            let modulus: i64 = int(&args[0])?;
            if modulus < 1 {
                return Err(diag(Code::BadNumber, args[0].pos, "modulus must be positive"));
            }
            let coeffs = args[2..].iter().map(int).collect::<Result<_, _>>()?;
            Builtin::Linmod { modulus, offset: int(&args[1])?, coeffs }
        }
        "olinmod" => {
            if args.is_empty() {
                return Err(diag(Code::Syntax, end, "`olinmod` needs a modulus"));
            }
            coeffs_len(args.len() - 1)?;
            let modulus: i64 = int(&args[0])?;
            if modulus < 1 {
                return Err(diag(Code::BadNumber, args[0].pos, "modulus must be positive"));
            }
            Builtin::OffsetLinmod { modulus, coeffs: args[1..].iter().map(int).collect::<Result<_, _>>()? }
        }
        "latch" => {
            count(3)?;
            Builtin::Latch { hold: index(&args[0])?, src: index(&args[1])?, offset: int(&args[2])? }
        }
        "affine" | "sigma" => {
            if args.is_empty() {
                return Err(diag(Code::Syntax, end, format!("`{}` needs an offset", kind.text)));
            }
            coeffs_len(args.len() - 1)?;
            let offset = rational(&args[0])?;
            let coeffs = args[1..].iter().map(rational).collect::<Result<_, _>>()?;
            if kind.text == "affine" {
                Builtin::Affine { offset, coeffs }
            } else {
                Builtin::Sigma { offset, coeffs }
            }
        }
        "ratio" => {
            count(2)?;
            Builtin::Ratio { num: index(&args[0])?, den: index(&args[1])? }
        }
        "table" => {
            let Some(size) = alphabet.size() else {
                return Err(diag(Code::Invalid, kind.pos, "tables need a finite alphabet"));
            };
            let want = size.checked_pow(arity as u32).filter(|&n| n <= 1 << 24);
            let Some(want) = want else {
                return Err(diag(Code::Invalid, kind.pos, "table too large"));
            };
            if args.len() != want {
                return Err(diag(Code::NonTotalTable, kind.pos, format!("{} entries, expected {want}", args.len())));
            }
            let rows = args
                .iter()
                .map(|t| match symbol(alphabet, t)? {
                    Value::Sym(i) => Ok(i),
                    Value::Num(_) => unreachable!("finite alphabets hold symbols"),
                })
                .collect::<Result<Vec<u32>, _>>()?;
            return Ok(NodeFunction::table(arity, size, rows).expect("size checked"));
        }
        other => return Err(diag(Code::Syntax, kind.pos, format!("unknown function kind `{other}`"))),
    };
    Ok(NodeFunction::builtin(arity, b))
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| format!(" {x}")).collect()
}

/// Inline spec text for a function, the inverse of [`parse_spec`].
pub(crate) fn print_spec(f: &NodeFunction, alphabet: &Alphabet) -> String {
    match f.body() {
        Body::Table(t) => {
            let mut s = String::from("table");
            for &r in t.rows() {
                s.push(' ');
                s.push_str(&alphabet.format(&Value::Sym(r)));
            }
            s
        }
        Body::Builtin(b) => print_builtin(b, alphabet),
    }
}

pub(crate) fn print_builtin(b: &Builtin, alphabet: &Alphabet) -> String {
    let rats = |xs: &[Rational]| xs.iter().map(|x| format!(" {}", format_rational(x))).collect::<String>();
    match b {
        Builtin::Const(v) => format!("const {}", alphabet.format(v)),
        Builtin::Select(k) => format!("select {k}"),
        Builtin::Linmod { modulus, offset, coeffs } => format!("linmod {modulus} {offset}{}", join(coeffs)),
        Builtin::OffsetLinmod { modulus, coeffs } => format!("olinmod {modulus}{}", join(coeffs)),
        Builtin::Latch { hold, src, offset } => format!("latch {hold} {src} {offset}"),
        Builtin::Affine { offset, coeffs } => format!("affine {}{}", format_rational(offset), rats(coeffs)),
        Builtin::Sigma { offset, coeffs } => format!("sigma {}{}", format_rational(offset), rats(coeffs)),
        Builtin::Ratio { num, den } => format!("ratio {num} {den}"),
    }
}

/// Splits a command-line input string into symbols: tokens separated by
/// commas or whitespace, or, when there are none and every label of a finite
/// alphabet is one character, the individual characters.
pub fn parse_input(alphabet: &Alphabet, text: &str) -> Result<Vec<Value>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let pieces: Vec<String> = if text.contains(|c: char| c == ',' || c.is_whitespace()) {
        text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::to_string).collect()
    } else if alphabet.as_finite().is_some_and(|f| f.labels().iter().all(|l| l.chars().count() == 1)) {
        text.chars().map(|c| c.to_string()).collect()
    } else {
        vec![text.to_string()]
    };
    pieces
        .iter()
        .map(|p| alphabet.parse_symbol(p).ok_or_else(|| format!("`{p}` is not a symbol of the alphabet")))
        .collect()
}

/// Inverse of [`parse_input`] using the comma form.
pub fn print_input(alphabet: &Alphabet, input: &[Value]) -> String {
    input.iter().map(|v| alphabet.format(v)).collect::<Vec<_>>().join(",")
}
