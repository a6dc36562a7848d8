use std::collections::HashMap;
use std::fmt::Write as _;

use super::{diag, exact_len, header, int, need, parse_spec, print_builtin, symbol, Code, Diagnostic, Line, Pos};
use crate::model::{Alphabet, Body, ComputationalSystem, NodeFunction, SystemBuilder, Value};

const SECTIONS: &[&str] = &["alphabet", "functions", "nodes", "edges", "inputs", "outputs"];

struct FnDef {
    arity: usize,
    f: NodeFunction,
}

fn section_name<'a>(line: &Line<'a>) -> Option<&'a str> {
    let t = line.toks[0].text;
    if line.toks.len() == 1 && t.starts_with('[') && t.ends_with(']') && t.len() >= 2 {
        Some(&t[1..t.len() - 1])
    } else {
        None
    }
}

fn parse_alphabet(lines: &[Line], at: Pos) -> Result<Alphabet, Diagnostic> {
    let mut labels: Option<(Vec<&str>, Pos)> = None;
    let mut zero: Option<(&str, Pos)> = None;
    let mut rational = false;
    for line in lines {
        let key = line.toks[0];
        match key.text {
            "rational" => {
                exact_len(line, 1)?;
                rational = true;
            }
            "symbols" => {
                if line.toks.len() < 2 {
                    return Err(diag(Code::Syntax, line.end(), "no symbols listed"));
                }
                labels = Some((line.toks[1..].iter().map(|t| t.text).collect(), key.pos));
            }
            "zero" => {
                exact_len(line, 2)?;
                zero = Some((line.toks[1].text, line.toks[1].pos));
            }
            other => return Err(diag(Code::Syntax, key.pos, format!("unknown alphabet entry `{other}`"))),
        }
    }
    match (rational, labels) {
        (true, None) => {
            if let Some((_, p)) = zero {
                return Err(diag(Code::Syntax, p, "the rational alphabet has a fixed zero"));
            }
            Ok(Alphabet::rational())
        }
        (false, Some((labels, p))) => {
            let (z, zp) = zero.unwrap_or((labels[0], p));
            if !labels.contains(&z) {
                return Err(diag(Code::BadSymbol, zp, format!("zero `{z}` is not listed")));
            }
            Alphabet::finite(&labels, z).map_err(|e| diag(Code::BadSymbol, p, e.to_string()))
        }
        (true, Some((_, p))) => Err(diag(Code::Syntax, p, "alphabet is both rational and finite")),
        (false, None) => Err(diag(Code::Invalid, at, "alphabet has no symbols")),
    }
}

/// Reads indented `a_1 ... a_k : v` rows following a `table` header.
fn parse_rows(rows: &[Line], head: &Line, arity: usize, alphabet: &Alphabet) -> Result<NodeFunction, Diagnostic> {
    let Some(base) = alphabet.size() else {
        return Err(diag(Code::Invalid, head.pos(), "tables need a finite alphabet"));
    };
    let total = base.checked_pow(arity as u32).filter(|&n| n <= 1 << 24);
    let Some(total) = total else {
        return Err(diag(Code::Invalid, head.pos(), "table too large"));
    };
    let mut cells: Vec<Option<u32>> = vec![None; total];
    for row in rows {
        let colon = row.toks.iter().position(|t| t.text == ":");
        let Some(colon) = colon else {
            return Err(diag(Code::Syntax, row.end(), "expected `args : value`"));
        };
        if colon != arity {
            return Err(diag(Code::ArityMismatch, row.pos(), format!("{colon} arguments for arity {arity}")));
        }
        exact_len(row, arity + 2)?;
        let mut idx = 0usize;
        for t in &row.toks[..arity] {
            let Value::Sym(s) = symbol(alphabet, t)? else { unreachable!("finite alphabet") };
            idx = idx * base + s as usize;
        }
        let Value::Sym(v) = symbol(alphabet, &row.toks[arity + 1])? else { unreachable!("finite alphabet") };
        if cells[idx].replace(v).is_some() {
            return Err(diag(Code::DuplicateName, row.pos(), "table row given twice"));
        }
    }
    if let Some(missing) = cells.iter().position(Option::is_none) {
        let mut digits = vec![0u32; arity];
        let mut m = missing;
        for d in digits.iter_mut().rev() {
            *d = (m % base) as u32;
            m /= base;
        }
        let row: Vec<String> = digits.iter().map(|&d| alphabet.format(&Value::Sym(d))).collect();
        return Err(diag(Code::NonTotalTable, head.pos(), format!("no row for `{}`", row.join(" "))));
    }
    let rows = cells.into_iter().map(|c| c.expect("all filled")).collect();
    Ok(NodeFunction::table(arity, base, rows).expect("size checked"))
}

fn parse_functions(lines: &[Line], alphabet: &Alphabet) -> Result<HashMap<String, FnDef>, Diagnostic> {
    let mut defs: HashMap<String, FnDef> = HashMap::new();
    let mut i = 0;
    while i < lines.len() {
        let line = &lines[i];
        i += 1;
        if line.indented && line.toks[0].text != "fn" {
            return Err(diag(Code::Syntax, line.pos(), "table row outside a table"));
        }
        if line.toks[0].text != "fn" {
            return Err(diag(Code::Syntax, line.pos(), "expected `fn NAME ARITY SPEC`"));
        }
        let name = need(line, 1, "function name")?;
        let arity: usize = int(need(line, 2, "arity")?)?;
        if arity == 0 {
            return Err(diag(Code::ArityMismatch, line.toks[2].pos, "arity must be positive"));
        }
        let spec = &line.toks[3..];
        let f = if spec.len() == 1 && spec[0].text == "table" {
            let start = i;
            while i < lines.len() && lines[i].indented && lines[i].toks[0].text != "fn" {
                i += 1;
            }
            parse_rows(&lines[start..i], line, arity, alphabet)?
        } else {
            parse_spec(spec, arity, alphabet, line.end())?
        };
        if defs.insert(name.text.to_string(), FnDef { arity, f }).is_some() {
            return Err(diag(Code::DuplicateName, name.pos, format!("function `{}`", name.text)));
        }
    }
    Ok(defs)
}

/// Parses a `csys v1` document.
///
/// Sections `[alphabet]`, `[functions]`, `[nodes]`, `[edges]`, `[inputs]`
/// and `[outputs]` may appear in any order, each at most once. Node ids
/// follow the order of the `[nodes]` section.
pub fn parse_csys(text: &str) -> Result<ComputationalSystem, Diagnostic> {
    let lines = header(text, "csys")?;
    let top = Pos { line: 1, col: 1 };
    let mut sections: HashMap<&str, (Pos, Vec<Line>)> = HashMap::new();
    let mut current: Option<&str> = None;
    for line in lines {
        if let Some(name) = section_name(&line) {
            if !SECTIONS.contains(&name) {
                return Err(diag(Code::UnknownSection, line.pos(), format!("`[{name}]`")));
            }
            if sections.insert(name, (line.pos(), Vec::new())).is_some() {
                return Err(diag(Code::DuplicateName, line.pos(), format!("section `[{name}]`")));
            }
            current = Some(name);
            continue;
        }
        match current {
            Some(s) => sections.get_mut(s).expect("opened").1.push(line),
            None => return Err(diag(Code::Syntax, line.pos(), "expected a section header")),
        }
    }
    let empty = (top, Vec::new());
    let sec = |name: &str| sections.get(name).unwrap_or(&empty);

    let Some((apos, alines)) = sections.get("alphabet") else {
        return Err(diag(Code::Invalid, top, "missing `[alphabet]` section"));
    };
    let alphabet = parse_alphabet(alines, *apos)?;
    let defs = parse_functions(&sec("functions").1, &alphabet)?;

    let mut b = SystemBuilder::new(alphabet.clone());
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut node_fn: Vec<(&FnDef, Pos)> = Vec::new();
    for line in &sec("nodes").1 {
        let name = line.toks[0];
        if name.text.starts_with('[') {
            return Err(diag(Code::Syntax, name.pos, "node names cannot start with `[`"));
        }
        let init = symbol(&alphabet, need(line, 1, "initial symbol")?)?;
        let fref = need(line, 2, "function reference")?;
        let def = defs
            .get(fref.text)
            .ok_or_else(|| diag(Code::UnknownFunction, fref.pos, format!("`{}`", fref.text)))?;
        if ids.contains_key(name.text) {
            return Err(diag(Code::DuplicateName, name.pos, format!("node `{}`", name.text)));
        }
        let v = b.node_with_init(name.text, init);
        ids.insert(name.text, v);
        node_fn.push((def, name.pos));
        match line.toks.get(3) {
            None => {}
            Some(t) if t.text == "@" => {
                exact_len(line, 6)?;
                b.set_coord(v, int(&line.toks[4])?, int(&line.toks[5])?);
            }
            Some(t) => return Err(diag(Code::Syntax, t.pos, format!("unexpected `{}`", t.text))),
        }
    }
    let node = |t: &super::Tok, code: Code| -> Result<usize, Diagnostic> {
        ids.get(t.text).copied().ok_or_else(|| diag(code, t.pos, format!("`{}`", t.text)))
    };
    let mut seen_edges = std::collections::HashSet::new();
    for line in &sec("edges").1 {
        exact_len(line, 2)?;
        let (s, d) = (node(&line.toks[0], Code::DanglingEdge)?, node(&line.toks[1], Code::DanglingEdge)?);
        if !seen_edges.insert((s, d)) {
            return Err(diag(Code::DuplicateName, line.pos(), "edge given twice"));
        }
        b.edge(s, d);
    }
    let mut seen_inputs = std::collections::HashSet::new();
    for line in &sec("inputs").1 {
        exact_len(line, 4)?;
        let v = node(&line.toks[1], Code::UnknownNode)?;
        let (x, y): (usize, usize) = (int(&line.toks[2])?, int(&line.toks[3])?);
        match line.toks[0].text {
            "at" => {
                if !seen_inputs.insert((v, x)) {
                    return Err(diag(Code::DuplicateName, line.pos(), "two inputs for one node and time"));
                }
                b.input_at(v, x as u64, y);
            }
            "stream" => {
                if y == 0 {
                    return Err(diag(Code::BadNumber, line.toks[3].pos, "stride must be positive"));
                }
                b.stream(v, x, y);
            }
            other => return Err(diag(Code::Syntax, line.pos(), format!("expected `at` or `stream`, found `{other}`"))),
        }
    }
    for line in &sec("outputs").1 {
        for t in &line.toks {
            let v = node(t, Code::UnknownNode)?;
            b.output(v);
        }
    }
    for (v, (def, pos)) in node_fn.iter().enumerate() {
        let want = b.arity(v);
        if def.arity != want {
            return Err(diag(
                Code::ArityMismatch,
                *pos,
                format!("node has {want} arguments, function takes {}", def.arity),
            ));
        }
        b.function(v, def.f.clone());
    }
    b.build().map_err(|e| diag(Code::Invalid, top, e.to_string()))
}

/// Canonical `csys v1` text: sections in a fixed order, identical functions
/// shared under names `f0, f1, ...` in order of first use, tables as rows.
pub fn print_csys(sys: &ComputationalSystem) -> String {
    let a = sys.alphabet();
    let mut out = String::from("csys v1\n\n[alphabet]\n");
    match a.as_finite() {
        Some(f) => {
            let _ = writeln!(out, "symbols {}", f.labels().join(" "));
            let _ = writeln!(out, "zero {}", a.format(&a.zero()));
        }
        None => out.push_str("rational\n"),
    }
    let mut names: HashMap<&NodeFunction, usize> = HashMap::new();
    let mut order: Vec<&NodeFunction> = Vec::new();
    for v in 0..sys.len() {
        let f = sys.function(v);
        names.entry(f).or_insert_with(|| {
            order.push(f);
            order.len() - 1
        });
    }
    out.push_str("\n[functions]\n");
    for (k, f) in order.iter().enumerate() {
        match f.body() {
            Body::Builtin(b) => {
                let _ = writeln!(out, "fn f{k} {} {}", f.arity(), print_builtin(b, a));
            }
            Body::Table(t) => {
                let _ = writeln!(out, "fn f{k} {} table", f.arity());
                let base = t.base();
                for (idx, &val) in t.rows().iter().enumerate() {
                    let mut digits = vec![0u32; f.arity()];
                    let mut m = idx;
                    for d in digits.iter_mut().rev() {
                        *d = (m % base) as u32;
                        m /= base;
                    }
                    out.push(' ');
                    for d in digits {
                        out.push(' ');
                        out.push_str(&a.format(&Value::Sym(d)));
                    }
                    let _ = writeln!(out, " : {}", a.format(&Value::Sym(val)));
                }
            }
        }
    }
    out.push_str("\n[nodes]\n");
    for v in 0..sys.len() {
        let _ = write!(out, "{} {} f{}", sys.name(v), a.format(&sys.initial()[v]), names[sys.function(v)]);
        if let Some((x, y)) = sys.coord(v) {
            let _ = write!(out, " @ {x} {y}");
        }
        out.push('\n');
    }
    out.push_str("\n[edges]\n");
    for &(s, d) in sys.edges() {
        let _ = writeln!(out, "{} {}", sys.name(s), sys.name(d));
    }
    out.push_str("\n[inputs]\n");
    for e in sys.schedule().entries() {
        let _ = writeln!(out, "at {} {} {}", sys.name(e.node), e.time, e.pos);
    }
    for s in sys.schedule().streams() {
        let _ = writeln!(out, "stream {} {} {}", sys.name(s.node), s.offset, s.stride);
    }
    out.push_str("\n[outputs]\n");
    for &o in sys.outputs() {
        let _ = writeln!(out, "{}", sys.name(o));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "csys v1\n[alphabet]\nsymbols 0 1\n[functions]\nfn relay 2 select 1\n\
                           [nodes]\nx 0 relay\n[inputs]\nat x 0 0\n[outputs]\nx\n";

    #[test]
    fn minimal_document() {
        let sys = parse_csys(MINIMAL).unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(sys.outputs(), &[0]);
        assert_eq!(parse_csys(&print_csys(&sys)).unwrap(), sys);
    }

    #[test]
    fn table_rows() {
        let doc = "csys v1\n[alphabet]\nsymbols 0 1\n[functions]\nfn t 1 table\n  0 : 1\n  1 : 0\n\
                   [nodes]\nx 0 t\n[outputs]\nx\n";
        let sys = parse_csys(doc).unwrap();
        assert_eq!(sys.function(0).as_table().unwrap().rows(), &[1, 0]);
        assert_eq!(print_csys(&parse_csys(&print_csys(&sys)).unwrap()), print_csys(&sys));
    }

    fn code_at(doc: &str) -> (Code, usize, usize) {
        let d = parse_csys(doc).unwrap_err();
        (d.code, d.line, d.col)
    }

    #[test]
    fn diagnostics() {
        let dangling = MINIMAL.replace("[inputs]", "[edges]\nx ghost\n[inputs]");
        assert_eq!(code_at(&dangling), (Code::DanglingEdge, 9, 3));
        assert_eq!(code_at(&MINIMAL.replace("[outputs]", "[extras]")).0, Code::UnknownSection);
        assert_eq!(code_at(&MINIMAL.replace("fn relay 2 select 1", "fn relay 1 select 0")).0, Code::ArityMismatch);
        let partial = MINIMAL.replace("fn relay 2 select 1", "fn relay 2 table\n  0 0 : 0\n  0 1 : 1");
        assert_eq!(code_at(&partial), (Code::NonTotalTable, 5, 1));
        assert_eq!(code_at(&MINIMAL.replace("x 0 relay", "x 0 nope")).0, Code::UnknownFunction);
        assert_eq!(code_at(&MINIMAL.replace("csys v1", "csys v2")).0, Code::BadHeader);
        assert_eq!(code_at(&MINIMAL.replace("x 0 relay", "x 7 relay")).0, Code::BadSymbol);
    }
}
