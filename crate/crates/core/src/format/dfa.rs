use std::collections::HashMap;
use std::fmt::Write as _;

use super::{diag, exact_len, header, need, Code, Diagnostic, Pos};
use crate::automata::Dfa;

/// Parses a `dfa v1` document:
///
/// ```text
/// dfa v1
/// letters a b
/// states even odd
/// start even
/// accept even
/// even a odd
/// ...
/// ```
///
/// Every state needs exactly one transition line per letter.
pub fn parse_dfa(text: &str) -> Result<Dfa, Diagnostic> {
    let lines = header(text, "dfa")?;
    let top = Pos { line: 1, col: 1 };
    let mut letters: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut start = None;
    let mut accept = Vec::new();
    let mut moves = Vec::new();
    for line in &lines {
        let key = line.toks[0];
        let rest: Vec<String> = line.toks[1..].iter().map(|t| t.text.to_string()).collect();
        match key.text {
            "letters" => letters = Some(rest),
            "states" => states = Some(rest),
            "start" => {
                exact_len(line, 2)?;
                start = Some(line.toks[1]);
            }
            "accept" => accept.extend(line.toks[1..].iter().copied()),
            _ => {
                exact_len(line, 3)?;
                moves.push(line);
            }
        }
    }
    let letters = letters.ok_or_else(|| diag(Code::Invalid, top, "missing `letters`"))?;
    let states = states.ok_or_else(|| diag(Code::Invalid, top, "missing `states`"))?;
    let sidx: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let lidx: HashMap<&str, usize> = letters.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let state = |t: &super::Tok| {
        sidx.get(t.text).copied().ok_or_else(|| diag(Code::UnknownNode, t.pos, format!("state `{}`", t.text)))
    };
    let start_tok = start.ok_or_else(|| diag(Code::Invalid, top, "missing `start`"))?;
    let start = state(&start_tok)?;
    let mut accepting = vec![false; states.len()];
    for t in &accept {
        accepting[state(t)?] = true;
    }
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; letters.len()]; states.len()];
    for line in moves {
        let from = state(&line.toks[0])?;
        let l = need(line, 1, "letter")?;
        let a = lidx.get(l.text).copied().ok_or_else(|| diag(Code::BadSymbol, l.pos, format!("letter `{}`", l.text)))?;
        let to = state(&line.toks[2])?;
        if delta[from][a].replace(to).is_some() {
            return Err(diag(Code::DuplicateName, line.pos(), "transition given twice"));
        }
    }
    for (q, row) in delta.iter().enumerate() {
        if let Some(a) = row.iter().position(Option::is_none) {
            return Err(diag(Code::NonTotalTable, top, format!("no transition from `{}` on `{}`", states[q], letters[a])));
        }
    }
    let delta = delta.into_iter().map(|r| r.into_iter().map(|q| q.expect("total")).collect()).collect();
    Dfa::new(states, letters, start, delta, accepting).map_err(|e| diag(Code::Invalid, top, e.to_string()))
}

pub fn print_dfa(d: &Dfa) -> String {
    let mut out = String::from("dfa v1\n");
    let _ = writeln!(out, "letters {}", d.letters().join(" "));
    let _ = writeln!(out, "states {}", d.states().join(" "));
    let _ = writeln!(out, "start {}", d.states()[d.start()]);
    let acc: Vec<&str> = (0..d.states().len()).filter(|&q| d.is_accepting(q)).map(|q| d.states()[q].as_str()).collect();
    let _ = writeln!(out, "accept{}", acc.iter().map(|s| format!(" {s}")).collect::<String>());
    for (q, name) in d.states().iter().enumerate() {
        for (a, letter) in d.letters().iter().enumerate() {
            let _ = writeln!(out, "{name} {letter} {}", d.states()[d.next(q, a)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARITY: &str = "dfa v1\nletters a b\nstates even odd\nstart even\naccept even\n\
                          even a odd\neven b even\nodd a even\nodd b odd\n";

    #[test]
    fn parity_roundtrip() {
        let d = parse_dfa(PARITY).unwrap();
        assert!(d.accepts(&[0, 0, 1]));
        assert!(!d.accepts(&[0]));
        assert_eq!(print_dfa(&d), PARITY);
    }

    #[test]
    fn missing_transition() {
        let doc = PARITY.replace("odd b odd\n", "");
        assert_eq!(parse_dfa(&doc).unwrap_err().code, Code::NonTotalTable);
    }
}
