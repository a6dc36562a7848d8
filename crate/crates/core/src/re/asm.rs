//! Text form of solver programs.
//!
//! ```text
//! solver v1
//! # comment
//! loop:
//!     push 1
//!     jnz loop
//!     halt
//! ```
//!
//! Jump operands may name a label or give an instruction index.

use std::collections::HashMap;

use super::program::{Instr, ProgramError, SolverProgram};

pub const HEADER: &str = "solver v1";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct AsmError {
    pub line: usize,
    pub message: String,
}

fn strip(line: &str) -> &str {
    let cut = line.find(['#', ';']).unwrap_or(line.len());
    line[..cut].trim()
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_asm(text: &str) -> Result<SolverProgram, AsmError> {
    let err = |line: usize, message: String| AsmError { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip(l))).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, h)) if h.split_whitespace().collect::<Vec<_>>() == ["solver", "v1"] => {}
        Some((n, _)) => return Err(err(n, format!("expected header {HEADER:?}"))),
        None => return Err(err(1, "empty program text".into())),
    }

    // first pass: labels and raw instructions
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut raw: Vec<(usize, String, Option<String>)> = Vec::new();
    for (n, mut l) in lines {
        while let Some(colon) = l.find(':') {
            let name = l[..colon].trim();
            if !is_label(name) {
                return Err(err(n, format!("bad label {name:?}")));
            }
            if labels.insert(name.to_string(), raw.len()).is_some() {
                return Err(err(n, format!("duplicate label {name:?}")));
            }
            l = l[colon + 1..].trim();
        }
        if l.is_empty() {
            continue;
        }
        let mut parts = l.split_whitespace();
        let name = parts.next().expect("nonempty").to_ascii_lowercase();
        let operand = parts.next().map(str::to_string);
        if parts.next().is_some() {
            return Err(err(n, "too many operands".into()));
        }
        raw.push((n, name, operand));
    }

    let mut code = Vec::with_capacity(raw.len());
    for (n, name, operand) in raw {
        let value = match operand {
            None => None,
            Some(o) => match o.parse::<i64>() {
                Ok(x) => Some(x),
                Err(_) if is_label(&o) && matches!(name.as_str(), "jmp" | "jz" | "jnz") => Some(
                    *labels.get(&o).ok_or_else(|| err(n, format!("undefined label {o:?}")))? as i64,
                ),
                Err(_) => return Err(err(n, format!("bad operand {o:?}"))),
            },
        };
        code.push(Instr::from_mnemonic(&name, value).map_err(|m| err(n, m))?);
    }
    SolverProgram::new(code).map_err(|e| match e {
        ProgramError::Empty => err(1, "program has no instructions".into()),
        other => err(1, other.to_string()),
    })
}

/// Canonical text: header, then one instruction per line with labels `L<k>`
/// on jump targets.
pub fn print_asm(prog: &SolverProgram) -> String {
    let mut targets: Vec<u64> = prog.code().iter().filter_map(Instr::jump_target).collect();
    targets.sort_unstable();
    targets.dedup();
    let mut out = String::from(HEADER);
    out.push('\n');
    for (i, ins) in prog.code().iter().enumerate() {
        if targets.binary_search(&(i as u64)).is_ok() {
            out.push_str(&format!("L{i}:\n"));
        }
        match ins.jump_target() {
            Some(t) => out.push_str(&format!("    {} L{t}\n", ins.mnemonic())),
            None => out.push_str(&format!("    {ins}\n")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_resolve() {
        let p = parse_asm("solver v1\nstart: push 1 # one\n jnz start\n halt\n").unwrap();
        assert_eq!(p.code(), &[Instr::Push(1), Instr::Jnz(0), Instr::Halt]);
    }

    #[test]
    fn print_parse_roundtrip() {
        let p = parse_asm("solver v1\npush -3\nx: dup\njz x\nnosol\n").unwrap();
        assert_eq!(parse_asm(&print_asm(&p)).unwrap(), p);
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(parse_asm("solver v2\nhalt").unwrap_err().line, 1);
        assert_eq!(parse_asm("solver v1\nhalt\nfrob").unwrap_err().line, 3);
        assert_eq!(parse_asm("solver v1\njmp nowhere").unwrap_err().line, 2);
        assert_eq!(parse_asm("solver v1\npush").unwrap_err().line, 2);
    }
}
