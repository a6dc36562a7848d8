use std::fmt::Write as _;

use super::{diag, header, int, need, parse_spec, print_spec, Code, Diagnostic};
use crate::intervention::{Intervention, InterventionSet};
use crate::model::ComputationalSystem;

/// Parses a `zset v1` document: one `NODE TIME SPEC...` line per
/// intervention, with the replacement's arity taken from the node.
pub fn parse_zset(text: &str, sys: &ComputationalSystem) -> Result<InterventionSet, Diagnostic> {
    let mut items = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for line in header(text, "zset")? {
        let name = line.toks[0];
        let node = sys
            .node_by_name(name.text)
            .ok_or_else(|| diag(Code::UnknownNode, name.pos, format!("`{}`", name.text)))?;
        let time: u64 = int(need(&line, 1, "time")?)?;
        if seen.insert((node, time), ()).is_some() {
            return Err(diag(Code::DuplicateName, line.pos(), "two interventions at one node and time"));
        }
        let f = parse_spec(&line.toks[2..], sys.arity(node), sys.alphabet(), line.end())?;
        sys.check_replacement(node, &f).map_err(|e| diag(Code::Invalid, line.toks[2].pos, e.to_string()))?;
        items.push(Intervention { node, time, replacement: f });
    }
    Ok(InterventionSet::new(items).expect("duplicates rejected above"))
}

pub fn print_zset(zs: &InterventionSet, sys: &ComputationalSystem) -> String {
    let mut out = String::from("zset v1\n");
    for z in zs.items() {
        let _ = writeln!(out, "{} {} {}", sys.name(z.node), z.time, print_spec(&z.replacement, sys.alphabet()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exemplars::butterfly::build_butterfly;

    #[test]
    fn roundtrip_and_errors() {
        let sys = build_butterfly();
        let zs = parse_zset("zset v1\nm 1 const 0\ns1 1 const 3 # freeze\n", &sys).unwrap();
        assert_eq!(zs.len(), 2);
        assert_eq!(zs.items()[0].node, 0);
        assert_eq!(parse_zset(&print_zset(&zs, &sys), &sys).unwrap(), zs);
        assert_eq!(parse_zset("zset v1\nq 1 const 0\n", &sys).unwrap_err().code, Code::UnknownNode);
        assert_eq!(parse_zset("zset v1\nm 1 select 3\n", &sys).unwrap_err().code, Code::ArityMismatch);
        assert_eq!(parse_zset("zset v1\nm 1 const 0\nm 1 const 1\n", &sys).unwrap_err().code, Code::DuplicateName);
    }
}
