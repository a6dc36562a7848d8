use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{diag, exact_len, header, int, need, parse_spec, print_spec, rational, symbol, Code, Diagnostic, Line, Pos, Tok};
use crate::model::{format_rational, io_map, ComputationalSystem, NodeFunction, NodeId};
use crate::oracle::CandidateSpace;
use crate::re::{Bounds, ClassKey, HypothesisFamily, IOClass, PatternCell};

/// A parsed family, plus the bounds line if the document has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDocument {
    pub family: HypothesisFamily,
    pub bounds: Option<Bounds>,
}

enum Pending {
    Affected { exactly: bool, nodes: BTreeSet<NodeId> },
    Ready(IOClass),
}

fn node_list(sys: &ComputationalSystem, toks: &[Tok]) -> Result<Vec<NodeId>, Diagnostic> {
    toks.iter()
        .map(|t| sys.node_by_name(t.text).ok_or_else(|| diag(Code::UnknownNode, t.pos, format!("`{}`", t.text))))
        .collect()
}

fn parse_class(sys: &ComputationalSystem, line: &Line) -> Result<(ClassKey, Pending), Diagnostic> {
    let colon = line
        .toks
        .iter()
        .position(|t| t.text == ":")
        .ok_or_else(|| diag(Code::Syntax, line.end(), "expected `class KEY... : KIND ...`"))?;
    let key = ClassKey(line.toks[1..colon].iter().map(int).collect::<Result<_, _>>()?);
    let kind = need(line, colon + 1, "class kind")?;
    let rest = &line.toks[colon + 2..];
    let pending = match kind.text {
        "exactly" | "subset" => {
            Pending::Affected { exactly: kind.text == "exactly", nodes: node_list(sys, rest)?.into_iter().collect() }
        }
        "scaled" => {
            if rest.len() < 2 {
                return Err(diag(Code::Syntax, line.end(), "expected `scaled FACTOR POS NODE...`"));
            }
            Pending::Ready(IOClass::Scaled {
                factor: rational(&rest[0])?,
                source_pos: int(&rest[1])?,
                nodes: node_list(sys, &rest[2..])?,
            })
        }
        "cells" => {
            let mut cells = Vec::new();
            for group in rest.split(|t| t.text == ",") {
                if group.len() != 3 {
                    let at = group.first().map_or(line.end(), |t| t.pos);
                    return Err(diag(Code::Syntax, at, "expected `PROBE NODE VALUE`"));
                }
                let node = node_list(sys, &group[1..2])?[0];
                let value = if group[2].text == "." { None } else { Some(symbol(sys.alphabet(), &group[2])?) };
                cells.push(PatternCell { probe: int(&group[0])?, node, value });
            }
            Pending::Ready(IOClass::Exact(cells))
        }
        other => return Err(diag(Code::Syntax, kind.pos, format!("unknown class kind `{other}`"))),
    };
    Ok((key, pending))
}

/// Parses a `family v1` document against the system it describes.
///
/// `exactly` and `subset` classes compare against the I/O relation of the
/// unintervened system on the family's probes.
pub fn parse_family(text: &str, sys: &ComputationalSystem) -> Result<FamilyDocument, Diagnostic> {
    let lines = header(text, "family")?;
    let top = Pos { line: 1, col: 1 };
    let mut horizon: Option<u64> = None;
    let mut probes = Vec::new();
    let mut nodes: Option<Vec<NodeId>> = None;
    let mut times = 0..0;
    let mut bounds = None;
    let mut catalog_lines = Vec::new();
    let mut classes = Vec::new();
    let mut keys = BTreeSet::new();
    for line in &lines {
        let key = line.toks[0];
        match key.text {
            "horizon" => {
                exact_len(line, 2)?;
                horizon = Some(int(&line.toks[1])?);
            }
            "probe" => probes.push(
                line.toks[1..].iter().map(|t| symbol(sys.alphabet(), t)).collect::<Result<Vec<_>, _>>()?,
            ),
            "nodes" => {
                if nodes.is_some() {
                    return Err(diag(Code::DuplicateName, key.pos, "second `nodes` line"));
                }
                nodes = Some(if line.toks.len() == 2 && line.toks[1].text == "*" {
                    (0..sys.len()).collect()
                } else {
                    node_list(sys, &line.toks[1..])?
                });
            }
            "times" => {
                exact_len(line, 3)?;
                times = int(&line.toks[1])?..int(&line.toks[2])?;
            }
            "bounds" => {
                exact_len(line, 4)?;
                bounds = Some(Bounds { l: int(&line.toks[1])?, m: int(&line.toks[2])?, q: int(&line.toks[3])? });
            }
            "catalog" => catalog_lines.push(line),
            "class" => {
                let (k, pending) = parse_class(sys, line)?;
                if !keys.insert(k.clone()) {
                    return Err(diag(Code::DuplicateName, key.pos, format!("class {k}")));
                }
                classes.push((k, pending));
            }
            other => return Err(diag(Code::Syntax, key.pos, format!("unknown entry `{other}`"))),
        }
    }
    let horizon = horizon.ok_or_else(|| diag(Code::Invalid, top, "missing `horizon`"))?;
    let nodes = nodes.unwrap_or_else(|| (0..sys.len()).collect());

    let mut catalog: BTreeMap<NodeId, Vec<NodeFunction>> = BTreeMap::new();
    for line in catalog_lines {
        let target = need(line, 1, "node or `*`")?;
        let which = if target.text == "*" { nodes.clone() } else { node_list(sys, std::slice::from_ref(target))? };
        let spec = &line.toks[2..];
        for v in which {
            let arity = sys.arity(v);
            let fs: Vec<NodeFunction> = match spec.first().map(|t| t.text) {
                Some("relays") if spec.len() == 1 => {
                    sys.in_neighbors(v).iter().map(|&u| NodeFunction::select(arity, sys.arg_index(v, u).expect("neighbour"))).collect()
                }
                Some("consts") if spec.len() == 1 => {
                    if !sys.alphabet().is_finite() {
                        return Err(diag(Code::Invalid, spec[0].pos, "`consts` needs a finite alphabet"));
                    }
                    sys.alphabet().symbols().into_iter().map(|s| NodeFunction::constant(arity, s)).collect()
                }
                _ => vec![parse_spec(spec, arity, sys.alphabet(), line.end())?],
            };
            let entry = catalog.entry(v).or_default();
            for f in fs {
                if entry.contains(&f) {
                    return Err(diag(Code::DuplicateName, line.pos(), format!("repeated catalog entry for `{}`", sys.name(v))));
                }
                entry.push(f);
            }
        }
    }
    let space = CandidateSpace::new(nodes, times, catalog);

    let err = |e: String| diag(Code::Invalid, top, e);
    let needs_base = classes.iter().any(|(_, p)| matches!(p, Pending::Affected { .. }));
    let base = if needs_base { Some(io_map(sys, &probes, horizon).map_err(|e| err(e.to_string()))?) } else { None };
    let classes = classes
        .into_iter()
        .map(|(k, p)| {
            let c = match p {
                Pending::Ready(c) => c,
                Pending::Affected { exactly, nodes } => {
                    let base = base.clone().expect("computed");
                    if exactly {
                        IOClass::AffectedExactly { base, nodes }
                    } else {
                        IOClass::AffectedSubset { base, nodes }
                    }
                }
            };
            (k, c)
        })
        .collect();
    let family = HypothesisFamily::new(probes, horizon, space, classes).map_err(|e| err(e.to_string()))?;
    Ok(FamilyDocument { family, bounds })
}

fn names(sys: &ComputationalSystem, nodes: impl IntoIterator<Item = NodeId>) -> String {
    nodes.into_iter().map(|v| format!(" {}", sys.name(v))).collect()
}

/// Canonical `family v1` text. Catalogs shared by every eligible node are
/// written once under `*`.
pub fn print_family(fam: &HypothesisFamily, sys: &ComputationalSystem, bounds: Option<&Bounds>) -> String {
    let a = sys.alphabet();
    let mut out = String::from("family v1\n");
    let _ = writeln!(out, "horizon {}", fam.horizon);
    for p in &fam.probes {
        out.push_str("probe");
        for s in p {
            out.push(' ');
            out.push_str(&a.format(s));
        }
        out.push('\n');
    }
    let space = &fam.space;
    if space.nodes().len() == sys.len() {
        out.push_str("nodes *\n");
    } else {
        let _ = writeln!(out, "nodes{}", names(sys, space.nodes().iter().copied()));
    }
    let _ = writeln!(out, "times {} {}", space.times().start, space.times().end);
    let texts: Vec<Vec<String>> =
        space.nodes().iter().map(|&v| space.catalog(v).iter().map(|f| print_spec(f, a)).collect()).collect();
    if !texts.is_empty() && texts.iter().all(|t| *t == texts[0]) {
        for t in &texts[0] {
            let _ = writeln!(out, "catalog * {t}");
        }
    } else {
        for (&v, ts) in space.nodes().iter().zip(&texts) {
            for t in ts {
                let _ = writeln!(out, "catalog {} {t}", sys.name(v));
            }
        }
    }
    for (key, class) in fam.classes() {
        out.push_str("class");
        for k in &key.0 {
            let _ = write!(out, " {k}");
        }
        out.push_str(" : ");
        match class {
            IOClass::AffectedExactly { nodes, .. } => {
                let _ = write!(out, "exactly{}", names(sys, nodes.iter().copied()));
            }
            IOClass::AffectedSubset { nodes, .. } => {
                let _ = write!(out, "subset{}", names(sys, nodes.iter().copied()));
            }
            IOClass::Scaled { factor, source_pos, nodes } => {
                let _ = write!(out, "scaled {} {source_pos}{}", format_rational(factor), names(sys, nodes.iter().copied()));
            }
            IOClass::Exact(cells) => {
                out.push_str("cells");
                for (i, c) in cells.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" ,");
                    }
                    let v = c.value.as_ref().map_or(".".to_string(), |v| a.format(v));
                    let _ = write!(out, " {} {} {v}", c.probe, sys.name(c.node));
                }
            }
        }
        out.push('\n');
    }
    if let Some(b) = bounds {
        let _ = writeln!(out, "bounds {} {} {}", b.l, b.m, b.q);
    }
    out
}
