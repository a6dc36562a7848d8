//! Command-line front end.
//!
//! Machine-readable results go to stdout, diagnostics to stderr. Exit codes:
//! `0` success, `1` negative verdict or no solution, `2` usage, parse or
//! runtime error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand};

use crate::automata::{accept_equiv, cs_to_dfa, dfa_to_cs, EquivVerdict, LetterSet};
use crate::exemplars::{self, Instance};
use crate::format::{
    parse_csys, parse_dfa, parse_family, parse_input, parse_zset, print_csys, print_dfa, print_family, print_input,
    print_zset,
};
use crate::intervention::{affected_nodes, apply, diff_io, InterventionSet};
use crate::model::{default_horizon, io_map, run, trace, ComputationalSystem, Status};
use crate::oracle::{family_minima, node_ever_active, SearchConfig, DEFAULT_CAP};
use crate::re::{
    parse_asm, print_asm, run_solver, Bounds, ClassKey, HypothesisFamily, OracleBudget, RunConfig, SolverOutcome,
    SolverProgram, VerifyConfig, DEFAULT_FUEL,
};

#[derive(Parser, Debug)]
#[command(name = "csys", version, about = "Computational systems, interventions and reverse engineering")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// A system is read from a file, from stdin (`-`, the default) or built from
/// an exemplar name such as `butterfly` or `line4`.
#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a system on one or more inputs and print its outputs.
    Simulate {
        #[arg(default_value = "-")]
        system: String,
        #[arg(long, required = true)]
        input: Vec<String>,
        #[arg(long)]
        horizon: Option<u64>,
        /// Print every stored state instead of the outputs.
        #[arg(long)]
        trace: bool,
    },
    /// Apply an intervention set and report where the I/O relation changes.
    Intervene {
        system: String,
        #[arg(long)]
        zset: String,
        #[arg(long, required = true)]
        input: Vec<String>,
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Convert a DFA into a computational system.
    Dfa2cs {
        #[arg(default_value = "-")]
        dfa: String,
    },
    /// Extract the DFA of a system's global state graph.
    Cs2dfa {
        #[arg(default_value = "-")]
        system: String,
        /// Only letters that feed every receiving node the same symbol.
        #[arg(long)]
        uniform: bool,
    },
    /// Compare a DFA with a system on all words up to a length.
    Equiv {
        dfa: String,
        system: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Brute-force minimum intervention sets for a family.
    Brute {
        system: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "key", num_args = 1.., allow_negative_numbers = true)]
        key: Option<Vec<i64>>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Run a solver program on family classes.
    Solve {
        /// Exemplar name or system file.
        system: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long = "key", num_args = 1.., allow_negative_numbers = true)]
        key: Option<Vec<i64>>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long = "Q")]
        q: Option<u64>,
    },
    /// Check a solver against brute-force ground truth.
    Verify {
        #[arg(long)]
        system: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        solver: Option<String>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long = "M")]
        m: Option<u64>,
        #[arg(long = "Q")]
        q: Option<u64>,
        /// Also print one evidence line per class.
        #[arg(long)]
        evidence: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Print a shipped exemplar as a document.
    Exemplar {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// Print the family document instead of the system.
        #[arg(long, conflicts_with = "solver")]
        family: bool,
        /// Print the solver assembly instead of the system.
        #[arg(long)]
        solver: bool,
        #[arg(long)]
        list: bool,
    },
    /// Print the canonical encoding of a solver program.
    Encode {
        solver: String,
    },
    /// Decide whether a node can ever store a nonzero symbol.
    Active {
        system: String,
        #[arg(long)]
        node: String,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        horizon: Option<u64>,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

type CmdResult = Result<i32, String>;

fn read_source(io: &mut Io, path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io.stdin.read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_system(io: &mut Io, arg: &str) -> Result<(ComputationalSystem, Option<Instance>), String> {
    if arg != "-" && !Path::new(arg).exists() {
        if let Ok(inst) = exemplars::named(arg) {
            return Ok((inst.system.clone(), Some(inst)));
        }
    }
    let text = read_source(io, arg)?;
    let sys = parse_csys(&text).map_err(|d| format!("{arg}:{d}"))?;
    Ok((sys, None))
}

const SHIPPED_SOLVERS: &[(&str, &str)] = &[
    ("line.solver", exemplars::line::SOLVER_TEXT),
    ("butterfly.solver", exemplars::butterfly::SOLVER_TEXT),
    ("fft.solver", exemplars::fft::SOLVER_TEXT),
    ("reward_difference.solver", exemplars::reward::DIFFERENCE_SOLVER_TEXT),
    ("reward_ratio.solver", exemplars::reward::RATIO_SOLVER_TEXT),
];

/// Reads a solver from assembly, falling back to the shipped solver of the
/// same file name when no such file exists.
fn load_solver(io: &mut Io, arg: &str) -> Result<SolverProgram, String> {
    let text = if arg != "-" && !Path::new(arg).exists() {
        let name = Path::new(arg).file_name().and_then(|s| s.to_str()).unwrap_or(arg);
        match SHIPPED_SOLVERS.iter().find(|(n, _)| *n == name) {
            Some((_, t)) => t.to_string(),
            None => return Err(format!("{arg}: no such file")),
        }
    } else {
        read_source(io, arg)?
    };
    parse_asm(&text).map_err(|e| format!("{arg}:{e}"))
}

fn load_family(
    io: &mut Io,
    arg: Option<&str>,
    sys: &ComputationalSystem,
    inst: Option<&Instance>,
) -> Result<(HypothesisFamily, Option<Bounds>), String> {
    match (arg, inst) {
        (Some(path), _) => {
            let text = read_source(io, path)?;
            let doc = parse_family(&text, sys).map_err(|d| format!("{path}:{d}"))?;
            Ok((doc.family, doc.bounds))
        }
        (None, Some(inst)) => Ok((inst.family.clone(), Some(inst.bounds.clone()))),
        (None, None) => Err("a family file is needed for systems that are not exemplars".into()),
    }
}

fn keys_to_run(fam: &HypothesisFamily, key: Option<Vec<i64>>) -> Result<Vec<ClassKey>, String> {
    match key {
        None => Ok(fam.keys().cloned().collect()),
        Some(k) => {
            let k = ClassKey(k);
            if fam.class(&k).is_none() {
                return Err(format!("class {k} is not in the family"));
            }
            Ok(vec![k])
        }
    }
}

fn inputs(sys: &ComputationalSystem, raw: &[String]) -> Result<Vec<Vec<crate::model::Value>>, String> {
    raw.iter().map(|s| parse_input(sys.alphabet(), s)).collect()
}

// A reader that stops early (`| head`) is not an error.
const OUTPUT_CLOSED: &str = "output closed";

/// `KEY WORD`, or just `KEY` for the empty word.
fn word_line(key: &str, alphabet: &crate::model::Alphabet, w: &[crate::model::Value]) -> String {
    if w.is_empty() {
        key.to_string()
    } else {
        format!("{key} {}", print_input(alphabet, w))
    }
}

fn write_set(out: &mut dyn Write, sys: &ComputationalSystem, zs: &InterventionSet) -> std::io::Result<()> {
    let text = print_zset(zs, sys);
    for line in text.lines().skip(1) {
        writeln!(out, "  {line}")?;
    }
    Ok(())
}

fn dispatch(cmd: Cmd, io: &mut Io) -> CmdResult {
    let e = |x: std::io::Error| {
        if x.kind() == std::io::ErrorKind::BrokenPipe {
            OUTPUT_CLOSED.to_string()
        } else {
            x.to_string()
        }
    };
    match cmd {
        Cmd::Simulate { system, input, horizon, trace: want_trace } => {
            let (sys, _) = load_system(io, &system)?;
            let a = sys.alphabet();
            for (raw, w) in input.iter().zip(inputs(&sys, &input)?) {
                let h = horizon.unwrap_or_else(|| default_horizon(&sys, w.len()));
                writeln!(io.out, "{}", word_line("input", a, &w)).map_err(e)?;
                if want_trace {
                    let states = trace(&sys, &w, h).map_err(|x| format!("input {raw}: {x}"))?;
                    for st in states {
                        let vals: Vec<String> = st.stored.iter().map(|v| a.format(v)).collect();
                        writeln!(io.out, "time {} {}", st.time, vals.join(" ")).map_err(e)?;
                    }
                } else {
                    let res = run(&sys, &w, h).map_err(|x| format!("input {raw}: {x}"))?;
                    for (k, &v) in res.nodes.iter().enumerate() {
                        let val = res.values[k].as_ref().map_or(".".to_string(), |x| a.format(x));
                        writeln!(io.out, "{} = {val}", sys.name(v)).map_err(e)?;
                    }
                    let status = if res.status() == Status::Complete { "complete" } else { "timeout" };
                    writeln!(io.out, "status {status}").map_err(e)?;
                }
            }
            Ok(0)
        }
        Cmd::Intervene { system, zset, input, horizon } => {
            let (sys, _) = load_system(io, &system)?;
            let text = read_source(io, &zset)?;
            let zs = parse_zset(&text, &sys).map_err(|d| format!("{zset}:{d}"))?;
            let probes = inputs(&sys, &input)?;
            let h = horizon.unwrap_or_else(|| probes.iter().map(|p| default_horizon(&sys, p.len())).max().unwrap_or(1));
            let before = io_map(&sys, &probes, h).map_err(|x| x.to_string())?;
            let hyp = apply(&sys, &zs).map_err(|x| x.to_string())?;
            let after = io_map(&hyp, &probes, h).map_err(|x| x.to_string())?;
            let diff = diff_io(&before, &after).map_err(|x| x.to_string())?;
            let a = sys.alphabet();
            let fmt = |v: &Option<crate::model::Value>| v.as_ref().map_or(".".to_string(), |x| a.format(x));
            for d in &diff {
                writeln!(
                    io.out,
                    "diff {} {} {} {}",
                    print_input(a, &d.probe),
                    sys.name(d.node),
                    fmt(&d.before),
                    fmt(&d.after)
                )
                .map_err(e)?;
            }
            let names: Vec<&str> = affected_nodes(&diff).into_iter().map(|v| sys.name(v)).collect();
            writeln!(io.out, "affected{}", names.iter().map(|n| format!(" {n}")).collect::<String>()).map_err(e)?;
            Ok(0)
        }
        Cmd::Dfa2cs { dfa } => {
            let text = read_source(io, &dfa)?;
            let d = parse_dfa(&text).map_err(|x| format!("{dfa}:{x}"))?;
            let sys = dfa_to_cs(&d).map_err(|x| x.to_string())?;
            io.out.write_all(print_csys(&sys).as_bytes()).map_err(e)?;
            Ok(0)
        }
        Cmd::Cs2dfa { system, uniform } => {
            let (sys, _) = load_system(io, &system)?;
            let d = cs_to_dfa(&sys, if uniform { LetterSet::Uniform } else { LetterSet::All }).map_err(|x| x.to_string())?;
            io.out.write_all(print_dfa(&d).as_bytes()).map_err(e)?;
            Ok(0)
        }
        Cmd::Equiv { dfa, system, max_len } => {
            let text = read_source(io, &dfa)?;
            let d = parse_dfa(&text).map_err(|x| format!("{dfa}:{x}"))?;
            let (sys, _) = load_system(io, &system)?;
            match accept_equiv(&d, &sys, max_len).map_err(|x| x.to_string())? {
                EquivVerdict::Equivalent => {
                    writeln!(io.out, "Equivalent").map_err(e)?;
                    Ok(0)
                }
                EquivVerdict::Counterexample(w) => {
                    let word: Vec<&str> = w.iter().map(|&k| d.letters()[k].as_str()).collect();
                    writeln!(io.out, "Counterexample {}", word.join(",")).map_err(e)?;
                    Ok(1)
                }
            }
        }
        Cmd::Brute { system, family, key, l, cap } => {
            let (sys, inst) = load_system(io, &system)?;
            let (fam, bounds) = load_family(io, family.as_deref(), &sys, inst.as_ref())?;
            let keys = keys_to_run(&fam, key)?;
            let fam = fam.restrict(&keys);
            let limit = l.or(bounds.map(|b| b.l)).ok_or("no bound L given")?;
            let cfg = SearchConfig { cap, parallel: true };
            let minima = family_minima(&sys, &fam, limit, &cfg).map_err(|x| x.to_string())?;
            let mut code = 0;
            for (k, m) in fam.keys().zip(&minima) {
                match m {
                    Some(zs) => {
                        writeln!(io.out, "class {k} Solution {}", zs.len()).map_err(e)?;
                        write_set(io.out, &sys, zs).map_err(e)?;
                    }
                    None => {
                        writeln!(io.out, "class {k} NoSolution").map_err(e)?;
                        code = 1;
                    }
                }
            }
            Ok(code)
        }
        Cmd::Solve { system, family, solver, key, l, q } => {
            let (sys, inst) = load_system(io, &system)?;
            let (fam, bounds) = load_family(io, family.as_deref(), &sys, inst.as_ref())?;
            let prog = match (&solver, &inst) {
                (Some(s), _) => load_solver(io, s)?,
                (None, Some(i)) => i.solver.clone(),
                (None, None) => return Err("a solver is needed for systems that are not exemplars".into()),
            };
            let limit = l.or(bounds.as_ref().map(|b| b.l)).ok_or("no bound L given")?;
            let q = q.or(bounds.as_ref().map(|b| b.q)).unwrap_or(0);
            let mut code = 0;
            for k in keys_to_run(&fam, key)? {
                let mut budget = OracleBudget::new(q);
                let res = run_solver(&prog, &k, &sys, &fam, &mut budget, RunConfig { limit, fuel: DEFAULT_FUEL });
                match res {
                    Ok(SolverOutcome::Solution(zs)) => {
                        writeln!(io.out, "class {k} Solution {} queries {}", zs.len(), budget.used()).map_err(e)?;
                        write_set(io.out, &sys, &zs).map_err(e)?;
                    }
                    Ok(SolverOutcome::NoSolution) => {
                        writeln!(io.out, "class {k} NoSolution queries {}", budget.used()).map_err(e)?;
                        code = code.max(1);
                    }
                    Err(f) => return Err(format!("class {k}: {f}")),
                }
            }
            Ok(code)
        }
        Cmd::Verify { system, family, solver, l, m, q, evidence, cap } => {
            let (sys, inst) = load_system(io, &system)?;
            let (fam, bounds) = load_family(io, family.as_deref(), &sys, inst.as_ref())?;
            let prog = match (&solver, &inst) {
                (Some(s), _) => load_solver(io, s)?,
                (None, Some(i)) => i.solver.clone(),
                (None, None) => return Err("a solver is needed for systems that are not exemplars".into()),
            };
            let pick = |x: Option<u64>, f: fn(&Bounds) -> u64, what: &str| {
                x.or(bounds.as_ref().map(f)).ok_or(format!("no bound {what} given"))
            };
            let b = Bounds {
                l: pick(l.map(|x| x as u64), |b| b.l as u64, "L")? as usize,
                m: pick(m, |b| b.m, "M")?,
                q: pick(q, |b| b.q, "Q")?,
            };
            let cfg = VerifyConfig { search: SearchConfig { cap, parallel: true }, ..VerifyConfig::default() };
            let v = crate::re::verify_re(&prog, &sys, &fam, &b, &cfg).map_err(|x| x.to_string())?;
            writeln!(io.out, "{}", v.outcome).map_err(e)?;
            if evidence {
                writeln!(io.out, "bits {}", v.bits).map_err(e)?;
                for ev in &v.evidence {
                    let solver = match &ev.solver {
                        Ok(Some(n)) => n.to_string(),
                        Ok(None) => "none".into(),
                        Err(_) => "fault".into(),
                    };
                    let min = ev.minimum.map_or("none".to_string(), |n| n.to_string());
                    let status = ev.failure.map_or("ok", |r| r.name());
                    writeln!(io.out, "class {} solver {solver} minimum {min} queries {} {status}", ev.key, ev.oracle_used)
                        .map_err(e)?;
                }
            }
            Ok(if v.is_accept() { 0 } else { 1 })
        }
        Cmd::Exemplar { name, family, solver, list } => {
            if list {
                for n in exemplars::NAMES {
                    writeln!(io.out, "{n}").map_err(e)?;
                }
                return Ok(0);
            }
            let name = name.expect("required unless listing");
            let inst = exemplars::named(&name).map_err(|x| x.to_string())?;
            let text = if family {
                print_family(&inst.family, &inst.system, Some(&inst.bounds))
            } else if solver {
                print_asm(&inst.solver)
            } else {
                print_csys(&inst.system)
            };
            io.out.write_all(text.as_bytes()).map_err(e)?;
            Ok(0)
        }
        Cmd::Encode { solver } => {
            let prog = load_solver(io, &solver)?;
            let bytes = prog.encode();
            let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
            writeln!(io.out, "bits {}", prog.encoded_bits()).map_err(e)?;
            writeln!(io.out, "hex {hex}").map_err(e)?;
            Ok(0)
        }
        Cmd::Active { system, node, max_len, horizon } => {
            let (sys, _) = load_system(io, &system)?;
            let v = sys.node_by_name(&node).ok_or(format!("no node named `{node}`"))?;
            let h = horizon.unwrap_or_else(|| default_horizon(&sys, max_len));
            let r = node_ever_active(&sys, v, max_len, h).map_err(|x| x.to_string())?;
            match r.witness {
                Some(w) if r.active => {
                    writeln!(io.out, "{}", word_line("active", sys.alphabet(), &w)).map_err(e)?;
                    Ok(0)
                }
                _ => {
                    writeln!(io.out, "inactive").map_err(e)?;
                    Ok(1)
                }
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run_cli<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let mut io = Io { stdin, out: stdout };
    match dispatch(cli.cmd, &mut io) {
        Ok(code) => code,
        Err(msg) if msg == OUTPUT_CLOSED => 0,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
