//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints one PASS/FAIL line, then exits nonzero if any failed.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use csys::automata::{accept_equiv, cs_to_dfa, dfa_to_cs, shortlex_words, Dfa, EquivVerdict, LetterSet, FIN};
use csys::exemplars::{butterfly, fft, line, named, reward, RewardVariant};
use csys::format::parse_dfa;
use csys::intervention::{affected_nodes, apply, diff_io};
use csys::model::{
    io_map, run, trace, Alphabet, Builtin, ComputationalSystem, NodeFunction, Rational, SystemBuilder, Value,
};
use csys::oracle::{batch_min, family_minima, k_approx_check, min_interventions, naive_ever_active, node_ever_active, SearchConfig};
use csys::re::{
    parse_asm, run_solver, verify_re, ClassKey, Fault, IOClass, OracleBudget, Outcome, Reason, RunConfig, SolverOutcome,
    VerifyConfig,
};
use csys::sigma::{build_sigma_cs, reference_net_step, two_track, SigmaNet};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn num(v: &Value) -> Rational {
    match v {
        Value::Num(r) => r.clone(),
        Value::Sym(s) => Rational::from_integer((*s as i64).into()),
    }
}

fn solve(inst: &csys::exemplars::Instance, key: &ClassKey) -> Result<(SolverOutcome, u64), String> {
    let mut budget = OracleBudget::new(inst.bounds.q);
    let out = run_solver(&inst.solver, key, &inst.system, &inst.family, &mut budget, RunConfig::new(inst.bounds.l))
        .map_err(|f| format!("class {key}: {f}"))?;
    Ok((out, budget.used()))
}

// 1 ------------------------------------------------------------------------

fn language(name: &str, w: &[&str]) -> bool {
    let count = |s: &str| w.iter().filter(|&&l| l == s).count();
    match name {
        "parity" => count("a") % 2 == 0,
        "all" => true,
        "none" => false,
        "ends_ab" => w.ends_with(&["a", "b"]),
        "div3" => w.iter().fold(0, |r, &b| (2 * r + usize::from(b == "1")) % 3) == 0,
        "contains_bb" => w.windows(2).any(|p| p == ["b", "b"]),
        "len_mod3" => w.len().is_multiple_of(3),
        other => panic!("no reference language for {other}"),
    }
}

fn corpus() -> Vec<(String, Dfa)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/dfa");
    let mut out: Vec<(String, Dfa)> = std::fs::read_dir(dir)
        .expect("dfa corpus")
        .map(|e| {
            let path = e.expect("entry").path();
            let name = path.file_stem().expect("stem").to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&path).expect("readable");
            (name, parse_dfa(&text).unwrap_or_else(|d| panic!("{}: {d}", path.display())))
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn dfa_fidelity() -> Check {
    let docs = corpus();
    ensure!(docs.len() >= 5, "corpus has {} automata", docs.len());
    ensure!(docs.iter().any(|d| d.0 == "parity") && docs.iter().any(|d| d.0 == "all"), "corpus lacks parity or all");
    for (name, d) in &docs {
        for w in shortlex_words(d.letters().len(), 6) {
            let labels: Vec<&str> = w.iter().map(|&a| d.letters()[a].as_str()).collect();
            ensure!(d.accepts(&w) == language(name, &labels), "{name}: corpus file disagrees with its language on {labels:?}");
        }
        let sys = dfa_to_cs(d).map_err(|e| format!("{name}: {e}"))?;
        let verdict = accept_equiv(d, &sys, 6).map_err(|e| format!("{name}: {e}"))?;
        ensure!(verdict == EquivVerdict::Equivalent, "{name}: {verdict:?}");

        let back = cs_to_dfa(&sys, LetterSet::Uniform).map_err(|e| format!("{name}: {e}"))?;
        let letter = |l: &str| back.letter_index(l).ok_or_else(|| format!("{name}: letter {l} missing"));
        let fin = letter(FIN)?;
        let pad = letter("0")?;
        for w in shortlex_words(d.letters().len(), 6) {
            let mut word = w.iter().map(|&a| letter(&d.letters()[a])).collect::<Result<Vec<_>, _>>()?;
            word.extend([fin, pad]);
            ensure!(back.accepts(&word) == d.accepts(&w), "{name}: roundtrip disagrees on {w:?}");
        }
    }
    Ok(())
}

// 2 ------------------------------------------------------------------------

fn line_example() -> Check {
    for n in [4usize, 8] {
        let base = line::build_line(n).map_err(|e| e.to_string())?;
        let out = run(&base, &[Value::Sym(7)], 3 * n as u64).map_err(|e| e.to_string())?;
        ensure!(out.get(base.outputs()[0]) == Some(&Value::Sym(7)), "line{n}: message not delivered");
        let tr = trace(&base, &[Value::Sym(7)], 3 * n as u64).map_err(|e| e.to_string())?;
        let arrival = tr.last().and_then(|s| s.first_nonzero[0].as_ref()).map(|f| f.1);
        ensure!(arrival == Some(n as u64), "line{n}: arrival at {arrival:?}, want load plus {} hops", n - 1);

        let inst = line::line_instance(n, n - 1).map_err(|e| e.to_string())?;
        let keys: Vec<ClassKey> = inst.family.keys().cloned().collect();
        ensure!(keys.len() == n * n, "line{n}: {} classes", keys.len());
        let mut sizes = Vec::new();
        for key in &keys {
            let (i, j) = (key.0[0] as usize, key.0[1] as usize);
            let SolverOutcome::Solution(zs) = solve(&inst, key)?.0 else {
                return Err(format!("line{n}: no solution for {key}"));
            };
            ensure!(zs.len() == i.abs_diff(j), "line{n} ({i},{j}): {} interventions", zs.len());
            let h = apply(&inst.system, &zs).map_err(|e| e.to_string())?;
            let rel = io_map(&h, &inst.family.probes, inst.family.horizon).map_err(|e| e.to_string())?;
            for (p, res) in inst.family.probes.iter().zip(&rel.results) {
                ensure!(res.get(line::node_id(n, i, j)) == Some(&p[0]), "line{n} ({i},{j}): symbol not reproduced");
            }
            sizes.push(zs.len());
        }
        if n == 4 {
            let minima = family_minima(&inst.system, &inst.family, 3, &SearchConfig::default()).map_err(|e| e.to_string())?;
            for ((key, min), size) in keys.iter().zip(&minima).zip(&sizes) {
                ensure!(min.as_ref().map(|z| z.len()) == Some(*size), "line4 {key}: minimum {min:?} vs {size}");
            }
        }
    }
    Ok(())
}

// 3 ------------------------------------------------------------------------

fn butterfly_example() -> Check {
    let sys = butterfly::build_butterfly();
    for p in butterfly::bit_pairs() {
        let (Value::Sym(a), Value::Sym(b)) = (&p[0], &p[1]) else { unreachable!() };
        let want = Value::Sym(1 + 2 * a + b);
        let out = run(&sys, &p, 8).map_err(|e| e.to_string())?;
        ensure!(out.get(butterfly::T1) == Some(&want) && out.get(butterfly::T2) == Some(&want), "pair ({a},{b}) not decoded");
    }
    let inst = butterfly::butterfly_instance().map_err(|e| e.to_string())?;
    let fam = &inst.family;
    let base = io_map(&sys, &fam.probes, fam.horizon).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::default();
    for (p, pattern) in [(1, vec![butterfly::T1]), (2, vec![butterfly::T2]), (3, vec![butterfly::T1, butterfly::T2])] {
        let key = ClassKey(vec![p]);
        let SolverOutcome::Solution(zs) = solve(&inst, &key)?.0 else {
            return Err(format!("p={p}: no solution"));
        };
        ensure!(zs.len() == 1, "p={p}: {} interventions", zs.len());
        let h = apply(&sys, &zs).map_err(|e| e.to_string())?;
        let rel = io_map(&h, &fam.probes, fam.horizon).map_err(|e| e.to_string())?;
        let hit = affected_nodes(&diff_io(&base, &rel).map_err(|e| e.to_string())?);
        ensure!(hit == pattern.iter().copied().collect::<BTreeSet<_>>(), "p={p}: affected {hit:?}");
        let class = fam.class(&key).expect("class");
        let none = min_interventions(&sys, class, &fam.probes, fam.horizon, 0, &fam.space, &cfg).map_err(|e| e.to_string())?;
        ensure!(none.is_none(), "p={p}: the empty set already qualifies");
        let one = min_interventions(&sys, class, &fam.probes, fam.horizon, 1, &fam.space, &cfg).map_err(|e| e.to_string())?;
        ensure!(one.map(|z| z.len()) == Some(1), "p={p}: brute force finds no singleton");
    }
    Ok(())
}

// 4 ------------------------------------------------------------------------

fn dft(x: &[u64], q: u64, omega: u64) -> Vec<u64> {
    let n = x.len() as u64;
    (0..n)
        .map(|k| {
            let mut acc = 0;
            for (i, &xi) in x.iter().enumerate() {
                let mut w = 1;
                for _ in 0..(i as u64 * k) % n {
                    w = w * omega % q;
                }
                acc = (acc + xi * w) % q;
            }
            acc
        })
        .collect()
}

fn fft_matches(sys: &ComputationalSystem, x: &[u64], q: u64, omega: u64) -> Check {
    let input: Vec<Value> = x.iter().map(|&v| Value::Sym(v as u32)).collect();
    let out = run(sys, &input, 3 + x.len().trailing_zeros() as u64).map_err(|e| e.to_string())?;
    for (k, want) in dft(x, q, omega).into_iter().enumerate() {
        ensure!(out.values[k] == Some(Value::Sym(want as u32 + 1)), "input {x:?}: X_{k} is {:?}, want {want}", out.values[k]);
    }
    Ok(())
}

fn fft_example() -> Check {
    let f4 = fft::build_fft(4, 17, 4).map_err(|e| e.to_string())?;
    for idx in 0..17u64.pow(4) {
        let x: Vec<u64> = (0..4).map(|d| idx / 17u64.pow(d) % 17).collect();
        fft_matches(&f4, &x, 17, 4)?;
    }
    let f8 = fft::build_fft(8, 17, 2).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let x: Vec<u64> = (0..8).map(|_| rng.gen_range(0..17)).collect();
        fft_matches(&f8, &x, 17, 2)?;
    }

    let n = 8;
    let inst = fft::fft_instance(n, 17, 2).map_err(|e| e.to_string())?;
    let fam = &inst.family;
    let base = io_map(&inst.system, &fam.probes, fam.horizon).map_err(|e| e.to_string())?;
    let mut positives = 0;
    for s in 0..=3 {
        for r in 0..(1usize << s) {
            let rows = fft::descendants(n, s, r);
            let key = ClassKey(rows.iter().map(|&x| x as i64).collect());
            let (SolverOutcome::Solution(zs), used) = solve(&inst, &key)? else {
                return Err(format!("stage {s} row {r}: no solution"));
            };
            ensure!(zs.len() == 1 && used == 1, "{key}: {} interventions, {used} queries", zs.len());
            let h = apply(&inst.system, &zs).map_err(|e| e.to_string())?;
            let rel = io_map(&h, &fam.probes, fam.horizon).map_err(|e| e.to_string())?;
            let hit = affected_nodes(&diff_io(&base, &rel).map_err(|e| e.to_string())?);
            let want: BTreeSet<usize> = rows.iter().map(|&x| inst.system.outputs()[x]).collect();
            ensure!(hit == want, "{key}: affected {hit:?}");
            positives += 1;
        }
    }
    ensure!(positives == 15, "{positives} descendant sets");

    let negatives: Vec<ClassKey> =
        [vec![0, 1, 2], vec![0, 1, 2, 3, 4, 5], vec![1, 2, 3, 4, 5, 6, 7], vec![0, 1], vec![2, 5, 7]]
            .into_iter()
            .map(ClassKey)
            .collect();
    let classes: Vec<&IOClass> = negatives.iter().map(|k| fam.class(k).expect("class")).collect();
    let brute = batch_min(&inst.system, &classes, &fam.probes, fam.horizon, 1, &fam.space, &SearchConfig::default())
        .map_err(|e| e.to_string())?;
    for (key, b) in negatives.iter().zip(brute) {
        ensure!(b.is_none(), "{key}: brute force found a singleton");
        ensure!(solve(&inst, key)?.0 == SolverOutcome::NoSolution, "{key}: solver claims a solution");
    }
    Ok(())
}

// 5 ------------------------------------------------------------------------

fn reward_example() -> Check {
    let hs = Rational::from_integer(reward::FAMILY_HS.into());
    let cfg = SearchConfig::default();
    for (variant, size) in [(RewardVariant::Difference, 1), (RewardVariant::Ratio, 2)] {
        let inst = reward::reward_instance(variant, &reward::default_gammas()).map_err(|e| e.to_string())?;
        let fam = &inst.family;
        ensure!(fam.len() == 3, "{}: {} classes", variant.name(), fam.len());
        for key in fam.keys() {
            let gamma = q(key.0[0], key.0[1]);
            let SolverOutcome::Solution(zs) = solve(&inst, key)?.0 else {
                return Err(format!("{} {key}: no solution", variant.name()));
            };
            ensure!(zs.len() == size, "{} {key}: {} interventions", variant.name(), zs.len());
            let h = apply(&inst.system, &zs).map_err(|e| e.to_string())?;
            let rel = io_map(&h, &fam.probes, fam.horizon).map_err(|e| e.to_string())?;
            let want = (Rational::one() - &gamma) * &hs;
            for res in &rel.results {
                for node in [reward::PFC, reward::OFC] {
                    ensure!(res.get(node).map(num) == Some(want.clone()), "{} {key}: node {node} gives {:?}", variant.name(), res.get(node));
                }
            }
        }
        let minima = family_minima(&inst.system, fam, 1, &cfg).map_err(|e| e.to_string())?;
        for (key, m) in fam.keys().zip(&minima) {
            let got = m.as_ref().map(|z| z.len());
            match variant {
                RewardVariant::Difference => ensure!(got == Some(1), "difference {key}: brute force minimum {got:?}"),
                RewardVariant::Ratio => ensure!(got.is_none(), "ratio {key}: brute force found a singleton"),
            }
        }
    }
    Ok(())
}

// 6 ------------------------------------------------------------------------

fn accounting() -> Check {
    let mut bits = BTreeSet::new();
    for n in [4usize, 8, 16, 32] {
        let inst = line::line_instance(n, n - 1).map_err(|e| e.to_string())?;
        bits.insert(inst.solver.encoded_bits());
        for (i, j) in [(0, n - 1), (n - 1, 0), (n / 2, 1), (n - 1, n - 1)] {
            let key = ClassKey(vec![i as i64, j as i64]);
            let SolverOutcome::Solution(zs) = solve(&inst, &key)?.0 else {
                return Err(format!("line{n} ({i},{j}): no solution"));
            };
            ensure!(zs.len() == i.abs_diff(j), "line{n} ({i},{j}): {} interventions", zs.len());
        }
    }
    ensure!(bits.len() == 1, "encoded sizes differ: {bits:?}");

    let inst = butterfly::butterfly_instance().map_err(|e| e.to_string())?;
    let key = ClassKey(vec![1]);
    for limit in [0u64, 1, 3] {
        let text = format!("solver v1\n{}halt\n", "pidx\noracle\npop\n".repeat(limit as usize + 1));
        let prog = parse_asm(&text).map_err(|e| e.to_string())?;
        let mut outcomes = Vec::new();
        for _ in 0..2 {
            let mut budget = OracleBudget::new(limit);
            let r = run_solver(&prog, &key, &inst.system, &inst.family, &mut budget, RunConfig::new(2));
            ensure!(budget.used() == limit, "Q={limit}: {} queries charged", budget.used());
            outcomes.push(r);
        }
        let want = Err(Fault::BudgetExceeded { pc: 3 * limit as usize + 1, limit });
        ensure!(outcomes[0] == want && outcomes[1] == want, "Q={limit}: {:?}", outcomes);
        let mut budget = OracleBudget::new(limit + 1);
        let r = run_solver(&prog, &key, &inst.system, &inst.family, &mut budget, RunConfig::new(2));
        ensure!(r.is_ok(), "Q={}: {r:?}", limit + 1);
    }
    let f = fft::fft_instance(4, 17, 4).map_err(|e| e.to_string())?;
    let mut budget = OracleBudget::new(0);
    let r = run_solver(&f.solver, &ClassKey(vec![0, 2]), &f.system, &f.family, &mut budget, RunConfig::new(1));
    ensure!(matches!(r, Err(Fault::BudgetExceeded { limit: 0, .. })), "fft solver without budget: {r:?}");
    Ok(())
}

// 7 ------------------------------------------------------------------------

fn saturate(x: Rational) -> Rational {
    if x < Rational::zero() {
        Rational::zero()
    } else if x > Rational::one() {
        Rational::one()
    } else {
        x
    }
}

fn sigma_embedding() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let param = |rng: &mut ChaCha8Rng| q(rng.gen_range(-8..=8), rng.gen_range(1..=8));
    for case in 0..20 {
        let n = rng.gen_range(1..=3);
        let a: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| param(&mut rng)).collect()).collect();
        let b: Vec<Rational> = (0..n).map(|_| param(&mut rng)).collect();
        let b2: Vec<Rational> = (0..n).map(|_| param(&mut rng)).collect();
        let c: Vec<Rational> = (0..n).map(|_| param(&mut rng)).collect();
        let steps = 20;
        let d: Vec<Rational> = (0..steps).map(|_| q(rng.gen_range(0..=8), 8)).collect();
        let v: Vec<Rational> = (0..steps).map(|_| q(rng.gen_range(0..=1), 1)).collect();
        let net = SigmaNet::new(a.clone(), b.clone(), b2.clone(), c.clone()).map_err(|e| e.to_string())?;
        let sys = build_sigma_cs(&net);
        let tr = trace(&sys, &two_track(&d, &v), steps as u64).map_err(|e| e.to_string())?;

        let mut x = vec![Rational::zero(); n];
        for (k, st) in tr.iter().enumerate() {
            let got: Vec<Rational> = st.stored[..n].iter().map(num).collect();
            ensure!(got == x, "net {case}, step {k}: {got:?} vs {x:?}");
            let (dk, vk) = if k == 0 { (Rational::zero(), Rational::zero()) } else { (d[k - 1].clone(), v[k - 1].clone()) };
            let next: Vec<Rational> = (0..n)
                .map(|i| {
                    let mut acc = c[i].clone() + &b[i] * &dk + &b2[i] * &vk;
                    for j in 0..n {
                        acc += &a[i][j] * &x[j];
                    }
                    saturate(acc)
                })
                .collect();
            let lib = reference_net_step(&net, &x, &dk, &vk).map_err(|e| e.to_string())?;
            ensure!(lib == next, "net {case}, step {k}: library step disagrees");
            x = next;
        }
    }
    Ok(())
}

// 8 ------------------------------------------------------------------------

fn random_system(rng: &mut ChaCha8Rng) -> ComputationalSystem {
    let nodes = rng.gen_range(1..=4);
    let size = rng.gen_range(1..=4);
    let mut b = SystemBuilder::new(Alphabet::integers(size));
    for v in 0..nodes {
        b.node_with_init(format!("n{v}"), Value::Sym(rng.gen_range(0..size as u32)));
    }
    for u in 0..nodes {
        for v in 0..nodes {
            if u != v && rng.gen_bool(0.35) {
                b.edge(u, v);
            }
        }
    }
    for v in 0..nodes {
        match rng.gen_range(0..3) {
            0 => {}
            1 => {
                b.stream(v, rng.gen_range(0..3), rng.gen_range(1..=2));
            }
            _ => {
                let t = rng.gen_range(0..3);
                b.input_at(v, t, rng.gen_range(0..3));
                if rng.gen_bool(0.5) {
                    b.input_at(v, t + 1, rng.gen_range(0..3));
                }
            }
        }
    }
    for v in 0..nodes {
        let arity = b.arity(v);
        let f = NodeFunction::tabulate(arity, size, |_| rng.gen_range(0..size as u32));
        b.function(v, f);
    }
    b.output(0);
    b.build().expect("random system is well formed")
}

fn activation_and_approximation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let horizon = 6;
    let mut compared = 0;
    let mut active = 0;
    for _ in 0..400 {
        let sys = random_system(&mut rng);
        for v in 0..sys.len() {
            let fast = node_ever_active(&sys, v, 3, horizon).map_err(|e| e.to_string())?;
            let slow = naive_ever_active(&sys, v, 3, horizon);
            ensure!(fast.active == slow.is_some() && fast.witness == slow, "node {v}: {fast:?} vs naive {slow:?} on {sys:?}");
            compared += 1;
            active += usize::from(fast.active);
        }
    }
    ensure!(active > 0 && active < compared, "degenerate sample: {active} of {compared} active");

    // C(x) = 2 f(x) with f(x) = c1 x + c0, read at step 0
    let probes: Vec<Vec<Value>> = [q(0, 1), q(1, 1), q(1, 3), q(-5, 2), q(7, 1)].into_iter().map(|x| vec![Value::Num(x)]).collect();
    for (c1, c0) in [(q(1, 1), q(1, 1)), (q(3, 1), q(-1, 7)), (q(-1, 2), q(-3, 4))] {
        let mut b = SystemBuilder::new(Alphabet::rational());
        let y = b.node("y");
        b.input_at(y, 0, 0).output(y);
        let two = q(2, 1);
        b.function(y, NodeFunction::builtin(2, Builtin::Affine { offset: &two * &c0, coeffs: vec![q(0, 1), &two * &c1] }));
        let sys = b.build().map_err(|e| e.to_string())?;
        let f = |x: &[Value]| &c1 * num(&x[0]) + &c0;
        for k in [q(2, 1), q(5, 2), q(4, 1)] {
            let r = k_approx_check(&sys, f, &k, &probes, 4).map_err(|e| e.to_string())?;
            ensure!(r.holds, "k={k}: {r:?}");
        }
        let r = k_approx_check(&sys, f, &q(3, 2), &probes, 4).map_err(|e| e.to_string())?;
        let fx = f(&probes[0]);
        ensure!(
            !r.holds && r.counterexample == Some((probes[0].clone(), fx.clone(), &fx * q(2, 1))),
            "k=3/2: {r:?}"
        );
    }
    Ok(())
}

// 9 ------------------------------------------------------------------------

fn verify_end_to_end() -> Check {
    let cfg = VerifyConfig::default();
    for name in ["line4", "butterfly", "fft4", "fft8", "reward-difference", "reward-ratio"] {
        let inst = named(name).map_err(|e| e.to_string())?;
        let v = verify_re(&inst.solver, &inst.system, &inst.family, &inst.bounds, &cfg).map_err(|e| e.to_string())?;
        ensure!(v.is_accept(), "{name}: {}", v.outcome);
    }

    let line4 = named("line4").map_err(|e| e.to_string())?;
    let padded = format!("{}{}", line::SOLVER_TEXT, "    push 1000000\n    pop\n".repeat(20));
    let big = parse_asm(&padded).map_err(|e| e.to_string())?;
    let v = verify_re(&big, &line4.system, &line4.family, &line4.bounds, &cfg).map_err(|e| e.to_string())?;
    ensure!(v.outcome == Outcome::Reject(Reason::EncodingTooLarge), "oversized line solver: {}", v.outcome);

    // difference solver that also clamps the PFC-bound relay to the value it would carry anyway
    let extra = "    push 2\n    push 1\n    push 2\n    push 0\n    arg\n    push 2\n    arg\n    mul\n    push 1\n    arg\n    const_idx\n    emit\n    halt\n";
    let wasteful = reward::DIFFERENCE_SOLVER_TEXT.trim_end().strip_suffix("halt").expect("ends in halt").to_string() + extra.trim_start();
    let wasteful = parse_asm(&wasteful).map_err(|e| e.to_string())?;
    let diff = named("reward-difference").map_err(|e| e.to_string())?;
    let v = verify_re(&wasteful, &diff.system, &diff.family, &diff.bounds, &cfg).map_err(|e| e.to_string())?;
    ensure!(v.outcome == Outcome::Reject(Reason::NotMinimal), "two-intervention difference solver: {}", v.outcome);

    let bfly = named("butterfly").map_err(|e| e.to_string())?;
    let quitter = parse_asm("solver v1\nnosol\n").map_err(|e| e.to_string())?;
    let v = verify_re(&quitter, &bfly.system, &bfly.family, &bfly.bounds, &cfg).map_err(|e| e.to_string())?;
    ensure!(v.outcome == Outcome::Reject(Reason::MissedSolution), "always-nosol solver: {}", v.outcome);
    Ok(())
}

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Check);

fn main() {
    let criteria: [Criterion; 9] = [
        ("automaton conversion fidelity", 5, dfa_fidelity),
        ("line rerouting", 60, line_example),
        ("butterfly network coding", 5, butterfly_example),
        ("fft descendant sets", 60, fft_example),
        ("reward network", 10, reward_example),
        ("encoding and budget accounting", 60, accounting),
        ("sigma-net embedding", 10, sigma_embedding),
        ("activation and approximation", 30, activation_and_approximation),
        ("verification end to end", 120, verify_end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let took = t.elapsed();
        let result = result.and_then(|()| {
            if took <= Duration::from_secs(*limit) {
                Ok(())
            } else {
                Err(format!("took {took:.1?}, limit {limit} s"))
            }
        });
        match result {
            Ok(()) => println!("criterion {}: PASS {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({took:.2?}): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
