use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn csys(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_csys"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).expect("write stdin");
        }
    }
    child.wait_with_output().expect("exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).expect("scratch file");
    path
}

#[test]
fn exemplar_piped_into_simulate() {
    let doc = csys(&["exemplar", "butterfly"], None);
    assert_eq!(doc.status.code(), Some(0));
    let out = csys(&["simulate", "--input", "10"], Some(&doc.stdout));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("t1 = 3\n") && text.contains("t2 = 3\n"), "{text}");
    assert!(text.contains("status complete"), "{text}");
}

#[test]
fn verify_line4_accepts() {
    let out = csys(&["verify", "--system", "line4", "--solver", "line.solver", "--L", "4", "--M", "512", "--Q", "0"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().next(), Some("Accept"));
}

#[test]
fn verify_rejects_small_budget() {
    let out = csys(&["verify", "--system", "butterfly", "--solver", "butterfly.solver", "--M", "64"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).lines().next(), Some("Reject EncodingTooLarge"));
}

#[test]
fn brute_without_catalog_has_no_solution() {
    let fam = scratch("empty_catalog.family", "family v1\nhorizon 8\nprobe 0 1\nprobe 1 1\nclass 1 : exactly t1\n");
    let out = csys(&["brute", "butterfly", "--family", fam.to_str().unwrap(), "--L", "2"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "class (1) NoSolution\n");
}

#[test]
fn brute_finds_butterfly_singletons() {
    let out = csys(&["brute", "butterfly", "--key", "3"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("class (3) Solution 1\n"), "{text}");
}

#[test]
fn dangling_edge_reported_with_location() {
    let doc = "csys v1\n[alphabet]\nsymbols 0 1\nzero 0\n[functions]\nfn id 1 select 0\n[nodes]\na 0 id\n[edges]\na b\n[outputs]\na\n";
    let out = csys(&["simulate", "--input", "1"], Some(doc.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("10:3: error[E08]: dangling edge endpoint"), "{err}");
}

#[test]
fn intervene_reports_affected_outputs() {
    let zs = scratch("freeze_top.zset", "zset v1\ns1 1 const 1\n");
    let out = csys(&["intervene", "butterfly", "--zset", zs.to_str().unwrap(), "--input", "10", "--input", "01"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("diff 1,0 t1 ")), "{text}");
    assert!(text.ends_with("affected t1\n"), "{text}");
}

#[test]
fn dfa_roundtrip_through_cli() {
    let dfa = concat!(env!("CARGO_MANIFEST_DIR"), "/data/dfa/parity.dfa");
    let sys = csys(&["dfa2cs", dfa], None);
    assert_eq!(sys.status.code(), Some(0));
    let path = scratch("parity.csys", &stdout(&sys));
    let out = csys(&["equiv", dfa, path.to_str().unwrap(), "--max-len", "5"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "Equivalent\n");

    let ends = concat!(env!("CARGO_MANIFEST_DIR"), "/data/dfa/ends_ab.dfa");
    let out = csys(&["equiv", ends, path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("Counterexample"));
}

#[test]
fn solve_fft_uses_one_query() {
    let out = csys(&["solve", "fft8", "--key", "1", "5"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("class (1,5) Solution 1 queries 1"), "{}", stdout(&out));
    let out = csys(&["solve", "fft8", "--key", "0", "1", "2"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("NoSolution"));
}

#[test]
fn encode_prints_bits() {
    let out = csys(&["encode", "line.solver"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("bits 392\n"), "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(csys(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(csys(&["simulate", "no-such-system", "--input", "1"], None).status.code(), Some(2));
    assert_eq!(csys(&["--help"], None).status.code(), Some(0));
}
