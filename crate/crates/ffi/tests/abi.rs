use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use csys_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { csys_string_free(s) };
    text
}

fn last_error() -> String {
    let p = csys_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn exemplar(name: &str) -> *mut CsysSystem {
    let name = CString::new(name).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { csys_system_exemplar(name.as_ptr(), &mut sys) }, CsysStatus::Ok);
    sys
}

#[test]
fn simulate_butterfly() {
    let sys = exemplar("butterfly");
    assert_eq!(unsafe { csys_system_node_count(sys) }, 5);
    let input = CString::new("10").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { csys_simulate(sys, input.as_ptr(), 0, &mut out) }, CsysStatus::Ok);
    assert_eq!(take(out), "input 1,0\nt1 = 3\nt2 = 3\nstatus complete\n");
    unsafe { csys_system_free(sys) };
}

#[test]
fn print_and_parse_roundtrip() {
    let sys = exemplar("line4");
    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { csys_system_print(sys, &mut doc) }, CsysStatus::Ok);
    let text = take(doc);
    let c = CString::new(text.clone()).unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { csys_system_parse(c.as_ptr(), &mut back) }, CsysStatus::Ok);
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { csys_system_print(back, &mut again) }, CsysStatus::Ok);
    assert_eq!(take(again), text);
    unsafe {
        csys_system_free(sys);
        csys_system_free(back);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let bad = CString::new("csys v1\n[wires]\n").unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { csys_system_parse(bad.as_ptr(), &mut sys) }, CsysStatus::ParseError);
    assert!(sys.is_null());
    assert!(last_error().contains("E02"), "{}", last_error());

    assert_eq!(unsafe { csys_system_parse(ptr::null(), &mut sys) }, CsysStatus::NullArgument);
    let name = CString::new("line3x").unwrap();
    assert_eq!(unsafe { csys_system_exemplar(name.as_ptr(), &mut sys) }, CsysStatus::UnknownExemplar);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { csys_system_print(ptr::null(), &mut out) }, CsysStatus::NullArgument);

    let ok = exemplar("butterfly");
    assert_eq!(unsafe { csys_system_print(ok, &mut out) }, CsysStatus::Ok);
    assert!(csys_last_error().is_null());
    take(out);
    unsafe { csys_system_free(ok) };
}

#[test]
fn dfa_equivalence() {
    let dfa = CString::new(std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/dfa/parity.dfa")).unwrap()).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { csys_system_from_dfa(dfa.as_ptr(), &mut sys) }, CsysStatus::Ok);
    let mut eq = -1;
    assert_eq!(unsafe { csys_equiv(dfa.as_ptr(), sys, 5, &mut eq) }, CsysStatus::Ok);
    assert_eq!(eq, 1);
    unsafe { csys_system_free(sys) };
}

#[test]
fn verification_verdicts() {
    let name = CString::new("butterfly").unwrap();
    let (mut accepted, mut verdict) = (-1, ptr::null_mut());
    assert_eq!(unsafe { csys_verify_exemplar(name.as_ptr(), &mut accepted, &mut verdict) }, CsysStatus::Ok);
    assert_eq!((accepted, take(verdict)), (1, "Accept".to_string()));

    let sys = exemplar("butterfly");
    let family = CString::new(include_str!("../../core/data/butterfly.family")).unwrap();
    let quitter = CString::new("solver v1\nnosol\n").unwrap();
    let status = unsafe { csys_verify(sys, family.as_ptr(), quitter.as_ptr(), 2, 512, 0, &mut accepted, &mut verdict) };
    assert_eq!(status, CsysStatus::Ok);
    assert_eq!((accepted, take(verdict)), (0, "Reject MissedSolution".to_string()));
    unsafe { csys_system_free(sys) };
}

/// Compiles the C smoke test against the generated header and the static
/// library, when a C compiler is available.
#[test]
fn c_program_links_against_header() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler; skipping link test");
        return;
    };
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libcsys_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("csys_smoke");
    let status = Command::new(cc)
        .arg(root.join("tests/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc);
        }
    }
    Err(())
}
