//! C ABI over the `csys` library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns
//! a [`CsysStatus`]; on failure a message is available from
//! [`csys_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`csys_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use csys::automata::{accept_equiv, dfa_to_cs, EquivVerdict};
use csys::exemplars;
use csys::format::{parse_csys, parse_dfa, parse_family, parse_input, print_csys, print_input};
use csys::model::{default_horizon, run, ComputationalSystem, Status};
use csys::re::{parse_asm, verify_re, Bounds, Outcome, VerifyConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsysStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownExemplar = 4,
    SimulationError = 5,
    SearchError = 6,
    Panic = 7,
}

/// A validated computational system.
pub struct CsysSystem {
    inner: ComputationalSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CsysStatus, String);

fn fail(status: CsysStatus, msg: impl ToString) -> Failure {
    Failure(status, msg.to_string())
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CsysStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CsysStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CsysStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(CsysStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CsysStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn system<'a>(p: *const CsysSystem) -> Result<&'a ComputationalSystem, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| fail(CsysStatus::NullArgument, "system handle is null"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(CsysStatus::NullArgument, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| fail(CsysStatus::SimulationError, "result contains a nul byte"))?;
    put(out, c.into_raw())
}

unsafe fn put_system(out: *mut *mut CsysSystem, sys: ComputationalSystem) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(CsysSystem { inner: sys })))
}

/// Message describing the last failed call on this thread, or null. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn csys_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn csys_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a `csys v1` document.
///
/// # Safety
/// `doc` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn csys_system_parse(doc: *const c_char, out: *mut *mut CsysSystem) -> CsysStatus {
    guard(|| {
        let sys = parse_csys(text(doc, "document")?).map_err(|d| fail(CsysStatus::ParseError, d))?;
        put_system(out, sys)
    })
}

/// Builds a shipped exemplar system by name (`line4`, `butterfly`, ...).
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn csys_system_exemplar(name: *const c_char, out: *mut *mut CsysSystem) -> CsysStatus {
    guard(|| {
        let inst = exemplars::named(text(name, "name")?).map_err(|e| fail(CsysStatus::UnknownExemplar, e))?;
        put_system(out, inst.system)
    })
}

/// Builds the system simulating a `dfa v1` document.
///
/// # Safety
/// `doc` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn csys_system_from_dfa(doc: *const c_char, out: *mut *mut CsysSystem) -> CsysStatus {
    guard(|| {
        let d = parse_dfa(text(doc, "document")?).map_err(|e| fail(CsysStatus::ParseError, e))?;
        put_system(out, dfa_to_cs(&d).map_err(|e| fail(CsysStatus::ParseError, e))?)
    })
}

/// Releases a system handle. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn csys_system_free(sys: *mut CsysSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn csys_system_node_count(sys: *const CsysSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.inner.len())
}

/// Canonical `csys v1` text of a system.
///
/// # Safety
/// `sys` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn csys_system_print(sys: *const CsysSystem, out: *mut *mut c_char) -> CsysStatus {
    guard(|| put_string(out, print_csys(system(sys)?)))
}

/// Runs the system on one input and writes the outputs as text: one
/// `NAME = VALUE` line per output node (`.` if it never fired), then
/// `status complete` or `status timeout`. A zero `horizon` selects the
/// default for the input length.
///
/// # Safety
/// `sys` must be a live handle, `input` a nul-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn csys_simulate(
    sys: *const CsysSystem,
    input: *const c_char,
    horizon: u64,
    out: *mut *mut c_char,
) -> CsysStatus {
    guard(|| {
        let sys = system(sys)?;
        let x = parse_input(sys.alphabet(), text(input, "input")?).map_err(|e| fail(CsysStatus::ParseError, e))?;
        let h = if horizon == 0 { default_horizon(sys, x.len()) } else { horizon };
        let res = run(sys, &x, h).map_err(|e| fail(CsysStatus::SimulationError, e))?;
        let mut s = if x.is_empty() { "input\n".to_string() } else { format!("input {}\n", print_input(sys.alphabet(), &x)) };
        for (k, &v) in res.nodes.iter().enumerate() {
            let val = res.values[k].as_ref().map_or(".".to_string(), |v| sys.alphabet().format(v));
            s.push_str(&format!("{} = {val}\n", sys.name(v)));
        }
        s.push_str(if res.status() == Status::Complete { "status complete\n" } else { "status timeout\n" });
        put_string(out, s)
    })
}

/// Compares a `dfa v1` document with a system on all words up to
/// `max_len`. Writes 1 to `equivalent` when they agree, 0 otherwise.
///
/// # Safety
/// `dfa` must be a nul-terminated string, `sys` a live handle and
/// `equivalent` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn csys_equiv(
    dfa: *const c_char,
    sys: *const CsysSystem,
    max_len: usize,
    equivalent: *mut i32,
) -> CsysStatus {
    guard(|| {
        let d = parse_dfa(text(dfa, "dfa")?).map_err(|e| fail(CsysStatus::ParseError, e))?;
        let v = accept_equiv(&d, system(sys)?, max_len).map_err(|e| fail(CsysStatus::SimulationError, e))?;
        put(equivalent, i32::from(v == EquivVerdict::Equivalent))
    })
}

/// Verifies a solver (assembly text) against a system and a `family v1`
/// document under the bounds `l`, `m` bits and `q` queries. Writes the
/// verdict line (`Accept` or `Reject REASON`) to `verdict` and 1 to
/// `accepted` on acceptance, 0 otherwise.
///
/// # Safety
/// `sys` must be a live handle, `family` and `solver` nul-terminated strings,
/// and `accepted` and `verdict` writable pointers.
#[no_mangle]
pub unsafe extern "C" fn csys_verify(
    sys: *const CsysSystem,
    family: *const c_char,
    solver: *const c_char,
    l: usize,
    m: u64,
    q: u64,
    accepted: *mut i32,
    verdict: *mut *mut c_char,
) -> CsysStatus {
    guard(|| {
        let sys = system(sys)?;
        let fam = parse_family(text(family, "family")?, sys).map_err(|e| fail(CsysStatus::ParseError, e))?.family;
        let prog = parse_asm(text(solver, "solver")?).map_err(|e| fail(CsysStatus::ParseError, e))?;
        let v = verify_re(&prog, sys, &fam, &Bounds { l, m, q }, &VerifyConfig::default())
            .map_err(|e| fail(CsysStatus::SearchError, e))?;
        put(accepted, i32::from(v.outcome == Outcome::Accept))?;
        put_string(verdict, v.outcome.to_string())
    })
}

/// Verifies a shipped exemplar's solver under its default bounds.
///
/// # Safety
/// `name` must be a nul-terminated string, `accepted` and `verdict` writable
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn csys_verify_exemplar(
    name: *const c_char,
    accepted: *mut i32,
    verdict: *mut *mut c_char,
) -> CsysStatus {
    guard(|| {
        let inst = exemplars::named(text(name, "name")?).map_err(|e| fail(CsysStatus::UnknownExemplar, e))?;
        let v = verify_re(&inst.solver, &inst.system, &inst.family, &inst.bounds, &VerifyConfig::default())
            .map_err(|e| fail(CsysStatus::SearchError, e))?;
        put(accepted, i32::from(v.outcome == Outcome::Accept))?;
        put_string(verdict, v.outcome.to_string())
    })
}
