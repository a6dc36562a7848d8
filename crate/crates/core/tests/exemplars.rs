use std::time::Instant;

use csys::exemplars::named;
use csys::re::{verify_re, VerifyConfig};

#[test]
fn shipped_solvers_accept() {
    for name in ["butterfly", "fft4", "fft8", "reward-difference", "reward-ratio", "line4"] {
        let t = Instant::now();
        let inst = named(name).unwrap();
        let v = verify_re(&inst.solver, &inst.system, &inst.family, &inst.bounds, &VerifyConfig::default()).unwrap();
        eprintln!("{name}: {} bits={} in {:?}", v.outcome, v.bits, t.elapsed());
        for e in v.evidence.iter().filter(|e| e.failure.is_some()) {
            eprintln!("  {:?}", e);
        }
        assert!(v.is_accept(), "{name}");
    }
}
