use csys::exemplars::{butterfly, named};
use csys::format::{parse_csys, parse_family, print_csys, print_family};

const LINE4: &str = include_str!("../data/line4.csys");
const BUTTERFLY: &str = include_str!("../data/butterfly.csys");
const LINE4_FAMILY: &str = include_str!("../data/line4.family");
const BUTTERFLY_FAMILY: &str = include_str!("../data/butterfly.family");

#[test]
fn shipped_systems_match_builders() {
    assert_eq!(parse_csys(BUTTERFLY).unwrap(), butterfly::build_butterfly());
    assert_eq!(parse_csys(LINE4).unwrap(), named("line4").unwrap().system);
}

#[test]
fn shipped_documents_are_canonical() {
    for text in [LINE4, BUTTERFLY] {
        assert_eq!(print_csys(&parse_csys(text).unwrap()), text);
    }
}

#[test]
fn shipped_families_match_builders() {
    for (name, text) in [("line4", LINE4_FAMILY), ("butterfly", BUTTERFLY_FAMILY)] {
        let inst = named(name).unwrap();
        let doc = parse_family(text, &inst.system).unwrap();
        assert_eq!(doc.family, inst.family, "{name}");
        assert_eq!(doc.bounds, Some(inst.bounds.clone()));
        assert_eq!(print_family(&doc.family, &inst.system, doc.bounds.as_ref()), text);
    }
}

#[test]
fn every_exemplar_roundtrips() {
    for name in csys::exemplars::NAMES {
        let sys = named(name).unwrap().system;
        let text = print_csys(&sys);
        assert_eq!(parse_csys(&text).unwrap(), sys, "{name}");
    }
}
