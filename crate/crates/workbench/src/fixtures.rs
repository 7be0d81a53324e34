//! The bundled fixture corpus and its mutated counterparts.

use crate::workspace::Workspace;

pub const CORPUS: &str = include_str!("../../../fixtures/fixtures.qw");

/// Files that each declare exactly one structure violating an axiom.
pub const COUNTER: [(&str, &str); 6] = [
    ("non_associative.qw", include_str!("../../../fixtures/counter/non_associative.qw")),
    ("non_distributive.qw", include_str!("../../../fixtures/counter/non_distributive.qw")),
    ("bottom_not_absorbed.qw", include_str!("../../../fixtures/counter/bottom_not_absorbed.qw")),
    ("bad_unit.qw", include_str!("../../../fixtures/counter/bad_unit.qw")),
    ("module_m1.qw", include_str!("../../../fixtures/counter/module_m1.qw")),
    ("module_m3.qw", include_str!("../../../fixtures/counter/module_m3.qw")),
];

pub fn corpus() -> Workspace {
    Workspace::from_source(CORPUS).expect("bundled corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantale::Error;

    #[test]
    fn corpus_is_valid() {
        let ws = corpus();
        for e in &ws.entries {
            assert!(e.structure.is_ok(), "{} {}: {:?}", e.kind.keyword(), e.name, e.structure);
        }
        assert!(ws.quantale("PS2").unwrap().unit().is_none());
        assert!(ws.quantale("Z0").unwrap().unit().is_none());
    }

    #[test]
    fn each_counter_fixture_has_one_failure() {
        let mut found = Vec::new();
        for (file, src) in COUNTER {
            let ws = Workspace::from_source(src).unwrap();
            let failures: Vec<_> = ws.entries.iter().filter_map(|e| e.structure.as_ref().err()).collect();
            assert_eq!(failures.len(), 1, "{file}: {failures:?}");
            found.push(failures[0].clone());
        }
        assert!(matches!(found[0], Error::NotAssociative { .. }), "{:?}", found[0]);
        assert!(matches!(found[1], Error::NotDistributive { .. }), "{:?}", found[1]);
        assert!(matches!(found[2], Error::BottomNotAbsorbed { .. }), "{:?}", found[2]);
        assert!(matches!(found[3], Error::UnitLaw { .. }), "{:?}", found[3]);
        assert!(matches!(found[4], Error::M1Violation { .. }), "{:?}", found[4]);
        assert!(matches!(found[5], Error::M3Violation { .. }), "{:?}", found[5]);
    }
}
