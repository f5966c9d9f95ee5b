mod common;

use common::graph;
use hamflow_core::cayley::{classify, LabelTag};
use hamflow_core::verify::cross_validate_membership;

/// One fixture per weighting characterization, plus a second Weird4 graph.
const FIXTURES: &[(&str, &str, LabelTag)] = &[
    ("Z3xZ3", "(1,0),(2,0),(0,1),(0,2)", LabelTag::K3xK3),
    ("Z6", "1,5,3", LabelTag::MobiusLadder),
    ("Z5xZ2", "(1,0),(4,0),(0,1)", LabelTag::PrismOverCycle),
    ("Z4xZ2", "(1,0),(3,0),(0,1)", LabelTag::PrismOverCycle),
    ("Z8", "1,7,2,6", LabelTag::SquareOfEvenCycle),
    ("Z10", "2,8,3,7", LabelTag::Weird4),
    ("Z14", "2,12,3,11", LabelTag::Weird4),
];

#[test]
fn weighting_agrees_with_lattice_membership() {
    for (g, s, tag) in FIXTURES {
        let x = graph(g, s);
        let label = classify(&x);
        assert_eq!(label.tag, *tag, "{g} {s}");
        let even_only = x.order().is_multiple_of(2);
        let r = cross_validate_membership(&x, &label, 1000, 7, even_only).unwrap();
        assert!(r.discrepancies.is_empty(), "{g} {s}: {:?}", r.discrepancies.first());
        assert!(r.members > 0 && r.members < 1000, "{g} {s}: trivial sample");
    }
}

#[test]
fn unrestricted_flows_agree_too() {
    for (g, s, _) in FIXTURES {
        let x = graph(g, s);
        let r = cross_validate_membership(&x, &classify(&x), 300, 11, false).unwrap();
        assert!(r.discrepancies.is_empty(), "{g} {s}");
    }
}
