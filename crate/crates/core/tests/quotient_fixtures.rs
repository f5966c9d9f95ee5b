mod common;

use common::graph;
use hamflow_core::cayley::{classify, predicted_quotients};
use hamflow_core::ham::SpanConfig;
use hamflow_core::verify::compute_quotients;
use hamflow_core::QuotientDescriptor;

fn q(free: usize, torsion: &[u64]) -> QuotientDescriptor {
    QuotientDescriptor::from_parts(free, torsion)
}

/// (group, conn, expected F/H or None, expected E/H or None)
fn table() -> Vec<(&'static str, &'static str, Option<QuotientDescriptor>, Option<QuotientDescriptor>)> {
    vec![
        ("Z3xZ3", "(1,0),(2,0),(0,1),(0,2)", Some(q(0, &[3])), None),
        ("Z6", "1,5,3", None, Some(q(0, &[3]))),
        ("Z8", "1,7,4", Some(q(0, &[2])), Some(q(0, &[]))),
        ("Z4xZ2", "(1,0),(3,0),(0,1)", None, Some(q(0, &[3]))),
        ("Z3xZ2", "(1,0),(2,0),(0,1)", Some(q(1, &[2])), None),
        ("Z8", "1,7,2,6", Some(q(0, &[6])), None),
        ("Z10", "2,8,3,7", Some(q(0, &[4])), Some(q(0, &[2]))),
        ("Z8", "1,7,3,5", Some(q(0, &[])), None),
    ]
}

#[test]
fn fixture_table_exact() {
    for (g, s, fh, eh) in table() {
        let x = graph(g, s);
        let got = compute_quotients(&x, &SpanConfig::default()).unwrap().pair;
        if let Some(fh) = fh {
            assert_eq!(got.fh, fh, "F/H of {g} {{{s}}}");
        }
        if let Some(eh) = eh {
            assert_eq!(got.eh, eh, "E/H of {g} {{{s}}}");
        }
        let (pfh, peh) = predicted_quotients(&classify(&x)).unwrap();
        assert_eq!((got.fh, got.eh), (pfh, peh), "prediction for {g} {{{s}}}");
    }
}

#[test]
fn prisms_over_odd_cycles_have_free_rank_one() {
    for n in [3u64, 5, 7] {
        let conn = format!("(1,0),({},0),(0,1)", n - 1);
        let x = graph(&format!("Z{n}xZ2"), &conn);
        let got = compute_quotients(&x, &SpanConfig::default()).unwrap().pair;
        assert_eq!(got.fh, q(1, &[n - 1]), "n = {n}");
    }
}

#[test]
fn seeds_do_not_change_quotients() {
    let x = graph("Z12", "1,11,4,8");
    let a = compute_quotients(&x, &SpanConfig { seed: 1, ..SpanConfig::default() }).unwrap().pair;
    let b = compute_quotients(&x, &SpanConfig { seed: 99, ..SpanConfig::default() }).unwrap().pair;
    assert_eq!(a, b);
}
