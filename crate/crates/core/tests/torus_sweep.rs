mod common;

use common::graph;
use hamflow_core::ham::cycle_walk;
use hamflow_core::torus::{build_embedding, congruence_sweep};

fn sweep(group: &str, conn: &str, t: &str, u: &str) {
    let x = graph(group, conn);
    let g = x.group();
    let emb = build_embedding(&x, &g.parse_element(t).unwrap(), &g.parse_element(u).unwrap()).unwrap();
    let (rows, summary) = congruence_sweep(&x, &emb, 12).unwrap();
    let bad: Vec<String> =
        rows.iter().filter(|r| !r.report.holds()).map(|r| format!("{:?}: {:?}", r.vertices, r.report.violations)).collect();
    assert!(bad.is_empty(), "{group}: {}", bad.join("\n"));
    assert_eq!(summary.violations, 0);
    assert!(summary.hamiltonian > 0 && summary.essential_even > 0 && summary.non_essential > 0 && summary.monotonic > 0);
    for r in rows.iter().filter(|r| r.report.essential && r.report.len % 2 == 0) {
        let mut verts = r.vertices.clone();
        verts.pop();
        let w = cycle_walk(&x, &verts);
        let tallies = emb.region_tallies(&x, &w).unwrap();
        for t in tallies {
            assert_eq!(t[0] + t[1], x.order() as i64 - r.report.len, "{group} {verts:?}");
        }
        if r.report.hamiltonian {
            assert_eq!(r.report.wt.rem_euclid(4), 0);
        }
    }
}

#[test]
fn z10_congruences() {
    sweep("Z10", "2,8,3,7", "2", "3");
}

#[test]
fn z14_congruences() {
    sweep("Z14", "2,12,3,11", "2", "3");
}

#[test]
fn negated_generators() {
    sweep("Z10", "2,8,3,7", "8", "7");
}

#[test]
fn even_order_t_is_rejected() {
    let x = graph("Z10", "2,8,3,7");
    let g = x.group();
    assert!(build_embedding(&x, &g.parse_element("3").unwrap(), &g.parse_element("2").unwrap()).is_err());
}
