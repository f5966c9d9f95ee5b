mod common;

use common::graph;
use hamflow_core::dsl::{classify_walk, expand_symbolic, expand_text, parse, render, Bindings, PathExpr, WalkKind};
use proptest::prelude::*;

fn symbols(text: &str) -> Vec<String> {
    let e = parse(text).unwrap();
    expand_symbolic(&e, &Bindings::new(), None).unwrap().steps.iter().map(|s| s.to_string()).collect()
}

#[test]
fn golden_examples() {
    assert_eq!(symbols("(s^2,t)^3#,u"), ["s", "s", "t", "s", "s", "t", "s", "s", "u"]);
    assert_eq!(symbols("((s^2,t)^0,u)"), ["u"]);
    assert_eq!(
        symbols("((s^2,t_i)_{i=1}^3,u,(s^2,t_i)_{i=1}^0,u)"),
        ["s", "s", "t_1", "s", "s", "t_2", "s", "s", "t_3", "u", "u"]
    );
    assert_eq!(symbols("((t^{2},s,t^{-2},s))^{1}"), ["t", "t", "s", "t^-1", "t^-1", "s"]);
}

#[test]
fn mobius_two_layer_cycle() {
    let x = graph("Z2xZ6", "(0,3),(0,1),(0,5),(1,0)");
    let b = Bindings::parse(x.group(), "s=(0,3),t=(0,1),u=(1,0),n=3").unwrap();
    let w = expand_text("((s,t)^n#,u,(s,t^{-1})^n#,u)", &b, x.group()).unwrap();
    assert_eq!(classify_walk(&x, &w).unwrap(), WalkKind::HamiltonianCycle);
}

/// Random well-formed path text over `s, t, u`.
fn text() -> impl Strategy<Value = String> {
    let leaf = (prop::sample::select(vec!["s", "t", "u"]), prop::option::of(-3i64..=3)).prop_map(|(g, e)| match e {
        Some(e) => format!("{g}^{{{e}}}"),
        None => g.to_string(),
    });
    leaf.prop_recursive(3, 24, 4, |inner| {
        (prop::collection::vec(inner, 1..4), prop::option::of(0i64..=3), any::<bool>()).prop_map(|(items, pow, sharp)| {
            let mut s = format!("({})", items.join(","));
            if let Some(p) = pow {
                s.push_str(&format!("^{{{p}}}"));
            }
            if sharp {
                s.push('#');
            }
            s
        })
    })
}

fn expansion(e: &PathExpr) -> Option<Vec<String>> {
    expand_symbolic(e, &Bindings::new(), None).ok().map(|w| w.steps.iter().map(|s| s.to_string()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn render_then_parse_is_identity(t in text()) {
        let e = parse(&t).unwrap();
        let again = parse(&render(&e)).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(expansion(&again), expansion(&e));
    }

    #[test]
    fn powers_repeat(t in text(), k in 0i64..4) {
        let base = parse(&t).unwrap();
        let Some(one) = expansion(&base) else { return Ok(()) };
        let powered = parse(&format!("({t})^{{{k}}}")).unwrap();
        let many = expansion(&powered).unwrap();
        prop_assert_eq!(many.len(), one.len() * k as usize);
    }

    #[test]
    fn sharp_drops_one(t in text()) {
        let Some(one) = expansion(&parse(&t).unwrap()) else { return Ok(()) };
        let sharp = expansion(&parse(&format!("({t})#")).unwrap());
        if one.is_empty() {
            prop_assert!(sharp.is_none());
        } else {
            prop_assert_eq!(sharp.unwrap(), one[..one.len() - 1].to_vec());
        }
    }
}
