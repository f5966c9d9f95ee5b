//! Integer flows on a Cayley graph, weightings, and the weighting tests that
//! decide membership in the hamiltonian lattice for the exceptional graphs.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{square_generator, CayleyGraph, ClassificationLabel, LabelTag};
use crate::dsl::{walk_vertices, DslError, Walk};
use crate::group::{GroupElement, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(String),
    #[error("walk does not return to its start")]
    NotClosed,
    #[error("walk repeats vertex {0}")]
    RepeatedVertex(String),
    #[error("flow has {got} coefficients, graph has {expected} edges")]
    GraphMismatch { expected: usize, got: usize },
    #[error("generators do not fit the {0} hypotheses")]
    RoleMismatch(String),
    #[error("{0} has no weighting characterization")]
    NotExceptionalClass(String),
    #[error("flow coefficient overflow")]
    Overflow,
    #[error("bad flow JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One coefficient per canonical edge of the graph it was built for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flow {
    pub coeffs: Vec<i64>,
}

impl Flow {
    pub fn zero(x: &CayleyGraph) -> Self {
        Self { coeffs: vec![0; x.edge_count()] }
    }

    pub fn from_coeffs(x: &CayleyGraph, coeffs: Vec<i64>) -> Result<Self, FlowError> {
        if coeffs.len() != x.edge_count() {
            return Err(FlowError::GraphMismatch { expected: x.edge_count(), got: coeffs.len() });
        }
        Ok(Self { coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &Flow) -> Result<Flow, FlowError> {
        self.zip(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &Flow) -> Result<Flow, FlowError> {
        self.zip(other, i64::checked_sub)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Flow, FlowError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| c.checked_mul(k).ok_or(FlowError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Flow { coeffs })
    }

    fn zip(&self, other: &Flow, op: fn(i64, i64) -> Option<i64>) -> Result<Flow, FlowError> {
        if self.len() != other.len() {
            return Err(FlowError::GraphMismatch { expected: self.len(), got: other.len() });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| op(a, b).ok_or(FlowError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Flow { coeffs })
    }

    /// Adds `sign` times the oriented edge `(v, s_k)`.
    pub fn add_edge(&mut self, x: &CayleyGraph, v: usize, k: usize, sign: i64) {
        let (id, o) = x.oriented_edge(v, k);
        self.coeffs[id] = self.coeffs[id].checked_add(o * sign).expect("flow coefficient overflow");
    }

    /// Net outflow at every vertex; all zero for a genuine flow.
    pub fn divergence(&self, x: &CayleyGraph) -> Vec<i64> {
        let mut div = vec![0i64; x.order()];
        for (e, &c) in x.edges().iter().zip(&self.coeffs) {
            let head = x.step(e.tail, e.gen);
            div[e.tail] += c;
            div[head] -= c;
        }
        div
    }

    pub fn is_conservative(&self, x: &CayleyGraph) -> bool {
        self.len() == x.edge_count() && self.divergence(x).iter().all(|&d| d == 0)
    }

    /// Flow on `[v](s)` for arbitrary orientation.
    pub fn edge_flow(&self, x: &CayleyGraph, v: usize, k: usize) -> i64 {
        let (id, sign) = x.oriented_edge(v, k);
        self.coeffs[id] * sign
    }
}

// Operator forms abort on overflow; use the `checked_*` methods to recover.
impl Add for &Flow {
    type Output = Flow;
    fn add(self, rhs: &Flow) -> Flow {
        self.checked_add(rhs).expect("flow addition")
    }
}

impl Sub for &Flow {
    type Output = Flow;
    fn sub(self, rhs: &Flow) -> Flow {
        self.checked_sub(rhs).expect("flow subtraction")
    }
}

impl Neg for &Flow {
    type Output = Flow;
    fn neg(self) -> Flow {
        self.checked_scale(-1).expect("flow negation")
    }
}

impl Mul<&Flow> for i64 {
    type Output = Flow;
    fn mul(self, rhs: &Flow) -> Flow {
        rhs.checked_scale(self).expect("flow scaling")
    }
}

/// Flow on the oriented edge `[tail](gen)` given as group elements.
pub fn edge_flow(x: &CayleyGraph, f: &Flow, tail: &GroupElement, gen: &GroupElement) -> Result<i64, FlowError> {
    let g = x.group();
    let not_edge = || FlowError::NotAnEdge(format!("[{}]({})", g.render_element(tail), g.render_element(gen)));
    g.validate(tail).map_err(|_| not_edge())?;
    let k = x.gen_index(gen).ok_or_else(not_edge)?;
    Ok(f.edge_flow(x, x.index(tail), k))
}

/// Sum of the oriented edges of any walk (no simplicity required).
pub fn walk_flow(x: &CayleyGraph, w: &Walk) -> Result<Flow, FlowError> {
    let verts = walk_vertices(x, w)?;
    let mut f = Flow::zero(x);
    for pair in verts.windows(2) {
        let k = x.gen_between(pair[0], pair[1]).expect("consecutive vertices are adjacent");
        f.add_edge(x, pair[0], k, 1);
    }
    Ok(f)
}

/// The unit circulation around a cycle, oriented by traversal.
pub fn cycle_to_flow(x: &CayleyGraph, w: &Walk) -> Result<Flow, FlowError> {
    let verts = walk_vertices(x, w)?;
    if w.is_empty() || verts.first() != verts.last() {
        return Err(FlowError::NotClosed);
    }
    let mut seen = vec![false; x.order()];
    for &v in &verts[..verts.len() - 1] {
        if std::mem::replace(&mut seen[v], true) {
            return Err(FlowError::RepeatedVertex(x.group().render_element(&x.vertex(v))));
        }
    }
    if w.len() < 3 {
        return Err(FlowError::RepeatedVertex(x.group().render_element(&w.base)));
    }
    walk_flow(x, w)
}

/// Flow of a cycle given as a closed list of vertex indices (first not repeated).
pub fn vertex_cycle_flow(x: &CayleyGraph, cycle: &[usize]) -> Flow {
    let mut f = Flow::zero(x);
    for i in 0..cycle.len() {
        let (v, w) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let k = x.gen_between(v, w).expect("cycle vertices are adjacent");
        f.add_edge(x, v, k, 1);
    }
    f
}

/// Parity of the edge-flow sum. Reversing one edge changes the sum by an
/// even amount, so the answer does not depend on the canonical set.
pub fn is_even(f: &Flow) -> bool {
    f.coeffs.iter().fold(0i64, |acc, &c| (acc + c.rem_euclid(2)) % 2) == 0
}

/// `f` moved by the automorphism `w ↦ v + w`.
pub fn translate_flow(x: &CayleyGraph, v: &GroupElement, f: &Flow) -> Flow {
    translate_flow_by_index(x, x.index(v), f)
}

pub fn translate_flow_by_index(x: &CayleyGraph, v: usize, f: &Flow) -> Flow {
    let g = x.group();
    let shift = x.vertex(v);
    let mut out = Flow::zero(x);
    for (e, &c) in x.edges().iter().zip(&f.coeffs) {
        if c != 0 {
            let tail = x.index(&g.add(&x.vertex(e.tail), &shift));
            out.add_edge(x, tail, e.gen, c);
        }
    }
    out
}

/// One weight per canonical edge; the reversed orientation carries the negation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weighting {
    pub weights: Vec<i64>,
}

impl Weighting {
    pub fn oriented(&self, x: &CayleyGraph, v: usize, k: usize) -> i64 {
        let (id, sign) = x.oriented_edge(v, k);
        self.weights[id] * sign
    }
}

pub fn weighted_sum(f: &Flow, phi: &Weighting) -> Result<i64, FlowError> {
    if f.len() != phi.weights.len() {
        return Err(FlowError::GraphMismatch { expected: phi.weights.len(), got: f.len() });
    }
    let total: i128 = f.coeffs.iter().zip(&phi.weights).map(|(&a, &b)| a as i128 * b as i128).sum();
    i64::try_from(total).map_err(|_| FlowError::Overflow)
}

/// Which connection-set elements play the named roles of a lemma.
///
/// Ladders, prisms, `K3 x K3` and the degree-4 odd-`t` case use `t` and `u`;
/// the square of a cycle uses `s` with `t = 2s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roles {
    pub s: Option<GroupElement>,
    pub t: GroupElement,
    pub u: Option<GroupElement>,
}

fn role_error(label: &ClassificationLabel) -> FlowError {
    FlowError::RoleMismatch(label.to_string())
}

/// Picks roles satisfying the lemma hypotheses for `label`.
pub fn infer_roles(x: &CayleyGraph, label: &ClassificationLabel) -> Result<Roles, FlowError> {
    if !label.is_exceptional() {
        return Err(FlowError::NotExceptionalClass(label.to_string()));
    }
    let g = x.group();
    let s_elems = x.conn().elements();
    let order = |e: &GroupElement| g.element_order(e).expect("valid element");
    match label.tag {
        LabelTag::SquareOfEvenCycle => {
            let s = square_generator(x).ok_or_else(|| role_error(label))?;
            let t = g.add(&s, &s);
            Ok(Roles { s: Some(s), t, u: None })
        }
        LabelTag::MobiusLadder | LabelTag::PrismOverCycle => {
            let t = s_elems.iter().find(|e| order(e) > 2).ok_or_else(|| role_error(label))?;
            let u = s_elems.iter().find(|e| order(e) == 2).ok_or_else(|| role_error(label))?;
            Ok(Roles { s: None, t: t.clone(), u: Some(u.clone()) })
        }
        LabelTag::K3xK3 => {
            let t = s_elems[0].clone();
            let u = s_elems.iter().find(|e| **e != t && **e != g.neg(&t)).ok_or_else(|| role_error(label))?;
            Ok(Roles { s: None, t, u: Some(u.clone()) })
        }
        LabelTag::Weird4 => {
            let t = s_elems.iter().find(|e| order(e) % 2 == 1).ok_or_else(|| role_error(label))?;
            let u = s_elems.iter().find(|e| **e != *t && **e != g.neg(t)).ok_or_else(|| role_error(label))?;
            Ok(Roles { s: None, t: t.clone(), u: Some(u.clone()) })
        }
        _ => Err(FlowError::NotExceptionalClass(label.to_string())),
    }
}

/// Smallest `j ≥ 0` with `v - j u ∈ ⟨t⟩`.
fn coset_index(x: &CayleyGraph, in_t: &[bool], u: &GroupElement, v: usize) -> u64 {
    let g = x.group();
    let mut cur = x.vertex(v);
    let mut j = 0;
    while !in_t[x.index(&cur)] {
        cur = g.sub(&cur, u);
        j += 1;
    }
    j
}

/// Weighting of the lemma for `label`, built from a per-vertex weight `w(v)`
/// on the oriented `t`-edge `[v](t)` (or on `u`-edges for ladders).
pub fn standard_weighting(
    x: &CayleyGraph,
    label: &ClassificationLabel,
    roles: &Roles,
) -> Result<Weighting, FlowError> {
    check_roles(x, label, roles)?;
    let g = x.group();
    let bad = || role_error(label);
    let t = &roles.t;
    let tk = x.gen_index(t).ok_or_else(bad)?;
    let mut in_t = vec![false; x.order()];
    let mut cur = g.identity();
    let mut powers = vec![];
    loop {
        in_t[x.index(&cur)] = true;
        powers.push(x.index(&cur));
        cur = g.add(&cur, t);
        if cur.is_identity() {
            break;
        }
    }
    let sign = |j: u64| if j.is_multiple_of(2) { 1 } else { -1 };
    // (generator position, weight of [v](gen)) for the weighted generator.
    let (wk, per_vertex): (usize, Box<dyn Fn(usize) -> i64>) = match label.tag {
        LabelTag::MobiusLadder => {
            let u = roles.u.as_ref().ok_or_else(bad)?;
            let mut exp = vec![0u64; x.order()];
            for (i, &p) in powers.iter().enumerate() {
                exp[p] = i as u64;
            }
            (x.gen_index(u).ok_or_else(bad)?, Box::new(move |v| sign(exp[v])))
        }
        LabelTag::SquareOfEvenCycle => {
            let s = roles.s.as_ref().ok_or_else(bad)?;
            let mut exp = vec![0u64; x.order()];
            let mut cur = g.identity();
            for i in 0..x.order() as u64 {
                exp[x.index(&cur)] = i;
                cur = g.add(&cur, s);
            }
            (tk, Box::new(move |v| sign(exp[v])))
        }
        LabelTag::PrismOverCycle if !label.bipartite => {
            let in_t = in_t.clone();
            (tk, Box::new(move |v| i64::from(in_t[v])))
        }
        LabelTag::PrismOverCycle | LabelTag::Weird4 => {
            let u = roles.u.as_ref().ok_or_else(bad)?;
            let j: Vec<u64> = (0..x.order()).map(|v| coset_index(x, &in_t, u, v)).collect();
            (tk, Box::new(move |v| sign(j[v])))
        }
        LabelTag::K3xK3 => {
            let u = roles.u.as_ref().ok_or_else(bad)?;
            let j: Vec<u64> = (0..x.order()).map(|v| coset_index(x, &in_t, u, v)).collect();
            (tk, Box::new(move |v| [1, -1, 0][j[v] as usize]))
        }
        _ => return Err(FlowError::NotExceptionalClass(label.to_string())),
    };
    let mut weights = vec![0i64; x.edge_count()];
    for v in 0..x.order() {
        let (id, o) = x.oriented_edge(v, wk);
        // Involution edges appear twice; both presentations agree.
        weights[id] = o * per_vertex(v);
    }
    Ok(Weighting { weights })
}

fn check_roles(x: &CayleyGraph, label: &ClassificationLabel, roles: &Roles) -> Result<(), FlowError> {
    let g = x.group();
    let bad = || role_error(label);
    let order = |e: &GroupElement| g.element_order(e).map_err(FlowError::from);
    let in_s = |e: &GroupElement| x.conn().contains(e);
    let n = x.order() as u64;
    let t = &roles.t;
    if !in_s(t) {
        return Err(bad());
    }
    let generated = |gens: &[GroupElement]| g.subgroup_generated(gens).map(|h| h.order);
    let ok = match label.tag {
        LabelTag::MobiusLadder => {
            let u = roles.u.as_ref().ok_or_else(bad)?;
            label.bipartite
                && x.degree() == 3
                && in_s(u)
                && order(t)? == n
                && (n / 2) % 2 == 1
                && *u == g.scale((n / 2) as i64, t)
        }
        LabelTag::PrismOverCycle => {
            let u = roles.u.as_ref().ok_or_else(bad)?;
            let m = order(t)?;
            x.degree() == 3
                && in_s(u)
                && order(u)? == 2
                && 2 * m == n
                && generated(std::slice::from_ref(t))? * 2 == generated(&[t.clone(), u.clone()])?
                && (m % 2 == 0) == label.bipartite
        }
        LabelTag::SquareOfEvenCycle => {
            let s = roles.s.as_ref().ok_or_else(bad)?;
            x.degree() == 4 && in_s(s) && *t == g.add(s, s) && order(s)? == n && n.is_multiple_of(2)
        }
        LabelTag::Weird4 => {
            let u = roles.u.as_ref().ok_or_else(bad)?;
            x.degree() == 4
                && in_s(u)
                && !label.bipartite
                && !n.is_multiple_of(4)
                && order(t)? % 2 == 1
                && *t != g.scale(2, u)
                && *t != g.scale(-2, u)
                && square_generator(x).is_none()
        }
        LabelTag::K3xK3 => {
            let u = roles.u.as_ref().ok_or_else(bad)?;
            x.degree() == 4
                && in_s(u)
                && g.factors().iter().product::<u64>() == 9
                && order(t)? == 3
                && order(u)? == 3
                && generated(&[t.clone(), u.clone()])? == 9
                && generated(&[t.clone(), u.clone()])? != generated(std::slice::from_ref(t))?
        }
        _ => return Err(FlowError::NotExceptionalClass(label.to_string())),
    };
    if ok {
        Ok(())
    } else {
        Err(bad())
    }
}

/// The modulus in the divisibility test for `label`.
pub fn weighting_modulus(x: &CayleyGraph, label: &ClassificationLabel) -> Result<i64, FlowError> {
    let n = x.order() as i64;
    Ok(match label.tag {
        LabelTag::K3xK3 => 3,
        LabelTag::MobiusLadder if label.bipartite => n / 2,
        LabelTag::PrismOverCycle => n / 2 - 1,
        LabelTag::SquareOfEvenCycle => n - 2,
        LabelTag::Weird4 => 4,
        _ => return Err(FlowError::NotExceptionalClass(label.to_string())),
    })
}

/// Decides `f ∈ H` by the weighting characterization for exceptional graphs.
pub fn membership_by_weighting(x: &CayleyGraph, label: &ClassificationLabel, f: &Flow) -> Result<bool, FlowError> {
    let roles = infer_roles(x, label)?;
    membership_with_roles(x, label, &roles, f)
}

pub fn membership_with_roles(
    x: &CayleyGraph,
    label: &ClassificationLabel,
    roles: &Roles,
    f: &Flow,
) -> Result<bool, FlowError> {
    let phi = standard_weighting(x, label, roles)?;
    let m = weighting_modulus(x, label)?;
    let wt = weighted_sum(f, &phi)?;
    let mut member = wt.rem_euclid(m) == 0;
    if label.tag == LabelTag::PrismOverCycle && !label.bipartite {
        // The extra edge condition: f on (t) is minus f on [u](t).
        let u = roles.u.as_ref().ok_or_else(|| role_error(label))?;
        let tk = x.gen_index(&roles.t).ok_or_else(|| role_error(label))?;
        member &= f.edge_flow(x, 0, tk) == -f.edge_flow(x, x.index(u), tk);
    }
    Ok(member)
}

#[derive(Serialize, Deserialize)]
struct EdgeEntry {
    tail: Vec<u64>,
    gen: Vec<u64>,
    coeff: i64,
}

/// `[{tail, gen, coeff}, ...]` over canonical edges in canonical order.
pub fn flow_to_json(x: &CayleyGraph, f: &Flow) -> serde_json::Value {
    let entries: Vec<EdgeEntry> = x
        .edges()
        .iter()
        .zip(&f.coeffs)
        .map(|(e, &c)| EdgeEntry {
            tail: x.vertex(e.tail).coords().to_vec(),
            gen: x.gen_element(e.gen).coords().to_vec(),
            coeff: c,
        })
        .collect();
    serde_json::to_value(entries).expect("serializable")
}

/// Reads the JSON form back; entries may use either orientation and may be
/// omitted (zero).
pub fn flow_from_json(x: &CayleyGraph, value: &serde_json::Value) -> Result<Flow, FlowError> {
    let entries: Vec<EdgeEntry> =
        serde_json::from_value(value.clone()).map_err(|e| FlowError::Json(e.to_string()))?;
    let g = x.group();
    let mut f = Flow::zero(x);
    for e in entries {
        let to_i = |c: &[u64]| c.iter().map(|&v| v as i64).collect::<Vec<_>>();
        let tail = g.element(&to_i(&e.tail))?;
        let gen = g.element(&to_i(&e.gen))?;
        let k = x.gen_index(&gen).ok_or_else(|| FlowError::NotAnEdge(g.render_element(&gen)))?;
        f.add_edge(x, x.index(&tail), k, e.coeff);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::classify;
    use crate::dsl::{expand_text, Bindings};

    fn graph(g: &str, s: &str) -> CayleyGraph {
        CayleyGraph::parse(g, s).unwrap()
    }

    fn walk(x: &CayleyGraph, text: &str, b: &[(&str, &[i64])]) -> Walk {
        let g = x.group();
        let mut bind = Bindings::new();
        for (k, v) in b {
            bind = bind.gen(k, g.reduce(v).unwrap());
        }
        expand_text(text, &bind, g).unwrap()
    }

    #[test]
    fn antisymmetry_and_zero() {
        let x = graph("Z6", "1,5");
        let g = x.group();
        let mut f = Flow::zero(&x);
        assert_eq!(edge_flow(&x, &f, &g.identity(), &g.reduce(&[1]).unwrap()), Ok(0));
        f.add_edge(&x, 0, x.gen_index(&g.reduce(&[1]).unwrap()).unwrap(), 3);
        assert_eq!(edge_flow(&x, &f, &g.reduce(&[1]).unwrap(), &g.reduce(&[5]).unwrap()), Ok(-3));
        assert!(edge_flow(&x, &f, &g.identity(), &g.reduce(&[2]).unwrap()).is_err());
    }

    #[test]
    fn cycle_flows() {
        let x = graph("Z4xZ4", "(1,0),(3,0),(0,1),(0,3)");
        let q = walk(&x, "s,t,s^-1,t^-1", &[("s", &[1, 0]), ("t", &[0, 1])]);
        let f = cycle_to_flow(&x, &q).unwrap();
        assert_eq!(f.coeffs.iter().filter(|&&c| c != 0).count(), 4);
        assert!(f.is_conservative(&x));
        assert!(is_even(&f));
        let r = cycle_to_flow(&x, &q.reversed(x.group())).unwrap();
        assert_eq!(r, -&f);

        let c7 = graph("Z7", "1,6");
        let full = cycle_to_flow(&c7, &walk(&c7, "s^7", &[("s", &[1])])).unwrap();
        assert!(full.coeffs.iter().all(|&c| c.abs() == 1));
        assert!(!is_even(&full));

        let open = walk(&x, "s,t", &[("s", &[1, 0]), ("t", &[0, 1])]);
        assert_eq!(cycle_to_flow(&x, &open), Err(FlowError::NotClosed));
        let rep = walk(&x, "s^4,t,s^-1,s,t^-1", &[("s", &[1, 0]), ("t", &[0, 1])]);
        assert!(matches!(cycle_to_flow(&x, &rep), Err(FlowError::RepeatedVertex(_))));
    }

    #[test]
    fn triangle_is_odd() {
        let x = graph("Z3xZ3", "(1,0),(2,0),(0,1),(0,2)");
        let f = cycle_to_flow(&x, &walk(&x, "t^3", &[("t", &[1, 0])])).unwrap();
        assert!(!is_even(&f));
    }

    #[test]
    fn translation_preserves_conservation() {
        let x = graph("Z2xZ6", "(0,1),(0,5),(1,0),(1,3)");
        let q = walk(&x, "s,t,s^-1,t^-1", &[("s", &[0, 1]), ("t", &[1, 0])]);
        let f = cycle_to_flow(&x, &q).unwrap();
        for v in x.group().elements() {
            let h = translate_flow(&x, &v, &f);
            assert!(h.is_conservative(&x));
            assert_eq!(h, cycle_to_flow(&x, &q.translated(x.group(), &v)).unwrap());
        }
        assert_eq!(translate_flow(&x, &x.group().identity(), &f), f);
    }

    #[test]
    fn bipartite_mobius_weighting() {
        let x = graph("Z6", "1,5,3");
        let label = classify(&x);
        let phi = standard_weighting(&x, &label, &infer_roles(&x, &label).unwrap()).unwrap();
        let uk = x.gen_index(&x.group().reduce(&[3]).unwrap()).unwrap();
        assert_eq!(phi.oriented(&x, 0, uk), 1);
        assert_eq!(phi.oriented(&x, 1, uk), -1);
        let tk = x.gen_index(&x.group().reduce(&[1]).unwrap()).unwrap();
        assert!((0..6).all(|v| phi.oriented(&x, v, tk) == 0));
    }

    #[test]
    fn weird_case_weighting() {
        let x = graph("Z10", "2,8,3,7");
        let label = classify(&x);
        let roles = infer_roles(&x, &label).unwrap();
        let phi = standard_weighting(&x, &label, &roles).unwrap();
        let u = roles.u.clone().unwrap();
        let uk = x.gen_index(&u).unwrap();
        assert!((0..10).all(|v| phi.oriented(&x, v, uk) == 0));
        let q = walk(&x, "s,t,s^-1,t^-1", &[("s", &[2]), ("t", &[3])]);
        let f = cycle_to_flow(&x, &q).unwrap();
        assert_eq!(weighted_sum(&f, &phi).unwrap().abs(), 2);
        assert_eq!(membership_by_weighting(&x, &label, &f), Ok(false));
        assert_eq!(membership_by_weighting(&x, &label, &(2 * &f)), Ok(true));
    }

    #[test]
    fn square_cycle_weighting() {
        let x = graph("Z8", "1,7,2,6");
        let label = classify(&x);
        let roles = infer_roles(&x, &label).unwrap();
        let phi = standard_weighting(&x, &label, &roles).unwrap();
        let sk = x.gen_index(roles.s.as_ref().unwrap()).unwrap();
        assert!((0..8).all(|v| phi.oriented(&x, v, sk) == 0));
        let c = walk(&x, "t^3,s,t^-3,s^-1", &[("s", &[1]), ("t", &[2])]);
        let wt = weighted_sum(&cycle_to_flow(&x, &c).unwrap(), &phi).unwrap();
        assert_eq!(wt.abs(), 6);
    }

    #[test]
    fn role_mismatch_detected() {
        let x = graph("Z6", "1,5,3");
        let label = classify(&x);
        let g = x.group();
        let roles = Roles { s: None, t: g.reduce(&[3]).unwrap(), u: Some(g.reduce(&[1]).unwrap()) };
        assert!(matches!(standard_weighting(&x, &label, &roles), Err(FlowError::RoleMismatch(_))));
        let y = graph("Z12", "1,11,5,7");
        assert!(matches!(infer_roles(&y, &classify(&y)), Err(FlowError::NotExceptionalClass(_))));
    }

    #[test]
    fn json_roundtrip() {
        let x = graph("Z2xZ4", "(0,1),(0,3),(1,0)");
        let q = walk(&x, "s,t,s^-1,t^-1", &[("s", &[0, 1]), ("t", &[1, 0])]);
        let f = cycle_to_flow(&x, &q).unwrap();
        let j = flow_to_json(&x, &f);
        assert_eq!(j.as_array().unwrap().len(), x.edge_count());
        assert_eq!(flow_from_json(&x, &j).unwrap(), f);
    }
}
