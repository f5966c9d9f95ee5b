//! Cayley graphs `Cay(G;S)`, canonical edge orientation, and the structural
//! classification that decides which quotient shapes to expect.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{AbelianGroup, GroupElement, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("the identity is not allowed in a connection set")]
    IdentityInS,
    #[error("connection set is not closed under negation: missing {0}")]
    NotSymmetric(String),
    #[error("connection set does not generate the group (subgroup of index {0})")]
    NotGenerating(u64),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(String),
    #[error("unknown classification label `{0}`")]
    UnknownLabel(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A symmetric, identity-free set of group elements, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConnectionSet {
    elements: Vec<GroupElement>,
}

impl ConnectionSet {
    pub fn new(group: &AbelianGroup, elems: &[GroupElement]) -> Result<Self, GraphError> {
        let mut elements = elems.to_vec();
        for g in &elements {
            group.validate(g)?;
        }
        elements.sort();
        elements.dedup();
        if elements.iter().any(GroupElement::is_identity) {
            return Err(GraphError::IdentityInS);
        }
        for g in &elements {
            let inv = group.neg(g);
            if elements.binary_search(&inv).is_err() {
                return Err(GraphError::NotSymmetric(group.render_element(&inv)));
            }
        }
        Ok(Self { elements })
    }

    /// Comma-separated element literals; commas inside parentheses belong to
    /// the element. No symmetric closure is applied.
    pub fn parse(group: &AbelianGroup, text: &str) -> Result<Self, GraphError> {
        let elems = split_top_level(text)
            .into_iter()
            .filter(|p| !p.trim().is_empty())
            .map(|p| group.parse_element(&p))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, &elems)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn render(&self, group: &AbelianGroup) -> String {
        let parts: Vec<String> = self.elements.iter().map(|g| group.render_element(g)).collect();
        parts.join(",")
    }
}

/// Splits on commas that are not nested inside `()` or `[]`.
pub fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out
}

/// One undirected edge, stored as the oriented representative `(tail, gen)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalEdge {
    pub tail: usize,
    /// Position of the generator in the sorted connection set.
    pub gen: usize,
}

/// The Cayley graph with lookup tables over vertex indices.
///
/// Vertices are group elements indexed in lexicographic order, so index
/// comparison is element comparison.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    group: AbelianGroup,
    conn: ConnectionSet,
    n: usize,
    gen_vertex: Vec<usize>,
    gen_inverse: Vec<usize>,
    nbr: Vec<usize>,
    edges: Vec<CanonicalEdge>,
    /// For `(v, k)`: canonical edge id and +1/-1 for agreeing/opposite orientation.
    edge_of: Vec<(u32, i8)>,
}

impl CayleyGraph {
    pub fn new(group: AbelianGroup, conn: ConnectionSet) -> Result<Self, GraphError> {
        let sub = group.subgroup_generated(conn.elements())?;
        if sub.index != 1 {
            return Err(GraphError::NotGenerating(sub.index));
        }
        let n = group.order() as usize;
        let deg = conn.len();
        let gen_vertex: Vec<usize> = conn.elements().iter().map(|g| group.index_of(g)).collect();
        let gen_inverse: Vec<usize> = conn
            .elements()
            .iter()
            .map(|g| conn.elements().binary_search(&group.neg(g)).expect("symmetric"))
            .collect();
        let mut nbr = vec![0usize; n * deg];
        for v in 0..n {
            let x = group.element_at(v);
            for (k, s) in conn.elements().iter().enumerate() {
                nbr[v * deg + k] = group.index_of(&group.add(&x, s));
            }
        }
        // (v, k) and (v + s_k, -s_k) present the same edge; the representative
        // is the lexicographically smaller (tail, gen) pair.
        let mut edges = Vec::new();
        for v in 0..n {
            for k in 0..deg {
                let w = nbr[v * deg + k];
                let kinv = gen_inverse[k];
                if (v, gen_vertex[k]) <= (w, gen_vertex[kinv]) {
                    edges.push(CanonicalEdge { tail: v, gen: k });
                }
            }
        }
        edges.sort();
        let mut edge_of = vec![(0u32, 0i8); n * deg];
        for (id, e) in edges.iter().enumerate() {
            edge_of[e.tail * deg + e.gen] = (id as u32, 1);
            let w = nbr[e.tail * deg + e.gen];
            let kinv = gen_inverse[e.gen];
            if (w, kinv) != (e.tail, e.gen) {
                edge_of[w * deg + kinv] = (id as u32, -1);
            }
        }
        Ok(Self { group, conn, n, gen_vertex, gen_inverse, nbr, edges, edge_of })
    }

    /// Convenience constructor from raw factor list and coordinate lists.
    pub fn from_parts(factors: &[u64], conn: &[&[i64]]) -> Result<Self, GraphError> {
        let group = AbelianGroup::new(factors)?;
        let elems = conn.iter().map(|c| group.reduce(c)).collect::<Result<Vec<_>, _>>()?;
        let conn = ConnectionSet::new(&group, &elems)?;
        Self::new(group, conn)
    }

    /// Parses the CLI forms, e.g. `Z10` and `2,8,3,7`.
    pub fn parse(group: &str, conn: &str) -> Result<Self, GraphError> {
        let group: AbelianGroup = group.parse()?;
        let conn = ConnectionSet::parse(&group, conn)?;
        Self::new(group, conn)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn conn(&self) -> &ConnectionSet {
        &self.conn
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.conn.len()
    }

    pub fn edges(&self) -> &[CanonicalEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The vertex `v + s_k`.
    #[inline]
    pub fn step(&self, v: usize, k: usize) -> usize {
        self.nbr[v * self.conn.len() + k]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        let d = self.conn.len();
        &self.nbr[v * d..(v + 1) * d]
    }

    pub fn gen_element(&self, k: usize) -> &GroupElement {
        &self.conn.elements()[k]
    }

    pub fn gen_vertex(&self, k: usize) -> usize {
        self.gen_vertex[k]
    }

    pub fn gen_inverse(&self, k: usize) -> usize {
        self.gen_inverse[k]
    }

    pub fn gen_index(&self, g: &GroupElement) -> Option<usize> {
        self.conn.elements().binary_search(g).ok()
    }

    /// Canonical edge id and orientation sign of the oriented edge `(v, s_k)`.
    #[inline]
    pub fn oriented_edge(&self, v: usize, k: usize) -> (usize, i64) {
        let (id, sign) = self.edge_of[v * self.conn.len() + k];
        (id as usize, sign as i64)
    }

    /// Generator position `k` with `v + s_k = w`, if `v` and `w` are adjacent.
    pub fn gen_between(&self, v: usize, w: usize) -> Option<usize> {
        self.neighbors(v).iter().position(|&x| x == w)
    }

    pub fn vertex(&self, v: usize) -> GroupElement {
        self.group.element_at(v)
    }

    pub fn index(&self, g: &GroupElement) -> usize {
        self.group.index_of(g)
    }

    pub fn describe_edge(&self, id: usize) -> String {
        let e = self.edges[id];
        format!(
            "[{}]({})",
            self.group.render_element(&self.vertex(e.tail)),
            self.group.render_element(self.gen_element(e.gen))
        )
    }

    /// Proper 2-coloring by breadth-first search, if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = VecDeque::from([0usize]);
        color[0] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return None;
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Graph string used in reports, e.g. `Cay(Z10;{2,3,7,8})`.
    pub fn id(&self) -> String {
        format!("Cay({};{{{}}})", self.group, self.conn.render(&self.group))
    }
}

/// Isomorphism test for vertex-transitive graphs of equal order and degree.
///
/// Vertex 0 of `a` is pinned to vertex 0 of `b`; the remaining vertices are
/// matched in breadth-first order by backtracking.
pub fn isomorphic(a: &CayleyGraph, b: &CayleyGraph) -> bool {
    if a.order() != b.order() || a.degree() != b.degree() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.order();
    let adj = |g: &CayleyGraph| {
        let mut m = vec![false; n * n];
        for v in 0..n {
            for &w in g.neighbors(v) {
                m[v * n + w] = true;
            }
        }
        m
    };
    let (adj_a, adj_b) = (adj(a), adj(b));
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in a.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;

    fn extend(
        pos: usize,
        order: &[usize],
        parent: &[usize],
        map: &mut [usize],
        used: &mut [bool],
        b: &CayleyGraph,
        adj_a: &[bool],
        adj_b: &[bool],
    ) -> bool {
        let n = map.len();
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        let image_parent = map[parent[v]];
        for &cand in b.neighbors(image_parent) {
            if used[cand] {
                continue;
            }
            let consistent = order[..pos].iter().all(|&u| adj_a[u * n + v] == adj_b[map[u] * n + cand]);
            if !consistent {
                continue;
            }
            map[v] = cand;
            used[cand] = true;
            if extend(pos + 1, order, parent, map, used, b, adj_a, adj_b) {
                return true;
            }
            used[cand] = false;
            map[v] = usize::MAX;
        }
        false
    }

    extend(1, &order, &parent, &mut map, &mut used, b, &adj_a, &adj_b)
}

/// `Z^free ⊕ Z_{t_1} ⊕ ... ⊕ Z_{t_k}` with `t_i | t_{i+1}` and every `t_i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientDescriptor {
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl QuotientDescriptor {
    pub fn trivial() -> Self {
        Self { free: 0, torsion: vec![] }
    }

    pub fn cyclic(d: u64) -> Self {
        Self::from_parts(0, &[d])
    }

    /// Builds the descriptor from any list of cyclic orders, normalizing to
    /// invariant factors and dropping 1s.
    pub fn from_parts(free: usize, cyclic_orders: &[u64]) -> Self {
        use num_integer::Integer;
        let mut primes_powers: Vec<Vec<u64>> = Vec::new();
        // Split each order into prime powers, then recombine largest-first.
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &d in cyclic_orders {
            let mut d = d;
            let mut p = 2;
            while d > 1 {
                if d % p == 0 {
                    let mut q = 1;
                    while d % p == 0 {
                        d /= p;
                        q *= p;
                    }
                    by_prime.entry(p).or_default().push(q);
                }
                p += 1;
            }
        }
        for (_, mut v) in by_prime {
            v.sort_unstable_by(|a, b| b.cmp(a));
            primes_powers.push(v);
        }
        let len = primes_powers.iter().map(Vec::len).max().unwrap_or(0);
        let mut torsion: Vec<u64> = (0..len)
            .map(|i| primes_powers.iter().filter_map(|v| v.get(i)).fold(1u64, |a, &b| a.lcm(&b)))
            .collect();
        torsion.reverse();
        Self { free, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for QuotientDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelTag {
    DegreeAtMostTwo,
    MobiusLadder,
    PrismOverCycle,
    OtherCubic,
    SquareOfEvenCycle,
    Weird4,
    K3xK3,
    OddOrderGeneric,
    GenericEvenOrder,
}

/// Classification with its parameter: the rung count `n` for ladders and
/// prisms (`|G| = 2n`), the order for cycles and squares of cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassificationLabel {
    pub tag: LabelTag,
    pub n: Option<u64>,
    pub bipartite: bool,
}

impl fmt::Display for ClassificationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "{:?}(n={n})", self.tag),
            None => write!(f, "{:?}", self.tag),
        }
    }
}

impl ClassificationLabel {
    /// Inverse of `Display` plus bipartiteness, which the text omits.
    pub fn parse(text: &str, bipartite: bool) -> Result<Self, GraphError> {
        let unknown = || GraphError::UnknownLabel(text.to_string());
        let (name, n) = match text.split_once("(n=") {
            Some((name, rest)) => {
                let n = rest.strip_suffix(')').and_then(|x| x.parse().ok()).ok_or_else(unknown)?;
                (name, Some(n))
            }
            None => (text, None),
        };
        let tag = match name {
            "DegreeAtMostTwo" => LabelTag::DegreeAtMostTwo,
            "MobiusLadder" => LabelTag::MobiusLadder,
            "PrismOverCycle" => LabelTag::PrismOverCycle,
            "OtherCubic" => LabelTag::OtherCubic,
            "SquareOfEvenCycle" => LabelTag::SquareOfEvenCycle,
            "Weird4" => LabelTag::Weird4,
            "K3xK3" => LabelTag::K3xK3,
            "OddOrderGeneric" => LabelTag::OddOrderGeneric,
            "GenericEvenOrder" => LabelTag::GenericEvenOrder,
            _ => return Err(unknown()),
        };
        Ok(Self { tag, n, bipartite })
    }

    /// Whether one of the weighting characterizations of `H` applies.
    pub fn is_exceptional(&self) -> bool {
        match self.tag {
            LabelTag::MobiusLadder => self.bipartite,
            LabelTag::PrismOverCycle
            | LabelTag::SquareOfEvenCycle
            | LabelTag::Weird4
            | LabelTag::K3xK3 => true,
            _ => false,
        }
    }
}

fn cycle_graph_pair(n: u64) -> Option<(CayleyGraph, CayleyGraph)> {
    if n < 3 {
        return None;
    }
    let mobius =
        CayleyGraph::from_parts(&[2 * n], &[&[1], &[-1], &[n as i64]]).expect("valid ladder");
    let prism = CayleyGraph::from_parts(&[n, 2], &[&[1, 0], &[-1, 0], &[0, 1]]).expect("valid prism");
    Some((mobius, prism))
}

/// Some `s` with `2s` also in `S` and of order at least 3, with `S = {±s, ±2s}`.
pub fn square_generator(x: &CayleyGraph) -> Option<GroupElement> {
    if x.degree() != 4 {
        return None;
    }
    let g = x.group();
    for s in x.conn().elements() {
        let t = g.add(s, s);
        if t.is_identity() || t == g.neg(&t) {
            continue;
        }
        if t == *s || t == g.neg(s) || !x.conn().contains(&t) {
            continue;
        }
        return Some(s.clone());
    }
    None
}

pub fn classify(x: &CayleyGraph) -> ClassificationLabel {
    let order = x.order() as u64;
    let bipartite = x.is_bipartite();
    let label = |tag, n| ClassificationLabel { tag, n, bipartite };
    let deg = x.degree();
    if deg <= 2 {
        return label(LabelTag::DegreeAtMostTwo, Some(order));
    }
    if deg == 3 {
        if order.is_multiple_of(2) {
            if let Some((mobius, prism)) = cycle_graph_pair(order / 2) {
                if isomorphic(x, &mobius) {
                    return label(LabelTag::MobiusLadder, Some(order / 2));
                }
                if isomorphic(x, &prism) {
                    return label(LabelTag::PrismOverCycle, Some(order / 2));
                }
            }
        }
        return label(LabelTag::OtherCubic, None);
    }
    if deg == 4 && order.is_multiple_of(2) {
        if square_generator(x).is_some() {
            return label(LabelTag::SquareOfEvenCycle, Some(order));
        }
        if !bipartite && order % 4 == 2 {
            return label(LabelTag::Weird4, Some(order));
        }
    }
    if order % 2 == 1 {
        if order == 9 && deg == 4 {
            let k3k3 = CayleyGraph::from_parts(&[3, 3], &[&[1, 0], &[2, 0], &[0, 1], &[0, 2]])
                .expect("valid K3xK3");
            if isomorphic(x, &k3k3) {
                return label(LabelTag::K3xK3, None);
            }
        }
        return label(LabelTag::OddOrderGeneric, None);
    }
    label(LabelTag::GenericEvenOrder, None)
}

/// Expected `(F/H, E/H)` for a classified graph.
pub fn predicted_quotients(
    label: &ClassificationLabel,
) -> Result<(QuotientDescriptor, QuotientDescriptor), GraphError> {
    let q = QuotientDescriptor::from_parts;
    let need_n = || label.n.ok_or_else(|| GraphError::UnknownLabel(label.to_string()));
    // When H = E: F/H is F/E, which is Z_2 exactly when X is not bipartite.
    let h_is_e = || {
        if label.bipartite {
            (q(0, &[]), q(0, &[]))
        } else {
            (q(0, &[2]), q(0, &[]))
        }
    };
    Ok(match label.tag {
        LabelTag::DegreeAtMostTwo | LabelTag::OddOrderGeneric => (q(0, &[]), q(0, &[])),
        LabelTag::OtherCubic | LabelTag::GenericEvenOrder => h_is_e(),
        LabelTag::MobiusLadder => {
            let n = need_n()?;
            if label.bipartite {
                (q(0, &[n]), q(0, &[n]))
            } else {
                (q(0, &[2]), q(0, &[]))
            }
        }
        LabelTag::PrismOverCycle => {
            let n = need_n()?;
            if label.bipartite {
                (q(0, &[n - 1]), q(0, &[n - 1]))
            } else {
                (q(1, &[n - 1]), q(1, &[n - 1]))
            }
        }
        LabelTag::SquareOfEvenCycle => {
            let n = need_n()?;
            // H lies in E, which has index 2 in F, and Z_{n-2} has a unique
            // subgroup of index 2.
            (q(0, &[n - 2]), q(0, &[(n - 2) / 2]))
        }
        LabelTag::Weird4 => (q(0, &[4]), q(0, &[2])),
        // The hamiltonian cycles have odd length, so E + H = F and
        // E/(E ∩ H) ≅ F/H.
        LabelTag::K3xK3 => (q(0, &[3]), q(0, &[3])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(g: &str, s: &str) -> CayleyGraph {
        CayleyGraph::parse(g, s).unwrap()
    }

    #[test]
    fn build_examples() {
        let c6 = graph("Z6", "1,5");
        assert_eq!((c6.degree(), c6.edge_count()), (2, 6));
        assert_eq!(CayleyGraph::parse("Z6", "2,4").unwrap_err(), GraphError::NotGenerating(2));
        let k4 = graph("Z4", "1,3,2");
        assert_eq!((k4.degree(), k4.edge_count()), (3, 6));
        assert!(matches!(CayleyGraph::parse("Z6", "1"), Err(GraphError::NotSymmetric(_))));
        assert_eq!(CayleyGraph::parse("Z6", "0,1,5").unwrap_err(), GraphError::IdentityInS);
    }

    #[test]
    fn canonical_edges_pick_one_orientation() {
        let x = graph("Z2xZ4", "(0,1),(0,3),(1,0)");
        for v in 0..x.order() {
            for k in 0..x.degree() {
                let (id, sign) = x.oriented_edge(v, k);
                let w = x.step(v, k);
                let (id2, sign2) = x.oriented_edge(w, x.gen_inverse(k));
                assert_eq!(id, id2);
                if x.gen_element(k) != x.gen_element(x.gen_inverse(k)) {
                    assert_eq!(sign, -sign2);
                }
            }
        }
        assert_eq!(x.edge_count(), 8 * 3 / 2);
    }

    #[test]
    fn bipartite_examples() {
        assert!(graph("Z6", "1,5").is_bipartite());
        assert!(!graph("Z3xZ3", "(1,0),(2,0),(0,1),(0,2)").is_bipartite());
        assert!(!graph("Z10", "2,8,3,7").is_bipartite());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&graph("Z6", "1,5,3")).to_string(), "MobiusLadder(n=3)");
        assert_eq!(classify(&graph("Z8", "1,7,2,6")).tag, LabelTag::SquareOfEvenCycle);
        assert_eq!(classify(&graph("Z10", "2,8,3,7")).tag, LabelTag::Weird4);
        assert_eq!(classify(&graph("Z4", "1,3,2")).tag, LabelTag::OtherCubic);
        assert_eq!(classify(&graph("Z4xZ2", "(1,0),(3,0),(0,1)")).to_string(), "PrismOverCycle(n=4)");
        assert_eq!(classify(&graph("Z6", "2,4,3")).to_string(), "PrismOverCycle(n=3)");
        assert_eq!(classify(&graph("Z3xZ3", "(1,0),(2,0),(0,1),(0,2)")).tag, LabelTag::K3xK3);
        assert_eq!(classify(&graph("Z9", "1,8,3,6")).tag, LabelTag::OddOrderGeneric);
        assert_eq!(classify(&graph("Z2xZ2xZ2", "(1,0,0),(0,1,0),(0,0,1)")).tag, LabelTag::PrismOverCycle);
    }

    #[test]
    fn predictions_read_back() {
        let lab = |t, n, b| ClassificationLabel { tag: t, n: Some(n), bipartite: b };
        let (fh, eh) = predicted_quotients(&lab(LabelTag::MobiusLadder, 5, true)).unwrap();
        assert_eq!((fh.torsion, eh.torsion), (vec![5], vec![5]));
        let (fh, _) = predicted_quotients(&lab(LabelTag::PrismOverCycle, 5, false)).unwrap();
        assert_eq!(fh, QuotientDescriptor { free: 1, torsion: vec![4] });
        let (fh, _) = predicted_quotients(&lab(LabelTag::SquareOfEvenCycle, 8, false)).unwrap();
        assert_eq!(fh.torsion, vec![6]);
        let (fh, eh) = predicted_quotients(&lab(LabelTag::Weird4, 10, false)).unwrap();
        assert_eq!((fh.torsion, eh.torsion), (vec![4], vec![2]));
        let bad = ClassificationLabel { tag: LabelTag::PrismOverCycle, n: None, bipartite: true };
        assert!(matches!(predicted_quotients(&bad), Err(GraphError::UnknownLabel(_))));
    }

    #[test]
    fn descriptor_normalizes() {
        assert_eq!(QuotientDescriptor::from_parts(0, &[2, 3]).torsion, vec![6]);
        assert_eq!(QuotientDescriptor::from_parts(0, &[4, 2, 1]).torsion, vec![2, 4]);
        assert_eq!(QuotientDescriptor::from_parts(1, &[2]).to_string(), "Z + Z_2");
        assert_eq!(QuotientDescriptor::trivial().to_string(), "0");
    }

    #[test]
    fn label_text_roundtrip() {
        for (g, s) in [("Z6", "1,5,3"), ("Z10", "2,8,3,7"), ("Z9", "1,8,3,6"), ("Z7", "1,6")] {
            let l = classify(&graph(g, s));
            assert_eq!(ClassificationLabel::parse(&l.to_string(), l.bipartite).unwrap(), l);
        }
    }
}
