//! Torus embedding of the degree-4 graphs `Cay(G; {±t, ±u})` with `|t|` odd
//! and `|G:⟨t⟩| ≡ 2 (mod 4)`.
//!
//! Vertex `a·t + b·u` sits at the grid point `(a, b)`; the graph is the
//! square grid modulo the lattice spanned by `(m, 0)` and `(-r, n)`. Walks
//! lift to the plane step by step, which gives knot classes directly.
//! Imbalance is computed on the bipartite double cover, the grid modulo
//! `(2m, 0)` and `(-r, n)`.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{classify, CayleyGraph, LabelTag};
use crate::dsl::{classify_walk, walk_vertices, DslError, Walk, WalkKind};
use crate::flows::{standard_weighting, walk_flow, weighted_sum, FlowError, Roles, Weighting};
use crate::group::GroupElement;
use crate::ham::{cycle_walk, enumerate_hamiltonian_cycles, EnumConfig, HamError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("not a torus configuration: {0}")]
    NotWeirdConfiguration(String),
    #[error("walk does not return to its start")]
    NotClosed,
    #[error("walk is not a simple cycle")]
    NotACycle,
    #[error("cycle is not essential")]
    NotEssential,
    #[error("cycle has odd length")]
    OddCycle,
    #[error("step {0} is not one of ±t, ±u")]
    BadStep(String),
    #[error("lifted cycles leave {0} complementary regions, expected 2")]
    RegionCount(usize),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Ham(#[from] HamError),
}

/// Homology class `(p, q)` of a closed walk: its lift is displaced by
/// `p·(m, 0) + q·(-r, n)`. Stored with the first nonzero entry positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnotClass {
    pub p: i64,
    pub q: i64,
}

impl KnotClass {
    pub fn new(p: i64, q: i64) -> Self {
        if p < 0 || (p == 0 && q < 0) {
            Self { p: -p, q: -q }
        } else {
            Self { p, q }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }
}

impl fmt::Display for KnotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

#[derive(Debug, Clone)]
pub struct TorusEmbedding {
    pub t: GroupElement,
    pub u: GroupElement,
    /// `|t|`, odd.
    pub m: i64,
    /// `|G : ⟨t⟩|`, congruent to 2 mod 4.
    pub n: i64,
    /// Smallest even `r ≥ 0` with `n·u = r·t`.
    pub r: i64,
    coords: Vec<(i64, i64)>,
}

pub fn build_embedding(x: &CayleyGraph, t: &GroupElement, u: &GroupElement) -> Result<TorusEmbedding, TorusError> {
    let g = x.group();
    let bad = |why: &str| TorusError::NotWeirdConfiguration(why.to_string());
    g.validate(t).map_err(|e| bad(&e.to_string()))?;
    g.validate(u).map_err(|e| bad(&e.to_string()))?;
    if x.degree() != 4 || x.gen_index(t).is_none() || x.gen_index(u).is_none() {
        return Err(bad("connection set must be exactly {±t, ±u}"));
    }
    if *u == *t || *u == g.neg(t) {
        return Err(bad("u must differ from ±t"));
    }
    let m = g.element_order(t).map_err(|e| bad(&e.to_string()))? as i64;
    if m % 2 == 0 {
        return Err(bad(&format!("|t| = {m} is even")));
    }
    let two_u = g.add(u, u);
    if *t == two_u || *t == g.neg(&two_u) {
        return Err(bad("t is ±2u"));
    }
    let n = x.order() as i64 / m;
    if n % 4 != 2 {
        return Err(bad(&format!("|G : <t>| = {n} is not 2 mod 4")));
    }
    let nu = g.scale(n, u);
    let k = (0..m).find(|&k| g.scale(k, t) == nu).ok_or_else(|| bad("t and u do not generate G"))?;
    let r = if k % 2 == 0 { k } else { k + m };
    let mut coords = vec![(-1, -1); x.order()];
    for b in 0..n {
        for a in 0..m {
            let v = x.index(&g.add(&g.scale(a, t), &g.scale(b, u)));
            coords[v] = (a, b);
        }
    }
    if coords.iter().any(|&(a, _)| a < 0) {
        return Err(bad("t and u do not generate G"));
    }
    Ok(TorusEmbedding { t: t.clone(), u: u.clone(), m, n, r, coords })
}

/// The bipartite double cover: the grid modulo `(2m, 0)` and `(-r, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleCover {
    pub m: i64,
    pub n: i64,
    pub r: i64,
}

impl DoubleCover {
    pub fn order(&self) -> i64 {
        2 * self.m * self.n
    }

    /// Canonical representative in `[0, 2m) × [0, n)`.
    pub fn reduce(&self, (x, y): (i64, i64)) -> (i64, i64) {
        let k = y.div_euclid(self.n);
        ((x + k * self.r).rem_euclid(2 * self.m), y - k * self.n)
    }

    /// Proper 2-coloring; well defined because `2m` and `n - r` are even.
    pub fn color(&self, (x, y): (i64, i64)) -> u8 {
        (x + y).rem_euclid(2) as u8
    }
}

impl TorusEmbedding {
    pub fn coords(&self, v: usize) -> (i64, i64) {
        self.coords[v]
    }

    pub fn cover(&self) -> DoubleCover {
        DoubleCover { m: self.m, n: self.n, r: self.r }
    }

    fn step_vector(&self, x: &CayleyGraph, s: &GroupElement) -> Result<(i64, i64), TorusError> {
        let g = x.group();
        if *s == self.t {
            Ok((1, 0))
        } else if *s == g.neg(&self.t) {
            Ok((-1, 0))
        } else if *s == self.u {
            Ok((0, 1))
        } else if *s == g.neg(&self.u) {
            Ok((0, -1))
        } else {
            Err(TorusError::BadStep(g.render_element(s)))
        }
    }

    /// Grid points visited by the lift starting at the base vertex's coordinates.
    pub fn lift(&self, x: &CayleyGraph, w: &Walk) -> Result<Vec<(i64, i64)>, TorusError> {
        x.group().validate(&w.base).map_err(DslError::from)?;
        let mut cur = self.coords[x.index(&w.base)];
        let mut out = vec![cur];
        for s in &w.steps {
            let (dx, dy) = self.step_vector(x, s)?;
            cur = (cur.0 + dx, cur.1 + dy);
            out.push(cur);
        }
        Ok(out)
    }

    pub fn knot_class(&self, x: &CayleyGraph, w: &Walk) -> Result<KnotClass, TorusError> {
        let pts = self.lift(x, w)?;
        if w.end(x.group()) != w.base {
            return Err(TorusError::NotClosed);
        }
        let (first, last) = (pts[0], pts[pts.len() - 1]);
        let (dx, dy) = (last.0 - first.0, last.1 - first.1);
        assert!(dy % self.n == 0, "closed lift has vertical displacement {dy}");
        let q = dy / self.n;
        assert!((dx + q * self.r) % self.m == 0, "closed lift has displacement ({dx},{dy})");
        Ok(KnotClass::new((dx + q * self.r) / self.m, q))
    }

    pub fn is_essential(&self, x: &CayleyGraph, w: &Walk) -> Result<bool, TorusError> {
        Ok(!self.knot_class(x, w)?.is_zero())
    }

    /// Traversed `t`-edges `[a·t + b·u](t)` with `b` even.
    pub fn blue_count(&self, x: &CayleyGraph, w: &Walk) -> Result<usize, TorusError> {
        let pts = self.lift(x, w)?;
        Ok(pts.windows(2).filter(|p| p[0].1 == p[1].1 && p[0].1.rem_euclid(2) == 0).count())
    }

    /// Steps all in `{t, u}` or all in `{t, -u}`, in one of the two directions.
    pub fn is_monotonic(&self, x: &CayleyGraph, w: &Walk) -> Result<bool, TorusError> {
        let pts = self.lift(x, w)?;
        let steps: Vec<(i64, i64)> = pts.windows(2).map(|p| (p[1].0 - p[0].0, p[1].1 - p[0].1)).collect();
        let ok = |dxs: i64, dys: i64| steps.iter().all(|&(dx, dy)| dx == dxs || dy == dys);
        Ok(ok(1, 1) || ok(1, -1) || ok(-1, 1) || ok(-1, -1))
    }

    /// `(K - W) mod 4` for each of the two regions of the torus cut along
    /// the two lifts of `w` to the double cover.
    pub fn imbalance_by_region(&self, x: &CayleyGraph, w: &Walk) -> Result<[i64; 2], TorusError> {
        let t = self.region_tallies(x, w)?;
        Ok([0, 1].map(|i| (t[i][0] - t[i][1]).rem_euclid(4)))
    }

    /// Vertex counts `[colour 0, colour 1]` of the two regions of the double
    /// cover left after deleting both lifts of `w`.
    pub fn region_tallies(&self, x: &CayleyGraph, w: &Walk) -> Result<[[i64; 2]; 2], TorusError> {
        if classify_walk(x, w)? == WalkKind::Path {
            return Err(TorusError::NotClosed);
        }
        if !matches!(classify_walk(x, w)?, WalkKind::Cycle | WalkKind::HamiltonianCycle) {
            return Err(TorusError::NotACycle);
        }
        if w.len() % 2 == 1 {
            return Err(TorusError::OddCycle);
        }
        if !self.is_essential(x, w)? {
            return Err(TorusError::NotEssential);
        }
        let cover = self.cover();
        let first = self.lift(x, w)?;
        let second: Vec<(i64, i64)> = first.iter().map(|&(a, b)| (a + self.m, b)).collect();

        // Cells of the half-step grid: vertices at (even, even), edge midpoints
        // at one odd coordinate, face centres at (odd, odd). Doubling every
        // coordinate turns the cover into the grid modulo (4m, 0), (-2r, 2n).
        let (wd, ht) = (4 * self.m, 2 * self.n);
        let cell = |(x, y): (i64, i64)| -> usize {
            let k = y.div_euclid(ht);
            let (x, y) = ((x + 2 * k * self.r).rem_euclid(wd), y - k * ht);
            (y * wd + x) as usize
        };
        let total = (wd * ht) as usize;
        let mut blocked = vec![false; total];
        for lift in [&first, &second] {
            for p in lift.windows(2) {
                blocked[cell((2 * p[0].0, 2 * p[0].1))] = true;
                blocked[cell((p[0].0 + p[1].0, p[0].1 + p[1].1))] = true;
            }
        }
        let mut region = vec![usize::MAX; total];
        let mut tallies: Vec<[i64; 2]> = Vec::new();
        for start in 0..total {
            if blocked[start] || region[start] != usize::MAX {
                continue;
            }
            let id = tallies.len();
            let mut tally = [0i64; 2];
            region[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                let (cx, cy) = ((c as i64) % wd, (c as i64) / wd);
                if cx % 2 == 0 && cy % 2 == 0 {
                    tally[cover.color((cx / 2, cy / 2)) as usize] += 1;
                }
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let d = cell((cx + dx, cy + dy));
                    if !blocked[d] && region[d] == usize::MAX {
                        region[d] = id;
                        queue.push_back(d);
                    }
                }
            }
            tallies.push(tally);
        }
        if tallies.len() != 2 {
            return Err(TorusError::RegionCount(tallies.len()));
        }
        Ok([tallies[0], tallies[1]])
    }

    pub fn imbalance(&self, x: &CayleyGraph, w: &Walk) -> Result<i64, TorusError> {
        Ok(self.imbalance_by_region(x, w)?[0])
    }

    /// Grid points strictly inside a closed lift, by crossing parity of a
    /// rightward ray raised a fraction above each point.
    pub fn interior_points(&self, x: &CayleyGraph, w: &Walk) -> Result<i64, TorusError> {
        let pts = self.lift(x, w)?;
        if pts.first() != pts.last() {
            return Err(TorusError::NotEssential);
        }
        let on: std::collections::HashSet<(i64, i64)> = pts.iter().copied().collect();
        let verticals: Vec<(i64, i64)> =
            pts.windows(2).filter(|p| p[0].0 == p[1].0).map(|p| (p[0].0, p[0].1.min(p[1].1))).collect();
        let (x0, x1) = (pts.iter().map(|p| p.0).min().unwrap(), pts.iter().map(|p| p.0).max().unwrap());
        let (y0, y1) = (pts.iter().map(|p| p.1).min().unwrap(), pts.iter().map(|p| p.1).max().unwrap());
        let mut count = 0;
        for py in y0..=y1 {
            for px in x0..=x1 {
                if on.contains(&(px, py)) {
                    continue;
                }
                let crossings = verticals.iter().filter(|&&(vx, vy)| vy == py && vx > px).count();
                count += (crossings % 2) as i64;
            }
        }
        Ok(count)
    }

    /// Twice the signed area enclosed by a closed lift.
    pub fn twice_area(&self, x: &CayleyGraph, w: &Walk) -> Result<i64, TorusError> {
        let pts = self.lift(x, w)?;
        if pts.first() != pts.last() {
            return Err(TorusError::NotEssential);
        }
        Ok(pts.windows(2).map(|p| p[0].0 * p[1].1 - p[1].0 * p[0].1).sum())
    }

    /// The weighting `±1` on `t`-edges by parity of the `u`-coordinate.
    pub fn weighting(&self, x: &CayleyGraph) -> Result<Weighting, TorusError> {
        let label = classify(x);
        if label.tag != LabelTag::Weird4 {
            return Err(TorusError::NotWeirdConfiguration(format!("graph classifies as {label}")));
        }
        let roles = Roles { s: None, t: self.t.clone(), u: Some(self.u.clone()) };
        Ok(standard_weighting(x, &label, &roles)?)
    }

    /// Weighted sum of a walk's flow under [`Self::weighting`].
    pub fn weight(&self, x: &CayleyGraph, w: &Walk) -> Result<i64, TorusError> {
        Ok(weighted_sum(&walk_flow(x, w)?, &self.weighting(x)?)?)
    }

    /// Every congruence that applies to the cycle `w`.
    pub fn check_congruences(&self, x: &CayleyGraph, w: &Walk) -> Result<CongruenceReport, TorusError> {
        let kind = classify_walk(x, w)?;
        if !matches!(kind, WalkKind::Cycle | WalkKind::HamiltonianCycle) {
            return Err(TorusError::NotACycle);
        }
        let phi = self.weighting(x)?;
        let len = w.len() as i64;
        let wt = weighted_sum(&walk_flow(x, w)?, &phi)?;
        let knot = self.knot_class(x, w)?;
        let essential = !knot.is_zero();
        let mut rep = CongruenceReport {
            len,
            wt,
            knot,
            essential,
            hamiltonian: kind == WalkKind::HamiltonianCycle,
            monotonic: self.is_monotonic(x, w)?,
            imbalance: None,
            blue: self.blue_count(x, w)? as i64,
            interior: None,
            twice_area: None,
            violations: Vec::new(),
        };
        let mut fail = |what: String| rep.violations.push(what);
        if rep.hamiltonian && wt.rem_euclid(4) != 0 {
            fail(format!("hamiltonian weight {wt} not divisible by 4"));
        }
        if knot.p.rem_euclid(2) != len.rem_euclid(2) {
            fail(format!("knot {knot} parity differs from length {len}"));
        }
        if essential {
            if knot.p.gcd(&knot.q) != 1 {
                fail(format!("essential knot {knot} is not primitive"));
            }
            if len % 2 == 0 {
                if (knot.q * self.n).rem_euclid(4) != 2 {
                    fail(format!("vertical displacement {} not 2 mod 4", knot.q * self.n));
                }
                let regions = self.imbalance_by_region(x, w)?;
                if regions[0] != regions[1] {
                    fail(format!("regions disagree on imbalance: {regions:?}"));
                }
                let imb = regions[0];
                if (wt - len - imb - 2).rem_euclid(4) != 0 {
                    fail(format!("wt {wt} vs len {len} + imb {imb} + 2"));
                }
                if rep.monotonic && (imb - 2 * rep.blue).rem_euclid(4) != 0 {
                    fail(format!("monotonic imb {imb} vs 2·blue {}", 2 * rep.blue));
                }
                rep.imbalance = Some(imb);
            }
        } else {
            let interior = self.interior_points(x, w)?;
            let area2 = self.twice_area(x, w)?;
            if (wt - len - 2 * interior + 2).rem_euclid(4) != 0 {
                fail(format!("wt {wt} vs len {len} + 2·{interior} - 2"));
            }
            if (wt - area2).rem_euclid(4) != 0 {
                fail(format!("wt {wt} vs twice area {area2}"));
            }
            rep.interior = Some(interior);
            rep.twice_area = Some(area2);
        }
        Ok(rep)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub len: i64,
    pub wt: i64,
    pub knot: KnotClass,
    pub essential: bool,
    pub hamiltonian: bool,
    pub monotonic: bool,
    pub imbalance: Option<i64>,
    pub blue: i64,
    pub interior: Option<i64>,
    pub twice_area: Option<i64>,
    pub violations: Vec<String>,
}

impl CongruenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Simple cycles of length `3..=max_len`, each once: rooted at its least
/// vertex and oriented so the second vertex is below the last.
pub fn simple_cycles(x: &CayleyGraph, max_len: usize) -> Vec<Vec<usize>> {
    fn extend(x: &CayleyGraph, path: &mut Vec<usize>, on: &mut [bool], max_len: usize, out: &mut Vec<Vec<usize>>) {
        let root = path[0];
        let head = *path.last().unwrap();
        for &w in x.neighbors(head) {
            if w == root && path.len() >= 3 && path[1] < head {
                out.push(path.clone());
            }
            if w > root && !on[w] && path.len() < max_len {
                on[w] = true;
                path.push(w);
                extend(x, path, on, max_len, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; x.order()];
    for root in 0..x.order() {
        on[root] = true;
        extend(x, &mut vec![root], &mut on, max_len, &mut out);
        on[root] = false;
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cycles: usize,
    pub essential_even: usize,
    pub non_essential: usize,
    pub monotonic: usize,
    pub hamiltonian: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub vertices: Vec<usize>,
    pub report: CongruenceReport,
}

/// Checks every simple cycle up to `max_len` in both orientations, plus
/// every hamiltonian cycle.
pub fn congruence_sweep(
    x: &CayleyGraph,
    emb: &TorusEmbedding,
    max_len: usize,
) -> Result<(Vec<SweepRow>, SweepSummary), TorusError> {
    let mut cycles = simple_cycles(x, max_len);
    let hams = enumerate_hamiltonian_cycles(x, &EnumConfig::default())?;
    cycles.extend(hams.cycles.into_iter().filter(|c| c.len() > max_len));
    let mut rows = Vec::new();
    let mut sum = SweepSummary::default();
    for c in cycles {
        let fwd = cycle_walk(x, &c);
        let back = fwd.reversed(x.group());
        for w in [fwd, back] {
            let report = emb.check_congruences(x, &w)?;
            sum.cycles += 1;
            sum.essential_even += usize::from(report.essential && report.len % 2 == 0);
            sum.non_essential += usize::from(!report.essential);
            sum.monotonic += usize::from(report.monotonic && report.imbalance.is_some());
            sum.hamiltonian += usize::from(report.hamiltonian);
            sum.violations += usize::from(!report.holds());
            let vertices = walk_vertices(x, &w)?;
            rows.push(SweepRow { vertices, report });
        }
    }
    Ok((rows, sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{expand_text, Bindings};

    fn z10() -> (CayleyGraph, TorusEmbedding) {
        let x = CayleyGraph::parse("Z10", "2,3,7,8").unwrap();
        let g = x.group().clone();
        let emb = build_embedding(&x, &g.parse_element("2").unwrap(), &g.parse_element("3").unwrap()).unwrap();
        (x, emb)
    }

    fn walk(x: &CayleyGraph, text: &str) -> Walk {
        let b = Bindings::parse(x.group(), "t=2,u=3").unwrap();
        expand_text(text, &b, x.group()).unwrap()
    }

    #[test]
    fn embedding_parameters() {
        let (_, emb) = z10();
        assert_eq!((emb.m, emb.n, emb.r), (5, 2, 8));
        let x = CayleyGraph::parse("Z14", "2,3,11,12").unwrap();
        let g = x.group().clone();
        let emb = build_embedding(&x, &g.parse_element("2").unwrap(), &g.parse_element("3").unwrap()).unwrap();
        assert_eq!((emb.m, emb.n, emb.r), (7, 2, 10));
        let x = CayleyGraph::parse("Z10", "2,3,7,8").unwrap();
        let g = x.group().clone();
        let err = build_embedding(&x, &g.parse_element("3").unwrap(), &g.parse_element("2").unwrap());
        assert!(matches!(err, Err(TorusError::NotWeirdConfiguration(_))));
    }

    #[test]
    fn knot_classes() {
        let (x, emb) = z10();
        assert_eq!(emb.knot_class(&x, &walk(&x, "(t^5)")).unwrap(), KnotClass::new(1, 0));
        assert_eq!(emb.knot_class(&x, &walk(&x, "(t,u,t^-1,u^-1)")).unwrap(), KnotClass::new(0, 0));
        assert_eq!(emb.knot_class(&x, &walk(&x, "(u^10)")).unwrap(), KnotClass::new(8, 5));
        assert!(matches!(emb.knot_class(&x, &walk(&x, "(t,u)")), Err(TorusError::NotClosed)));
    }

    #[test]
    fn blue_edges() {
        let (x, emb) = z10();
        assert_eq!(emb.blue_count(&x, &walk(&x, "(t^5)")).unwrap(), 5);
        assert_eq!(emb.blue_count(&x, &walk(&x, "[u](t^5)")).unwrap(), 0);
        assert_eq!(emb.blue_count(&x, &walk(&x, "(u^10)")).unwrap(), 0);
    }

    #[test]
    fn hamiltonian_cycle_has_zero_imbalance() {
        let (x, emb) = z10();
        let h = walk(&x, "(u^10)");
        assert_eq!(emb.imbalance_by_region(&x, &h).unwrap(), [0, 0]);
        let rep = emb.check_congruences(&x, &h).unwrap();
        assert_eq!(rep.wt, 0);
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn basic_square_satisfies_pick() {
        let (x, emb) = z10();
        let rep = emb.check_congruences(&x, &walk(&x, "(t,u,t^-1,u^-1)")).unwrap();
        assert_eq!((rep.len, rep.interior, rep.wt.abs()), (4, Some(0), 2));
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn imbalance_errors() {
        let (x, emb) = z10();
        assert!(matches!(emb.imbalance(&x, &walk(&x, "(t^5)")), Err(TorusError::OddCycle)));
        assert!(matches!(emb.imbalance(&x, &walk(&x, "(t,u,t^-1,u^-1)")), Err(TorusError::NotEssential)));
    }

    #[test]
    fn cycle_enumeration_counts_squares() {
        let x = CayleyGraph::parse("Z3xZ3", "(0,1),(0,2),(1,0),(2,0)").unwrap();
        // Torus grid 3x3: six triangles and nine basic squares.
        let cycles = simple_cycles(&x, 4);
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 6);
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 9);
    }
}
