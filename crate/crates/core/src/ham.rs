//! Hamiltonian cycle search by backtracking over bitmask vertex sets, and
//! assembly of the lattice `H` they generate.
//!
//! Every hamiltonian cycle passes through the identity, so enumeration is
//! rooted there; translates need no separate search.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cayley::CayleyGraph;
use crate::dsl::Walk;
use crate::flows::vertex_cycle_flow;
use crate::lattice::{FundamentalCycleBasis, IntegerMatrix, LatticeError, RowLattice};

/// Largest graph the bitmask search supports.
pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HamError {
    #[error("graph has {0} vertices; search supports at most {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("cycle limit must be at least 1")]
    BadLimit,
    #[error("enumeration stopped at the cycle limit")]
    TruncatedEnumeration,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub cycle_limit: Option<usize>,
    /// Report each undirected cycle once, oriented so that the second vertex
    /// precedes the last.
    pub canonicalize: bool,
    /// Depth interval between connectivity checks of the unvisited region.
    pub connectivity_interval: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self { cycle_limit: None, canonicalize: true, connectivity_interval: 4 }
    }
}

/// Cycles as vertex-index sequences starting at the identity (index 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub cycles: Vec<Vec<usize>>,
    pub truncated: bool,
}

impl Enumeration {
    pub fn walks(&self, x: &CayleyGraph) -> Vec<Walk> {
        self.cycles.iter().map(|c| cycle_walk(x, c)).collect()
    }
}

/// The closed walk around a vertex cycle.
pub fn cycle_walk(x: &CayleyGraph, cycle: &[usize]) -> Walk {
    let mut verts = cycle.to_vec();
    verts.push(cycle[0]);
    Walk::from_vertices(x, &verts)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Control {
    Continue,
    Stop,
}

struct Search<'a> {
    x: &'a CayleyGraph,
    n: usize,
    masks: Vec<u128>,
    interval: usize,
    canonical: bool,
}

struct State {
    path: Vec<usize>,
    visited: u128,
    nodes: u64,
    budget: Option<u64>,
}

#[inline]
fn bit(v: usize) -> u128 {
    1u128 << v
}

impl<'a> Search<'a> {
    fn new(x: &'a CayleyGraph, cfg: &EnumConfig) -> Result<Self, HamError> {
        let n = x.order();
        if n > MAX_VERTICES {
            return Err(HamError::TooLarge(n));
        }
        let masks = (0..n).map(|v| x.neighbors(v).iter().fold(0u128, |m, &w| m | bit(w))).collect();
        Ok(Self { x, n, masks, interval: cfg.connectivity_interval.max(1), canonical: cfg.canonicalize })
    }

    fn all(&self) -> u128 {
        if self.n == 128 {
            u128::MAX
        } else {
            bit(self.n) - 1
        }
    }

    /// Unvisited vertices plus `head` form a connected set.
    fn connected(&self, visited: u128, head: usize) -> bool {
        let unvisited = self.all() & !visited;
        let mut reached = bit(head);
        let mut frontier = bit(head);
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.masks[v] & unvisited & !reached;
            reached |= fresh;
            frontier |= fresh;
        }
        unvisited & !reached == 0
    }

    /// Prunes applied after moving the head from `old` to `new`.
    fn viable(&self, st: &State, old: usize, new: usize) -> bool {
        let depth = st.path.len();
        if depth == self.n {
            return true;
        }
        let unvisited = self.all() & !st.visited;
        let avail = unvisited | bit(new) | bit(0);
        // Unvisited neighbours of `old` just lost one option.
        let mut m = self.masks[old] & unvisited;
        while m != 0 {
            let y = m.trailing_zeros() as usize;
            m &= m - 1;
            if (self.masks[y] & avail & !bit(y)).count_ones() < 2 {
                return false;
            }
        }
        // Some neighbour of the root must remain available to close the cycle,
        // and under canonical orientation it must follow path[1].
        let mut closers = self.masks[0] & (unvisited | bit(new));
        if self.canonical && depth >= 2 {
            let p1 = st.path[1];
            closers &= !((bit(p1 + 1)) - 1);
        }
        if closers == 0 {
            return false;
        }
        if depth.is_multiple_of(self.interval) && !self.connected(st.visited, new) {
            return false;
        }
        true
    }

    fn dfs(
        &self,
        st: &mut State,
        rng: &mut Option<&mut ChaCha8Rng>,
        visit: &mut dyn FnMut(&[usize]) -> Control,
    ) -> Control {
        st.nodes += 1;
        if st.budget.is_some_and(|b| st.nodes > b) {
            return Control::Stop;
        }
        let head = *st.path.last().unwrap();
        if st.path.len() == self.n {
            let closes = self.masks[head] & 1 == 1;
            let oriented = !self.canonical || self.n < 3 || st.path[1] < head;
            if closes && oriented {
                return visit(&st.path);
            }
            return Control::Continue;
        }
        let mut next: Vec<usize> =
            self.x.neighbors(head).iter().copied().filter(|&w| st.visited & bit(w) == 0).collect();
        next.sort_unstable();
        next.dedup();
        if let Some(r) = rng.as_deref_mut() {
            next.shuffle(r);
        }
        for w in next {
            st.path.push(w);
            st.visited |= bit(w);
            if self.viable(st, head, w) && self.dfs(st, rng, visit) == Control::Stop {
                st.visited &= !bit(w);
                st.path.pop();
                return Control::Stop;
            }
            st.visited &= !bit(w);
            st.path.pop();
        }
        Control::Continue
    }

    fn rooted(&self, first: Option<usize>) -> State {
        let mut st = State { path: vec![0], visited: 1, nodes: 0, budget: None };
        if let Some(w) = first {
            st.path.push(w);
            st.visited |= bit(w);
        }
        st
    }
}

/// Calls `visit` on each hamiltonian cycle through the identity; stops early
/// when `visit` returns `false`. Returns whether the search ran to completion.
pub fn for_each_hamiltonian_cycle(
    x: &CayleyGraph,
    cfg: &EnumConfig,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<bool, HamError> {
    let search = Search::new(x, cfg)?;
    if x.order() < 3 {
        return Ok(true);
    }
    let mut st = search.rooted(None);
    let mut cb = |p: &[usize]| if visit(p) { Control::Continue } else { Control::Stop };
    Ok(search.dfs(&mut st, &mut None, &mut cb) == Control::Continue)
}

/// All hamiltonian cycles, each undirected cycle once when canonicalizing.
///
/// Branches on the first step are searched in parallel and merged in sorted
/// order, so the result does not depend on the worker count.
pub fn enumerate_hamiltonian_cycles(x: &CayleyGraph, cfg: &EnumConfig) -> Result<Enumeration, HamError> {
    if cfg.cycle_limit == Some(0) {
        return Err(HamError::BadLimit);
    }
    let search = Search::new(x, cfg)?;
    if x.order() < 3 {
        return Ok(Enumeration { cycles: vec![], truncated: false });
    }
    let mut firsts: Vec<usize> = x.neighbors(0).to_vec();
    firsts.sort_unstable();
    firsts.dedup();
    let limit = cfg.cycle_limit;
    let branches: Vec<(Vec<Vec<usize>>, bool)> = firsts
        .par_iter()
        .map(|&w| {
            let mut st = search.rooted(Some(w));
            let mut found = Vec::new();
            let mut truncated = false;
            let mut cb = |p: &[usize]| {
                found.push(p.to_vec());
                if limit.is_some_and(|l| found.len() >= l) {
                    truncated = true;
                    Control::Stop
                } else {
                    Control::Continue
                }
            };
            if search.viable(&st, 0, w) {
                search.dfs(&mut st, &mut None, &mut cb);
            }
            (found, truncated)
        })
        .collect();
    let mut cycles: Vec<Vec<usize>> = branches.iter().flat_map(|(c, _)| c.iter().cloned()).collect();
    cycles.sort();
    let mut truncated = branches.iter().any(|(_, t)| *t);
    if let Some(l) = cfg.cycle_limit {
        if cycles.len() > l {
            cycles.truncate(l);
            truncated = true;
        }
    }
    Ok(Enumeration { cycles, truncated })
}

/// A hamiltonian cycle found by randomized depth-first search, if one turns
/// up within `node_budget` search nodes.
pub fn random_hamiltonian_cycle(x: &CayleyGraph, rng: &mut ChaCha8Rng, node_budget: u64) -> Option<Vec<usize>> {
    let cfg = EnumConfig { canonicalize: false, ..EnumConfig::default() };
    let search = Search::new(x, &cfg).ok()?;
    if x.order() < 3 {
        return None;
    }
    let mut st = search.rooted(None);
    st.budget = Some(node_budget);
    let mut out = None;
    let mut cb = |p: &[usize]| {
        out = Some(p.to_vec());
        Control::Stop
    };
    search.dfs(&mut st, &mut Some(rng), &mut cb);
    out
}

/// Rows of basis coordinates, one per enumerated cycle.
pub fn hamiltonian_lattice(
    x: &CayleyGraph,
    basis: &FundamentalCycleBasis,
    enumeration: &Enumeration,
) -> Result<IntegerMatrix, HamError> {
    if enumeration.truncated {
        return Err(HamError::TruncatedEnumeration);
    }
    let rows: Vec<Vec<i64>> =
        enumeration.cycles.iter().map(|c| basis.coords(&vertex_cycle_flow(x, c))).collect();
    Ok(IntegerMatrix::from_rows(basis.rank(), &rows)?)
}

/// How `H` was obtained.
#[derive(Debug, Clone)]
pub struct HamLattice {
    pub lattice: RowLattice,
    /// Cycles enumerated (exhaustive) or distinct cycles sampled.
    pub ham_count: usize,
    /// True when every hamiltonian cycle was enumerated.
    pub exhaustive: bool,
    /// True when the span reached the a-priori upper bound (`E` for even
    /// order, `F` for odd order), which settles `H` exactly.
    pub reached_bound: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SpanConfig {
    pub seed: u64,
    /// Consecutive sampled cycles that fail to grow the lattice before
    /// falling back to exhaustive enumeration.
    pub stall_limit: usize,
    pub node_budget: u64,
    pub cycle_limit: Option<usize>,
}

impl Default for SpanConfig {
    fn default() -> Self {
        Self { seed: 0x5eed, stall_limit: 24, node_budget: 200_000, cycle_limit: None }
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

/// The lattice `H` in fundamental-cycle coordinates.
///
/// `H` lies between the span `L` of any set of hamiltonian cycles and the
/// bound `B` (`E` when `|G|` is even, else `F`). Random cycles and their
/// translates are added to `L` until `L = B` is certified by its index, and
/// only if that stalls is every cycle enumerated.
pub fn span_hamiltonian_lattice(
    x: &CayleyGraph,
    basis: &FundamentalCycleBasis,
    cfg: &SpanConfig,
) -> Result<HamLattice, HamError> {
    let n = x.order();
    let dim = basis.rank();
    let bound_index = BigInt::from(if n.is_multiple_of(2) && !x.is_bipartite() { 2 } else { 1 });
    let at_bound = |l: &RowLattice| l.full_rank_index().is_some_and(|i| i == bound_index);
    let mut lattice = RowLattice::new(dim);
    if dim == 0 {
        return Ok(HamLattice { lattice, ham_count: 0, exhaustive: true, reached_bound: true });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ fnv1a(&x.id()));
    let mut seen = std::collections::HashSet::new();
    let mut stall = 0;
    while stall < cfg.stall_limit {
        let Some(c) = random_hamiltonian_cycle(x, &mut rng, cfg.node_budget) else {
            stall += 1;
            continue;
        };
        let flow = vertex_cycle_flow(x, &c);
        let mut grew = false;
        if seen.insert(canonical_edges(x, &c)) {
            for v in 0..n {
                let t = crate::flows::translate_flow_by_index(x, v, &flow);
                grew |= lattice.insert(&basis.coords(&t))?;
            }
        }
        if at_bound(&lattice) {
            return Ok(HamLattice { lattice, ham_count: seen.len(), exhaustive: false, reached_bound: true });
        }
        stall = if grew { 0 } else { stall + 1 };
        // Occasional reseeding keeps the walk from repeating one region.
        if rng.gen_ratio(1, 8) {
            rng = ChaCha8Rng::seed_from_u64(rng.gen());
        }
    }
    let ecfg = EnumConfig { cycle_limit: cfg.cycle_limit, ..EnumConfig::default() };
    let mut count = 0usize;
    let mut err = None;
    let mut reached = false;
    let complete = for_each_hamiltonian_cycle(x, &ecfg, |c| {
        count += 1;
        match lattice.insert(&basis.coords(&vertex_cycle_flow(x, c))) {
            Ok(true) if at_bound(&lattice) => {
                reached = true;
                return false;
            }
            Ok(_) => {}
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        cfg.cycle_limit.is_none_or(|l| count < l)
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    if !complete && !reached {
        return Err(HamError::TruncatedEnumeration);
    }
    let reached_bound = reached || at_bound(&lattice);
    Ok(HamLattice { lattice, ham_count: count, exhaustive: complete, reached_bound })
}

/// Sorted canonical edge ids of a vertex cycle.
pub fn canonical_edges(x: &CayleyGraph, cycle: &[usize]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..cycle.len())
        .map(|i| {
            let (v, w) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            x.oriented_edge(v, x.gen_between(v, w).expect("adjacent")).0
        })
        .collect();
    ids.sort_unstable();
    ids
}
