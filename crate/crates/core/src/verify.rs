//! Brute-force verification of the quotient shapes `F/H` and `E/H` over a
//! universe of small Cayley graphs, plus cross-checks of the weighting
//! membership tests against lattice membership.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{classify, predicted_quotients, CayleyGraph, ClassificationLabel, ConnectionSet, GraphError, QuotientDescriptor};
use crate::flows::{is_even, membership_by_weighting, FlowError};
use crate::group::AbelianGroup;
use crate::ham::{span_hamiltonian_lattice, HamError, HamLattice, SpanConfig};
use crate::lattice::{
    even_sublattice, fundamental_cycle_basis, intersect_with_even, lattice_quotient, relative_quotient,
    FundamentalCycleBasis, LatticeError, RowLattice,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("max order must be at least 3")]
    BadConfig,
    #[error("hamiltonian cycle {0} is odd on an even-order graph")]
    OddHamiltonian(String),
    #[error(transparent)]
    Ham(#[from] HamError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_order: u64,
    pub max_degree: Option<usize>,
    /// Extra tier `(max order, max degree)` above `max_order`.
    pub extended: Option<(u64, usize)>,
    pub jobs: usize,
    pub cycle_cap: Option<usize>,
    pub seed: u64,
    /// Record wall-clock milliseconds per graph (off for byte-stable reports).
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            max_order: 12,
            max_degree: None,
            extended: Some((16, 5)),
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            cycle_cap: None,
            seed: DEFAULT_SEED,
            timing: true,
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x4841_4d46;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientPair {
    pub fh: QuotientDescriptor,
    pub eh: QuotientDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub group: String,
    pub conn: String,
    pub label: String,
    pub expected: QuotientPair,
    pub computed: Option<QuotientPair>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub ham_count: usize,
    pub exhaustive: bool,
    pub ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub truncated: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub verdicts: Vec<Verdict>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Invariant-factor chains `d_1 | d_2 | ... | d_k` with product `n`.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    fn rec(rem: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 1 {
            out.push(acc.clone());
            return;
        }
        let mut d = min;
        while d <= rem {
            if rem.is_multiple_of(d) && acc.last().is_none_or(|&p| d.is_multiple_of(p)) {
                acc.push(d);
                rec(rem / d, d, acc, out);
                acc.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    rec(n, 2, &mut vec![], &mut out);
    out.sort();
    out
}

/// Every symmetric, identity-free generating set of size at most `max_degree`.
pub fn connection_sets(group: &AbelianGroup, max_degree: usize) -> Vec<ConnectionSet> {
    // Inverse classes {g, -g}; involutions form singleton classes.
    let mut classes: Vec<Vec<crate::group::GroupElement>> = Vec::new();
    for g in group.elements().skip(1) {
        let inv = group.neg(&g);
        if inv >= g {
            classes.push(if inv == g { vec![g] } else { vec![g, inv] });
        }
    }
    let mut out = Vec::new();
    let k = classes.len();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        size: usize,
        k: usize,
        max_degree: usize,
        classes: &[Vec<crate::group::GroupElement>],
        chosen: &mut Vec<usize>,
        group: &AbelianGroup,
        out: &mut Vec<ConnectionSet>,
    ) {
        if !chosen.is_empty() {
            let elems: Vec<_> = chosen.iter().flat_map(|&i| classes[i].iter().cloned()).collect();
            if group.subgroup_generated(&elems).map(|s| s.index == 1).unwrap_or(false) {
                out.push(ConnectionSet::new(group, &elems).expect("symmetric by construction"));
            }
        }
        for i in start..k {
            let sz = size + classes[i].len();
            if sz <= max_degree {
                chosen.push(i);
                rec(i + 1, sz, k, max_degree, classes, chosen, group, out);
                chosen.pop();
            }
        }
    }
    rec(0, 0, k, max_degree, &classes, &mut chosen, group, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.elements().cmp(b.elements())));
    out
}

/// All graphs in the configured universe, in a fixed order.
pub fn enumerate_universe(cfg: &SuiteConfig) -> Result<Vec<CayleyGraph>, VerifyError> {
    if cfg.max_order < 3 {
        return Err(VerifyError::BadConfig);
    }
    let mut tiers = vec![(3..=cfg.max_order, cfg.max_degree.unwrap_or(usize::MAX))];
    if let Some((hi, deg)) = cfg.extended {
        if hi > cfg.max_order {
            tiers.push((cfg.max_order + 1..=hi, deg.min(cfg.max_degree.unwrap_or(usize::MAX))));
        }
    }
    let mut out = Vec::new();
    for (orders, deg) in tiers {
        for n in orders {
            for factors in abelian_groups_of_order(n) {
                let group = AbelianGroup::new(&factors).map_err(GraphError::from)?;
                for conn in connection_sets(&group, deg.min(n as usize - 1)) {
                    out.push(CayleyGraph::new(group.clone(), conn)?);
                }
            }
        }
    }
    Ok(out)
}

/// `F/H`, `E/H` and the lattice data behind them.
#[derive(Debug, Clone)]
pub struct Quotients {
    pub pair: QuotientPair,
    pub ham: HamLattice,
    pub basis: FundamentalCycleBasis,
}

pub fn compute_quotients(x: &CayleyGraph, span: &SpanConfig) -> Result<Quotients, VerifyError> {
    let basis = fundamental_cycle_basis(x);
    let ham = span_hamiltonian_lattice(x, &basis, span)?;
    let h = &ham.lattice;
    let fh = lattice_quotient(h)?;
    let e = RowLattice::from_matrix(&even_sublattice(&basis));
    if x.order().is_multiple_of(2) {
        if let Some(row) = h.basis_rows().iter().find(|r| basis.coords_odd_big(r)) {
            return Err(VerifyError::OddHamiltonian(format!("{row:?}")));
        }
    }
    let h_even = intersect_with_even(h, &basis);
    let eh = relative_quotient(&e, &h_even)?;
    Ok(Quotients { pair: QuotientPair { fh, eh }, ham, basis })
}

fn span_config(cfg: &SuiteConfig) -> SpanConfig {
    SpanConfig { seed: cfg.seed, cycle_limit: cfg.cycle_cap, ..SpanConfig::default() }
}

pub fn check_against_theory(x: &CayleyGraph, cfg: &SuiteConfig) -> Result<Verdict, VerifyError> {
    let start = Instant::now();
    let label = classify(x);
    let (efh, eeh) = predicted_quotients(&label)?;
    let expected = QuotientPair { fh: efh, eh: eeh };
    let computed = match compute_quotients(x, &span_config(cfg)) {
        Ok(q) => Some(q),
        Err(VerifyError::Ham(HamError::TruncatedEnumeration)) => None,
        Err(e) => return Err(e),
    };
    let ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(Verdict {
        group: x.group().to_string(),
        conn: x.conn().render(x.group()),
        label: label.to_string(),
        matched: computed.as_ref().is_some_and(|q| q.pair == expected),
        ham_count: computed.as_ref().map_or(0, |q| q.ham.ham_count),
        exhaustive: computed.as_ref().is_some_and(|q| q.ham.exhaustive),
        computed: computed.map(|q| q.pair),
        expected,
        ms,
    })
}

fn summarize(verdicts: &[Verdict]) -> Summary {
    let truncated = verdicts.iter().filter(|v| v.computed.is_none()).count();
    let matched = verdicts.iter().filter(|v| v.matched).count();
    Summary { total: verdicts.len(), matched, mismatched: verdicts.len() - matched - truncated, truncated }
}

/// Runs the whole universe on a pool of `cfg.jobs` workers. Verdicts come
/// back in universe order whatever the scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    let graphs = enumerate_universe(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    let verdicts: Vec<Verdict> =
        pool.install(|| graphs.par_iter().map(|x| check_against_theory(x, cfg)).collect::<Result<_, _>>())?;
    let summary = summarize(&verdicts);
    Ok(Report { config: cfg.clone(), verdicts, summary })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub coords: Vec<i64>,
    pub by_weighting: bool,
    pub by_lattice: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub graph: String,
    pub label: String,
    pub trials: usize,
    pub members: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// Compares the weighting test with lattice membership on random flows
/// `Σ c_i C_i` over the fundamental cycles, `c_i ∈ [-3, 3]`. With
/// `even_only`, odd samples are redrawn.
pub fn cross_validate_membership(
    x: &CayleyGraph,
    label: &ClassificationLabel,
    trials: usize,
    seed: u64,
    even_only: bool,
) -> Result<MembershipReport, VerifyError> {
    let q = compute_quotients(x, &SpanConfig { seed, ..SpanConfig::default() })?;
    let basis = &q.basis;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = 0;
    let mut discrepancies = Vec::new();
    for _ in 0..trials {
        let coords = loop {
            let c: Vec<i64> = (0..basis.rank()).map(|_| rng.gen_range(-3..=3)).collect();
            if !even_only || !basis.coords_odd(&c) {
                break c;
            }
        };
        let f = basis.to_flow(&coords);
        debug_assert_eq!(is_even(&f), !basis.coords_odd(&coords));
        let by_weighting = membership_by_weighting(x, label, &f)?;
        let by_lattice = q.ham.lattice.contains(&coords)?;
        members += usize::from(by_lattice);
        if by_weighting != by_lattice {
            discrepancies.push(Discrepancy { coords, by_weighting, by_lattice });
        }
    }
    Ok(MembershipReport { graph: x.id(), label: label.to_string(), trials, members, discrepancies })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(g: &str, s: &str) -> CayleyGraph {
        CayleyGraph::parse(g, s).unwrap()
    }

    fn quick() -> SuiteConfig {
        SuiteConfig { jobs: 1, timing: false, ..SuiteConfig::default() }
    }

    #[test]
    fn groups_of_small_orders() {
        assert_eq!(abelian_groups_of_order(4), vec![vec![2, 2], vec![4]]);
        assert_eq!(abelian_groups_of_order(16).len(), 5);
        assert_eq!(abelian_groups_of_order(12), vec![vec![2, 6], vec![12]]);
    }

    #[test]
    fn universe_examples() {
        let cfg = SuiteConfig { max_order: 4, extended: None, ..quick() };
        let u = enumerate_universe(&cfg).unwrap();
        let groups: std::collections::BTreeSet<String> = u.iter().map(|x| x.group().to_string()).collect();
        assert_eq!(groups.into_iter().collect::<Vec<_>>(), ["Z2xZ2", "Z3", "Z4"]);
        let z4: Vec<String> = u.iter().filter(|x| x.group().to_string() == "Z4").map(|x| x.conn().render(x.group())).collect();
        assert_eq!(z4, ["1,3", "1,2,3"]);
        assert_eq!(u.iter().filter(|x| x.group().to_string() == "Z2xZ2").count(), 4);
    }

    #[test]
    fn quotient_examples() {
        let q = |g, s| compute_quotients(&graph(g, s), &SpanConfig::default()).unwrap().pair;
        assert_eq!(q("Z3xZ3", "(1,0),(2,0),(0,1),(0,2)").fh.torsion, vec![3]);
        assert_eq!(q("Z6", "1,5,3").eh.torsion, vec![3]);
        assert_eq!(q("Z4xZ2", "(1,0),(3,0),(0,1)").eh.torsion, vec![3]);
    }

    #[test]
    fn theory_examples() {
        for (g, s) in [("Z8", "1,7,2,6"), ("Z10", "2,8,3,7"), ("Z8", "1,7,3,5")] {
            let v = check_against_theory(&graph(g, s), &quick()).unwrap();
            assert!(v.matched, "{v:?}");
        }
    }

    #[test]
    fn membership_agrees_on_k3k3() {
        let x = graph("Z3xZ3", "(1,0),(2,0),(0,1),(0,2)");
        let r = cross_validate_membership(&x, &classify(&x), 200, 1, false).unwrap();
        assert!(r.discrepancies.is_empty());
        assert!(r.members > 0 && r.members < 200);
    }
}
