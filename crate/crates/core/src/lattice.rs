//! Exact integer linear algebra: Hermite and Smith forms, membership,
//! quotient shapes, and coordinates on the flow lattice.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cayley::{CayleyGraph, QuotientDescriptor};
use crate::flows::Flow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("expected {expected} columns, got {got}")]
    ColumnMismatch { expected: usize, got: usize },
    #[error("vector has length {got}, lattice dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rows have unequal lengths")]
    Ragged,
    #[error("generators are not contained in the ambient lattice")]
    NotSublattice,
    #[error("invariant factor {0} does not fit in 64 bits")]
    TooLarge(String),
}

/// Dense matrix of big integers stored as rows; zero-row and zero-column
/// shapes are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: vec![] }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::from_big_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_big_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LatticeError::Ragged);
        }
        Ok(Self { cols, rows })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) -> Result<(), LatticeError> {
        if row.len() != self.cols {
            return Err(LatticeError::ColumnMismatch { expected: self.cols, got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, LatticeError> {
        if self.cols != other.nrows() {
            return Err(LatticeError::ColumnMismatch { expected: other.nrows(), got: self.cols });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| r.iter().zip(&other.rows).map(|(a, orow)| a * &orow[j]).sum())
                    .collect()
            })
            .collect();
        Ok(IntegerMatrix { cols: other.cols, rows })
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let rows = (0..self.cols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        IntegerMatrix { cols: self.rows.len(), rows }
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
    }

    /// Rows as JSON arrays; entries beyond 64 bits become strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    serde_json::Value::Array(
                        r.iter()
                            .map(|x| match x.to_i64() {
                                Some(v) => serde_json::Value::from(v),
                                None => serde_json::Value::from(x.to_string()),
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Result of [`snf`]: `u * m * v = d`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl Snf {
    /// Nonzero diagonal entries in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for r in m.iter_mut() {
        r.swap(a, b);
    }
}

/// `row[dst] -= q * row[src]`.
fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for r in m.iter_mut() {
        if !r[src].is_zero() {
            let t = q * &r[src];
            r[dst] -= t;
        }
    }
}

/// Smith normal form by gcd-driven elimination, pivoting on the smallest
/// nonzero entry. With `track = false` the transforms are left as identities.
fn snf_impl(m: &IntegerMatrix, track: bool) -> Snf {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut a = m.rows.clone();
    let mut u = if track { IntegerMatrix::identity(nr).rows } else { vec![] };
    let mut v = if track { IntegerMatrix::identity(nc).rows } else { vec![] };
    let mut t = 0;
    while t < nr.min(nc) {
        // Pivot: smallest nonzero |entry| in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        if track {
            u.swap(t, pi);
        }
        swap_cols(&mut a, t, pj);
        if track {
            swap_cols(&mut v, t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                if track {
                    row_axpy(&mut u, i, t, &q);
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                if track {
                    col_axpy(&mut v, j, t, &q);
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remainder in row/column t to the pivot.
                let mut best = (t, t);
                for i in t + 1..nr {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..nc {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    if track {
                        u.swap(t, best.0);
                    }
                }
                if best.1 != t {
                    swap_cols(&mut a, t, best.1);
                    if track {
                        swap_cols(&mut v, t, best.1);
                    }
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the block.
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    if track {
                        row_axpy(&mut u, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if track {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        t += 1;
    }
    Snf {
        u: IntegerMatrix { cols: nr, rows: u },
        d: IntegerMatrix { cols: nc, rows: a },
        v: IntegerMatrix { cols: nc, rows: v },
    }
}

/// `(U, D, V)` with `U·M·V = D` diagonal, `U`, `V` unimodular and each
/// diagonal entry dividing the next.
pub fn snf(m: &IntegerMatrix) -> Snf {
    snf_impl(m, true)
}

/// Arithmetic used by [`RowLattice`]: checked machine words or big integers.
pub trait Coef: Clone + Debug + PartialEq + Send + Sync {
    fn nil() -> Self;
    fn of(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn negated(&self) -> Option<Self>;
    fn plus(&self, o: &Self) -> Option<Self>;
    fn times(&self, o: &Self) -> Option<Self>;
    /// Floor quotient and remainder.
    fn floor_div_mod(&self, o: &Self) -> (Self, Self);
    /// `(g, x, y)` with `g = x a + y b = gcd(a, b) > 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn widen(&self) -> BigInt;
}

impl Coef for i64 {
    fn nil() -> Self {
        0
    }
    fn of(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn floor_div_mod(&self, o: &Self) -> (Self, Self) {
        Integer::div_mod_floor(self, o)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        const LIMIT: i64 = 1 << 62;
        if a.abs() >= LIMIT || b.abs() >= LIMIT {
            return None;
        }
        let e = Integer::extended_gcd(a, b);
        Some(if e.gcd < 0 { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) })
    }
    fn widen(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn of(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn plus(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn times(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn floor_div_mod(&self, o: &Self) -> (Self, Self) {
        Integer::div_mod_floor(self, o)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = Integer::extended_gcd(a, b);
        Some(if Signed::is_negative(&e.gcd) { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) })
    }
    fn widen(&self) -> BigInt {
        self.clone()
    }
}

/// `a*x + b*y` elementwise, or `None` on overflow.
fn combine<T: Coef>(x: &[T], a: &T, y: &[T], b: &T) -> Option<Vec<T>> {
    x.iter().zip(y).map(|(p, q)| p.times(a)?.plus(&q.times(b)?)).collect()
}

/// A lattice in `Z^n` kept as an echelon basis indexed by pivot column;
/// pivots are positive.
#[derive(Debug, Clone)]
struct Echelon<T: Coef> {
    dim: usize,
    pivots: Vec<Option<Vec<T>>>,
}

/// Insertion ran out of machine precision; `carry` still has to be inserted.
struct Overflowed<T> {
    carry: Vec<T>,
    start: usize,
    changed: bool,
}

impl<T: Coef> Echelon<T> {
    fn new(dim: usize) -> Self {
        Self { dim, pivots: vec![None; dim] }
    }

    /// Inserts `v` from column `start` on. Each step computes into
    /// temporaries first, so on overflow the basis plus `carry` still spans
    /// the intended lattice.
    fn insert(&mut self, v: Vec<T>, start: usize) -> Result<bool, Overflowed<T>> {
        let changed = self.insert_unreduced(v, start)?;
        if changed {
            self.reduce();
        }
        Ok(changed)
    }

    /// Brings entries above each pivot into `[0, pivot)`, which keeps
    /// coefficients from growing across insertions. Steps that would
    /// overflow are skipped; the lattice is unchanged either way.
    fn reduce(&mut self) {
        for c in (0..self.dim).rev() {
            let Some(b) = self.pivots[c].clone() else { continue };
            for i in 0..c {
                let Some(row) = &self.pivots[i] else { continue };
                let (q, _) = row[c].floor_div_mod(&b[c]);
                if q.is_nil() {
                    continue;
                }
                if let Some(w) = q.negated().and_then(|nq| combine(row, &T::of(1), &b, &nq)) {
                    self.pivots[i] = Some(w);
                }
            }
        }
    }

    fn insert_unreduced(&mut self, mut v: Vec<T>, start: usize) -> Result<bool, Overflowed<T>> {
        let mut changed = false;
        for c in start..self.dim {
            if v[c].is_nil() {
                continue;
            }
            let Some(b) = &self.pivots[c] else {
                if v[c].is_neg() {
                    match v.iter().map(Coef::negated).collect::<Option<Vec<_>>>() {
                        Some(n) => v = n,
                        None => return Err(Overflowed { carry: v, start: c, changed }),
                    }
                }
                self.pivots[c] = Some(v);
                return Ok(true);
            };
            let (q, r) = v[c].floor_div_mod(&b[c]);
            if r.is_nil() {
                match q.negated().and_then(|nq| combine(&v, &T::of(1), b, &nq)) {
                    Some(w) => v = w,
                    None => return Err(Overflowed { carry: v, start: c, changed }),
                }
                continue;
            }
            let step = (|| {
                let (g, x, y) = T::ext_gcd(&b[c], &v[c])?;
                let new_b = combine(b, &x, &v, &y)?;
                let (bq, _) = b[c].floor_div_mod(&g);
                let (vq, _) = v[c].floor_div_mod(&g);
                let new_v = combine(&v, &bq, b, &vq.negated()?)?;
                Some((new_b, new_v))
            })();
            match step {
                Some((nb, nv)) => {
                    self.pivots[c] = Some(nb);
                    v = nv;
                    changed = true;
                }
                None => return Err(Overflowed { carry: v, start: c, changed }),
            }
        }
        Ok(changed)
    }

    fn contains(&self, v: &[T]) -> Option<bool> {
        let mut v = v.to_vec();
        for c in 0..self.dim {
            if v[c].is_nil() {
                continue;
            }
            let Some(b) = &self.pivots[c] else { return Some(false) };
            let (q, r) = v[c].floor_div_mod(&b[c]);
            if !r.is_nil() {
                return Some(false);
            }
            v = combine(&v, &T::of(1), b, &q.negated()?)?;
        }
        Some(true)
    }

    fn to_big(&self) -> Echelon<BigInt> {
        Echelon {
            dim: self.dim,
            pivots: self.pivots.iter().map(|p| p.as_ref().map(|r| r.iter().map(Coef::widen).collect())).collect(),
        }
    }
}

#[derive(Debug, Clone)]
enum Store {
    Small(Echelon<i64>),
    Big(Echelon<BigInt>),
}

/// Incrementally grown row lattice. Starts in `i64` and moves to big
/// integers the first time an operation would overflow.
#[derive(Debug, Clone)]
pub struct RowLattice {
    store: Store,
}

impl RowLattice {
    pub fn new(dim: usize) -> Self {
        Self { store: Store::Small(Echelon::new(dim)) }
    }

    pub fn from_matrix(m: &IntegerMatrix) -> Self {
        let mut l = Self::new(m.ncols());
        for r in m.rows() {
            l.insert_big(r.clone());
        }
        l
    }

    pub fn dim(&self) -> usize {
        match &self.store {
            Store::Small(e) => e.dim,
            Store::Big(e) => e.dim,
        }
    }

    pub fn is_big(&self) -> bool {
        matches!(self.store, Store::Big(_))
    }

    /// Adds a generator; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[i64]) -> Result<bool, LatticeError> {
        if v.len() != self.dim() {
            return Err(LatticeError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(match &mut self.store {
            Store::Small(e) => match e.insert(v.to_vec(), 0) {
                Ok(ch) => ch,
                Err(Overflowed { carry, start, changed }) => {
                    let mut big = e.to_big();
                    let carry = carry.iter().map(Coef::widen).collect();
                    let ch = big.insert(carry, start).unwrap_or_else(|_| unreachable!("big integers do not overflow"));
                    self.store = Store::Big(big);
                    ch || changed
                }
            },
            Store::Big(e) => e
                .insert(v.iter().map(|&x| BigInt::from(x)).collect(), 0)
                .unwrap_or_else(|_| unreachable!("big integers do not overflow")),
        })
    }

    pub fn insert_big(&mut self, v: Vec<BigInt>) -> bool {
        if let Some(small) = v.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>() {
            return self.insert(&small).expect("dimension checked by caller");
        }
        let big = match &mut self.store {
            Store::Small(e) => {
                self.store = Store::Big(e.to_big());
                match &mut self.store {
                    Store::Big(b) => b,
                    Store::Small(_) => unreachable!(),
                }
            }
            Store::Big(b) => b,
        };
        big.insert(v, 0).unwrap_or_else(|_| unreachable!("big integers do not overflow"))
    }

    pub fn rank(&self) -> usize {
        match &self.store {
            Store::Small(e) => e.pivots.iter().flatten().count(),
            Store::Big(e) => e.pivots.iter().flatten().count(),
        }
    }

    /// Index in `Z^n` (product of pivots) when the lattice has full rank.
    pub fn full_rank_index(&self) -> Option<BigInt> {
        if self.rank() != self.dim() {
            return None;
        }
        Some(self.basis_rows().iter().enumerate().map(|(i, r)| r[i].clone()).product())
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool, LatticeError> {
        if v.len() != self.dim() {
            return Err(LatticeError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(match &self.store {
            Store::Small(e) => match e.contains(v) {
                Some(ans) => ans,
                None => e.to_big().contains(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap(),
            },
            Store::Big(e) => e.contains(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap(),
        })
    }

    pub fn contains_big(&self, v: &[BigInt]) -> bool {
        let big = match &self.store {
            Store::Small(e) => e.to_big(),
            Store::Big(e) => e.clone(),
        };
        big.contains(v).unwrap()
    }

    /// Echelon basis rows in pivot order (not reduced above pivots).
    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        match &self.store {
            Store::Small(e) => e.pivots.iter().flatten().map(|r| r.iter().map(Coef::widen).collect()).collect(),
            Store::Big(e) => e.pivots.iter().flatten().cloned().collect(),
        }
    }

    pub fn basis(&self) -> IntegerMatrix {
        IntegerMatrix { cols: self.dim(), rows: self.basis_rows() }
    }

    /// Hermite normal form: echelon rows with entries above each pivot
    /// reduced into `[0, pivot)`.
    pub fn hnf(&self) -> IntegerMatrix {
        let mut rows = self.basis_rows();
        let pivot_col = |r: &Vec<BigInt>| r.iter().position(|x| !x.is_zero()).unwrap();
        for i in 0..rows.len() {
            let c = pivot_col(&rows[i]);
            for k in 0..i {
                let q = rows[k][c].div_floor(&rows[i][c]);
                if !q.is_zero() {
                    row_axpy(&mut rows, k, i, &q);
                }
            }
        }
        IntegerMatrix { cols: self.dim(), rows }
    }
}

pub fn hnf(m: &IntegerMatrix) -> IntegerMatrix {
    RowLattice::from_matrix(m).hnf()
}

fn descriptor(ambient_rank: usize, diag: &[BigInt]) -> Result<QuotientDescriptor, LatticeError> {
    let torsion = diag
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().ok_or_else(|| LatticeError::TooLarge(d.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QuotientDescriptor { free: ambient_rank - diag.len(), torsion })
}

/// Shape of `Z^n / (row lattice of gens)`.
pub fn quotient_invariants(ambient_rank: usize, gens: &IntegerMatrix) -> Result<QuotientDescriptor, LatticeError> {
    if gens.ncols() != ambient_rank {
        return Err(LatticeError::ColumnMismatch { expected: ambient_rank, got: gens.ncols() });
    }
    let reduced = RowLattice::from_matrix(gens).basis();
    descriptor(ambient_rank, &snf_impl(&reduced, false).diagonal())
}

pub fn lattice_quotient(l: &RowLattice) -> Result<QuotientDescriptor, LatticeError> {
    descriptor(l.dim(), &snf_impl(&l.basis(), false).diagonal())
}

/// Shape of `A / B` where `B ⊆ A ⊆ Z^n`, both given as row lattices.
pub fn relative_quotient(a: &RowLattice, b: &RowLattice) -> Result<QuotientDescriptor, LatticeError> {
    let basis = a.basis_rows();
    let pivots: Vec<usize> = basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
    let mut coords = Vec::new();
    for v in b.basis_rows() {
        let mut v = v;
        let mut c = vec![BigInt::zero(); basis.len()];
        for (i, (row, &p)) in basis.iter().zip(&pivots).enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let (q, r) = v[p].div_mod_floor(&row[p]);
            if !r.is_zero() {
                return Err(LatticeError::NotSublattice);
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
            c[i] = q;
        }
        if v.iter().any(|x| !x.is_zero()) {
            return Err(LatticeError::NotSublattice);
        }
        coords.push(c);
    }
    let m = IntegerMatrix { cols: basis.len(), rows: coords };
    descriptor(basis.len(), &snf_impl(&m, false).diagonal())
}

/// Whether `v` is an integer combination of the rows of `gens`.
pub fn lattice_contains(gens: &IntegerMatrix, v: &[i64]) -> Result<bool, LatticeError> {
    if v.len() != gens.ncols() {
        return Err(LatticeError::DimensionMismatch { expected: gens.ncols(), got: v.len() });
    }
    RowLattice::from_matrix(gens).contains(v)
}

/// Some integer row vector `x` with `x · M = b`, if one exists.
pub fn solve(m: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if b.len() != m.ncols() {
        return Err(LatticeError::DimensionMismatch { expected: m.ncols(), got: b.len() });
    }
    let Snf { u, d, v } = snf(m);
    // x U^-1 D = b V; write y = x U^-1.
    let bv: Vec<BigInt> = (0..m.ncols()).map(|j| b.iter().zip(v.rows()).map(|(bi, vr)| bi * &vr[j]).sum()).collect();
    let rank = (0..m.nrows().min(m.ncols())).take_while(|&i| !d.get(i, i).is_zero()).count();
    let mut y = vec![BigInt::zero(); m.nrows()];
    for (j, val) in bv.iter().enumerate() {
        if j < rank {
            let (q, r) = val.div_mod_floor(d.get(j, j));
            if !r.is_zero() {
                return Ok(None);
            }
            y[j] = q;
        } else if !val.is_zero() {
            return Ok(None);
        }
    }
    let x = (0..m.nrows()).map(|j| y.iter().zip(u.rows()).map(|(yi, ur)| yi * &ur[j]).sum()).collect();
    Ok(Some(x))
}

/// Basis of the left kernel `{x : x · M = 0}`.
pub fn left_kernel(m: &IntegerMatrix) -> IntegerMatrix {
    let Snf { u, d, .. } = snf(m);
    let rank = (0..m.nrows().min(m.ncols())).take_while(|&i| !d.get(i, i).is_zero()).count();
    IntegerMatrix { cols: m.nrows(), rows: u.rows()[rank..].to_vec() }
}

/// Spanning tree from the identity and one cycle per remaining edge.
///
/// A flow is determined by its values on the chords, so those values are
/// its coordinates.
#[derive(Debug, Clone)]
pub struct FundamentalCycleBasis {
    pub chords: Vec<usize>,
    /// For each canonical edge, its chord position if it is not a tree edge.
    pub chord_of: Vec<Option<usize>>,
    pub cycles: Vec<Flow>,
    /// Length parity of each fundamental cycle.
    pub odd: Vec<bool>,
}

impl FundamentalCycleBasis {
    pub fn rank(&self) -> usize {
        self.chords.len()
    }

    pub fn coords(&self, f: &Flow) -> Vec<i64> {
        self.chords.iter().map(|&e| f.coeffs[e]).collect()
    }

    pub fn to_flow(&self, coords: &[i64]) -> Flow {
        let mut out = Flow { coeffs: vec![0; self.chord_of.len()] };
        for (c, &k) in self.cycles.iter().zip(coords) {
            if k != 0 {
                out = out.checked_add(&c.checked_scale(k).expect("coefficient overflow")).expect("coefficient overflow");
            }
        }
        out
    }

    /// Parity of the flow with these coordinates.
    pub fn coords_odd(&self, coords: &[i64]) -> bool {
        coords.iter().zip(&self.odd).filter(|(&c, &o)| o && c.rem_euclid(2) == 1).count() % 2 == 1
    }

    pub fn coords_odd_big(&self, coords: &[BigInt]) -> bool {
        coords.iter().zip(&self.odd).filter(|(c, &o)| o && c.is_odd()).count() % 2 == 1
    }
}

pub fn fundamental_cycle_basis(x: &CayleyGraph) -> FundamentalCycleBasis {
    let n = x.order();
    // parent[v] = (u, k) with v = u + s_k.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; x.edge_count()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for k in 0..x.degree() {
            let w = x.step(v, k);
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, k));
                tree_edge[x.oriented_edge(v, k).0] = true;
                queue.push_back(w);
            }
        }
    }
    let mut chords = Vec::new();
    let mut chord_of = vec![None; x.edge_count()];
    let mut cycles = Vec::new();
    let mut odd = Vec::new();
    for (id, e) in x.edges().iter().enumerate() {
        if tree_edge[id] {
            continue;
        }
        chord_of[id] = Some(chords.len());
        chords.push(id);
        // tail -> head along the chord, then head -> root -> tail in the tree.
        let mut f = Flow::zero(x);
        f.add_edge(x, e.tail, e.gen, 1);
        let head = x.step(e.tail, e.gen);
        let mut len = 1i64;
        let mut cur = head;
        while let Some((p, k)) = parent[cur] {
            f.add_edge(x, p, k, -1);
            cur = p;
        }
        let mut cur = e.tail;
        while let Some((p, k)) = parent[cur] {
            f.add_edge(x, p, k, 1);
            cur = p;
        }
        len += f.coeffs.iter().map(|c| c.abs()).sum::<i64>() - 1;
        odd.push(len % 2 == 1);
        cycles.push(f);
    }
    FundamentalCycleBasis { chords, chord_of, cycles, odd }
}

/// Generators of the even flows `E` in fundamental-cycle coordinates.
pub fn even_sublattice(basis: &FundamentalCycleBasis) -> IntegerMatrix {
    let m = basis.rank();
    let mut out = IntegerMatrix::identity(m);
    if let Some(j0) = basis.odd.iter().position(|&o| o) {
        for c in 0..m {
            if c == j0 {
                out.set(c, c, BigInt::from(2));
            } else if basis.odd[c] {
                out.set(c, j0, BigInt::one());
            }
        }
    }
    out
}

/// Generators of `L ∩ E` from an echelon basis of `L`.
pub fn intersect_with_even(l: &RowLattice, basis: &FundamentalCycleBasis) -> RowLattice {
    let rows = l.basis_rows();
    let mut out = RowLattice::new(l.dim());
    let mut first_odd: Option<&Vec<BigInt>> = None;
    for r in &rows {
        if !basis.coords_odd_big(r) {
            out.insert_big(r.clone());
        } else if let Some(o) = first_odd {
            out.insert_big(r.iter().zip(o).map(|(a, b)| a + b).collect());
        } else {
            first_odd = Some(r);
            out.insert_big(r.iter().map(|a| a * 2).collect());
        }
    }
    out
}
