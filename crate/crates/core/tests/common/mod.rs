#![allow(dead_code)]

use hamflow_core::lattice::IntegerMatrix;
use hamflow_core::CayleyGraph;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn graph(group: &str, conn: &str) -> CayleyGraph {
    CayleyGraph::parse(group, conn).unwrap_or_else(|e| panic!("{group} {conn}: {e}"))
}

/// Fraction-free Gaussian elimination; independent of the crate's own
/// normal-form code.
pub fn det(m: &IntegerMatrix) -> BigInt {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.rows().to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn matrix(rows: &[Vec<i64>], cols: usize) -> IntegerMatrix {
    IntegerMatrix::from_rows(cols, rows).unwrap()
}
