//! Finite abelian groups `Z_{d1} x ... x Z_{dk}` and their elements.
//!
//! Groups are written additively: the product `s t` of the multiplicative
//! notation becomes `s + t`, and `s^{-1}` becomes `-s`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group needs at least one cyclic factor")]
    EmptyFactors,
    #[error("cyclic factor {0} is below 2")]
    FactorBelowTwo(u64),
    #[error("coordinate {coord} out of range for factor Z_{modulus}")]
    CoordOutOfRange { coord: i64, modulus: u64 },
    #[error("element has {got} coordinates, group has {expected} factors")]
    WrongArity { got: usize, expected: usize },
    #[error("cannot parse group `{0}` (expected e.g. Z6 or Z2xZ4)")]
    BadGroupSyntax(String),
    #[error("cannot parse element `{0}`")]
    BadElementSyntax(String),
}

/// An element, stored as residues `coords[i]` in `[0, d_i)`.
///
/// The derived ordering is lexicographic on coordinates, which is the order
/// used everywhere a canonical choice is needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: u64,
    strides: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: BTreeSet<GroupElement>,
    pub order: u64,
    pub index: u64,
}

impl AbelianGroup {
    pub fn new(factors: &[u64]) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::EmptyFactors);
        }
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(GroupError::FactorBelowTwo(d));
        }
        let order = factors.iter().product();
        let mut strides = vec![1u64; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        Ok(Self { factors: factors.to_vec(), order, strides })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.factors.len()] }
    }

    /// Strict constructor: every coordinate must already be a residue.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        self.check_arity(coords.len())?;
        let mut out = Vec::with_capacity(coords.len());
        for (&c, &d) in coords.iter().zip(&self.factors) {
            if c < 0 || c as u64 >= d {
                return Err(GroupError::CoordOutOfRange { coord: c, modulus: d });
            }
            out.push(c as u64);
        }
        Ok(GroupElement { coords: out })
    }

    /// Lenient constructor: coordinates are reduced modulo their factor.
    pub fn reduce(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        self.check_arity(coords.len())?;
        let coords = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    fn check_arity(&self, got: usize) -> Result<(), GroupError> {
        if got != self.factors.len() {
            return Err(GroupError::WrongArity { got, expected: self.factors.len() });
        }
        Ok(())
    }

    pub fn validate(&self, g: &GroupElement) -> Result<(), GroupError> {
        self.check_arity(g.coords.len())?;
        for (&c, &d) in g.coords.iter().zip(&self.factors) {
            if c >= d {
                return Err(GroupError::CoordOutOfRange { coord: c as i64, modulus: d });
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect();
        GroupElement { coords }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let coords = a.coords.iter().zip(&self.factors).map(|(&x, &d)| (d - x) % d).collect();
        GroupElement { coords }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// `k * a`, for any integer `k` (the multiplicative `a^k`).
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&x, &d)| {
                let m = (k.rem_euclid(d as i64) as u128 * x as u128) % d as u128;
                m as u64
            })
            .collect();
        GroupElement { coords }
    }

    /// Position of `g` in lexicographic order; also its index as a vertex.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.coords.iter().zip(&self.strides).map(|(&c, &s)| c * s).sum::<u64>() as usize
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            let d = self.factors[i] as usize;
            coords[i] = (idx % d) as u64;
            idx /= d;
        }
        GroupElement { coords }
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    pub fn element_order(&self, g: &GroupElement) -> Result<u64, GroupError> {
        self.validate(g)?;
        Ok(g.coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &d)| d / d.gcd(&c))
            .fold(1, |acc, k| acc.lcm(&k)))
    }

    pub fn subgroup_generated(&self, gens: &[GroupElement]) -> Result<Subgroup, GroupError> {
        for g in gens {
            self.validate(g)?;
        }
        let mut elements = BTreeSet::new();
        let mut stack = vec![self.identity()];
        elements.insert(self.identity());
        while let Some(x) = stack.pop() {
            for g in gens {
                for y in [self.add(&x, g), self.sub(&x, g)] {
                    if elements.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
        }
        let order = elements.len() as u64;
        Ok(Subgroup { elements, order, index: self.order / order })
    }

    /// Parses `(a,b,...)`, or a bare integer when the group is cyclic.
    /// Negative and oversized values are reduced.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let bad = || GroupError::BadElementSyntax(text.to_string());
        let t = text.trim();
        let inner = match t.strip_prefix('(') {
            Some(rest) => rest.strip_suffix(')').ok_or_else(bad)?,
            None => t,
        };
        let coords: Vec<i64> = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        self.reduce(&coords)
    }

    pub fn render_element(&self, g: &GroupElement) -> String {
        if g.coords.len() == 1 {
            g.coords[0].to_string()
        } else {
            let parts: Vec<String> = g.coords.iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for AbelianGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::BadGroupSyntax(s.to_string());
        let mut factors = Vec::new();
        for part in s.trim().split('x') {
            let digits = part
                .trim()
                .strip_prefix('Z')
                .or_else(|| part.trim().strip_prefix('z'))
                .ok_or_else(bad)?;
            factors.push(digits.trim_start_matches('_').parse::<u64>().map_err(|_| bad())?);
        }
        AbelianGroup::new(&factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_group_examples() {
        assert_eq!(AbelianGroup::new(&[4]).unwrap().order(), 4);
        assert_eq!(AbelianGroup::new(&[2, 3]).unwrap().order(), 6);
        assert_eq!(AbelianGroup::new(&[1]), Err(GroupError::FactorBelowTwo(1)));
        assert_eq!(AbelianGroup::new(&[]), Err(GroupError::EmptyFactors));
    }

    #[test]
    fn element_order_examples() {
        let g = AbelianGroup::new(&[2, 3]).unwrap();
        assert_eq!(g.element_order(&g.identity()).unwrap(), 1);
        let z10 = AbelianGroup::new(&[10]).unwrap();
        assert_eq!(z10.element_order(&z10.element(&[2]).unwrap()).unwrap(), 5);
        assert_eq!(z10.element_order(&z10.element(&[7]).unwrap()).unwrap(), 10);
        let bad = GroupElement { coords: vec![12] };
        assert!(matches!(z10.element_order(&bad), Err(GroupError::CoordOutOfRange { .. })));
    }

    #[test]
    fn subgroup_examples() {
        let z6 = AbelianGroup::new(&[6]).unwrap();
        let triv = z6.subgroup_generated(&[]).unwrap();
        assert_eq!((triv.order, triv.index), (1, 6));
        let z10 = AbelianGroup::new(&[10]).unwrap();
        let even = z10.subgroup_generated(&[z10.element(&[2]).unwrap()]).unwrap();
        assert_eq!((even.order, even.index), (5, 2));
        let g = AbelianGroup::new(&[3, 3]).unwrap();
        let all = g
            .subgroup_generated(&[g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap()])
            .unwrap();
        assert_eq!(all.index, 1);
    }

    #[test]
    fn parse_and_render() {
        let g: AbelianGroup = "Z2xZ4".parse().unwrap();
        assert_eq!(g.factors(), &[2, 4]);
        assert_eq!(g.to_string(), "Z2xZ4");
        let x = g.parse_element("(1,-1)").unwrap();
        assert_eq!(g.render_element(&x), "(1,3)");
        let z = "z7".parse::<AbelianGroup>().unwrap();
        assert_eq!(z.render_element(&z.parse_element("-2").unwrap()), "5");
        assert!("Q8".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn index_roundtrip_is_lexicographic() {
        let g = AbelianGroup::new(&[3, 2, 4]).unwrap();
        let all: Vec<_> = g.elements().collect();
        for (i, x) in all.iter().enumerate() {
            assert_eq!(g.index_of(x), i);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
