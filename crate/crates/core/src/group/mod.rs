//! Exact integer matrix groups acting on the parameter hyperplane: the
//! symmetric subgroup, the invariance group of order 1920, and the governing
//! group of order 23040 whose right cosets index the terms of the
//! three-term relations.

pub mod builtins;
pub mod cosets;

pub use builtins::{builtin_matrices, Builtins};
pub use cosets::{
    coherent_base, incoherent_base, CosetTable, DoubleCoset, SignedPermutation, Transporter,
    Triple,
};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub type Matrix = [[i64; 7]; 7];

/// The constraint functional: every group element g satisfies
/// v^T g = v^T with v = (-1,-1,-1,-1,1,1,1), so the hyperplane is preserved.
pub const CONSTRAINT: [i64; 7] = [-1, -1, -1, -1, 1, 1, 1];

/// A 7x7 integer matrix acting on parameter points.
///
/// Ordering is lexicographic on the row-major entries, giving the
/// deterministic tie-breaks used for representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub matrix: Matrix,
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        let mut matrix = [[0i64; 7]; 7];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        GroupElement { matrix }
    }

    /// Permutation matrix for disjoint cycles on {1..7}: sigma maps basis
    /// vector e_j to e_{sigma(j)}, so entry [sigma(j)-1][j-1] is 1.
    pub fn from_cycles(cycles: &[&[usize]]) -> GroupElement {
        let mut map = [0usize; 8];
        for (j, m) in map.iter_mut().enumerate() {
            *m = j;
        }
        for cycle in cycles {
            for (k, &j) in cycle.iter().enumerate() {
                map[j] = cycle[(k + 1) % cycle.len()];
            }
        }
        let mut matrix = [[0i64; 7]; 7];
        for j in 1..=7 {
            matrix[map[j] - 1][j - 1] = 1;
        }
        GroupElement { matrix }
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let mut matrix = [[0i64; 7]; 7];
        for i in 0..7 {
            for k in 0..7 {
                let x = self.matrix[i][k];
                if x == 0 {
                    continue;
                }
                for j in 0..7 {
                    matrix[i][j] += x * other.matrix[k][j];
                }
            }
        }
        GroupElement { matrix }
    }

    pub fn pow(&self, n: u32) -> GroupElement {
        let mut out = GroupElement::identity();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact inverse by rational Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<GroupElement> {
        let mut a: Vec<Vec<Rational>> = (0..7)
            .map(|i| {
                (0..14)
                    .map(|j| {
                        if j < 7 {
                            Rational::from(self.matrix[i][j])
                        } else {
                            Rational::from((j - 7 == i) as i64)
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..7 {
            let pivot = (col..7)
                .find(|&r| a[r][col] != 0)
                .ok_or_else(|| Error::Invalid("singular matrix has no inverse".into()))?;
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..14 {
                a[col][j] /= &p;
            }
            for r in 0..7 {
                if r == col || a[r][col] == 0 {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..14 {
                    let sub = Rational::from(&factor * &a[col][j]);
                    a[r][j] -= sub;
                }
            }
        }
        let mut matrix = [[0i64; 7]; 7];
        for i in 0..7 {
            for j in 0..7 {
                let entry = &a[i][j + 7];
                if *entry.denom() != 1 {
                    return Err(Error::Invalid("inverse is not an integer matrix".into()));
                }
                matrix[i][j] = entry.numer().to_i64().ok_or_else(|| {
                    Error::Invalid("inverse entry exceeds 64 bits".into())
                })?;
            }
        }
        Ok(GroupElement { matrix })
    }

    pub fn det(&self) -> i64 {
        // cofactor expansion is fine at this size
        fn det_n(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            let mut acc = 0i64;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i64>> = (1..n)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| m[r][c])
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                acc += sign * m[0][j] * det_n(&minor);
            }
            acc
        }
        let rows: Vec<Vec<i64>> = self.matrix.iter().map(|r| r.to_vec()).collect();
        det_n(&rows)
    }

    /// v^T g = v^T for the constraint functional.
    pub fn preserves_constraint(&self) -> bool {
        (0..7).all(|j| {
            (0..7)
                .map(|i| CONSTRAINT[i] * self.matrix[i][j])
                .sum::<i64>()
                == CONSTRAINT[j]
        })
    }

    pub fn is_permutation_matrix(&self) -> bool {
        self.matrix.iter().all(|row| {
            row.iter().all(|&x| x == 0 || x == 1) && row.iter().sum::<i64>() == 1
        }) && (0..7).all(|j| (0..7).map(|i| self.matrix[i][j]).sum::<i64>() == 1)
    }

    /// The element invariants: unit determinant up to sign and constraint
    /// preservation.
    pub fn validate(&self) -> Result<()> {
        let d = self.det();
        if d != 1 && d != -1 {
            return Err(Error::Invalid(format!("determinant {d} is not +-1")));
        }
        if !self.preserves_constraint() {
            return Err(Error::Invalid(
                "matrix does not preserve the hyperplane functional".into(),
            ));
        }
        Ok(())
    }
}

/// A finite matrix group stored as its full element list in deterministic
/// closure order (identity first), with O(1) membership.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    generators: Vec<GroupElement>,
}

impl MatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// Elements in breadth-first closure order.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }
}

/// Breadth-first closure of the generators under right multiplication.
/// Deterministic element order; fails past `cap` (a wrong generator set
/// typically explodes the closure).
pub fn generate_closure(generators: &[GroupElement], cap: usize) -> Result<MatrixGroup> {
    for g in generators {
        g.validate()?;
    }
    let identity = GroupElement::identity();
    let mut elements = vec![identity];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);
    let mut head = 0usize;
    while head < elements.len() {
        let x = elements[head];
        head += 1;
        for g in generators {
            let y = x.mul(g);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                index.insert(y, elements.len());
                elements.push(y);
            }
        }
    }
    Ok(MatrixGroup {
        elements,
        index,
        generators: generators.to_vec(),
    })
}

/// One of the twelve right-coset labels: 1..6, optionally barred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetLabel {
    pub index: u8,
    pub barred: bool,
}

impl CosetLabel {
    pub fn new(index: u8, barred: bool) -> Result<CosetLabel> {
        if !(1..=6).contains(&index) {
            return Err(Error::Invalid(format!("coset index {index} out of 1..6")));
        }
        Ok(CosetLabel { index, barred })
    }

    pub fn unbarred(index: u8) -> CosetLabel {
        CosetLabel::new(index, false).expect("index in 1..6")
    }

    pub fn barred(index: u8) -> CosetLabel {
        CosetLabel::new(index, true).expect("index in 1..6")
    }

    /// The involution swapping i and i-bar.
    pub fn bar(self) -> CosetLabel {
        CosetLabel {
            index: self.index,
            barred: !self.barred,
        }
    }

    pub fn all() -> [CosetLabel; 12] {
        std::array::from_fn(|k| CosetLabel {
            index: (k % 6) as u8 + 1,
            barred: k >= 6,
        })
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, if self.barred { "b" } else { "" })
    }
}

impl FromStr for CosetLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<CosetLabel> {
        let (digits, barred) = match s.strip_suffix('b') {
            Some(rest) => (rest, true),
            None => (s, false),
        };
        let index: u8 = digits
            .parse()
            .map_err(|_| Error::Invalid(format!("bad coset label {s:?}")))?;
        CosetLabel::new(index, barred)
    }
}

impl Serialize for CosetLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CosetLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_convention_maps_basis_vectors() {
        // (123) sends e1 -> e2, so column 1 has its 1 in row 2
        let p = GroupElement::from_cycles(&[&[1, 2, 3]]);
        assert_eq!(p.matrix[1][0], 1);
        assert_eq!(p.matrix[2][1], 1);
        assert_eq!(p.matrix[0][2], 1);
        assert!(p.is_permutation_matrix());
    }

    #[test]
    fn cycle_composition_in_application_order() {
        let p12 = GroupElement::from_cycles(&[&[1, 2]]);
        let p23 = GroupElement::from_cycles(&[&[2, 3]]);
        // matrix product corresponds to composed permutations
        let prod = p12.mul(&p23);
        assert!(prod.is_permutation_matrix());
        assert_eq!(prod.pow(3), GroupElement::identity());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = builtins::builtin_matrices().a;
        let p = GroupElement::from_cycles(&[&[1, 2, 3, 4], &[5, 6, 7]]);
        for g in [a, p, a.mul(&p)] {
            let inv = g.inverse().unwrap();
            assert_eq!(g.mul(&inv), GroupElement::identity());
            assert_eq!(inv.mul(&g), GroupElement::identity());
        }
    }

    #[test]
    fn closure_of_a_three_cycle() {
        let p = GroupElement::from_cycles(&[&[1, 2, 3]]);
        let g = generate_closure(&[p], 30).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.elements()[0], GroupElement::identity());
    }

    #[test]
    fn cap_is_enforced() {
        let p = GroupElement::from_cycles(&[&[1, 2, 3, 4]]);
        assert!(matches!(
            generate_closure(&[p], 3),
            Err(Error::CapExceeded(3))
        ));
    }

    #[test]
    fn closure_rejects_constraint_breaking_generators() {
        let p = GroupElement::from_cycles(&[&[4, 5]]);
        assert!(matches!(generate_closure(&[p], 10), Err(Error::Invalid(_))));
    }

    #[test]
    fn label_round_trips_through_strings() {
        for l in CosetLabel::all() {
            let s = l.to_string();
            assert_eq!(s.parse::<CosetLabel>().unwrap(), l);
            let json = serde_json::to_string(&l).unwrap();
            assert_eq!(serde_json::from_str::<CosetLabel>(&json).unwrap(), l);
        }
        assert_eq!("6b".parse::<CosetLabel>().unwrap(), CosetLabel::barred(6));
        assert!("7".parse::<CosetLabel>().is_err());
        assert!("x".parse::<CosetLabel>().is_err());
    }
}
