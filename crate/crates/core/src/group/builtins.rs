//! The named matrices: the fundamental involution, the permutation
//! generators, the central involution and its companions, and the twelve
//! right-coset representatives.

use super::{GroupElement, Matrix};

/// The fundamental non-permutation involution. Row five realizes 1+a+b-f
/// and row six 1+a+b-e through the hyperplane constraint.
pub const A_MATRIX: Matrix = [
    [1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0, 1],
    [0, 0, 0, -1, 0, 0, 1],
    [0, 0, -1, -1, 1, 0, 1],
    [0, 0, -1, -1, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 1],
];

/// Named catalog of every built-in matrix.
#[derive(Debug, Clone)]
pub struct Builtins {
    pub a: GroupElement,
    pub t12: GroupElement,
    pub t23: GroupElement,
    pub t34: GroupElement,
    pub t56: GroupElement,
    pub t67: GroupElement,
    pub t57: GroupElement,
    /// 3-cycle (576) cycling the last three parameter slots; conjugating the
    /// first coherent coefficient by its powers yields the other two.
    pub c576: GroupElement,
    /// Central involution of the governing group; bars every coset label.
    pub w0: GroupElement,
    pub w1: GroupElement,
    pub w2: GroupElement,
    /// Right-coset representatives mu_1..mu_6 at indices 0..5.
    pub mu: [GroupElement; 6],
    /// Barred representatives mu_1bar..mu_6bar at indices 0..5.
    pub mu_bar: [GroupElement; 6],
    /// Double-coset representatives for invariance types 1..6 at
    /// indices 0..5.
    pub invariance_reps: [GroupElement; 6],
}

impl Builtins {
    /// Generators of the symmetric subgroup: adjacent transpositions of
    /// a,b,c,d and of f,g.
    pub fn sigma_generators(&self) -> Vec<GroupElement> {
        vec![self.t12, self.t23, self.t34, self.t67]
    }

    /// Generators of the invariance group.
    pub fn g_l_generators(&self) -> Vec<GroupElement> {
        vec![self.t12, self.t23, self.t34, self.t67, self.a]
    }

    /// Generators of the governing group.
    pub fn m_l_generators(&self) -> Vec<GroupElement> {
        vec![self.t12, self.t23, self.t34, self.t56, self.t67, self.a]
    }

    /// Representative for a coset label (1-based index, barred or not).
    pub fn representative(&self, label: super::CosetLabel) -> GroupElement {
        if label.barred {
            self.mu_bar[label.index as usize - 1]
        } else {
            self.mu[label.index as usize - 1]
        }
    }
}

/// Build the full named catalog by exact products of permutation matrices
/// and the fundamental involution.
pub fn builtin_matrices() -> Builtins {
    let a = GroupElement { matrix: A_MATRIX };
    let cyc = GroupElement::from_cycles;
    let t12 = cyc(&[&[1, 2]]);
    let t23 = cyc(&[&[2, 3]]);
    let t34 = cyc(&[&[3, 4]]);
    let t56 = cyc(&[&[5, 6]]);
    let t67 = cyc(&[&[6, 7]]);
    let t57 = cyc(&[&[5, 7]]);
    let c576 = cyc(&[&[5, 7, 6]]);
    let p123 = cyc(&[&[1, 2, 3]]);
    let p1234 = cyc(&[&[1, 2, 3, 4]]);
    let p1432 = cyc(&[&[1, 4, 3, 2]]);
    let p567 = cyc(&[&[5, 6, 7]]);

    // w0 = (12)(34) [[(1234)(567)]^2 A]^4
    let w0 = cyc(&[&[1, 2], &[3, 4]]).mul(&p1234.mul(&p567).pow(2).mul(&a).pow(4));
    // w1 = (1234) [(1234)(567)A]^3 (1432)
    let w1 = p1234.mul(&p1234.mul(&p567).mul(&a).pow(3)).mul(&p1432);
    let w2 = w0.mul(&w1);

    let identity = GroupElement::identity();
    let mu = [
        t57.mul(&w2), // mu_1 = (57) w2
        t56.mul(&w2), // mu_2 = (56) w2
        w2,           // mu_3
        t57,          // mu_4 = (57)
        t56,          // mu_5 = (56)
        identity,     // mu_6
    ];
    let mu_bar = [
        t57.mul(&w1), // mu_1bar = (57) w1
        t56.mul(&w1), // mu_2bar = (56) w1
        w1,           // mu_3bar
        t57.mul(&w0), // mu_4bar = (57) w0
        t56.mul(&w0), // mu_5bar = (56) w0
        w0,           // mu_6bar
    ];

    let ra = p123.mul(&t67).mul(&a);
    let invariance_reps = [
        identity,          // type 1
        a,                 // type 2
        ra.pow(2),         // type 3
        ra.pow(3),         // type 4
        p123.mul(&a).pow(3), // type 5
        ra.pow(4),         // type 6
    ];

    Builtins {
        a,
        t12,
        t23,
        t34,
        t56,
        t67,
        t57,
        c576,
        w0,
        w1,
        w2,
        mu,
        mu_bar,
        invariance_reps,
    }
}
