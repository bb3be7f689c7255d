//! Bernoulli numbers as exact rationals.

use rug::{Integer, Rational};

/// B_0 .. B_m (inclusive) by the defining recurrence
/// sum_{j=0}^{m} C(m+1, j) B_j = 0, so B_1 = -1/2.
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::from(1));
    for k in 1..=m {
        let mut acc = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            let binom = Integer::from(k as u32 + 1).binomial(j as u32);
            acc += bj * Rational::from(binom);
        }
        acc /= -Rational::from(k as u32 + 1);
        b.push(acc);
    }
    b
}
