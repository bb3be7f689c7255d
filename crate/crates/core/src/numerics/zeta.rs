//! Hurwitz zeta for complex exponent, used to sum series tails
//! sum_{n >= N} n^(-s) in closed form.

use rug::ops::CompleteRound;
use rug::{Complex, Float, Rational};

use super::bernoulli::bernoulli_numbers;

const EM_PARTIAL_TERMS: u32 = 16;
const EM_BERNOULLI_TERMS: usize = 8;

/// z^w = exp(w ln z) for Re(z) > 0.
fn cpow(z: &Complex, w: &Complex, prec: u32) -> Complex {
    (Complex::with_val(prec, z.ln_ref()) * w).exp()
}

/// Hurwitz zeta sum_{n=0}^inf (q+n)^(-s) by Euler-Maclaurin, for Re(s) > 1
/// and real q >= 1. Accurate to far below the working epsilon whenever
/// q is large (the intended use has q in the thousands).
pub fn hurwitz_zeta(s: &Complex, q: u64, prec: u32) -> Complex {
    let m = EM_PARTIAL_TERMS as u64;
    let mut sum = Complex::with_val(prec, (0, 0));
    for n in 0..m {
        let base = Complex::with_val(prec, (q + n, 0));
        sum += cpow(&base, &(-s.clone()), prec);
    }
    let qm = Complex::with_val(prec, (q + m, 0));
    let qm_pow = cpow(&qm, &(-s.clone()), prec); // (q+M)^(-s)

    // (q+M)^(1-s)/(s-1)
    let sm1 = (s - 1u32).complete((prec, prec));
    sum += (qm_pow.clone() * &qm) / &sm1;
    // (q+M)^(-s)/2
    sum += qm_pow.clone() / 2u32;

    // Bernoulli correction: sum_k B_{2k}/(2k)! * (s)_{2k-1} * (q+M)^(-s-2k+1)
    let bern = bernoulli_numbers(2 * EM_BERNOULLI_TERMS);
    let mut rising = Complex::with_val(prec, s); // (s)_1
    let mut power = qm_pow * &qm; // (q+M)^(-s+1)
    let mut factorial = Rational::from(1);
    for k in 1..=EM_BERNOULLI_TERMS {
        factorial *= Rational::from(((2 * k - 1) * 2 * k, 1));
        power /= &qm;
        power /= &qm; // now (q+M)^(-s-2k+1)
        let coeff = Rational::from(&bern[2 * k] / &factorial);
        let coeff_f = Float::with_val(prec, coeff.numer()) / Float::with_val(prec, coeff.denom());
        sum += rising.clone() * &power * Complex::with_val(prec, (coeff_f, 0));
        // advance (s)_{2k-1} -> (s)_{2k+1}
        rising *= (s + (2 * k as u32 - 1)).complete((prec, prec));
        rising *= (s + (2 * k as u32)).complete((prec, prec));
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::abs_f64;

    #[test]
    fn matches_direct_partial_sum_for_real_exponent() {
        let prec = 256;
        let s = Complex::with_val(prec, (2, 0));
        let z = hurwitz_zeta(&s, 50, prec);
        // direct sum with integral tail correction at high cutoff
        let mut direct = Float::with_val(prec, 0);
        for n in 50u64..2_000_000 {
            direct += Float::with_val(prec, 1) / (Float::with_val(prec, n) * n);
        }
        // tail of sum_{n>=K} n^-2 ~ 1/K + 1/(2K^2) + 1/(6K^3)
        let k = Float::with_val(prec, 2_000_000u64);
        direct += 1u32 / k.clone() + 1u32 / (2u32 * k.clone() * &k)
            + 1u32 / (6u32 * k.clone() * &k * &k);
        let err = abs_f64(&(z - direct));
        assert!(err < 1e-18, "err = {err:e}");
    }

    #[test]
    fn matches_brute_force_for_complex_exponent() {
        let prec = 256;
        let s = Complex::with_val(prec, (3.0, 0.7));
        let z = hurwitz_zeta(&s, 1000, prec);
        let mut direct = Complex::with_val(prec, (0, 0));
        for n in 1000u64..200_000 {
            let base = Complex::with_val(prec, (n, 0));
            direct += cpow(&base, &(-s.clone()), prec);
        }
        // |tail| <= integral bound K^(1-Re s)/(Re s - 1) = K^-2/2 = 1.25e-11
        let err = abs_f64(&(z - direct));
        assert!(err < 2e-11, "err = {err:e}");
    }
}
