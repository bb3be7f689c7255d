//! Complex gamma function via Spouge's approximation with runtime-sized
//! coefficients, plus the zero-safe reciprocal and the rising factorial.

use std::cell::RefCell;
use std::collections::HashMap;

use rug::ops::{CompleteRound, Pow};
use rug::{Complex, Float};

use crate::mp::{self, pi};
use crate::precision::PrecisionConfig;
use crate::{Error, Result};

/// Spouge parameter large enough for `digits` significant decimal digits:
/// the truncation error is about a^(1/2) (2 pi)^(-a-1/2), so a grows like
/// digits * ln 10 / ln 2pi.
fn spouge_a(digits: u32) -> u32 {
    (1.2528 * (digits as f64 + 10.0)).ceil() as u32 + 2
}

thread_local! {
    static COEFF_CACHE: RefCell<HashMap<(u32, u32), Vec<Float>>> = RefCell::new(HashMap::new());
}

/// c_0 = sqrt(2 pi), c_k = (-1)^(k-1)/(k-1)! * (a-k)^(k-1/2) * e^(a-k).
fn spouge_coeffs(a: u32, prec: u32) -> Vec<Float> {
    COEFF_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry((a, prec))
            .or_insert_with(|| {
                let two_pi = pi(prec) * 2u32;
                let mut coeffs = Vec::with_capacity(a as usize);
                coeffs.push(two_pi.sqrt());
                let mut factorial = Float::with_val(prec, 1);
                for k in 1..a {
                    if k > 1 {
                        factorial *= k - 1;
                    }
                    let amk = Float::with_val(prec, a - k);
                    let power = amk.clone().pow(Float::with_val(prec, k) - 0.5f32);
                    let mut c = power * amk.exp() / &factorial;
                    if k % 2 == 0 {
                        c = -c;
                    }
                    coeffs.push(c);
                }
                coeffs
            })
            .clone()
    })
}

/// Spouge sum and prefactor for Gamma(w+1), valid for Re(w) >= -1/2.
///
/// The alternating coefficients reach about e^(a/2), so for large |w| the
/// sum cancels by that much; computing with 2a guard bits keeps the final
/// relative error at the committed bound for all arguments.
fn gamma_shifted(w: &Complex, digits: u32, prec: u32) -> Complex {
    let a = spouge_a(digits);
    let guarded = prec + 2 * a;
    let w = Complex::with_val(guarded, w);
    let coeffs = spouge_coeffs(a, guarded);
    let mut sum = Complex::with_val(guarded, (&coeffs[0], 0));
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let denom = w.clone() + k as u32;
        sum += Complex::with_val(guarded, (c, 0)) / denom;
    }
    let wa = w.clone() + a;
    let exponent = w + 0.5f32;
    let prefactor = wa.clone().pow(&exponent) * (-wa).exp();
    Complex::with_val(prec, prefactor * sum)
}

/// Gamma(z) to a relative error of about 10^(5 - working_digits).
///
/// Uses the reflection formula for Re(z) < 1/2, so arguments near the poles
/// at the non-positive integers are rejected by `pole_clearance`.
pub fn complex_gamma(z: &Complex, cfg: &PrecisionConfig) -> Result<Complex> {
    if mp::near_nonpos_int(z, cfg.pole_clearance) {
        let (re, im) = mp::to_f64_pair(z);
        return Err(Error::Pole(re, im));
    }
    let prec = cfg.bits();
    let z = Complex::with_val(prec, z);
    if z.real().to_f64() < 0.5 {
        // Gamma(z) = pi / (sin(pi z) Gamma(1-z))
        let one_minus = (1u32 - &z).complete((prec, prec));
        let g = gamma_shifted(&(one_minus - 1u32), cfg.working_digits, prec);
        let pi_f = pi(prec);
        let sin_piz = (z * &pi_f).sin();
        Ok(Complex::with_val(prec, (&pi_f, 0)) / (sin_piz * g))
    } else {
        Ok(gamma_shifted(&(z - 1u32), cfg.working_digits, prec))
    }
}

/// 1/Gamma(z) as a total function: exactly 0 at the non-positive integers,
/// elsewhere computed without any pole clearance restriction.
pub fn reciprocal_gamma(z: &Complex, cfg: &PrecisionConfig) -> Complex {
    let prec = cfg.bits();
    let z = Complex::with_val(prec, z);
    if mp::is_nonpos_int(&z) {
        return Complex::with_val(prec, (0, 0));
    }
    if z.real().to_f64() < 0.5 {
        // 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi, entire in z
        let one_minus = (1u32 - &z).complete((prec, prec));
        let g = gamma_shifted(&(one_minus - 1u32), cfg.working_digits, prec);
        let pi_f = pi(prec);
        let sin_piz = (z * &pi_f).sin();
        sin_piz * g / pi_f
    } else {
        Complex::with_val(prec, (1, 0)) / gamma_shifted(&(z - 1u32), cfg.working_digits, prec)
    }
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1); direct product for small n,
/// gamma-ratio for large n away from the poles.
pub fn pochhammer(a: &Complex, n: u64, cfg: &PrecisionConfig) -> Complex {
    let prec = cfg.bits();
    if n == 0 {
        return Complex::with_val(prec, (1, 0));
    }
    let use_ratio = n > 64
        && !mp::near_nonpos_int(a, cfg.pole_clearance)
        && a.real().to_f64() + (n as f64) > 0.5;
    if use_ratio {
        let a_hi = Complex::with_val(prec, a);
        let shifted = (&a_hi + n).complete((prec, prec));
        if let (Ok(top), Ok(bot)) = (complex_gamma(&shifted, cfg), complex_gamma(&a_hi, cfg)) {
            return top / bot;
        }
    }
    let mut prod = Complex::with_val(prec, a);
    for k in 1..n {
        prod *= Complex::with_val(prec, a) + k;
    }
    prod
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::{abs_f64, cx};

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn parse_f(prec: u32, s: &str) -> Float {
        Float::with_val(prec, Float::parse(s).unwrap())
    }

    #[test]
    fn gamma_one_is_one() {
        let c = cfg();
        let g = complex_gamma(&cx(c.bits(), 1.0, 0.0), &c).unwrap();
        let err = abs_f64(&(g - 1u32));
        assert!(err < 1e-55, "err = {err:e}");
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let c = cfg();
        let prec = c.bits();
        let g = complex_gamma(&cx(prec, 0.5, 0.0), &c).unwrap();
        let sqrt_pi = pi(prec).sqrt();
        let err = abs_f64(&(g - sqrt_pi));
        assert!(err < 1e-55, "err = {err:e}");
    }

    #[test]
    fn gamma_at_half_plus_two_i_matches_fixture() {
        // Fixture computed by an independent arbitrary-precision
        // implementation (mpmath, 60 digits).
        let c = cfg();
        let prec = c.bits();
        let re = parse_f(
            prec,
            "0.089855176706431635814247812945435412979252100764462037112546324",
        );
        let im = parse_f(
            prec,
            "-0.060493760292887568479767679440822914353111236870529183282916215",
        );
        let want = Complex::with_val(prec, (re, im));
        let got = complex_gamma(&cx(prec, 0.5, 2.0), &c).unwrap();
        let err = abs_f64(&(got - want));
        assert!(err < 1e-56, "err = {err:e}");
    }

    #[test]
    fn reflection_identity_holds_for_random_points() {
        let c = cfg();
        let prec = c.bits();
        // fixed pseudo-random sweep; no point near a pole
        for k in 0..100 {
            let re = -4.0 + 8.3 * ((k as f64 * 0.37).sin().abs());
            let im = 0.3 + 2.0 * ((k as f64 * 0.11).cos().abs());
            let z = cx(prec, re, im);
            let zc = (1u32 - &z).complete((prec, prec));
            let lhs = complex_gamma(&z, &c).unwrap()
                * complex_gamma(&zc, &c).unwrap()
                * (z * pi(prec)).sin()
                / pi(prec);
            let err = abs_f64(&(lhs - 1u32));
            assert!(err < 1e-54, "k={k} err={err:e}");
        }
    }

    #[test]
    fn pole_rejected_within_clearance() {
        let c = cfg();
        assert!(matches!(
            complex_gamma(&cx(c.bits(), -2.001, 0.0), &c),
            Err(Error::Pole(_, _))
        ));
    }

    #[test]
    fn reciprocal_gamma_vanishes_at_nonpositive_integers() {
        let c = cfg();
        for n in 0..6 {
            let r = reciprocal_gamma(&cx(c.bits(), -(n as f64), 0.0), &c);
            assert!(r.is_zero(), "1/Gamma(-{n}) != 0");
        }
    }

    #[test]
    fn reciprocal_gamma_inverts_gamma() {
        let c = cfg();
        let prec = c.bits();
        for (re, im) in [(2.5, 0.0), (0.3, 1.2), (-1.4, 0.7), (5.0, -3.0)] {
            let z = cx(prec, re, im);
            let prod = reciprocal_gamma(&z, &c) * complex_gamma(&z, &c).unwrap();
            let err = abs_f64(&(prod - 1u32));
            assert!(err < 1e-54, "z=({re},{im}) err={err:e}");
        }
    }

    #[test]
    fn pochhammer_small_cases() {
        let c = cfg();
        let prec = c.bits();
        let one = pochhammer(&cx(prec, 0.7, 0.3), 0, &c);
        assert!(one == 1u32);
        let p = pochhammer(&cx(prec, 3.0, 0.0), 4, &c);
        let err = abs_f64(&(p - 360u32));
        assert!(err < 1e-50);
    }

    #[test]
    fn pochhammer_ratio_agrees_with_direct_product() {
        let c = cfg();
        let prec = c.bits();
        let a = cx(prec, 0.5, 1.0);
        let via_ratio = pochhammer(&a, 200, &c);
        let mut direct = Complex::with_val(prec, (1, 0));
        for k in 0..200u32 {
            direct *= a.clone() + k;
        }
        let rel = abs_f64(&((via_ratio - &direct) / direct));
        assert!(rel < 1e-50, "rel = {rel:e}");
    }
}
