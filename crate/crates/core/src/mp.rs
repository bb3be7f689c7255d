//! Small helpers over `rug` multiprecision types.

use rug::ops::CompleteRound;
use rug::{Complex, Float};

/// pi at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

/// Complex from an `(re, im)` pair of f64 at `prec` bits.
pub fn cx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

/// Complex holding a real integer value.
pub fn cx_int(prec: u32, n: i64) -> Complex {
    Complex::with_val(prec, (n, 0))
}

/// `|z|` as f64 (saturating on overflow, which is fine for error bookkeeping).
pub fn abs_f64(z: &Complex) -> f64 {
    z.abs_ref().complete((z.prec().0, z.prec().1)).real().to_f64()
}

/// `(Re z, Im z)` as f64.
pub fn to_f64_pair(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

/// Distance from `z` to the nearest non-positive integer, as f64.
pub fn dist_to_nonpos_int(re: f64, im: f64) -> f64 {
    if re > 0.5 {
        // nearest non-positive integer is 0
        (re * re + im * im).sqrt()
    } else {
        let dre = re - re.round().min(0.0);
        (dre * dre + im * im).sqrt()
    }
}

/// True when `z` is within `clearance` of {0, -1, -2, ...}.
pub fn near_nonpos_int(z: &Complex, clearance: f64) -> bool {
    let (re, im) = to_f64_pair(z);
    dist_to_nonpos_int(re, im) < clearance
}

/// True when `z` is exactly a non-positive integer at its working precision.
pub fn is_nonpos_int(z: &Complex) -> bool {
    if !z.imag().is_zero() {
        return false;
    }
    let re = z.real();
    re.is_integer() && *re <= 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonpos_int_detection() {
        let p = 128;
        assert!(is_nonpos_int(&cx(p, -3.0, 0.0)));
        assert!(is_nonpos_int(&cx(p, 0.0, 0.0)));
        assert!(!is_nonpos_int(&cx(p, 2.0, 0.0)));
        assert!(!is_nonpos_int(&cx(p, -3.0, 1e-30)));
        assert!(!is_nonpos_int(&cx(p, -2.5, 0.0)));
    }

    #[test]
    fn clearance_distance() {
        assert!(near_nonpos_int(&cx(128, -1.01, 0.0), 0.02));
        assert!(!near_nonpos_int(&cx(128, -1.5, 0.0), 0.02));
        assert!(!near_nonpos_int(&cx(128, -1.0, 0.5), 0.02));
        assert!(near_nonpos_int(&cx(128, 0.005, 0.005), 0.02));
        assert!(!near_nonpos_int(&cx(128, 0.7, 0.0), 0.02));
    }

    #[test]
    fn abs_and_pairs() {
        let z = cx(128, 3.0, 4.0);
        assert!((abs_f64(&z) - 5.0).abs() < 1e-12);
        assert_eq!(to_f64_pair(&z), (3.0, 4.0));
    }
}
