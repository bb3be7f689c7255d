//! Numerical Barnes integrals along a straight vertical contour.
//!
//! The integrand is a ratio of gamma functions decaying like
//! exp(-2 pi |Im t|), so the trapezoid rule on the shifted line converges
//! geometrically in the step size; the truncation tail is bounded by the
//! endpoint magnitudes divided by 2 pi.

use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::gamma::{complex_gamma, reciprocal_gamma};
use super::ParameterPoint;
use crate::mp::{self, abs_f64, pi};
use crate::precision::{EvaluationResult, Method, PrecisionConfig};
use crate::{Error, Result};

const MAX_REFINEMENTS: u32 = 5;
const RICHARDSON_REL: f64 = 1e-13;

/// (1/2 pi i) Integral over the line Re(t) = -delta of
///   prod Gamma(alpha_i + t) * prod Gamma(beta_j - t) / prod Gamma(phi_k + t).
///
/// Returns the value and an error bound (truncation + discretization).
/// Fails when the line cannot separate the left pole chains (at
/// t = -alpha_i - n) from the right ones (at t = beta_j + n).
pub fn barnes_integral(
    num_plus: &[Complex],
    num_minus: &[Complex],
    den_plus: &[Complex],
    delta: f64,
    cfg: &PrecisionConfig,
) -> Result<(Complex, f64)> {
    let cl = cfg.pole_clearance;
    for alpha in num_plus {
        if alpha.real().to_f64() - delta < cl {
            return Err(Error::Contour(format!(
                "left pole chain at Re(t) = {} crosses the contour Re(t) = {}",
                -alpha.real().to_f64(),
                -delta
            )));
        }
    }
    for beta in num_minus {
        if beta.real().to_f64() + delta < cl {
            return Err(Error::Contour(format!(
                "right pole chain at Re(t) = {} crosses the contour Re(t) = {}",
                beta.real().to_f64(),
                -delta
            )));
        }
    }

    let prec = cfg.bits();
    let integrand = |y: &Float| -> Result<Complex> {
        let t = Complex::with_val(prec, (Float::with_val(prec, -delta), y.clone()));
        let mut prod = Complex::with_val(prec, (1, 0));
        for alpha in num_plus {
            prod *= complex_gamma(&(alpha.clone() + &t), cfg)?;
        }
        for beta in num_minus {
            prod *= complex_gamma(&(beta.clone() - &t), cfg)?;
        }
        for phi in den_plus {
            prod *= reciprocal_gamma(&(phi.clone() + &t), cfg);
        }
        Ok(prod)
    };

    let h0 = cfg.quadrature_step;
    let half_width = cfg.quadrature_halfwidth;
    let k_max = (half_width / h0).ceil() as i64;

    // endpoint magnitudes for the truncation bound
    let y_end = Float::with_val(prec, k_max as f64 * h0);
    let f_hi = integrand(&y_end)?;
    let f_lo = integrand(&(-y_end))?;
    let trunc = (abs_f64(&f_hi) + abs_f64(&f_lo)) / (2.0 * std::f64::consts::PI);

    // trapezoid sum at step h0 over the symmetric grid
    let mut grid_sum = Complex::with_val(prec, (0, 0));
    for k in -k_max..=k_max {
        let w = if k.abs() == k_max { 0.5 } else { 1.0 };
        let y = Float::with_val(prec, k as f64 * h0);
        grid_sum += integrand(&y)? * Complex::with_val(prec, (w, 0));
    }
    let mut h = h0;
    let two_pi = pi(prec) * 2u32;
    let mut value = grid_sum.clone() * Float::with_val(prec, h) / &two_pi;
    let mut disc = f64::INFINITY;

    let y_span = k_max as f64 * h0;
    for _ in 0..MAX_REFINEMENTS {
        // refine by adding midpoints of the current grid
        let n_cells = (2.0 * y_span / h).round() as i64;
        let mut mid_sum = Complex::with_val(prec, (0, 0));
        for k in 0..n_cells {
            let y = Float::with_val(prec, -y_span + (k as f64 + 0.5) * h);
            mid_sum += integrand(&y)?;
        }
        grid_sum += mid_sum;
        h /= 2.0;
        let new_value = grid_sum.clone() * Float::with_val(prec, h) / &two_pi;
        disc = abs_f64(&(new_value.clone() - &value));
        value = new_value;
        if disc < RICHARDSON_REL * abs_f64(&value).max(1e-300) {
            break;
        }
    }

    Ok((value, trunc + disc))
}

/// L(x) through its Barnes integral representation along Re(t) = -1/4.
#[allow(non_snake_case)]
pub fn eval_L_barnes(x: &ParameterPoint, cfg: &PrecisionConfig) -> Result<EvaluationResult> {
    let delta = 0.25;
    let prec = cfg.bits();
    let lift = |z: &Complex| Complex::with_val(prec, z);
    let (a, b, c, d, e, f, g) = (
        lift(x.a()),
        lift(x.b()),
        lift(x.c()),
        lift(x.d()),
        lift(x.e()),
        lift(x.f()),
        lift(x.g()),
    );
    let one_minus_e = (1u32 - &e).complete((prec, prec));
    // 1 + z - e
    let shift = |z: &Complex| {
        let mut w = one_minus_e.clone();
        w += z;
        w
    };
    let pref_gammas = [
        a.clone(),
        b.clone(),
        c.clone(),
        d.clone(),
        shift(&a),
        shift(&b),
        shift(&c),
        shift(&d),
    ];
    for z in &pref_gammas {
        if mp::near_nonpos_int(z, cfg.pole_clearance) {
            let (re, im) = mp::to_f64_pair(z);
            return Err(Error::Pole(re, im));
        }
    }

    let num_plus = [a, b, c, d];
    let num_minus = [one_minus_e.clone(), Complex::with_val(prec, (0, 0))];
    let den_plus = [f, g];
    let (integral, int_err) = barnes_integral(&num_plus, &num_minus, &den_plus, delta, cfg)?;

    let mut pref = Complex::with_val(prec, (1, 0)) / pi(prec);
    for z in &pref_gammas {
        pref *= reciprocal_gamma(z, cfg);
    }
    let value = (&pref * &integral).complete((prec, prec));
    let gamma_rel = 10f64.powi(-(cfg.working_digits as i32) + 5) * 18.0;
    let estimate = abs_f64(&pref) * int_err + abs_f64(&value) * gamma_rel;
    Ok(EvaluationResult {
        value,
        error_estimate: estimate,
        method: Method::BarnesContour,
    })
}

/// Pick a contour shift -d0 with the left chains (from the `plus` factors)
/// strictly left and the right chains (from the `minus` factors) strictly
/// right.
fn pick_shift(plus: &[&Complex], minus: &[&Complex], cl: f64) -> Result<f64> {
    let hi = plus
        .iter()
        .map(|z| z.real().to_f64())
        .fold(f64::INFINITY, f64::min);
    let lo = minus
        .iter()
        .map(|z| -z.real().to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 2.0 * cl {
        return Err(Error::Contour(format!(
            "no straight contour separates the pole chains (window {lo}..{hi})"
        )));
    }
    Ok((lo + hi) / 2.0)
}

/// Both sides of the closed-form evaluation of
/// (1/2 pi i) Int Gamma(alpha+t)Gamma(beta+t)Gamma(gamma-t)Gamma(delta-t) dt.
pub fn barnes_first_lemma(
    alpha: &Complex,
    beta: &Complex,
    gamma: &Complex,
    delta: &Complex,
    cfg: &PrecisionConfig,
) -> Result<(Complex, Complex)> {
    let prec = cfg.bits();
    let lift = |z: &Complex| Complex::with_val(prec, z);
    let (alpha, beta, gamma, delta) = (lift(alpha), lift(beta), lift(gamma), lift(delta));
    let pair_sums = [
        alpha.clone() + &gamma,
        alpha.clone() + &delta,
        beta.clone() + &gamma,
        beta.clone() + &delta,
    ];
    for z in &pair_sums {
        if mp::near_nonpos_int(z, cfg.pole_clearance) {
            return Err(Error::Precondition(format!(
                "pair sum {} is a non-positive integer",
                z.real().to_f64()
            )));
        }
    }
    let shift = pick_shift(
        &[&alpha, &beta],
        &[&gamma, &delta],
        cfg.pole_clearance,
    )?;
    let (lhs, _err) = barnes_integral(
        &[alpha.clone(), beta.clone()],
        &[gamma.clone(), delta.clone()],
        &[],
        shift,
        cfg,
    )?;
    let total = alpha.clone() + &beta + &gamma + &delta;
    let mut rhs = reciprocal_gamma(&total, cfg);
    for z in &pair_sums {
        rhs *= complex_gamma(z, cfg)?;
    }
    Ok((lhs, rhs))
}

/// Both sides of Barnes' second lemma: the contour integral with a single
/// gamma denominator against its gamma-product closed form, under the
/// Saalschutzian constraint e + f - a - b - c = 1.
pub fn barnes_second_sides(
    a: &Complex,
    b: &Complex,
    c: &Complex,
    e: &Complex,
    f: &Complex,
    cfg: &PrecisionConfig,
) -> Result<(Complex, Complex)> {
    let prec = cfg.bits();
    let lift = |z: &Complex| Complex::with_val(prec, z);
    let (a, b, c, e, f) = (lift(a), lift(b), lift(c), lift(e), lift(f));
    let mut constraint = e.clone() + &f - &a - &b - &c;
    constraint -= 1u32;
    let viol = abs_f64(&constraint);
    if viol > 1e-10 {
        return Err(Error::ConstraintViolation(viol));
    }
    let one_minus_e = (1u32 - &e).complete((prec, prec));
    let zero = Complex::with_val(prec, (0, 0));
    let shift = pick_shift(&[&a, &b, &c], &[&one_minus_e, &zero], cfg.pole_clearance)?;
    let (lhs, _err) = barnes_integral(
        &[a.clone(), b.clone(), c.clone()],
        &[one_minus_e.clone(), zero],
        &[f.clone()],
        shift,
        cfg,
    )?;
    let mut rhs = Complex::with_val(prec, (1, 0));
    for z in [&a, &b, &c] {
        rhs *= complex_gamma(z, cfg)?;
        rhs *= complex_gamma(&(one_minus_e.clone() + z), cfg)?;
        rhs *= reciprocal_gamma(&(f.clone() - z), cfg);
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::cx;

    #[test]
    fn first_lemma_at_symmetric_half_points() {
        let cfg = PrecisionConfig::default();
        let p = cfg.bits();
        let h = cx(p, 0.5, 0.0);
        let (lhs, rhs) = barnes_first_lemma(&h, &h, &h, &h, &cfg).unwrap();
        // closed form is Gamma(1)^4 / Gamma(2) = 1
        assert!(abs_f64(&(rhs.clone() - 1u32)) < 1e-50);
        let err = abs_f64(&(lhs - rhs));
        assert!(err < 1e-8, "err = {err:e}");
    }

    #[test]
    fn first_lemma_generic_point() {
        let cfg = PrecisionConfig::default();
        let p = cfg.bits();
        let (lhs, rhs) = barnes_first_lemma(
            &cx(p, 0.3, 0.0),
            &cx(p, 0.4, 0.0),
            &cx(p, 0.5, 0.0),
            &cx(p, 0.6, 0.0),
            &cfg,
        )
        .unwrap();
        let rel = abs_f64(&((lhs - &rhs) / rhs));
        assert!(rel < 1e-8, "rel = {rel:e}");
    }

    #[test]
    fn first_lemma_symmetric_in_first_pair() {
        let cfg = PrecisionConfig::default();
        let p = cfg.bits();
        let args = [cx(p, 0.3, 0.1), cx(p, 0.45, -0.2), cx(p, 0.5, 0.0), cx(p, 0.6, 0.05)];
        let (l1, r1) = barnes_first_lemma(&args[0], &args[1], &args[2], &args[3], &cfg).unwrap();
        let (l2, r2) = barnes_first_lemma(&args[1], &args[0], &args[2], &args[3], &cfg).unwrap();
        assert!(abs_f64(&(r1 - r2)) < 1e-45);
        assert!(abs_f64(&(l1 - l2)) < 1e-20);
    }

    #[test]
    fn second_lemma_generic_point() {
        let cfg = PrecisionConfig::default();
        let p = cfg.bits();
        let (lhs, rhs) = barnes_second_sides(
            &cx(p, 0.4, 0.0),
            &cx(p, 0.5, 0.0),
            &cx(p, 0.6, 0.0),
            &cx(p, 1.2, 0.0),
            &cx(p, 1.3, 0.0),
            &cfg,
        )
        .unwrap();
        let rel = abs_f64(&((lhs - &rhs) / rhs));
        assert!(rel < 1e-8, "rel = {rel:e}");
    }

    #[test]
    fn barnes_rep_matches_series_at_base_point() {
        let cfg = PrecisionConfig::default();
        let x = ParameterPoint::from_six_f64(
            cfg.bits(),
            [
                (0.5, 0.0),
                (0.6, 0.0),
                (0.7, 0.0),
                (0.8, 0.0),
                (1.3, 0.0),
                (1.4, 0.0),
            ],
        );
        let rb = eval_L_barnes(&x, &cfg).unwrap();
        let rs = super::super::lfun::eval_L_series(&x, &cfg).unwrap();
        let rel = abs_f64(&((rb.value - &rs.value) / rs.value));
        assert!(rel < 1e-8, "rel = {rel:e}");
    }

    #[test]
    fn halving_the_step_stays_within_reported_bound() {
        let mut cfg = PrecisionConfig::default();
        let p = cfg.bits();
        let args: Vec<Complex> = vec![cx(p, 0.5, 0.0), cx(p, 0.7, 0.0)];
        let minus: Vec<Complex> = vec![cx(p, 0.6, 0.0), cx(p, 0.8, 0.0)];
        let (v1, e1) = barnes_integral(&args, &minus, &[], 0.0, &cfg).unwrap();
        cfg.quadrature_step /= 2.0;
        let (v2, e2) = barnes_integral(&args, &minus, &[], 0.0, &cfg).unwrap();
        let diff = abs_f64(&(v1 - v2));
        assert!(diff <= e1 + e2, "diff {diff:e} bound {:e}", e1 + e2);
    }

    #[test]
    fn contour_separation_failure_detected() {
        let cfg = PrecisionConfig::default();
        let p = cfg.bits();
        // left chain starts right of the line Re(t) = 0
        let r = barnes_integral(&[cx(p, -0.5, 0.0)], &[cx(p, 0.5, 0.0)], &[], 0.0, &cfg);
        assert!(matches!(r, Err(Error::Contour(_))));
    }
}
