//! The function L(a,b,c,d;e;f,g): a linear combination of two Saalschutzian
//! 4F3(1) series, also expressible as a very-well-poised 7F6(1).

use rug::ops::CompleteRound;
use rug::Complex;

use super::gamma::{complex_gamma, reciprocal_gamma};
use super::series::hyp_series_unit;
use super::ParameterPoint;
use crate::mp::{self, abs_f64, pi};
use crate::precision::{EvaluationResult, Method, PrecisionConfig};
use crate::{Error, Result};

/// Relative error above which a subtraction of the two series terms is no
/// longer certifiable; the caller should escalate the precision.
const CANCEL_REL: f64 = 1e-7;

fn rel_err(r: &EvaluationResult) -> f64 {
    let m = abs_f64(&r.value);
    if m > 0.0 {
        r.error_estimate / m
    } else {
        r.error_estimate
    }
}

fn guard_gamma_args(args: &[Complex], clearance: f64) -> Result<()> {
    for z in args {
        if mp::near_nonpos_int(z, clearance) {
            let (re, im) = mp::to_f64_pair(z);
            return Err(Error::Pole(re, im));
        }
    }
    Ok(())
}

/// True when z is within `clearance` of any integer (where sin(pi z) = 0).
fn near_any_int(z: &Complex, clearance: f64) -> bool {
    let (re, im) = mp::to_f64_pair(z);
    let dre = re - re.round();
    (dre * dre + im * im).sqrt() < clearance
}

/// L(x) through the defining pair of 4F3(1) series.
///
/// The two terms share the factor 1/sin(pi e) and generically cancel to a
/// much smaller sum; the cancellation loss is part of the reported error
/// estimate and triggers an error when the result can no longer be
/// certified at the working precision.
#[allow(non_snake_case)]
pub fn eval_L_series(x: &ParameterPoint, cfg: &PrecisionConfig) -> Result<EvaluationResult> {
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
    if near_any_int(&e, cfg.pole_clearance) {
        let (re, im) = mp::to_f64_pair(&e);
        return Err(Error::Pole(re, im));
    }
    // 1 + z - e
    let shift = |z: &Complex| {
        let mut w = Complex::with_val(prec, (1, 0));
        w += z;
        w -= &e;
        w
    };
    let gammas1 = [
        e.clone(),
        f.clone(),
        g.clone(),
        shift(&a),
        shift(&b),
        shift(&c),
        shift(&d),
    ];
    let gammas2 = [
        a.clone(),
        b.clone(),
        c.clone(),
        d.clone(),
        shift(&f),
        shift(&g),
        (2u32 - &e).complete((prec, prec)),
    ];
    guard_gamma_args(&gammas1, cfg.pole_clearance)?;
    guard_gamma_args(&gammas2, cfg.pole_clearance)?;

    let f1 = hyp_series_unit(
        &[a.clone(), b.clone(), c.clone(), d.clone()],
        &[e.clone(), f.clone(), g.clone()],
        cfg,
    )?;
    let f2 = hyp_series_unit(
        &[shift(&a), shift(&b), shift(&c), shift(&d)],
        &[shift(&f), shift(&g), (2u32 - &e).complete((prec, prec))],
        cfg,
    )?;

    let sin_pi_e = (e.clone() * pi(prec)).sin();
    let mut term1 = f1.value.clone() / &sin_pi_e;
    for z in &gammas1 {
        term1 *= reciprocal_gamma(z, cfg);
    }
    let mut term2 = f2.value.clone() / &sin_pi_e;
    for z in &gammas2 {
        term2 *= reciprocal_gamma(z, cfg);
    }
    let t1 = abs_f64(&term1);
    let t2 = abs_f64(&term2);
    let value = term1 - term2;

    let gamma_rel = 10f64.powi(-(cfg.working_digits as i32) + 5) * 16.0;
    let estimate = t1 * (rel_err(&f1) + gamma_rel) + t2 * (rel_err(&f2) + gamma_rel);
    let magnitude = abs_f64(&value);
    if estimate > CANCEL_REL * magnitude {
        return Err(Error::Cancellation {
            value: mp::to_f64_pair(&value),
            estimate,
            magnitude,
        });
    }
    Ok(EvaluationResult {
        value,
        error_estimate: estimate,
        method: Method::SeriesPair,
    })
}

/// L(x) through the very-well-poised 7F6(1) representation, valid for
/// Re(f-d) > 0.
#[allow(non_snake_case)]
pub fn eval_L_7F6(x: &ParameterPoint, cfg: &PrecisionConfig) -> Result<EvaluationResult> {
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
    let fd = f.clone() - &d;
    if fd.real().to_f64() <= 0.0 {
        return Err(Error::Precondition(format!(
            "7F6 representation requires Re(f-d) > 0, got {}",
            fd.real().to_f64()
        )));
    }

    let s = d.clone() + &g - &e;
    let half_s = s.clone() / 2u32;
    // 1 + z + d - e
    let plus_de = |z: &Complex| {
        let mut w = Complex::with_val(prec, (1, 0));
        w += z;
        w += &d;
        w -= &e;
        w
    };
    let de = plus_de(&Complex::with_val(prec, (0, 0)));
    let mut ge = Complex::with_val(prec, (1, 0));
    ge += &g;
    ge -= &e;

    // prefactor gammas
    let top = plus_de(&g);
    if mp::near_nonpos_int(&top, cfg.pole_clearance) {
        let (re, im) = mp::to_f64_pair(&top);
        return Err(Error::Pole(re, im));
    }
    let den_gammas = [
        g.clone(),
        ge.clone(),
        fd.clone(),
        plus_de(&a),
        plus_de(&b),
        plus_de(&c),
    ];

    let num_params = [
        s.clone(),
        half_s.clone() + 1u32,
        g.clone() - &a,
        g.clone() - &b,
        g.clone() - &c,
        d.clone(),
        de.clone(),
    ];
    let den_params = [
        half_s,
        plus_de(&a),
        plus_de(&b),
        plus_de(&c),
        ge,
        g.clone(),
    ];
    let series = hyp_series_unit(&num_params, &den_params, cfg)?;

    let mut pref = complex_gamma(&top, cfg)? / pi(prec);
    for z in &den_gammas {
        pref *= reciprocal_gamma(z, cfg);
    }
    let series_rel = rel_err(&series);
    let value = pref * series.value;
    let gamma_rel = 10f64.powi(-(cfg.working_digits as i32) + 5) * 14.0;
    let estimate = abs_f64(&value) * (series_rel + gamma_rel);
    Ok(EvaluationResult {
        value,
        error_estimate: estimate,
        method: Method::VeryWellPoised,
    })
}
