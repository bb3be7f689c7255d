//! Unit-argument generalized hypergeometric series with closed-form tail
//! summation.
//!
//! Terms of a pFq(1) series decay like n^(-s) with s = 1 + (sum of
//! denominator parameters - sum of numerator parameters), which for the
//! Saalschutzian case means n^(-2): naive truncation is hopeless. After
//! summing up to `series_max_terms`, the last window of terms is fitted to
//! c_0 n^(-s) + c_1 n^(-s-1) + ... and the fitted tail is summed exactly
//! with Hurwitz zeta values.

use rug::ops::CompleteRound;
use rug::{Complex, Float};

use super::zeta::hurwitz_zeta;
use crate::mp::{self, abs_f64};
use crate::precision::{EvaluationResult, Method, PrecisionConfig};
use crate::{Error, Result};

const FIT_WINDOW: usize = 32;
const TINY_STREAK: u32 = 8;
/// Relative error above which a series result is not certifiable.
const NONCONVERGED_REL: f64 = 1e-7;

/// Exact n with (z)_m = 0 first at m = n+1, i.e. z = -n.
fn termination_index(z: &Complex) -> Option<u64> {
    if mp::is_nonpos_int(z) {
        Some((-z.real().to_f64()) as u64)
    } else {
        None
    }
}

/// Sum of pFq(numerators; denominators; 1).
///
/// Terminating series (a numerator parameter equal to a non-positive
/// integer) are summed exactly. Otherwise requires
/// Re(sum den - sum num) > 0 and applies the tail fit.
pub fn hyp_series_unit(
    numerators: &[Complex],
    denominators: &[Complex],
    cfg: &PrecisionConfig,
) -> Result<EvaluationResult> {
    let prec = cfg.bits();
    let num: Vec<Complex> = numerators.iter().map(|z| Complex::with_val(prec, z)).collect();
    let den: Vec<Complex> = denominators.iter().map(|z| Complex::with_val(prec, z)).collect();

    let n_last = num.iter().filter_map(termination_index).min();

    for d in &den {
        let blocked = match termination_index(d) {
            Some(m) => n_last.map_or(true, |k| k > m),
            None if mp::near_nonpos_int(d, cfg.pole_clearance) => {
                // terms up to index k touch the offsets d..d+k-1; harmless
                // only if the series terminates before the near-zero offset
                let offending = (-d.real().to_f64()).round().max(0.0) as u64;
                n_last.map_or(true, |k| k > offending)
            }
            None => false,
        };
        if blocked {
            let (re, im) = mp::to_f64_pair(d);
            return Err(Error::Pole(re, im));
        }
    }

    if let Some(k) = n_last {
        return Ok(sum_terminating(&num, &den, k, prec));
    }

    // decay exponent: |term_n| ~ C n^(-Re s)
    let mut excess = Complex::with_val(prec, (0, 0));
    for d in &den {
        excess += d;
    }
    for a in &num {
        excess -= a;
    }
    let s = excess + 1u32;
    if s.real().to_f64() <= 1.0 {
        return Err(Error::DivergentSeries(s.real().to_f64() - 1.0));
    }

    let eps = cfg.epsilon();
    let mut sum = Complex::with_val(prec, (1, 0));
    let mut term = Complex::with_val(prec, (1, 0));
    let mut abs_sum = 1f64;
    let mut max_term = 1f64;
    let mut tiny_streak = 0u32;
    let mut window: Vec<(u64, Complex)> = Vec::with_capacity(FIT_WINDOW + 1);

    let cap = cfg.series_max_terms as u64;
    let mut n = 0u64;
    while n < cap {
        // term_{n+1} = term_n * prod(num + n) / (prod(den + n) * (n+1))
        for a in &num {
            term *= (a + n).complete((prec, prec));
        }
        for d in &den {
            term /= (d + n).complete((prec, prec));
        }
        term /= n + 1;
        n += 1;

        sum += &term;
        let t_abs = abs_f64(&term);
        abs_sum += t_abs;
        max_term = max_term.max(t_abs);

        window.push((n, term.clone()));
        if window.len() > FIT_WINDOW {
            window.remove(0);
        }

        if t_abs < eps * abs_f64(&sum).max(1e-300) {
            tiny_streak += 1;
            if tiny_streak >= TINY_STREAK {
                // tail bounded by the integral of the decay envelope
                let bound = t_abs * (n as f64) / (s.real().to_f64() - 1.0);
                let estimate = bound + 16.0 * eps * abs_sum;
                return Ok(EvaluationResult {
                    value: sum,
                    error_estimate: estimate,
                    method: Method::SeriesPair,
                });
            }
        } else {
            tiny_streak = 0;
        }
    }

    // tail fit over the final window; first unsummed index is n+1
    let n_next = n + 1;
    let (tail, tail_err) = fit_tail(&window, &s, n_next, cfg)?;
    sum += &tail;
    let estimate = tail_err + 8.0 * eps * abs_sum;

    let scale = abs_f64(&sum).max(max_term);
    if estimate > NONCONVERGED_REL * scale {
        return Err(Error::NonConverged {
            estimate,
            tolerance: NONCONVERGED_REL * scale,
        });
    }
    Ok(EvaluationResult {
        value: sum,
        error_estimate: estimate,
        method: Method::SeriesPair,
    })
}

fn sum_terminating(num: &[Complex], den: &[Complex], k: u64, prec: u32) -> EvaluationResult {
    let mut sum = Complex::with_val(prec, (1, 0));
    let mut term = Complex::with_val(prec, (1, 0));
    let mut abs_sum = 1f64;
    for n in 0..k {
        for a in num {
            term *= (a + n).complete((prec, prec));
        }
        for d in den {
            term /= (d + n).complete((prec, prec));
        }
        term /= n + 1;
        sum += &term;
        abs_sum += abs_f64(&term);
    }
    let eps = 2f64.powi(-(prec as i32 - 8));
    EvaluationResult {
        value: sum,
        error_estimate: eps * abs_sum * (k as f64 + 1.0),
        method: Method::SeriesPair,
    }
}

/// Fit term_n ~ n^(-s) * P(N/n - 1) over the window and sum the fitted model
/// from n = N on with Hurwitz zeta values. Returns (tail, error bound).
fn fit_tail(
    window: &[(u64, Complex)],
    s: &Complex,
    n_start: u64,
    cfg: &PrecisionConfig,
) -> Result<(Complex, f64)> {
    let prec = cfg.bits();
    let order = cfg.tail_fit_order as usize;
    if window.len() < order + 2 {
        return Err(Error::NonConverged {
            estimate: f64::INFINITY,
            tolerance: 0.0,
        });
    }

    // y_i = term_{n_i} * n_i^s; model y = sum_j chat_j w^j with
    // w = (N/n - 1)/T, T the largest abscissa in the window
    let n_big = Float::with_val(prec, n_start);
    let t_of = |k: u64| -> Float { n_big.clone() / Float::with_val(prec, k) - 1u32 };
    let t_max = t_of(window[0].0);
    let mut ws = Vec::with_capacity(window.len());
    let mut ys = Vec::with_capacity(window.len());
    for (k, term) in window {
        ws.push(t_of(*k) / &t_max);
        let ln_n = Float::with_val(prec, *k).ln();
        let n_pow_s = (Complex::with_val(prec, s) * Complex::with_val(prec, (ln_n, 0))).exp();
        ys.push(term.clone() * n_pow_s);
    }

    let tail_for = |nbasis: usize| -> Complex {
        let chat = lsq_poly(&ws, &ys, nbasis, prec);
        // c_j in the t basis: c_j = chat_j / T^j; then
        // term_n ~ n^(-s) sum_j c_j (N/n - 1)^j
        //        = sum_j c_j sum_m C(j,m) (-1)^(j-m) N^m n^(-s-m)
        let mut zetas = Vec::with_capacity(nbasis);
        for m in 0..nbasis {
            let sm = (s + m as u32).complete((prec, prec));
            zetas.push(hurwitz_zeta(&sm, n_start, prec));
        }
        let mut tail = Complex::with_val(prec, (0, 0));
        let mut t_pow = Float::with_val(prec, 1);
        for (j, cj_hat) in chat.iter().enumerate() {
            if j > 0 {
                t_pow *= &t_max;
            }
            let cj = cj_hat.clone() / &t_pow;
            let mut binom = 1i64;
            let mut n_pow = Float::with_val(prec, 1);
            for m in 0..=j {
                if m > 0 {
                    binom = binom * (j - m + 1) as i64 / m as i64;
                    n_pow *= &n_big;
                }
                let sign = if (j - m) % 2 == 0 { 1i32 } else { -1i32 };
                tail += cj.clone() * &zetas[m] * Complex::with_val(prec, (&n_pow, 0)) * sign
                    * binom as i32;
            }
        }
        tail
    };

    let tail_hi = tail_for(order + 1);
    let tail_lo = tail_for(order.max(1));
    let diff = abs_f64(&(tail_lo - &tail_hi));

    // residual of the full fit, propagated through |zeta(Re s, N)|
    let chat = lsq_poly(&ws, &ys, order + 1, prec);
    let mut resid = 0f64;
    for (w, y) in ws.iter().zip(&ys) {
        let mut fitv = Complex::with_val(prec, (0, 0));
        let mut wp = Float::with_val(prec, 1);
        for (j, c) in chat.iter().enumerate() {
            if j > 0 {
                wp *= w;
            }
            fitv += c.clone() * Complex::with_val(prec, (&wp, 0));
        }
        resid = resid.max(abs_f64(&(fitv - y)));
    }
    let s_re = Complex::with_val(prec, (s.real(), 0));
    let zeta_scale = abs_f64(&hurwitz_zeta(&s_re, n_start, prec));
    Ok((tail_hi, diff + resid * zeta_scale))
}

/// Least-squares fit of complex samples y to a degree-(nbasis-1) polynomial
/// in the real abscissas w, via the normal equations.
fn lsq_poly(ws: &[Float], ys: &[Complex], nbasis: usize, prec: u32) -> Vec<Complex> {
    let npts = ws.len();
    // powers[i][j] = w_i^j
    let mut powers = vec![Vec::with_capacity(nbasis); npts];
    for (i, w) in ws.iter().enumerate() {
        let mut p = Float::with_val(prec, 1);
        for j in 0..nbasis {
            if j > 0 {
                p *= w;
            }
            powers[i].push(p.clone());
        }
    }
    let mut g = vec![vec![Complex::with_val(prec, (0, 0)); nbasis]; nbasis];
    let mut b = vec![Complex::with_val(prec, (0, 0)); nbasis];
    for i in 0..npts {
        for j in 0..nbasis {
            for k in j..nbasis {
                let prod = (&powers[i][j] * &powers[i][k]).complete(prec);
                g[j][k] += Complex::with_val(prec, (&prod, 0));
            }
            b[j] += ys[i].clone() * Complex::with_val(prec, (&powers[i][j], 0));
        }
    }
    for j in 1..nbasis {
        for k in 0..j {
            g[j][k] = g[k][j].clone();
        }
    }
    solve_dense(&mut g, &mut b, prec);
    b
}

/// In-place Gaussian elimination with partial pivoting; solution left in b.
fn solve_dense(g: &mut [Vec<Complex>], b: &mut [Complex], prec: u32) {
    let n = b.len();
    for col in 0..n {
        let mut pivot = col;
        let mut best = abs_f64(&g[col][col]);
        for row in col + 1..n {
            let mag = abs_f64(&g[row][col]);
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        g.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = g[row][col].clone() / &g[col][col];
            for k in col..n {
                let sub = (&factor * &g[col][k]).complete((prec, prec));
                g[row][k] -= sub;
            }
            let sub = (&factor * &b[col]).complete((prec, prec));
            b[row] -= sub;
        }
    }
    for col in (0..n).rev() {
        for k in col + 1..n {
            let sub = (&g[col][k] * &b[k]).complete((prec, prec));
            b[col] -= sub;
        }
        let divisor = g[col][col].clone();
        b[col] /= divisor;
    }
}
