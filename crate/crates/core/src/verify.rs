//! Deterministic sampling of generic hyperplane points and numerical
//! certification of relations and identities with auditable reports.

use std::collections::HashSet;
use std::sync::OnceLock;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::CompleteRound;
use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::group::Triple;
use crate::mp::{abs_f64, dist_to_nonpos_int};
use crate::numerics::ParameterPoint;
use crate::precision::PrecisionConfig;
use crate::relations::{
    classical_bailey, classical_barnes_first, classical_barnes_second, classical_thomae,
    fundamental_two_term_check, intermediate_654bar, invariance_catalog, three_term,
    IdentityCheck, Relation,
};
use crate::symbolic::AffineForm;
use crate::{Error, Result};

const MAX_REJECTIONS: usize = 1000;
const MIN_IM_E: f64 = 0.05;

/// Deterministic sampling plan for generic points on the hyperplane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleSpec {
    pub seed: u64,
    pub count: usize,
    /// Re bounds for a, b, c, d.
    pub real_box_abcd: (f64, f64),
    /// Re bounds for f, g.
    pub real_box_fg: (f64, f64),
    /// |Im| bounds for every drawn coordinate; the sign is random.
    pub imag_box: (f64, f64),
    pub pole_clearance: f64,
}

impl SampleSpec {
    pub fn new(seed: u64, count: usize) -> SampleSpec {
        SampleSpec {
            seed,
            count,
            real_box_abcd: (0.35, 0.85),
            real_box_fg: (1.1, 1.6),
            imag_box: (0.05, 0.3),
            pole_clearance: 0.05,
        }
    }
}

/// One verified point: the coordinates, each term's value, and the
/// residual relative to the largest term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointResidual {
    pub point: [(f64, f64); 7],
    pub term_values: Vec<(f64, f64)>,
    pub residual: f64,
    pub scale: f64,
    pub relative: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub id: String,
    pub tolerance: f64,
    pub points: Vec<PointResidual>,
    pub worst_relative: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn from_points(id: String, tolerance: f64, points: Vec<PointResidual>) -> ResidualReport {
        let worst_relative = points.iter().map(|p| p.relative).fold(0.0, f64::max);
        let pass = points.iter().all(|p| p.error.is_none()) && worst_relative <= tolerance;
        ResidualReport {
            id,
            tolerance,
            points,
            worst_relative,
            pass,
        }
    }
}

/// Every gamma-argument form occurring anywhere in the relation catalog:
/// coefficient gamma factors plus the arguments of the series evaluator at
/// each term's transformed point.
fn l_gamma_forms() -> &'static Vec<AffineForm> {
    static FORMS: OnceLock<Vec<AffineForm>> = OnceLock::new();
    FORMS.get_or_init(|| {
        [
            "e", "f", "g", "1+a-e", "1+b-e", "1+c-e", "1+d-e", "a", "b", "c", "d", "1+f-e",
            "1+g-e", "2-e",
        ]
        .iter()
        .map(|s| s.parse().expect("valid form"))
        .collect()
    })
}

/// Pole-sensitive forms of the series evaluator at `g`-transformed points;
/// feed these to `sample_points_avoiding` before checking L(x) = L(gx) for
/// an element outside the stored catalog. Includes the image of e, whose
/// sin(pi e) factor forbids proximity to any integer, so the whole list is
/// screened against all integers.
pub fn element_pole_forms(g: &crate::GroupElement) -> Vec<AffineForm> {
    l_gamma_forms()
        .iter()
        .map(|l| l.compose(g).reduced())
        .collect()
}

/// Images of e under every catalog term matrix: sin(pi e) at the
/// transformed point must stay away from every integer, not only the
/// non-positive ones.
fn catalog_sin_forms() -> &'static Vec<AffineForm> {
    static FORMS: OnceLock<Vec<AffineForm>> = OnceLock::new();
    FORMS.get_or_init(|| {
        let e_form: AffineForm = "e".parse().expect("valid form");
        let mut set = HashSet::new();
        for rel in catalog_relations() {
            for term in &rel.terms {
                set.insert(e_form.compose(&term.matrix).reduced());
            }
        }
        let mut forms: Vec<AffineForm> = set.into_iter().collect();
        forms.sort();
        forms
    })
}

fn catalog_relations() -> Vec<Relation> {
    let mut relations = invariance_catalog();
    relations.push(intermediate_654bar());
    for t in Triple::all() {
        relations.push(three_term(&t).expect("catalog triple"));
    }
    relations
}

fn catalog_pole_forms() -> &'static Vec<AffineForm> {
    static FORMS: OnceLock<Vec<AffineForm>> = OnceLock::new();
    FORMS.get_or_init(|| {
        let l_forms = l_gamma_forms();
        let relations = catalog_relations();
        let mut set = HashSet::new();
        for rel in &relations {
            for term in &rel.terms {
                for e in &term.coefficient {
                    for l in e.gamma_numerator.iter().chain(&e.gamma_denominator) {
                        set.insert(l.reduced());
                    }
                }
                for l in l_forms {
                    set.insert(l.compose(&term.matrix).reduced());
                }
            }
        }
        let mut forms: Vec<AffineForm> = set.into_iter().collect();
        forms.sort();
        forms
    })
}

fn dist_to_any_int(re: f64, im: f64) -> f64 {
    let dre = re - re.round();
    (dre * dre + im * im).sqrt()
}

fn eval_form_f64(l: &AffineForm, coords: &[(f64, f64); 7]) -> (f64, f64) {
    let mut re = l.constant as f64;
    let mut im = 0.0;
    for (c, (zr, zi)) in l.coeffs.iter().zip(coords) {
        re += *c as f64 * zr;
        im += *c as f64 * zi;
    }
    (re, im)
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * unit_f64(rng)
}

fn draw_imag(rng: &mut ChaCha8Rng, box_: (f64, f64)) -> f64 {
    let magnitude = draw(rng, box_);
    if rng.next_u64() & 1 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

/// Deterministic generic points: all catalog gamma arguments stay clear of
/// the non-positive integers and e stays away from the real axis.
pub fn sample_points(spec: &SampleSpec, prec: u32) -> Result<Vec<ParameterPoint>> {
    sample_points_avoiding(spec, prec, &[])
}

/// `sample_points` with additional gamma-argument forms to keep clear of
/// the non-positive integers, for checks outside the stored catalog.
pub fn sample_points_avoiding(
    spec: &SampleSpec,
    prec: u32,
    extra_forms: &[AffineForm],
) -> Result<Vec<ParameterPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let forms = catalog_pole_forms();
    let mut points = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let mut accepted = None;
        for _attempt in 0..MAX_REJECTIONS {
            let six: [(f64, f64); 6] = std::array::from_fn(|k| {
                let re_box = if k < 4 {
                    spec.real_box_abcd
                } else {
                    spec.real_box_fg
                };
                (draw(&mut rng, re_box), draw_imag(&mut rng, spec.imag_box))
            });
            let coords = {
                let e_re = 1.0 + six[0].0 + six[1].0 + six[2].0 + six[3].0 - six[4].0 - six[5].0;
                let e_im = six[0].1 + six[1].1 + six[2].1 + six[3].1 - six[4].1 - six[5].1;
                [
                    six[0], six[1], six[2], six[3], (e_re, e_im), six[4], six[5],
                ]
            };
            if coords[4].1.abs() < MIN_IM_E {
                continue;
            }
            let clear = forms.iter().all(|l| {
                let (re, im) = eval_form_f64(l, &coords);
                dist_to_nonpos_int(re, im) >= spec.pole_clearance
            }) && catalog_sin_forms()
                .iter()
                .chain(extra_forms)
                .all(|l| {
                    let (re, im) = eval_form_f64(l, &coords);
                    dist_to_any_int(re, im) >= spec.pole_clearance
                });
            if !clear {
                continue;
            }
            accepted = Some(ParameterPoint::from_six_f64(prec, six));
            break;
        }
        match accepted {
            Some(p) => points.push(p),
            None => return Err(Error::SamplingExhausted(MAX_REJECTIONS)),
        }
    }
    Ok(points)
}

fn term_values_with_escalation(
    relation: &Relation,
    x: &ParameterPoint,
    cfg: &PrecisionConfig,
) -> Result<Vec<Complex>> {
    match relation.term_values(x, cfg) {
        Err(Error::Cancellation { .. }) | Err(Error::NonConverged { .. }) => {
            relation.term_values(x, &cfg.escalated())
        }
        other => other,
    }
}

/// Evaluate a relation at sampled points; per-point failures are recorded
/// in the report, never thrown.
pub fn check_relation(
    relation: &Relation,
    spec: &SampleSpec,
    tol: f64,
    cfg: &PrecisionConfig,
) -> Result<ResidualReport> {
    let points = sample_points(spec, cfg.bits())?;
    Ok(check_relation_at(relation, &points, tol, cfg))
}

/// `check_relation` against caller-supplied points, e.g. from
/// `sample_points_avoiding`.
pub fn check_relation_at(
    relation: &Relation,
    points: &[ParameterPoint],
    tol: f64,
    cfg: &PrecisionConfig,
) -> ResidualReport {
    let mut rows = Vec::with_capacity(points.len());
    for x in points {
        let row = match term_values_with_escalation(relation, x, cfg) {
            Ok(values) => {
                let mut sum = Complex::with_val(cfg.bits(), (0, 0));
                let mut scale = 0f64;
                for v in &values {
                    scale = scale.max(abs_f64(v));
                    sum += v;
                }
                let residual = abs_f64(&sum);
                PointResidual {
                    point: x.to_f64(),
                    term_values: values.iter().map(crate::mp::to_f64_pair).collect(),
                    residual,
                    scale,
                    relative: residual / scale.max(f64::MIN_POSITIVE),
                    error: None,
                }
            }
            Err(err) => PointResidual {
                point: x.to_f64(),
                term_values: Vec::new(),
                residual: f64::INFINITY,
                scale: 0.0,
                relative: f64::INFINITY,
                error: Some(err.to_string()),
            },
        };
        rows.push(row);
    }
    ResidualReport::from_points(relation.name.clone(), tol, rows)
}

/// Instantiate `template` with parameters taken from a sampled point;
/// errors signal the point lies outside the identity's validity region.
fn resample_identity(template: &IdentityCheck, x: &ParameterPoint) -> Result<IdentityCheck> {
    match template {
        IdentityCheck::Thomae { .. } => classical_thomae(x.a(), x.b(), x.c(), x.f(), x.g()),
        IdentityCheck::Bailey { n, .. } => {
            classical_bailey(*n, x.a(), x.b(), x.c(), x.f(), x.g())
        }
        IdentityCheck::BarnesFirst { .. } => {
            Ok(classical_barnes_first(x.a(), x.b(), x.c(), x.d()))
        }
        IdentityCheck::BarnesSecond { .. } => {
            // halve a,b,c so the constraint e = 1+a+b+c-f usually leaves
            // Re(1-e) positive and the contour can separate the pole chains
            let prec = x.prec();
            let half = |z: &Complex| Complex::with_val(prec, z / 2u32);
            let (a, b, c) = (half(x.a()), half(x.b()), half(x.c()));
            let mut e = Complex::with_val(prec, (1, 0));
            e += &a;
            e += &b;
            e += &c;
            e -= x.f();
            let one_minus_e_re = 1.0 - e.real().to_f64();
            if one_minus_e_re < 0.3 {
                return Err(Error::Precondition(format!(
                    "contour margin Re(1-e) = {one_minus_e_re} too small"
                )));
            }
            classical_barnes_second(&a, &b, &c, &e, x.f())
        }
        IdentityCheck::FundamentalTwoTerm { .. } => Ok(fundamental_two_term_check(x.clone())),
    }
}

/// Check an identity family at freshly sampled parameter tuples drawn from
/// the same boxes as the relation sampler; out-of-region draws are
/// rejected and redrawn.
pub fn check_identity(
    template: &IdentityCheck,
    spec: &SampleSpec,
    tol: f64,
    cfg: &PrecisionConfig,
) -> Result<ResidualReport> {
    // identities with narrow validity regions (e.g. a contour margin)
    // reject most generic draws, so offer a deep candidate pool
    let oversampled = SampleSpec {
        count: spec.count * 64,
        ..spec.clone()
    };
    let candidates = sample_points(&oversampled, cfg.bits())?;
    let mut rows = Vec::with_capacity(spec.count);
    for x in &candidates {
        if rows.len() == spec.count {
            break;
        }
        let idc = match resample_identity(template, x) {
            Ok(idc) => idc,
            Err(_) => continue,
        };
        let row = match idc.sides(cfg) {
            Ok((lhs, rhs)) => {
                let scale = abs_f64(&lhs).max(abs_f64(&rhs)).max(f64::MIN_POSITIVE);
                let residual = abs_f64(&((&lhs - &rhs).complete(lhs.prec())));
                PointResidual {
                    point: x.to_f64(),
                    term_values: vec![
                        crate::mp::to_f64_pair(&lhs),
                        crate::mp::to_f64_pair(&rhs),
                    ],
                    residual,
                    scale,
                    relative: residual / scale,
                    error: None,
                }
            }
            Err(err) => PointResidual {
                point: x.to_f64(),
                term_values: Vec::new(),
                residual: f64::INFINITY,
                scale: 0.0,
                relative: f64::INFINITY,
                error: Some(err.to_string()),
            },
        };
        rows.push(row);
    }
    if rows.len() < spec.count {
        return Err(Error::SamplingExhausted(oversampled.count));
    }
    Ok(ResidualReport::from_points(
        template.name().to_string(),
        tol,
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::fundamental_coherent;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn sampling_is_deterministic_and_on_the_hyperplane() {
        let spec = SampleSpec::new(7, 5);
        let a = sample_points(&spec, 192).unwrap();
        let b = sample_points(&spec, 192).unwrap();
        assert_eq!(a.len(), 5);
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.to_f64(), q.to_f64());
            assert_eq!(p.constraint_residual(), 0.0);
            assert!(p.to_f64()[4].1.abs() >= MIN_IM_E);
        }
        let other = sample_points(&SampleSpec::new(8, 5), 192).unwrap();
        assert_ne!(a[0].to_f64(), other[0].to_f64());
    }

    #[test]
    fn sampled_points_clear_catalog_poles() {
        let spec = SampleSpec::new(3, 4);
        let points = sample_points(&spec, 192).unwrap();
        let forms = catalog_pole_forms();
        assert!(forms.len() > 20);
        for p in &points {
            let coords = p.to_f64();
            for l in forms {
                let (re, im) = eval_form_f64(l, &coords);
                assert!(dist_to_nonpos_int(re, im) >= spec.pole_clearance);
            }
        }
    }

    #[test]
    fn coherent_relation_passes_and_scaling_is_invariant() {
        let c = cfg();
        let spec = SampleSpec::new(11, 2);
        let rel = fundamental_coherent();
        let report = check_relation(&rel, &spec, 1e-6, &c).unwrap();
        assert!(report.pass, "worst = {:e}", report.worst_relative);

        // multiply every coefficient by 3: relative residuals unchanged
        let mut scaled = rel.clone();
        for t in &mut scaled.terms {
            for e in &mut t.coefficient {
                e.prefactor = (3 * e.prefactor.0, e.prefactor.1);
            }
        }
        let scaled_report = check_relation(&scaled, &spec, 1e-6, &c).unwrap();
        for (a, b) in report.points.iter().zip(&scaled_report.points) {
            assert!((a.relative - b.relative).abs() <= 1e-12 * a.relative.max(1e-30));
        }
    }

    #[test]
    fn corrupted_coefficient_is_detected() {
        let c = cfg();
        let spec = SampleSpec::new(5, 1);
        let mut rel = fundamental_coherent();
        rel.terms[0].coefficient[0].prefactor = (2, 1);
        let report = check_relation(&rel, &spec, 1e-3, &c).unwrap();
        assert!(!report.pass);
        assert!(report.worst_relative > 1e-2);
    }

    #[test]
    fn identity_families_pass() {
        let c = cfg();
        let spec = SampleSpec::new(13, 2);
        let thomae = IdentityCheck::Thomae {
            b: Complex::new(64),
            c: Complex::new(64),
            d: Complex::new(64),
            f: Complex::new(64),
            g: Complex::new(64),
        };
        let report = check_identity(&thomae, &spec, 1e-8, &c).unwrap();
        assert!(report.pass, "thomae worst = {:e}", report.worst_relative);

        let bailey = IdentityCheck::Bailey {
            n: 0,
            b: Complex::new(64),
            c: Complex::new(64),
            d: Complex::new(64),
            f: Complex::new(64),
            g: Complex::new(64),
        };
        let report = check_identity(&bailey, &spec, 1e-10, &c).unwrap();
        assert!(report.pass);
        assert!(report.worst_relative < 1e-40, "n=0 sides are exactly 1");
    }

    #[test]
    fn report_is_deterministic_json() {
        let c = cfg();
        let spec = SampleSpec::new(21, 1);
        let rel = fundamental_coherent();
        let r1 = check_relation(&rel, &spec, 1e-6, &c).unwrap();
        let r2 = check_relation(&rel, &spec, 1e-6, &c).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }
}
