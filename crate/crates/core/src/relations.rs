//! The relation catalog: the six two-term invariances, the fundamental and
//! derived three-term relations for all 220 coset triples, and the classical
//! identities (Thomae, Bailey, Barnes' lemmas) as checkable objects.

use rug::ops::CompleteRound;
use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::group::{
    builtin_matrices, coherent_base, incoherent_base, CosetLabel, CosetTable, GroupElement,
    Triple,
};
use crate::mp::abs_f64;
use crate::numerics::{
    barnes_first_lemma, barnes_second_sides, eval_L_series, hyp_series_unit, pochhammer,
    reciprocal_gamma, ParameterPoint,
};
use crate::precision::PrecisionConfig;
use crate::symbolic::{sums_equal_on_v, AffineForm, CoefficientExpression, ScalarRatio};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationKind {
    TwoTermInvariance,
    ThreeTermCoherent,
    ThreeTermIncoherent,
}

/// One summand of a relation: coefficient(x) * L(matrix * x).
///
/// The coefficient is a formal sum of expressions (a single entry for all
/// but the incoherent middle term). `params` is the displayed parameter
/// list; each entry equals the corresponding matrix row on the hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationTerm {
    pub matrix: GroupElement,
    pub label: CosetLabel,
    pub coefficient: Vec<CoefficientExpression>,
    pub params: [AffineForm; 7],
}

/// Canonical display form of a matrix row: the most compact hyperplane
/// representative (constants enter through the constraint functional).
pub fn row_forms(matrix: &GroupElement) -> [AffineForm; 7] {
    std::array::from_fn(|i| AffineForm::new(0, matrix.matrix[i]).compact_on_v())
}

impl RelationTerm {
    pub fn new(matrix: GroupElement, coefficient: Vec<CoefficientExpression>) -> RelationTerm {
        let label = CosetTable::shared()
            .coset_label(&matrix)
            .expect("term matrix must lie in the governing group");
        let params = row_forms(&matrix);
        RelationTerm {
            matrix,
            label,
            coefficient,
            params,
        }
    }

    fn with_params(mut self, params: [&str; 7]) -> RelationTerm {
        self.params = params.map(|s| s.parse().expect("valid affine form"));
        self
    }

    /// Sum of the coefficient summands at a point.
    pub fn coefficient_value(&self, x: &ParameterPoint, cfg: &PrecisionConfig) -> Result<Complex> {
        let mut acc = Complex::with_val(cfg.bits(), (0, 0));
        for e in &self.coefficient {
            acc += e.evaluate(x, cfg)?;
        }
        Ok(acc)
    }

    /// coefficient(x) * L(matrix * x).
    pub fn value(&self, x: &ParameterPoint, cfg: &PrecisionConfig) -> Result<Complex> {
        let coeff = self.coefficient_value(x, cfg)?;
        let l = eval_L_series(&x.transform(&self.matrix.matrix), cfg)?;
        Ok(coeff * l.value)
    }

    /// "L[p1,p2,p3,p4; p5; p6,p7]".
    pub fn render_l(&self) -> String {
        let p = &self.params;
        format!(
            "L[{},{},{},{}; {}; {},{}]",
            p[0], p[1], p[2], p[3], p[4], p[5], p[6]
        )
    }

    fn render_coefficient(&self) -> String {
        match self.coefficient.len() {
            1 => self.coefficient[0].to_string(),
            _ => {
                let parts: Vec<String> =
                    self.coefficient.iter().map(|e| e.to_string()).collect();
                format!("({})", parts.join(" + "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub kind: RelationKind,
    pub triple: Option<Triple>,
    pub terms: Vec<RelationTerm>,
}

impl Relation {
    pub fn term_values(&self, x: &ParameterPoint, cfg: &PrecisionConfig) -> Result<Vec<Complex>> {
        self.terms.iter().map(|t| t.value(x, cfg)).collect()
    }

    /// (|sum of terms|, max |term|) at a point.
    pub fn residual(&self, x: &ParameterPoint, cfg: &PrecisionConfig) -> Result<(f64, f64)> {
        let values = self.term_values(x, cfg)?;
        let mut sum = Complex::with_val(cfg.bits(), (0, 0));
        let mut scale = 0f64;
        for v in &values {
            scale = scale.max(abs_f64(v));
            sum += v;
        }
        Ok((abs_f64(&sum), scale))
    }

    pub fn render(&self) -> String {
        match self.kind {
            RelationKind::TwoTermInvariance => format!(
                "{} = {}",
                self.terms[0].render_l(),
                self.terms[1].render_l()
            ),
            _ => {
                let parts: Vec<String> = self
                    .terms
                    .iter()
                    .map(|t| format!("{} {}", t.render_coefficient(), t.render_l()))
                    .collect();
                format!("{} = 0", parts.join(" + "))
            }
        }
    }

    /// The scalar q with `self` = q * `other` term-by-term after matching
    /// terms by coset label; None when structures differ. Relations are
    /// projective, so any single q certifies equality.
    pub fn projective_ratio_on_v(&self, other: &Relation) -> Option<ScalarRatio> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let mut common: Option<ScalarRatio> = None;
        for t in &self.terms {
            let o = other.terms.iter().find(|o| o.label == t.label)?;
            let r = coefficient_sum_ratio(&t.coefficient, &o.coefficient)?;
            match common {
                None => common = Some(r),
                Some(c) if c == r => {}
                _ => return None,
            }
        }
        common
    }

    /// Projective equality as functions on the hyperplane: after matching
    /// terms by label, cross-multiplied coefficients must agree exactly,
    /// with sine-product identities resolved by expansion.
    pub fn projectively_equal_on_v(&self, other: &Relation) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let mut pairs = Vec::new();
        for t in &self.terms {
            match other.terms.iter().find(|o| o.label == t.label) {
                Some(o) => pairs.push((t, o)),
                None => return false,
            }
        }
        let (s0, o0) = pairs[0];
        pairs.iter().skip(1).all(|(sm, om)| {
            let left = multiply_sums(&sm.coefficient, &o0.coefficient);
            let right = multiply_sums(&s0.coefficient, &om.coefficient);
            sums_equal_on_v(&left, &right)
        })
    }
}

/// All pairwise products of two formal sums.
fn multiply_sums(
    a: &[CoefficientExpression],
    b: &[CoefficientExpression],
) -> Vec<CoefficientExpression> {
    a.iter()
        .flat_map(|ea| b.iter().map(move |eb| ea.mul(eb)))
        .collect()
}

/// Ratio of two formal sums of coefficient expressions: every summand of
/// `a` must pair with a summand of `b` at one shared scalar ratio.
fn coefficient_sum_ratio(
    a: &[CoefficientExpression],
    b: &[CoefficientExpression],
) -> Option<ScalarRatio> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut common: Option<ScalarRatio> = None;
    for ea in a {
        let mut matched = false;
        for (k, eb) in b.iter().enumerate() {
            if used[k] {
                continue;
            }
            if let Some(r) = ea.ratio_on_v(eb) {
                if common.is_none_or(|c| c == r) {
                    used[k] = true;
                    common = Some(r);
                    matched = true;
                    break;
                }
            }
        }
        if !matched {
            return None;
        }
    }
    common
}

fn expr(
    sin_factors: &[&str],
    gamma_numerator: &[&str],
    gamma_denominator: &[&str],
) -> CoefficientExpression {
    let parse = |ss: &[&str]| -> Vec<AffineForm> {
        ss.iter().map(|s| s.parse().expect("valid form")).collect()
    };
    CoefficientExpression::new(
        (1, 1),
        0,
        parse(sin_factors),
        parse(gamma_numerator),
        parse(gamma_denominator),
    )
}

/// The six invariances L(x) = L(Mx) for the double-coset representatives,
/// with the classically printed parameter lists.
pub fn invariance_catalog() -> Vec<Relation> {
    let b = builtin_matrices();
    let printed: [[&str; 7]; 6] = [
        ["a", "b", "c", "d", "e", "f", "g"],
        ["a", "b", "g-c", "g-d", "1+a+b-f", "1+a+b-e", "g"],
        ["1+a-e", "g-c", "a", "f-c", "1+a-c", "1+a+b-e", "1+a+d-e"],
        ["1+d-e", "1+a-e", "g-c", "g-b", "1+g-b-c", "1+a+d-e", "1+g-e"],
        ["g-a", "g-b", "g-c", "g-d", "1+g-f", "1+g-e", "g"],
        ["1+c-e", "1+d-e", "1+a-e", "1+b-e", "2-e", "1+g-e", "1+f-e"],
    ];
    (0..6)
        .map(|k| {
            let plus = CoefficientExpression::one();
            let mut minus = CoefficientExpression::one();
            minus.prefactor = (-1, 1);
            Relation {
                name: format!("invariance type {}", k + 1),
                kind: RelationKind::TwoTermInvariance,
                triple: None,
                terms: vec![
                    RelationTerm::new(GroupElement::identity(), vec![plus]),
                    RelationTerm::new(b.invariance_reps[k], vec![minus])
                        .with_params(printed[k]),
                ],
            }
        })
        .collect()
}

/// Double-coset type (1..6) of an element of the invariance group.
pub fn classify_invariance(mu: &GroupElement) -> Result<u8> {
    CosetTable::shared().invariance_type(mu)
}

fn gamma_coefficients() -> [CoefficientExpression; 3] {
    let b = builtin_matrices();
    let g1 = expr(&["f-g"], &[], &["e-a", "e-b", "e-c", "e-d"]);
    let g2 = g1.substitute(&b.c576);
    let g3 = g2.substitute(&b.c576);
    [g1, g2, g3]
}

/// The fundamental coherent three-term relation, type {6,5,4}.
pub fn fundamental_coherent() -> Relation {
    let b = builtin_matrices();
    let [g1, g2, g3] = gamma_coefficients();
    Relation {
        name: "three-term {6,5,4}".into(),
        kind: RelationKind::ThreeTermCoherent,
        triple: Some(coherent_base()),
        terms: vec![
            RelationTerm::new(GroupElement::identity(), vec![g1]),
            RelationTerm::new(b.t56, vec![g2]),
            RelationTerm::new(b.t57, vec![g3]),
        ],
    }
}

/// Matrix realizing the parameter list (1-a,1-b,1-c,1-d; 2-g; 2-f,2-e) on
/// the hyperplane: constants are absorbed through the constraint
/// functional, so the rows stay linear.
pub fn matrix_654bar() -> GroupElement {
    GroupElement {
        matrix: [
            [-2, -1, -1, -1, 1, 1, 1],
            [-1, -2, -1, -1, 1, 1, 1],
            [-1, -1, -2, -1, 1, 1, 1],
            [-1, -1, -1, -2, 1, 1, 1],
            [-2, -2, -2, -2, 2, 2, 1],
            [-2, -2, -2, -2, 2, 1, 2],
            [-2, -2, -2, -2, 1, 2, 2],
        ],
    }
}

/// The printed intermediate relation of type {6,5,4-bar}, kept for
/// regression against the catalog version produced by a transporter.
pub fn intermediate_654bar() -> Relation {
    let b = builtin_matrices();
    let c1 = expr(&["e"], &[], &["1+a-f", "1+b-f", "1+c-f", "1+d-f"]);
    let c2 = expr(&["-f"], &[], &["1+a-e", "1+b-e", "1+c-e", "1+d-e"]);
    let c3 = expr(&["e-f"], &[], &["a", "b", "c", "d"]);
    let triple = Triple::new(
        CosetLabel::unbarred(6),
        CosetLabel::unbarred(5),
        CosetLabel::barred(4),
    )
    .expect("distinct");
    Relation {
        name: "three-term {6,5,4b} (printed form)".into(),
        kind: RelationKind::ThreeTermCoherent,
        triple: Some(triple),
        terms: vec![
            RelationTerm::new(GroupElement::identity(), vec![c1]),
            RelationTerm::new(b.t56, vec![c2]),
            RelationTerm::new(matrix_654bar(), vec![c3]),
        ],
    }
}

fn beta_coefficients() -> [Vec<CoefficientExpression>; 3] {
    let b1 = expr(
        &["g", "f-g"],
        &[],
        &[
            "1+a-f", "1+b-f", "1+c-f", "1+d-f", "e-a", "e-b", "e-c", "e-d",
        ],
    );
    let bracket = |sins: &[&str]| {
        let mut e = expr(sins, &[], &[]);
        e.pi_power = -4;
        e
    };
    let b2a = bracket(&["g", "g-e", "f-a", "f-b", "f-c", "f-d"]);
    let b2b = bracket(&["f", "e-f", "g-a", "g-b", "g-c", "g-d"]);
    let b3 = expr(
        &["e-f", "f-g"],
        &[],
        &["a", "b", "c", "d", "g-a", "g-b", "g-c", "g-d"],
    );
    [vec![b1], vec![b2a, b2b], vec![b3]]
}

/// The fundamental incoherent three-term relation, type {6,5,6-bar}; the
/// middle coefficient is a two-summand bracket.
pub fn fundamental_incoherent() -> Relation {
    let b = builtin_matrices();
    let [b1, b2, b3] = beta_coefficients();
    Relation {
        name: "three-term {6,5,6b}".into(),
        kind: RelationKind::ThreeTermIncoherent,
        triple: Some(incoherent_base()),
        terms: vec![
            RelationTerm::new(GroupElement::identity(), vec![b1[0].clone()]),
            RelationTerm::new(b.t56, b2),
            RelationTerm::new(b.w0, vec![b3[0].clone()]),
        ],
    }
}

/// Three-term relation for any triple of distinct coset labels: transport
/// the fundamental relation of the matching coherence class, attaching each
/// transported coefficient to the canonical representative of the image
/// label.
pub fn three_term(triple: &Triple) -> Result<Relation> {
    let table = CosetTable::shared();
    let b = builtin_matrices();
    let (base, base_rel) = if triple.is_coherent() {
        (coherent_base(), fundamental_coherent())
    } else {
        (incoherent_base(), fundamental_incoherent())
    };
    if *triple == base {
        return Ok(base_rel);
    }
    let tr = table.find_transporter(&base, triple)?;
    let terms = tr
        .images
        .iter()
        .map(|(src, dst)| {
            let src_term = base_rel
                .terms
                .iter()
                .find(|t| t.label == *src)
                .expect("base term per base label");
            let coefficient = src_term
                .coefficient
                .iter()
                .map(|e| e.substitute(&tr.element))
                .collect();
            RelationTerm::new(b.representative(*dst), coefficient)
        })
        .collect();
    Ok(Relation {
        name: format!("three-term {triple}"),
        kind: base_rel.kind,
        triple: Some(*triple),
        terms,
    })
}

/// A named identity with independently computable sides.
#[derive(Debug, Clone)]
pub enum IdentityCheck {
    Thomae {
        b: Complex,
        c: Complex,
        d: Complex,
        f: Complex,
        g: Complex,
    },
    Bailey {
        n: u64,
        b: Complex,
        c: Complex,
        d: Complex,
        f: Complex,
        g: Complex,
    },
    BarnesFirst {
        alpha: Complex,
        beta: Complex,
        gamma: Complex,
        delta: Complex,
    },
    BarnesSecond {
        a: Complex,
        b: Complex,
        c: Complex,
        e: Complex,
        f: Complex,
    },
    FundamentalTwoTerm {
        point: ParameterPoint,
    },
}

impl IdentityCheck {
    pub fn name(&self) -> &'static str {
        match self {
            IdentityCheck::Thomae { .. } => "thomae",
            IdentityCheck::Bailey { .. } => "bailey",
            IdentityCheck::BarnesFirst { .. } => "barnes-first",
            IdentityCheck::BarnesSecond { .. } => "barnes-second",
            IdentityCheck::FundamentalTwoTerm { .. } => "fundamental-two-term",
        }
    }

    /// (lhs, rhs), each side by its own route.
    pub fn sides(&self, cfg: &PrecisionConfig) -> Result<(Complex, Complex)> {
        match self {
            IdentityCheck::Thomae { b, c, d, f, g } => thomae_sides(b, c, d, f, g, cfg),
            IdentityCheck::Bailey { n, b, c, d, f, g } => bailey_sides(*n, b, c, d, f, g, cfg),
            IdentityCheck::BarnesFirst {
                alpha,
                beta,
                gamma,
                delta,
            } => barnes_first_lemma(alpha, beta, gamma, delta, cfg),
            IdentityCheck::BarnesSecond { a, b, c, e, f } => {
                barnes_second_sides(a, b, c, e, f, cfg)
            }
            IdentityCheck::FundamentalTwoTerm { point } => {
                let a_mat = builtin_matrices().a;
                let lhs = eval_L_series(point, cfg)?;
                let rhs = eval_L_series(&point.transform(&a_mat.matrix), cfg)?;
                Ok((lhs.value, rhs.value))
            }
        }
    }

    /// Relative gap |lhs - rhs| / max(|lhs|, |rhs|).
    pub fn relative_gap(&self, cfg: &PrecisionConfig) -> Result<f64> {
        let (lhs, rhs) = self.sides(cfg)?;
        let scale = abs_f64(&lhs).max(abs_f64(&rhs)).max(f64::MIN_POSITIVE);
        Ok(abs_f64(&(lhs - rhs)) / scale)
    }
}

/// Normalized Thomae ratio 3F2(b,c,d;f,g;1) / [Gamma(f)Gamma(g)Gamma(s)],
/// s = f+g-b-c-d; totally symmetric in {b,c,d} and {f,g}.
pub fn thomae_ratio(
    b: &Complex,
    c: &Complex,
    d: &Complex,
    f: &Complex,
    g: &Complex,
    cfg: &PrecisionConfig,
) -> Result<Complex> {
    let prec = cfg.bits();
    let series = hyp_series_unit(
        &[
            Complex::with_val(prec, b),
            Complex::with_val(prec, c),
            Complex::with_val(prec, d),
        ],
        &[Complex::with_val(prec, f), Complex::with_val(prec, g)],
        cfg,
    )?;
    let mut s = Complex::with_val(prec, f);
    s += g;
    s -= b;
    s -= c;
    s -= d;
    let mut out = series.value;
    out *= reciprocal_gamma(&Complex::with_val(prec, f), cfg);
    out *= reciprocal_gamma(&Complex::with_val(prec, g), cfg);
    out *= reciprocal_gamma(&s, cfg);
    Ok(out)
}

fn thomae_sides(
    b: &Complex,
    c: &Complex,
    d: &Complex,
    f: &Complex,
    g: &Complex,
    cfg: &PrecisionConfig,
) -> Result<(Complex, Complex)> {
    let prec = cfg.bits();
    let lhs = thomae_ratio(b, c, d, f, g, cfg)?;
    // rhs parameters: top (f-b, g-b, s), bottom (f+g-b-d, f+g-b-c)
    let fb = (f - b).complete((prec, prec));
    let gb = (g - b).complete((prec, prec));
    let mut s = Complex::with_val(prec, f);
    s += g;
    s -= b;
    s -= c;
    s -= d;
    let mut fgbd = Complex::with_val(prec, f);
    fgbd += g;
    fgbd -= b;
    fgbd -= d;
    let mut fgbc = Complex::with_val(prec, f);
    fgbc += g;
    fgbc -= b;
    fgbc -= c;
    let series = hyp_series_unit(&[fb, gb, s], &[fgbd.clone(), fgbc.clone()], cfg)?;
    let mut rhs = series.value;
    rhs *= reciprocal_gamma(&Complex::with_val(prec, b), cfg);
    rhs *= reciprocal_gamma(&fgbd, cfg);
    rhs *= reciprocal_gamma(&fgbc, cfg);
    Ok((lhs, rhs))
}

/// One-step transformation: the Thomae ratio is invariant under
/// (b,c,d,f,g) -> (b, g-c, g-d, f+g-c-d, g).
pub fn thomae_one_step_sides(
    b: &Complex,
    c: &Complex,
    d: &Complex,
    f: &Complex,
    g: &Complex,
    cfg: &PrecisionConfig,
) -> Result<(Complex, Complex)> {
    let prec = cfg.bits();
    let lhs = thomae_ratio(b, c, d, f, g, cfg)?;
    let gc = (g - c).complete((prec, prec));
    let gd = (g - d).complete((prec, prec));
    let mut fgcd = Complex::with_val(prec, f);
    fgcd += g;
    fgcd -= c;
    fgcd -= d;
    let rhs = thomae_ratio(
        &Complex::with_val(prec, b),
        &gc,
        &gd,
        &fgcd,
        &Complex::with_val(prec, g),
        cfg,
    )?;
    Ok((lhs, rhs))
}

/// Thomae's identity with its convergence region checked up front:
/// Re(f+g-b-c-d) > 0 and Re(f-b) > 0.
pub fn classical_thomae(
    b: &Complex,
    c: &Complex,
    d: &Complex,
    f: &Complex,
    g: &Complex,
) -> Result<IdentityCheck> {
    let re = |z: &Complex| z.real().to_f64();
    let s_re = re(f) + re(g) - re(b) - re(c) - re(d);
    let fb_re = re(f) - re(b);
    if s_re <= 0.0 || fb_re <= 0.0 {
        return Err(Error::Precondition(format!(
            "outside convergence region: Re(f+g-b-c-d) = {s_re}, Re(f-b) = {fb_re}"
        )));
    }
    Ok(IdentityCheck::Thomae {
        b: b.clone(),
        c: c.clone(),
        d: d.clone(),
        f: f.clone(),
        g: g.clone(),
    })
}

fn bailey_sides(
    n: u64,
    b: &Complex,
    c: &Complex,
    d: &Complex,
    f: &Complex,
    g: &Complex,
    cfg: &PrecisionConfig,
) -> Result<(Complex, Complex)> {
    let prec = cfg.bits();
    // e from e+f+g-b-c-d+n = 1
    let mut e = Complex::with_val(prec, (1i64 - n as i64, 0));
    e += b;
    e += c;
    e += d;
    e -= f;
    e -= g;
    let neg_n = Complex::with_val(prec, (-(n as i64), 0));
    let lift = |z: &Complex| Complex::with_val(prec, z);
    let lhs = hyp_series_unit(
        &[neg_n.clone(), lift(b), lift(c), lift(d)],
        &[e.clone(), lift(f), lift(g)],
        cfg,
    )?
    .value;

    let eb = (&e - b).complete((prec, prec));
    let fb = (f - b).complete((prec, prec));
    let mut pref = pochhammer(&eb, n, cfg) * pochhammer(&fb, n, cfg);
    pref /= pochhammer(&e, n, cfg);
    pref /= pochhammer(&lift(f), n, cfg);
    let shift = |z: &Complex| {
        let mut w = Complex::with_val(prec, (1i64 - n as i64, 0));
        w += b;
        w -= z;
        w
    };
    let gc = (g - c).complete((prec, prec));
    let gd = (g - d).complete((prec, prec));
    let series = hyp_series_unit(
        &[neg_n, lift(b), gc, gd],
        &[shift(f), shift(&e), lift(g)],
        cfg,
    )?
    .value;
    Ok((lhs, pref * series))
}

/// Bailey's terminating identity; both sides are finite sums.
pub fn classical_bailey(
    n: u64,
    b: &Complex,
    c: &Complex,
    d: &Complex,
    f: &Complex,
    g: &Complex,
) -> Result<IdentityCheck> {
    Ok(IdentityCheck::Bailey {
        n,
        b: b.clone(),
        c: c.clone(),
        d: d.clone(),
        f: f.clone(),
        g: g.clone(),
    })
}

/// Barnes' first lemma as an identity check.
pub fn classical_barnes_first(
    alpha: &Complex,
    beta: &Complex,
    gamma: &Complex,
    delta: &Complex,
) -> IdentityCheck {
    IdentityCheck::BarnesFirst {
        alpha: alpha.clone(),
        beta: beta.clone(),
        gamma: gamma.clone(),
        delta: delta.clone(),
    }
}

/// Barnes' second lemma, contour quadrature against the gamma product;
/// requires e+f-a-b-c = 1.
pub fn classical_barnes_second(
    a: &Complex,
    b: &Complex,
    c: &Complex,
    e: &Complex,
    f: &Complex,
) -> Result<IdentityCheck> {
    let prec = a.prec();
    let mut constraint = Complex::with_val(prec, e);
    constraint += f;
    constraint -= a;
    constraint -= b;
    constraint -= c;
    constraint -= 1u32;
    let viol = abs_f64(&constraint);
    if viol > 1e-10 {
        return Err(Error::Precondition(format!(
            "e+f-a-b-c-1 = {viol:e}, expected 0"
        )));
    }
    Ok(IdentityCheck::BarnesSecond {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        e: e.clone(),
        f: f.clone(),
    })
}

/// L(x) against L(Ax) for the fundamental involution A.
pub fn fundamental_two_term_check(point: ParameterPoint) -> IdentityCheck {
    IdentityCheck::FundamentalTwoTerm { point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_matrices;
    use crate::mp::cx;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    /// Complex test point safely away from all catalog poles.
    fn generic_point(prec: u32) -> ParameterPoint {
        ParameterPoint::from_six_f64(
            prec,
            [
                (0.51, 0.11),
                (0.63, -0.07),
                (0.74, 0.13),
                (0.82, -0.17),
                (1.32, 0.19),
                (1.43, -0.23),
            ],
        )
    }

    #[test]
    fn invariance_catalog_matches_printed_lists() {
        let catalog = invariance_catalog();
        assert_eq!(catalog.len(), 6);
        for (k, rel) in catalog.iter().enumerate() {
            assert_eq!(rel.kind, RelationKind::TwoTermInvariance);
            assert_eq!(rel.terms.len(), 2);
            assert_eq!(rel.terms[0].coefficient[0].prefactor, (1, 1));
            assert_eq!(rel.terms[1].coefficient[0].prefactor, (-1, 1));
            // printed parameter list must agree with the matrix rows on V
            let rows = row_forms(&rel.terms[1].matrix);
            for (p, r) in rel.terms[1].params.iter().zip(rows) {
                assert!(p.equivalent_on_v(&r), "type {} param {p} vs row {r}", k + 1);
            }
        }
        assert_eq!(catalog[0].render(), "L[a,b,c,d; e; f,g] = L[a,b,c,d; e; f,g]");
        assert_eq!(
            catalog[1].terms[1].render_l(),
            "L[a,b,g-c,g-d; 1+a+b-f; 1+a+b-e,g]"
        );
        assert_eq!(
            catalog[4].terms[1].render_l(),
            "L[g-a,g-b,g-c,g-d; 1+g-f; 1+g-e,g]"
        );
    }

    #[test]
    fn invariances_hold_numerically() {
        let c = cfg();
        let x = generic_point(c.bits());
        let lx = eval_L_series(&x, &c).unwrap().value;
        for rel in invariance_catalog() {
            let mx = x.transform(&rel.terms[1].matrix.matrix);
            let lmx = eval_L_series(&mx, &c).unwrap().value;
            let rel_err = abs_f64(&(lx.clone() - lmx)) / abs_f64(&lx);
            assert!(rel_err < 1e-6, "{}: {rel_err:e}", rel.name);
        }
    }

    #[test]
    fn classify_invariance_of_representatives() {
        let b = builtin_matrices();
        assert_eq!(classify_invariance(&GroupElement::identity()).unwrap(), 1);
        assert_eq!(classify_invariance(&b.a).unwrap(), 2);
        for (k, rep) in b.invariance_reps.iter().enumerate() {
            assert_eq!(classify_invariance(rep).unwrap() as usize, k + 1);
        }
        assert!(matches!(
            classify_invariance(&b.t56),
            Err(Error::NotInGroup)
        ));
    }

    #[test]
    fn coherent_coefficients_match_printed_forms() {
        let rel = fundamental_coherent();
        assert_eq!(rel.terms.len(), 3);
        let g2 = expr(&["g-e"], &[], &["f-a", "f-b", "f-c", "f-d"]);
        let g3 = expr(&["e-f"], &[], &["g-a", "g-b", "g-c", "g-d"]);
        assert_eq!(rel.terms[1].coefficient[0], g2);
        assert_eq!(rel.terms[2].coefficient[0], g3);
        let labels: Vec<String> = rel.terms.iter().map(|t| t.label.to_string()).collect();
        assert_eq!(labels, ["6", "5", "4"]);
    }

    #[test]
    fn coherent_relation_holds_numerically() {
        let c = cfg();
        let x = generic_point(c.bits());
        let (res, scale) = fundamental_coherent().residual(&x, &c).unwrap();
        assert!(res < 1e-6 * scale, "residual {res:e}, scale {scale:e}");
    }

    #[test]
    fn intermediate_relation_matrix_and_rendering() {
        let rel = intermediate_654bar();
        let m = matrix_654bar();
        m.validate().unwrap();
        assert_eq!(
            CosetTable::shared().coset_label(&m).unwrap(),
            CosetLabel::barred(4)
        );
        assert_eq!(
            rel.terms[2].render_l(),
            "L[1-a,1-b,1-c,1-d; 2-g; 2-f,2-e]"
        );
        let c = cfg();
        let x = generic_point(c.bits());
        let (res, scale) = rel.residual(&x, &c).unwrap();
        assert!(res < 1e-6 * scale, "residual {res:e}, scale {scale:e}");
    }

    #[test]
    fn intermediate_relation_transports_to_coherent() {
        // change of variable x -> mu x with mu = (14)(23)[(123)A]^3 sends the
        // printed {6,5,4b} relation onto the fundamental {6,5,4} one
        let b = builtin_matrices();
        let p123 = GroupElement::from_cycles(&[&[1, 2, 3]]);
        let mu = GroupElement::from_cycles(&[&[1, 4], &[2, 3]]).mul(&p123.mul(&b.a).pow(3));
        let table = CosetTable::shared();
        let inter = intermediate_654bar();
        let fund = fundamental_coherent();
        let mut common: Option<ScalarRatio> = None;
        for t in &inter.terms {
            let image = t.matrix.mul(&mu);
            let label = table.coset_label(&image).unwrap();
            let partner = fund.terms.iter().find(|f| f.label == label).unwrap();
            let transported = t.coefficient[0].substitute(&mu);
            let r = transported.ratio_on_v(&partner.coefficient[0]).unwrap();
            match common {
                None => common = Some(r),
                Some(cr) => assert_eq!(cr, r),
            }
        }
        let r = common.unwrap();
        assert_eq!((r.num.abs(), r.den, r.pi_power), (1, 1, 0));
    }

    #[test]
    fn incoherent_relation_structure_and_residual() {
        let rel = fundamental_incoherent();
        assert_eq!(rel.terms.len(), 3);
        assert_eq!(rel.terms[1].coefficient.len(), 2);
        assert_eq!(rel.terms[1].coefficient[0].pi_power, -4);
        let labels: Vec<String> = rel.terms.iter().map(|t| t.label.to_string()).collect();
        assert_eq!(labels, ["6", "5", "6b"]);
        assert_eq!(
            rel.terms[2].render_l(),
            "L[1-a,1-b,1-c,1-d; 2-e; 2-f,2-g]"
        );
        let c = cfg();
        let x = generic_point(c.bits());
        let (res, scale) = rel.residual(&x, &c).unwrap();
        assert!(res < 1e-6 * scale, "residual {res:e}, scale {scale:e}");
    }

    #[test]
    fn incoherent_coefficients_rederived_by_elimination() {
        // eliminate the L_4 term between the {6,5,4} relation and its
        // mu-shifted {5,4,6b} copy; the resulting coefficient triple must be
        // proportional to (beta1, beta2, beta3)
        let c = cfg();
        let prec = c.bits();
        let b = builtin_matrices();
        let p123 = GroupElement::from_cycles(&[&[1, 2, 3]]);
        let mu = GroupElement::from_cycles(&[&[1, 4], &[2, 3]])
            .mul(&p123.mul(&b.a).pow(3))
            .mul(&b.c576);
        let x = generic_point(prec);
        let mx = x.transform(&mu.matrix);
        let [g1, g2, g3] = gamma_coefficients();
        let ev = |e: &CoefficientExpression, pt: &ParameterPoint| e.evaluate(pt, &c).unwrap();
        let c6 = ev(&g2, &mx) * ev(&g1, &x);
        let c5 = ev(&g2, &mx) * ev(&g2, &x) - ev(&g1, &mx) * ev(&g3, &x);
        let c6b = -(ev(&g3, &mx) * ev(&g3, &x));
        let [b1, b2, b3] = beta_coefficients();
        let bv = |summands: &[CoefficientExpression]| {
            let mut acc = Complex::with_val(prec, (0, 0));
            for e in summands {
                acc += ev(e, &x);
            }
            acc
        };
        let (b1v, b2v, b3v) = (bv(&b1), bv(&b2), bv(&b3));
        // cross-ratios certify proportionality
        let cross1 = c6.clone() * &b2v - c5.clone() * &b1v;
        let cross2 = c5.clone() * &b3v - c6b.clone() * &b2v;
        let scale = abs_f64(&(c6 * b2v));
        assert!(abs_f64(&cross1) < 1e-8 * scale, "{:e}", abs_f64(&cross1));
        assert!(abs_f64(&cross2) < 1e-8 * scale, "{:e}", abs_f64(&cross2));
    }

    #[test]
    fn three_term_base_cases_are_the_fundamentals() {
        assert_eq!(three_term(&coherent_base()).unwrap(), fundamental_coherent());
        assert_eq!(
            three_term(&incoherent_base()).unwrap(),
            fundamental_incoherent()
        );
    }

    #[test]
    fn three_term_catalog_structure() {
        let mut coherent = 0;
        let mut incoherent = 0;
        for triple in Triple::all() {
            let rel = three_term(&triple).unwrap();
            match rel.kind {
                RelationKind::ThreeTermCoherent => coherent += 1,
                RelationKind::ThreeTermIncoherent => incoherent += 1,
                RelationKind::TwoTermInvariance => unreachable!(),
            }
            let mut labels: Vec<CosetLabel> = rel.terms.iter().map(|t| t.label).collect();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), 3);
            let mut expect = triple.labels().to_vec();
            expect.sort();
            assert_eq!(labels, expect);
        }
        assert_eq!((coherent, incoherent), (160, 60));
    }

    #[test]
    fn three_term_sample_relations_hold_numerically() {
        let c = cfg();
        let x = generic_point(c.bits());
        let samples = [
            Triple::new(
                CosetLabel::unbarred(6),
                CosetLabel::unbarred(5),
                CosetLabel::barred(4),
            )
            .unwrap(),
            Triple::new(
                CosetLabel::unbarred(1),
                CosetLabel::unbarred(2),
                CosetLabel::unbarred(3),
            )
            .unwrap(),
            Triple::new(
                CosetLabel::barred(2),
                CosetLabel::unbarred(4),
                CosetLabel::barred(4),
            )
            .unwrap(),
        ];
        for t in samples {
            let rel = three_term(&t).unwrap();
            let (res, scale) = rel.residual(&x, &c).unwrap();
            assert!(res < 1e-6 * scale, "{t}: residual {res:e} scale {scale:e}");
        }
    }

    #[test]
    fn catalog_closed_under_change_of_variable() {
        let b = builtin_matrices();
        let table = CosetTable::shared();
        let triples = [
            coherent_base(),
            incoherent_base(),
            Triple::new(
                CosetLabel::unbarred(1),
                CosetLabel::unbarred(3),
                CosetLabel::barred(5),
            )
            .unwrap(),
        ];
        let mut elements = b.m_l_generators();
        elements.push(b.w1);
        elements.push(b.c576.mul(&b.a));
        for t in triples {
            let rel = three_term(&t).unwrap();
            for nu in &elements {
                let p = table.permutation_rep(nu).unwrap();
                let shifted_triple = t.acted_by(&p);
                let expected = three_term(&shifted_triple).unwrap();
                // change of variable x -> nu x in every term
                let transported = Relation {
                    name: String::new(),
                    kind: rel.kind,
                    triple: Some(shifted_triple),
                    terms: rel
                        .terms
                        .iter()
                        .map(|term| {
                            let m = term.matrix.mul(nu);
                            RelationTerm::new(
                                table
                                    .coset_label(&m)
                                    .map(|l| builtin_matrices().representative(l))
                                    .unwrap(),
                                term.coefficient.iter().map(|e| e.substitute(nu)).collect(),
                            )
                        })
                        .collect(),
                };
                assert!(
                    transported.projectively_equal_on_v(&expected),
                    "no projective match for {t} under {:?}",
                    nu.matrix
                );
            }
        }
    }

    #[test]
    fn thomae_identity_and_one_step() {
        let c = cfg();
        let prec = c.bits();
        let (b, cc, d, f, g) = (
            cx(prec, 0.3, 0.0),
            cx(prec, 0.4, 0.0),
            cx(prec, 0.5, 0.0),
            cx(prec, 1.2, 0.0),
            cx(prec, 1.3, 0.0),
        );
        let check = classical_thomae(&b, &cc, &d, &f, &g).unwrap();
        assert!(check.relative_gap(&c).unwrap() < 1e-8);
        let (lhs, rhs) = thomae_one_step_sides(&b, &cc, &d, &f, &g, &c).unwrap();
        assert!(abs_f64(&(lhs.clone() - rhs)) < 1e-8 * abs_f64(&lhs));
    }

    #[test]
    fn one_step_applied_twice_gives_thomae() {
        let c = cfg();
        let prec = c.bits();
        let pts: [[f64; 5]; 5] = [
            [0.3, 0.4, 0.5, 1.2, 1.3],
            [0.2, 0.5, 0.6, 1.4, 1.2],
            [0.35, 0.3, 0.45, 1.25, 1.35],
            [0.4, 0.2, 0.3, 1.1, 1.5],
            [0.25, 0.45, 0.55, 1.3, 1.25],
        ];
        for [b, cc, d, f, g] in pts {
            let lift = |v: f64| cx(prec, v, 0.05);
            let (b, cc, d, f, g) = (lift(b), lift(cc), lift(d), lift(f), lift(g));
            // first application with roles (c,b,d; g,f)
            let (r0, r1) = thomae_one_step_sides(&cc, &b, &d, &g, &f, &c).unwrap();
            // second application at the transformed parameters
            let fb = (&f - &b).complete((prec, prec));
            let fd = (&f - &d).complete((prec, prec));
            let mut gfbd = f.clone();
            gfbd += &g;
            gfbd -= &b;
            gfbd -= &d;
            let (r2, r3) = thomae_one_step_sides(&fb, &cc, &fd, &f, &gfbd, &c).unwrap();
            // the chain must agree with the direct Thomae right-hand side
            let thomae = classical_thomae(&b, &cc, &d, &f, &g).unwrap();
            let (lhs, rhs) = thomae.sides(&c).unwrap();
            let scale = abs_f64(&lhs);
            for v in [&r0, &r1, &r2, &r3, &rhs] {
                assert!(abs_f64(&(lhs.clone() - v)) < 1e-8 * scale);
            }
        }
    }

    #[test]
    fn thomae_precondition_rejected() {
        let c = cx(192, 0.4, 0.0);
        // b = f puts Gamma(f-b) at its pole: outside the validity region
        let r = classical_thomae(
            &cx(192, 1.2, 0.0),
            &c,
            &cx(192, 0.5, 0.0),
            &cx(192, 1.2, 0.0),
            &cx(192, 1.3, 0.0),
        );
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn bailey_small_orders() {
        let c = cfg();
        let prec = c.bits();
        let (b, cc, d, f, g) = (
            cx(prec, 0.3, 0.0),
            cx(prec, 0.4, 0.0),
            cx(prec, 0.5, 0.0),
            cx(prec, 1.2, 0.0),
            cx(prec, 1.4, 0.0),
        );
        for n in [0u64, 1, 3] {
            let check = classical_bailey(n, &b, &cc, &d, &f, &g).unwrap();
            let (lhs, rhs) = check.sides(&c).unwrap();
            if n == 0 {
                assert!(abs_f64(&(lhs.clone() - 1u32)) < 1e-50);
                assert!(abs_f64(&(rhs.clone() - 1u32)) < 1e-50);
            }
            let gap = abs_f64(&(lhs.clone() - rhs)) / abs_f64(&lhs);
            assert!(gap < 1e-10, "n={n}: gap {gap:e}");
        }
    }

    #[test]
    fn barnes_second_check_and_symmetry() {
        let c = cfg();
        let prec = c.bits();
        let (a, b, cc) = (cx(prec, 0.4, 0.0), cx(prec, 0.5, 0.0), cx(prec, 0.6, 0.0));
        let f = cx(prec, 1.3, 0.0);
        let e = cx(prec, 1.2, 0.0);
        let check = classical_barnes_second(&a, &b, &cc, &e, &f).unwrap();
        assert!(check.relative_gap(&c).unwrap() < 1e-8);
        let swapped = classical_barnes_second(&b, &a, &cc, &e, &f).unwrap();
        let (l1, r1) = check.sides(&c).unwrap();
        let (l2, r2) = swapped.sides(&c).unwrap();
        assert!(abs_f64(&(l1 - l2)) < 1e-8);
        assert!(abs_f64(&(r1 - r2)) < 1e-40);
        let bad = classical_barnes_second(&a, &b, &cc, &e, &cx(prec, 1.5, 0.0));
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn fundamental_two_term_holds() {
        let c = cfg();
        let x = generic_point(c.bits());
        let check = fundamental_two_term_check(x.clone());
        assert!(check.relative_gap(&c).unwrap() < 1e-6);
        // the involution squares to the identity, so the transformed check
        // evaluates the same pair in reverse
        let b = builtin_matrices();
        let ax = x.transform(&b.a.matrix);
        assert_eq!(ax.transform(&b.a.matrix), x);
    }

    #[test]
    fn two_term_expansion_matches_direct_transcription() {
        // write L(Ax) out as its two-series definition with the printed
        // type-2 parameter list and compare against the evaluator
        let c = cfg();
        let prec = c.bits();
        let x = generic_point(prec);
        let b = builtin_matrices();
        let ax = x.transform(&b.a.matrix);
        let direct = eval_L_series(&ax, &c).unwrap().value;
        let params = invariance_catalog()[1].terms[1].params;
        let vals: Vec<Complex> = params.iter().map(|p| p.evaluate(&x)).collect();
        let transcribed = eval_L_series(
            &ParameterPoint::from_seven(std::array::from_fn(|i| vals[i].clone())).unwrap(),
            &c,
        )
        .unwrap()
        .value;
        let rel = abs_f64(&(direct.clone() - transcribed)) / abs_f64(&direct);
        assert!(rel < 1e-40, "rel = {rel:e}");
    }

    #[test]
    fn relation_json_round_trip() {
        for rel in [
            invariance_catalog().remove(1),
            fundamental_coherent(),
            fundamental_incoherent(),
        ] {
            let json = serde_json::to_string(&rel).unwrap();
            let back: Relation = serde_json::from_str(&json).unwrap();
            assert_eq!(back, rel);
        }
    }
}
