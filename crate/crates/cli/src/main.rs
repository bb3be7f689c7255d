//! Command-line surface: catalog generation, point evaluation, and
//! batch verification with persisted JSON or text artifacts.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Complex;
use serde::Serialize;

use lrel::group::{CosetLabel, CosetTable, GroupElement, Triple};
use lrel::numerics::{eval_L_7F6, eval_L_barnes, eval_L_series};
use lrel::relations::{invariance_catalog, row_forms, three_term, IdentityCheck};
use lrel::verify::{
    check_identity, check_relation, check_relation_at, element_pole_forms, sample_points,
    sample_points_avoiding, PointResidual, SampleSpec,
};
use lrel::{
    mp, CoefficientExpression, ParameterPoint, PrecisionConfig, Relation, RelationKind,
    RelationTerm, ResidualReport,
};

#[derive(Parser)]
#[command(name = "lrel", version, about = "Two- and three-term relation catalog for the L function: generate, evaluate, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 60)]
    digits: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "GL")]
    Gl,
    #[value(name = "ML")]
    Ml,
    #[value(name = "Sigma")]
    Sigma,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    All,
    Invariances,
    Elements,
    ThreeTerm,
    Classical,
    Representations,
}

#[derive(Subcommand)]
enum Command {
    /// Print the order and generators of one of the three groups.
    Group {
        #[arg(long, value_enum)]
        which: Which,
    },
    /// List the twelve right-coset labels with their representatives.
    Cosets,
    /// List the six double-coset classes of the symmetric subgroup.
    DoubleCosets,
    /// Print the invariance relations, optionally a single type.
    Invariances {
        #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=6))]
        ty: Option<u8>,
    },
    /// Print the three-term relation for a coset triple such as 6,5,6b.
    ThreeTerm {
        #[arg(long)]
        triple: String,
    },
    /// Evaluate L at a point given as a JSON 6- or 7-tuple of numbers or
    /// [re,im] pairs.
    Eval {
        #[arg(long)]
        point: String,
    },
    /// Run a verification suite and report residuals.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Check the classical identities underlying the catalog.
    Classical {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Serialize the full relation catalog.
    Export,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let cfg = PrecisionConfig::with_digits(cli.digits);
    cfg.validate().map_err(anyhow::Error::new)?;
    match &cli.command {
        Command::Group { which } => group_cmd(cli, *which),
        Command::Cosets => cosets_cmd(cli),
        Command::DoubleCosets => double_cosets_cmd(cli),
        Command::Invariances { ty } => invariances_cmd(cli, *ty),
        Command::ThreeTerm { triple } => three_term_cmd(cli, triple),
        Command::Eval { point } => eval_cmd(cli, &cfg, point),
        Command::Verify {
            suite,
            seed,
            tol,
            samples,
        } => verify_cmd(cli, &cfg, *suite, *seed, *tol, *samples),
        Command::Classical { seed, tol, samples } => {
            classical_cmd(cli, &cfg, *seed, *tol, *samples)
        }
        Command::Export => export_cmd(cli),
    }
}

fn emit(cli: &Cli, text: String) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> anyhow::Result<()> {
    emit(cli, serde_json::to_string_pretty(value)?)
}

fn matrix_lines(g: &GroupElement) -> String {
    g.matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| format!("{v:>3}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn group_cmd(cli: &Cli, which: Which) -> anyhow::Result<ExitCode> {
    let t = CosetTable::shared();
    let (name, group) = match which {
        Which::Gl => ("GL", &t.g_l),
        Which::Ml => ("ML", &t.m_l),
        Which::Sigma => ("Sigma", &t.sigma),
    };
    #[derive(Serialize)]
    struct Out<'a> {
        which: &'a str,
        order: usize,
        generators: &'a [GroupElement],
    }
    let out = Out {
        which: name,
        order: group.order(),
        generators: group.generators(),
    };
    match cli.format {
        Format::Json => emit_json(cli, &out)?,
        Format::Text => {
            let mut s = format!("group {} of order {}\n", out.which, out.order);
            for (i, g) in out.generators.iter().enumerate() {
                s.push_str(&format!("generator {}:\n{}\n", i + 1, matrix_lines(g)));
            }
            emit(cli, s)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn param_list(g: &GroupElement) -> String {
    let p = row_forms(g);
    format!(
        "[{},{},{},{}; {}; {},{}]",
        p[0], p[1], p[2], p[3], p[4], p[5], p[6]
    )
}

fn cosets_cmd(cli: &Cli) -> anyhow::Result<ExitCode> {
    let t = CosetTable::shared();
    #[derive(Serialize)]
    struct Out {
        label: CosetLabel,
        params: String,
        representative: GroupElement,
    }
    let rows: Vec<Out> = CosetLabel::all()
        .into_iter()
        .map(|label| {
            let rep = t.builtins.representative(label);
            Out {
                label,
                params: param_list(&rep),
                representative: rep,
            }
        })
        .collect();
    match cli.format {
        Format::Json => emit_json(cli, &rows)?,
        Format::Text => {
            let mut s = String::from("12 right cosets of the invariance group:\n");
            for r in &rows {
                s.push_str(&format!("{:>3}: L{}\n", r.label.to_string(), r.params));
            }
            emit(cli, s)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn double_cosets_cmd(cli: &Cli) -> anyhow::Result<ExitCode> {
    let t = CosetTable::shared();
    #[derive(Serialize)]
    struct Out {
        invariance_type: u8,
        size: usize,
        representative: GroupElement,
        params: String,
    }
    let mut rows = Vec::new();
    for (i, rep) in t.builtins.invariance_reps.iter().enumerate() {
        let class = t
            .double_cosets()
            .iter()
            .find(|c| c.members.binary_search(rep).is_ok())
            .expect("builtin representative must lie in some class");
        rows.push(Out {
            invariance_type: i as u8 + 1,
            size: class.size,
            representative: *rep,
            params: param_list(rep),
        });
    }
    match cli.format {
        Format::Json => emit_json(cli, &rows)?,
        Format::Text => {
            let mut s = String::from("6 double cosets of the symmetric subgroup:\n");
            for r in &rows {
                s.push_str(&format!(
                    "type {}: size {:>4}  L{}\n",
                    r.invariance_type, r.size, r.params
                ));
            }
            emit(cli, s)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn invariances_cmd(cli: &Cli, ty: Option<u8>) -> anyhow::Result<ExitCode> {
    let mut relations = invariance_catalog();
    if let Some(ty) = ty {
        relations = vec![relations.swap_remove(ty as usize - 1)];
    }
    match cli.format {
        Format::Json => emit_json(cli, &relations)?,
        Format::Text => {
            let s = relations
                .iter()
                .map(|r| format!("{}: {}", r.name, r.render()))
                .collect::<Vec<_>>()
                .join("\n");
            emit(cli, s)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_triple(s: &str) -> anyhow::Result<Triple> {
    let labels: Vec<CosetLabel> = s
        .split(',')
        .map(|part| part.trim().parse().map_err(anyhow::Error::new))
        .collect::<anyhow::Result<_>>()?;
    let [a, b, c]: [CosetLabel; 3] = labels
        .try_into()
        .map_err(|_| anyhow::anyhow!("triple must have exactly three labels, e.g. 6,5,6b"))?;
    Triple::new(a, b, c).map_err(anyhow::Error::new)
}

fn three_term_cmd(cli: &Cli, triple: &str) -> anyhow::Result<ExitCode> {
    let triple = parse_triple(triple)?;
    let relation = three_term(&triple).map_err(anyhow::Error::new)?;
    match cli.format {
        Format::Json => emit_json(cli, &relation)?,
        Format::Text => emit(cli, format!("{}:\n{}", relation.name, relation.render()))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_complex(v: &serde_json::Value, prec: u32) -> anyhow::Result<Complex> {
    match v {
        serde_json::Value::Number(n) => {
            let re = n.as_f64().context("non-finite number")?;
            Ok(Complex::with_val(prec, (re, 0.0)))
        }
        serde_json::Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().context("non-numeric real part")?;
            let im = pair[1].as_f64().context("non-numeric imaginary part")?;
            Ok(Complex::with_val(prec, (re, im)))
        }
        other => bail!("expected a number or [re, im] pair, got {other}"),
    }
}

fn parse_point(s: &str, prec: u32) -> anyhow::Result<ParameterPoint> {
    let value: serde_json::Value = serde_json::from_str(s).context("point is not valid JSON")?;
    let entries = value.as_array().context("point must be a JSON array")?;
    let coords: Vec<Complex> = entries
        .iter()
        .map(|v| parse_complex(v, prec))
        .collect::<anyhow::Result<_>>()?;
    match coords.len() {
        6 => Ok(ParameterPoint::from_six(
            &coords.try_into().expect("length checked"),
        )),
        7 => ParameterPoint::from_seven(coords.try_into().expect("length checked"))
            .map_err(anyhow::Error::new),
        n => bail!("point must have 6 or 7 entries, got {n}"),
    }
}

fn eval_cmd(cli: &Cli, cfg: &PrecisionConfig, point: &str) -> anyhow::Result<ExitCode> {
    let x = parse_point(point, cfg.bits())?;
    let result = eval_L_series(&x, cfg).map_err(anyhow::Error::new)?;
    let digits = cli.digits as usize;
    let re = format!("{:.*}", digits, result.value.real());
    let im = format!("{:.*}", digits, result.value.imag());
    #[derive(Serialize)]
    struct Out {
        re: String,
        im: String,
        error_estimate: f64,
    }
    let out = Out {
        re,
        im,
        error_estimate: result.error_estimate,
    };
    match cli.format {
        Format::Json => emit_json(cli, &out)?,
        Format::Text => emit(
            cli,
            format!("L = {} + {}i  (error estimate {:e})", out.re, out.im, out.error_estimate),
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

/// L(x) - L(gx) = 0 as a two-term relation, so element checks share the
/// residual-report machinery.
fn element_relation(k: usize, g: GroupElement) -> Relation {
    let mut minus_one = CoefficientExpression::one();
    minus_one.prefactor = (-1, 1);
    Relation {
        name: format!("invariance-element-{k:02}"),
        kind: RelationKind::TwoTermInvariance,
        triple: None,
        terms: vec![
            RelationTerm::new(GroupElement::identity(), vec![CoefficientExpression::one()]),
            RelationTerm::new(g, vec![minus_one]),
        ],
    }
}

fn random_invariance_elements(seed: u64, count: usize) -> Vec<GroupElement> {
    let t = CosetTable::shared();
    let els = t.g_l.elements();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while picked.len() < count {
        let g = els[rng.next_u64() as usize % els.len()];
        if g == GroupElement::identity() || !seen.insert(g) {
            continue;
        }
        picked.push(g);
    }
    picked
}

fn representation_agreement_report(
    spec: &SampleSpec,
    tol: f64,
    cfg: &PrecisionConfig,
) -> anyhow::Result<ResidualReport> {
    // the fixed contour Re(t) = -1/4 needs Re(e) well left of 1.25
    let oversampled = SampleSpec {
        count: spec.count * 3,
        ..spec.clone()
    };
    let points: Vec<_> = sample_points(&oversampled, cfg.bits())
        .map_err(anyhow::Error::new)?
        .into_iter()
        .filter(|x| x.to_f64()[4].0 <= 1.1)
        .take(spec.count)
        .collect();
    if points.len() < spec.count {
        bail!("not enough contour-admissible points in {} draws", oversampled.count);
    }
    let mut rows = Vec::new();
    for x in &points {
        let evals: Result<Vec<Complex>, lrel::Error> = [eval_L_series, eval_L_7F6, eval_L_barnes]
            .iter()
            .map(|f| f(x, cfg).map(|r| r.value))
            .collect();
        let row = match evals {
            Ok(values) => {
                let scale = values.iter().map(mp::abs_f64).fold(0.0, f64::max);
                let mut residual = 0f64;
                for i in 0..values.len() {
                    for j in i + 1..values.len() {
                        let d = Complex::with_val(cfg.bits(), &values[i] - &values[j]);
                        residual = residual.max(mp::abs_f64(&d));
                    }
                }
                PointResidual {
                    point: x.to_f64(),
                    term_values: values.iter().map(mp::to_f64_pair).collect(),
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
    let worst = rows.iter().map(|r| r.relative).fold(0.0, f64::max);
    let pass = rows.iter().all(|r| r.error.is_none()) && worst <= tol;
    Ok(ResidualReport {
        id: "representation-agreement".into(),
        tolerance: tol,
        points: rows,
        worst_relative: worst,
        pass,
    })
}

fn classical_reports(
    seed: u64,
    tol: f64,
    samples: usize,
    cfg: &PrecisionConfig,
) -> anyhow::Result<Vec<ResidualReport>> {
    let placeholder = || Complex::new(64);
    let spec = SampleSpec::new(seed, samples);
    let mut reports = Vec::new();
    let thomae = IdentityCheck::Thomae {
        b: placeholder(),
        c: placeholder(),
        d: placeholder(),
        f: placeholder(),
        g: placeholder(),
    };
    reports.push(check_identity(&thomae, &spec, tol, cfg).map_err(anyhow::Error::new)?);
    let barnes_first = IdentityCheck::BarnesFirst {
        alpha: placeholder(),
        beta: placeholder(),
        gamma: placeholder(),
        delta: placeholder(),
    };
    reports.push(check_identity(&barnes_first, &spec, tol, cfg).map_err(anyhow::Error::new)?);
    let barnes_second = IdentityCheck::BarnesSecond {
        a: placeholder(),
        b: placeholder(),
        c: placeholder(),
        e: placeholder(),
        f: placeholder(),
    };
    reports.push(check_identity(&barnes_second, &spec, tol, cfg).map_err(anyhow::Error::new)?);
    let bailey = IdentityCheck::Bailey {
        n: 3,
        b: placeholder(),
        c: placeholder(),
        d: placeholder(),
        f: placeholder(),
        g: placeholder(),
    };
    reports.push(
        check_identity(&bailey, &spec, tol.min(1e-10), cfg).map_err(anyhow::Error::new)?,
    );
    Ok(reports)
}

#[derive(Serialize)]
struct VerifyBundle {
    suite: String,
    seed: u64,
    tol: f64,
    samples: usize,
    reports: Vec<ResidualReport>,
    pass: bool,
}

fn verify_cmd(
    cli: &Cli,
    cfg: &PrecisionConfig,
    suite: Suite,
    seed: u64,
    tol: f64,
    samples: usize,
) -> anyhow::Result<ExitCode> {
    let mut reports = Vec::new();
    let spec = SampleSpec::new(seed, samples);
    let run_invariances = matches!(suite, Suite::All | Suite::Invariances);
    let run_elements = matches!(suite, Suite::All | Suite::Elements);
    let run_three_term = matches!(suite, Suite::All | Suite::ThreeTerm);
    let run_classical = matches!(suite, Suite::All | Suite::Classical);
    let run_representations = matches!(suite, Suite::All | Suite::Representations);

    if run_invariances {
        for rel in invariance_catalog() {
            reports.push(check_relation(&rel, &spec, tol, cfg).map_err(anyhow::Error::new)?);
        }
    }
    if run_elements {
        let picks = random_invariance_elements(seed, 50);
        // pole-sensitive forms of L at gx are outside the stored catalog
        let avoid: Vec<_> = picks
            .iter()
            .flat_map(element_pole_forms)
            .collect::<std::collections::HashSet<_>>()
            .into_iter()
            .collect();
        let points =
            sample_points_avoiding(&spec, cfg.bits(), &avoid).map_err(anyhow::Error::new)?;
        for (k, g) in picks.into_iter().enumerate() {
            let rel = element_relation(k, g);
            reports.push(check_relation_at(&rel, &points, tol, cfg));
        }
    }
    if run_three_term {
        let three_spec = SampleSpec::new(seed, 3);
        for triple in Triple::all() {
            let rel = three_term(&triple).map_err(anyhow::Error::new)?;
            reports
                .push(check_relation(&rel, &three_spec, tol, cfg).map_err(anyhow::Error::new)?);
        }
    }
    if run_classical {
        reports.extend(classical_reports(seed, tol.min(1e-8), 10, cfg)?);
    }
    if run_representations {
        reports.push(representation_agreement_report(&spec, tol, cfg)?);
    }

    let suite_name = match suite {
        Suite::All => "all",
        Suite::Invariances => "invariances",
        Suite::Elements => "elements",
        Suite::ThreeTerm => "three-term",
        Suite::Classical => "classical",
        Suite::Representations => "representations",
    };
    let pass = reports.iter().all(|r| r.pass);
    let bundle = VerifyBundle {
        suite: suite_name.into(),
        seed,
        tol,
        samples,
        reports,
        pass,
    };
    emit_reports(cli, &bundle)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn emit_reports(cli: &Cli, bundle: &VerifyBundle) -> anyhow::Result<()> {
    match cli.format {
        Format::Json => emit_json(cli, bundle),
        Format::Text => {
            let mut s = format!(
                "seed {}  tol {:e}  samples {}\n",
                bundle.seed, bundle.tol, bundle.samples
            );
            for r in &bundle.reports {
                s.push_str(&format!(
                    "{}  worst {:9.2e}  points {:>3}  {}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.worst_relative,
                    r.points.len(),
                    r.id,
                ));
            }
            s.push_str(if bundle.pass { "all passed\n" } else { "FAILURES present\n" });
            emit(cli, s)
        }
    }
}

fn classical_cmd(
    cli: &Cli,
    cfg: &PrecisionConfig,
    seed: u64,
    tol: f64,
    samples: usize,
) -> anyhow::Result<ExitCode> {
    let reports = classical_reports(seed, tol, samples, cfg)?;
    let pass = reports.iter().all(|r| r.pass);
    let bundle = VerifyBundle {
        suite: "classical".into(),
        seed,
        tol,
        samples,
        reports,
        pass,
    };
    emit_reports(cli, &bundle)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize, serde::Deserialize)]
struct Catalog {
    invariances: Vec<Relation>,
    three_term: Vec<Relation>,
}

fn export_cmd(cli: &Cli) -> anyhow::Result<ExitCode> {
    let catalog = Catalog {
        invariances: invariance_catalog(),
        three_term: Triple::all()
            .iter()
            .map(three_term)
            .collect::<Result<_, _>>()
            .map_err(anyhow::Error::new)?,
    };
    emit_json(cli, &catalog)?;
    Ok(ExitCode::SUCCESS)
}
