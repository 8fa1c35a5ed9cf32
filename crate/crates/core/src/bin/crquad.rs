use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crquad::cranalysis::{assemble_matrix, cr_certificate, cr_dimension, dim_formula};
use crquad::exactalg::{format_rational, parse_rational};
use crquad::extension::{
    extend_polynomial, formal_extend, reindex_zzbar, symmetrize_bishop, ExtensionResult,
};
use crquad::io::{parse_model, parse_poly, parse_poly_str, LoadedModel, LoadedPoly};
use crquad::quadric::{
    bishop_invariant_squared, classify_normal_form, conic_fiber, cr_singular_set,
    find_elliptic_direction, is_elliptic_direction, slice, BishopInvariant, ClassifyMode,
    ConicFiber, GraphModel,
};
use crquad::{selftest, Error, GaussianRational, Result};

const SELFTEST_FAILED: u8 = 13;

#[derive(Parser)]
#[command(
    name = "crquad",
    version,
    about = "Exact computations on CR singular quadric models"
)]
struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Replace w by -w when A has more negative than positive eigenvalues.
    #[arg(long, global = true)]
    normalize_signature: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArg {
    /// Model file (JSON).
    #[arg(short, long)]
    model: PathBuf,
}

#[derive(Args)]
struct DirectionArgs {
    /// Direction c, comma separated, e.g. "1, 1/2+i".
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    /// Offset v, comma separated; defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an n = 1 or n = 2 model.
    Classify {
        #[command(flatten)]
        model: ModelArg,
        /// Compute definite-signature parameters numerically.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the defining polynomial Q (plus E when present).
    QPoly {
        #[command(flatten)]
        model: ModelArg,
    },
    /// CR singular set of the quadric.
    SingularSet {
        #[command(flatten)]
        model: ModelArg,
    },
    /// Whether the CR singular set has real dimension n.
    CompletelyParabolic {
        #[command(flatten)]
        model: ModelArg,
    },
    /// Decide whether an elliptic direction exists, or test a given one.
    EllipticDirection {
        #[command(flatten)]
        model: ModelArg,
        /// Print a verified witness.
        #[arg(long)]
        find: bool,
        /// Test this direction instead of searching.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Restrict the model to the complex line z = c xi + v.
    Slice {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        dir: DirectionArgs,
    },
    /// Squared Bishop invariant of a slice.
    Bishop {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        dir: DirectionArgs,
    },
    /// Level set {w = w0} of a quadric slice.
    Fiber {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        dir: DirectionArgs,
        #[arg(long, allow_hyphen_values = true)]
        w0: String,
    },
    /// Dimension of degree-d homogeneous CR polynomials.
    CrDim {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        degree: u32,
    },
    /// The CR coefficient matrix in degree d.
    Matrix {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        degree: u32,
        /// Print every entry.
        #[arg(long)]
        dump: bool,
    },
    /// Test whether a polynomial is CR on the model.
    IsCr {
        #[command(flatten)]
        model: ModelArg,
        /// Polynomial file, or an inline polynomial.
        #[arg(long)]
        poly: String,
    },
    /// Holomorphic extension F with f = F(z, Q).
    Extend {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        poly: String,
    },
    /// Degree-by-degree extension on a perturbed model.
    FormalExtend {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        order: u32,
    },
    /// Rewrite f(z, zbar) as F(z, w) with w = z zbar.
    Reindex {
        #[arg(long)]
        poly: String,
    },
    /// Symmetrize f over the Bishop quadric w = |z|^2 + lambda (z^2 + zbar^2).
    Symmetrize {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        poly: String,
    },
    /// Run the built-in verification tables.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::QPoly { .. } => "q-poly",
            Command::SingularSet { .. } => "singular-set",
            Command::CompletelyParabolic { .. } => "completely-parabolic",
            Command::EllipticDirection { .. } => "elliptic-direction",
            Command::Slice { .. } => "slice",
            Command::Bishop { .. } => "bishop",
            Command::Fiber { .. } => "fiber",
            Command::CrDim { .. } => "cr-dim",
            Command::Matrix { .. } => "matrix",
            Command::IsCr { .. } => "is-cr",
            Command::Extend { .. } => "extend",
            Command::FormalExtend { .. } => "formal-extend",
            Command::Reindex { .. } => "reindex",
            Command::Symmetrize { .. } => "symmetrize",
            Command::Selftest => "selftest",
        }
    }
}

struct Outcome {
    payload: Value,
    text: String,
    exit: u8,
}

impl Outcome {
    fn ok(payload: Value, text: String) -> Self {
        Outcome {
            payload,
            text,
            exit: 0,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    payload: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
    elapsed_ms: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let start = Instant::now();
    let result = run(&cli);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    match result {
        Ok(out) => {
            if cli.json {
                let report = Report {
                    command: name,
                    status: if out.exit == 0 { "ok" } else { "failed" },
                    payload: Some(out.payload),
                    error: None,
                    elapsed_ms,
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            let code = e.exit_code();
            if cli.json {
                let report = Report {
                    command: name,
                    status: "error",
                    payload: None,
                    error: Some(error_value(&e)),
                    elapsed_ms,
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                eprintln!("error [{}]: {e}", e.kind());
            }
            ExitCode::from(code as u8)
        }
    }
}

fn error_value(e: &Error) -> Value {
    let mut v = json!({
        "kind": e.kind(),
        "message": e.to_string(),
        "exit_code": e.exit_code(),
    });
    let details = match e {
        Error::NotCr {
            degree,
            field,
            certificate,
        } => json!({
            "field": [field.0, field.1],
            "degree": degree,
            "certificate": certificate.to_string(),
        }),
        Error::NonExtendable { pairs } => json!({ "pairs": pairs }),
        Error::Mismatch { difference } => json!({ "difference": difference.to_string() }),
        Error::Parse { location, .. } => json!({ "location": location }),
        Error::NoSolution { degree } => json!({ "degree": degree }),
        _ => Value::Null,
    };
    if !details.is_null() {
        v["details"] = details;
    }
    v
}

fn load(cli: &Cli, arg: &ModelArg) -> Result<LoadedModel> {
    let mut loaded = parse_model(&arg.model)?;
    if cli.normalize_signature && loaded.quadric().is_nondegenerate() {
        let diag = loaded.quadric().a().diagonalize()?;
        if !diag.positive_majority() {
            let negated = loaded.model.e().scale(&GaussianRational::from_int(-1));
            loaded.model = crquad::PerturbedModel::new(loaded.quadric().negated(), negated)?;
        }
    }
    Ok(loaded)
}

fn load_poly(arg: &str, n: usize) -> Result<LoadedPoly> {
    let path = Path::new(arg);
    if path.is_file() {
        parse_poly(path, n)
    } else {
        parse_poly_str(arg, n)
    }
}

fn parse_vector(text: &str, n: usize) -> Result<Vec<GaussianRational>> {
    let out = text
        .split(',')
        .map(|s| s.trim().parse::<GaussianRational>())
        .collect::<Result<Vec<_>>>()?;
    if out.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: out.len(),
        });
    }
    Ok(out)
}

fn vector_text(v: &[GaussianRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn vector_json(v: &[GaussianRational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn bishop_json(b: &BishopInvariant) -> Value {
    json!({
        "lambda_squared": b.to_string(),
        "lambda": b.lambda().map(|l| format_rational(&l)),
        "ellipticity": b.ellipticity().to_string(),
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Classify {
            model,
            numeric,
            tol,
        } => {
            let m = load(cli, model)?;
            let mode = if *numeric {
                ClassifyMode::Numeric { tolerance: *tol }
            } else {
                ClassifyMode::Exact
            };
            let form = classify_normal_form(m.quadric(), mode)?;
            let payload = json!({ "normal_form": form, "name": m.name });
            Ok(Outcome::ok(payload, format!("{form}")))
        }
        Command::QPoly { model } => {
            let m = load(cli, model)?;
            let q = m.quadric().q();
            let rho = m.model.rho();
            let mut text = format!("Q = {q}");
            if m.is_perturbed() {
                text.push_str(&format!("\nE = {}\nrho = {rho}", m.model.e()));
            }
            let payload = json!({
                "Q": q.to_string(),
                "E": m.model.e().to_string(),
                "rho": rho.to_string(),
                "terms": rho,
            });
            Ok(Outcome::ok(payload, text))
        }
        Command::SingularSet { model } => {
            let m = load(cli, model)?;
            let set = cr_singular_set(m.quadric())?;
            let summary = set.summary();
            let mut text = format!(
                "real dimension {} (n = {}), totally real: {}\n",
                summary.dimension, summary.n, summary.totally_real
            );
            if summary.equations.is_empty() {
                text.push_str("no equations: the whole plane {w = 0}\n");
            }
            for eq in &summary.equations {
                text.push_str(&format!("  {eq}\n"));
            }
            Ok(Outcome::ok(
                serde_json::to_value(&summary).expect("summary"),
                text,
            ))
        }
        Command::CompletelyParabolic { model } => {
            let m = load(cli, model)?;
            let set = cr_singular_set(m.quadric())?;
            let yes = set.dimension() == m.n();
            let payload = json!({
                "completely_parabolic": yes,
                "dimension": set.dimension(),
                "n": m.n(),
            });
            Ok(Outcome::ok(
                payload,
                format!(
                    "{yes} (singular set dimension {}, n = {})",
                    set.dimension(),
                    m.n()
                ),
            ))
        }
        Command::EllipticDirection { model, find, c } => {
            let m = load(cli, model)?;
            let q = m.quadric();
            if let Some(c) = c {
                let c = parse_vector(c, m.n())?;
                let elliptic = is_elliptic_direction(q, &c)?;
                let zero = vec![GaussianRational::from_int(0); m.n()];
                let b = bishop_invariant_squared(&slice(q, &c, &zero)?)?;
                let mut payload = bishop_json(&b);
                payload["direction"] = vector_json(&c);
                payload["elliptic"] = json!(elliptic);
                return Ok(Outcome::ok(
                    payload,
                    format!("{elliptic} (lambda^2 = {b}, {})", b.ellipticity()),
                ));
            }
            let found = find_elliptic_direction(q)?;
            let payload = json!({
                "exists": found.is_some(),
                "direction": if *find { found.as_deref().map(vector_json) } else { None },
            });
            let text = match (&found, find) {
                (Some(c), true) => format!("elliptic direction c = {}", vector_text(c)),
                (Some(_), false) => "an elliptic direction exists".to_string(),
                (None, _) => "no elliptic direction".to_string(),
            };
            Ok(Outcome::ok(payload, text))
        }
        Command::Slice { model, dir } => {
            let m = load(cli, model)?;
            let c = parse_vector(&dir.c, m.n())?;
            let v = offset(dir.v.as_deref(), m.n())?;
            let s = slice(&m.model, &c, &v)?;
            let payload = json!({
                "c": vector_json(&c),
                "v": vector_json(&v),
                "alpha": format_rational(&s.alpha),
                "beta": s.beta.to_string(),
                "polynomial": s.polynomial.to_string(),
                "perturbed": s.perturbed,
            });
            let text = format!(
                "alpha = {}\nbeta = {}\nw = {}",
                format_rational(&s.alpha),
                s.beta,
                s.polynomial
            );
            Ok(Outcome::ok(payload, text))
        }
        Command::Bishop { model, dir } => {
            let m = load(cli, model)?;
            let c = parse_vector(&dir.c, m.n())?;
            let v = offset(dir.v.as_deref(), m.n())?;
            let b = bishop_invariant_squared(&slice(&m.model, &c, &v)?)?;
            let text = match b.lambda() {
                Some(l) => format!(
                    "lambda^2 = {b} (lambda = {}), {}",
                    format_rational(&l),
                    b.ellipticity()
                ),
                None => format!("lambda^2 = {b}, {}", b.ellipticity()),
            };
            Ok(Outcome::ok(bishop_json(&b), text))
        }
        Command::Fiber { model, dir, w0 } => {
            let m = load(cli, model)?;
            let c = parse_vector(&dir.c, m.n())?;
            let v = offset(dir.v.as_deref(), m.n())?;
            let w0 = parse_rational(w0)?;
            let fiber = conic_fiber(&slice(&m.model, &c, &v)?, &w0)?;
            Ok(fiber_outcome(&fiber))
        }
        Command::CrDim { model, degree } => {
            let m = load(cli, model)?;
            let dim = cr_dimension(m.quadric(), *degree)?;
            let formula = dim_formula(*degree as u64) as usize;
            let payload = json!({
                "degree": degree,
                "dimension": dim,
                "formula": formula,
                "match": dim == formula,
            });
            Ok(Outcome::ok(
                payload,
                format!("dim CR^{degree} = {dim} (floor((d+2)^2/4) = {formula})"),
            ))
        }
        Command::Matrix {
            model,
            degree,
            dump,
        } => {
            let m = load(cli, model)?;
            let x = assemble_matrix(m.quadric(), *degree)?;
            let rank = x.matrix.rank();
            let mut payload = json!({
                "degree": degree,
                "rows": x.matrix.rows(),
                "cols": x.matrix.cols(),
                "rank": rank,
                "nullity": x.matrix.cols() - rank,
            });
            let mut text = format!(
                "{} x {} matrix, rank {}, nullity {}\n",
                x.matrix.rows(),
                x.matrix.cols(),
                rank,
                x.matrix.cols() - rank
            );
            if *dump {
                payload["grid"] = serde_json::to_value(x.to_grid()).expect("grid");
                text.push_str(&x.to_text());
            }
            Ok(Outcome::ok(payload, text))
        }
        Command::IsCr { model, poly } => {
            let m = load(cli, model)?;
            let f = load_poly(poly, m.n())?.poly;
            let cert = cr_certificate(&m.model, &f)?;
            let payload = match &cert {
                None => json!({ "cr": true }),
                Some((field, lf)) => json!({
                    "cr": false,
                    "field": [field.label().0, field.label().1],
                    "certificate": lf.to_string(),
                }),
            };
            let text = match &cert {
                None => "CR".to_string(),
                Some((field, lf)) => {
                    let (j, k) = field.label();
                    format!("not CR: L{j}{k} f = {lf}")
                }
            };
            Ok(Outcome::ok(payload, text))
        }
        Command::Extend { model, poly } => {
            let m = load(cli, model)?;
            if m.is_perturbed() {
                return Err(Error::MalformedInput(
                    "extend works on quadric models; use formal-extend for a model with E".into(),
                ));
            }
            let f = load_poly(poly, m.n())?.poly;
            let r = extend_polynomial(m.quadric(), &f)?;
            Ok(extension_outcome(&r))
        }
        Command::FormalExtend { model, poly, order } => {
            let m = load(cli, model)?;
            let f = load_poly(poly, m.n())?;
            let r = formal_extend(&m.model, &f.poly, *order, f.precision)?;
            Ok(extension_outcome(&r))
        }
        Command::Reindex { poly } => {
            let f = load_poly(poly, 1)?.poly;
            let big_f = reindex_zzbar(&f)?;
            Ok(Outcome::ok(
                json!({ "F": big_f.to_string(), "terms": big_f }),
                format!("F = {big_f}"),
            ))
        }
        Command::Symmetrize { lambda, poly } => {
            let lambda = parse_rational(lambda)?;
            let f = load_poly(poly, 1)?.poly;
            let (big_f, agrees) = symmetrize_bishop(&lambda, &f)?;
            Ok(Outcome::ok(
                json!({ "F": big_f.to_string(), "terms": big_f, "agrees_on_M": agrees }),
                format!("F = {big_f}\nagrees on M: {agrees}"),
            ))
        }
        Command::Selftest => {
            let report = selftest::run();
            let (passed, total) = report.totals();
            let mut text = String::new();
            for s in &report.sections {
                let mark = if s.all_passed() { "PASS" } else { "FAIL" };
                text.push_str(&format!(
                    "{mark} {} ({}/{})\n",
                    s.name,
                    s.passed(),
                    s.checks.len()
                ));
                for c in s.checks.iter().filter(|c| !c.passed) {
                    text.push_str(&format!("    {}: {}\n", c.name, c.detail));
                }
            }
            text.push_str(&format!("{passed}/{total} checks passed\n"));
            Ok(Outcome {
                payload: serde_json::to_value(&report).expect("report"),
                text,
                exit: if report.all_passed() {
                    0
                } else {
                    SELFTEST_FAILED
                },
            })
        }
    }
}

fn offset(v: Option<&str>, n: usize) -> Result<Vec<GaussianRational>> {
    match v {
        Some(v) => parse_vector(v, n),
        None => Ok(vec![GaussianRational::from_int(0); n]),
    }
}

fn fiber_outcome(fiber: &ConicFiber) -> Outcome {
    let (payload, text) = match fiber {
        ConicFiber::Empty => (json!({ "kind": "empty" }), "empty".to_string()),
        ConicFiber::Point { center } => (
            json!({ "kind": "point", "center": center.to_string() }),
            format!("point at {center}"),
        ),
        ConicFiber::Ellipse {
            center,
            axis_direction_squared,
            semi_axes_squared,
        } => (
            json!({
                "kind": "ellipse",
                "center": center.to_string(),
                "axis_direction_squared": axis_direction_squared.to_string(),
                "semi_axes_squared": [semi_axes_squared[0].to_string(), semi_axes_squared[1].to_string()],
                "semi_axes_squared_approx": [semi_axes_squared[0].to_f64(), semi_axes_squared[1].to_f64()],
            }),
            format!(
                "ellipse centered at {center}, semi-axes^2 = ({}, {}), axis direction squared {axis_direction_squared}",
                semi_axes_squared[0], semi_axes_squared[1]
            ),
        ),
        ConicFiber::Hyperbola { center } => (
            json!({ "kind": "hyperbola", "center": center.to_string() }),
            format!("hyperbola centered at {center}"),
        ),
        ConicFiber::DegenerateLines => (json!({ "kind": "degenerate" }), "degenerate conic".to_string()),
    };
    Outcome::ok(payload, text)
}

fn extension_outcome(r: &ExtensionResult) -> Outcome {
    let mut payload = serde_json::to_value(r).expect("extension result");
    payload["F_text"] = json!(r.f_ext.to_string());
    payload["residual_text"] = json!(r.residual.to_string());
    let mut text = format!("F = {}\n", r.f_ext);
    for part in &r.parts {
        text.push_str(&format!("  F_{} = {}\n", part.degree, part.polynomial));
    }
    match (r.order, r.residual.min_degree()) {
        (_, None) => text.push_str("residual: 0\n"),
        (Some(order), Some(low)) => text.push_str(&format!(
            "residual vanishes through degree {order} (lowest residual degree {low})\n"
        )),
        (None, Some(_)) => text.push_str(&format!("residual: {}\n", r.residual)),
    }
    if r.non_unique {
        text.push_str("warning: restriction matrix was rank deficient; F is not unique\n");
    }
    Outcome::ok(payload, text)
}
