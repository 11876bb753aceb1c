//! Command-line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::exactnum::{format_rational, parse_rational, rational_to_f64, Rational};
use crate::kernelasm::{fundamental_solution_series, kernel_eval, kernel_split, kernel_terms, sum_series, KernelError};
use crate::reference::{coulomb_closed, laplace_fs, modified_fs_even};
use crate::spectrum::{sphere_spectrum, BaseSpectrum, CustomSpectrum, PiMultiple};
use crate::symbolcalc::{
    asymptotic_symbol, default_contour, poles_with_residues, ConeOperator, ContourSpec, OperatorFamily, SymbolError,
};
use crate::verify::{run_suite, SuiteLimits, VerifyError, SUITES};
use crate::words::{cardinality, cardinality_binomial, enumerate_words, word_weight};

pub const SCHEMA: &str = "conepar/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("spec file line {line}: {message}")]
    Spec { line: usize, message: String },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "conepar", version, about = "Asymptotic parametrices and fundamental solutions of cone operators")]
pub struct Cli {
    /// Built-in operator: laplacian, shifted-laplacian or coulomb.
    pub operator: Option<String>,
    /// Operator spec file (JSON).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    #[arg(long, global = true)]
    pub dim: Option<u32>,
    #[arg(long = "kappa-sq", global = true, allow_hyphen_values = true)]
    pub kappa_sq: Option<String>,
    #[arg(long = "Z", global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, global = true)]
    pub ell: Option<usize>,
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Contour weight, a rational.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Comma-separated radii.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Symbol truncation order of the operator.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Kernel evaluation point `r,rt,angle`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub at: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact asymptotic symbol h_j^(-1) at one eigenvalue.
    Symbols,
    /// Poles and exact residues of h_j^(-1).
    Poles,
    /// Kernel terms K_j at one eigenvalue, optionally evaluated.
    Kernel,
    /// Fundamental-solution series on a grid, with tail bounds.
    Fundsol,
    /// Verification suite report.
    Verify,
    /// Series fundamental solution against a closed form.
    Compare,
    /// Binary words of S_p.
    Words,
}

/// Operator spec file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpecFile {
    pub name: String,
    pub n: u32,
    pub a0: Vec<String>,
    pub a1: Vec<String>,
    pub a2: Vec<String>,
    pub b: Vec<String>,
    #[serde(default = "sphere_base")]
    pub base: BaseSpec,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub truncation_order: Option<usize>,
    #[serde(default)]
    pub gamma: Option<String>,
}

fn sphere_base() -> BaseSpec {
    BaseSpec::Named("sphere".into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Named(String),
    Custom(CustomBaseSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomBaseSpec {
    pub dimension: u32,
    /// `[eigenvalue, multiplicity]` pairs as strings.
    pub levels: Vec<(String, String)>,
    pub p0: PiMultiple,
}

fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

/// `q`, `param`, `-param` or `q*param`.
fn parse_coefficient(s: &str, params: &BTreeMap<String, Rational>) -> Result<Rational, String> {
    let t = s.trim();
    if let Ok(q) = parse_rational(t) {
        return Ok(q);
    }
    let (factor, name) = match t.split_once('*') {
        Some((f, p)) => (parse_rational(f).map_err(|e| e.to_string())?, p.trim()),
        None => match t.strip_prefix('-') {
            Some(p) => (Rational::from_integer((-1).into()), p.trim()),
            None => (Rational::from_integer(1.into()), t),
        },
    };
    let v = params.get(name).ok_or_else(|| format!("unknown parameter or malformed rational '{s}'"))?;
    Ok(factor * v)
}

/// Builds an operator from spec-file text, with parameter overrides.
pub fn parse_spec(text: &str, overrides: &BTreeMap<String, Rational>) -> Result<(ConeOperator, Option<Rational>), CliError> {
    let spec: OperatorSpecFile = serde_json::from_str(text).map_err(|e| CliError::Spec {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut params = BTreeMap::new();
    for (k, v) in &spec.parameters {
        let q = parse_rational(v).map_err(|e| CliError::Spec {
            line: line_of(text, k),
            message: e.to_string(),
        })?;
        params.insert(k.clone(), q);
    }
    params.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
    let series = |key: &str, v: &[String]| -> Result<Vec<Rational>, CliError> {
        v.iter()
            .map(|s| parse_coefficient(s, &params))
            .collect::<Result<_, _>>()
            .map_err(|message| CliError::Spec {
                line: line_of(text, key),
                message: format!("{key}: {message}"),
            })
    };
    let a0 = series("a0", &spec.a0)?;
    let a1 = series("a1", &spec.a1)?;
    let a2 = series("a2", &spec.a2)?;
    let b = series("b", &spec.b)?;
    let base_line = line_of(text, "base");
    let base: Arc<dyn BaseSpectrum> = match &spec.base {
        BaseSpec::Named(s) if s == "sphere" => Arc::new(sphere_spectrum(spec.n).map_err(|e| CliError::Spec {
            line: base_line,
            message: e.to_string(),
        })?),
        BaseSpec::Named(s) => {
            return Err(CliError::Spec {
                line: base_line,
                message: format!("unknown base '{s}'"),
            })
        }
        BaseSpec::Custom(c) => {
            let levels = c
                .levels
                .iter()
                .map(|(e, m)| {
                    let e = parse_rational(e).map_err(|x| x.to_string())?;
                    let m = num_bigint::BigInt::from_str(m.trim()).map_err(|x| x.to_string())?;
                    Ok((e, m))
                })
                .collect::<Result<Vec<_>, String>>()
                .map_err(|message| CliError::Spec { line: base_line, message })?;
            Arc::new(CustomSpectrum::new(c.dimension, levels, c.p0.clone()).map_err(|e| CliError::Spec {
                line: base_line,
                message: e.to_string(),
            })?)
        }
    };
    let gamma = match &spec.gamma {
        Some(g) => Some(parse_rational(g).map_err(|e| CliError::Spec {
            line: line_of(text, "gamma"),
            message: e.to_string(),
        })?),
        None => None,
    };
    let op = ConeOperator::new(
        spec.name.clone(),
        spec.n,
        a2,
        a1,
        a0,
        b,
        base,
        spec.truncation_order.unwrap_or(12),
        OperatorFamily::Custom,
    )
    .map_err(|e| CliError::Spec {
        line: line_of(text, "n"),
        message: e.to_string(),
    })?;
    Ok((op, gamma))
}

fn rational_flag(name: &str, v: &Option<String>) -> Result<Option<Rational>, CliError> {
    v.as_deref()
        .map(|s| parse_rational(s).map_err(|e| CliError::Input(format!("--{name}: {e}"))))
        .transpose()
}

struct Setup {
    op: ConeOperator,
    gamma: Option<Rational>,
}

fn build_operator(cli: &Cli) -> Result<Setup, CliError> {
    let kappa_sq = rational_flag("kappa-sq", &cli.kappa_sq)?;
    let z = rational_flag("Z", &cli.z)?;
    let trunc = cli.truncation.unwrap_or_else(|| cli.order.unwrap_or(0).max(12));
    let flag_gamma = rational_flag("gamma", &cli.gamma)?;
    if let Some(path) = &cli.spec {
        if cli.operator.is_some() {
            return Err(CliError::Input("give either a built-in operator or --spec, not both".into()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut overrides = BTreeMap::new();
        if let Some(k) = kappa_sq {
            overrides.insert("kappa_sq".to_string(), k);
        }
        if let Some(z) = z {
            overrides.insert("Z".to_string(), z);
        }
        let (mut op, gamma) = parse_spec(&text, &overrides)?;
        if let Some(t) = cli.truncation {
            op = op.with_truncation(t);
        }
        return Ok(Setup {
            op,
            gamma: flag_gamma.or(gamma),
        });
    }
    let zero = || Rational::from_integer(0.into());
    let op = match cli.operator.as_deref() {
        Some("laplacian") => ConeOperator::laplacian(cli.dim.unwrap_or(3), trunc)?,
        Some("shifted-laplacian") => ConeOperator::shifted_laplacian(cli.dim.unwrap_or(3), kappa_sq.unwrap_or_else(zero), trunc)?,
        Some("coulomb") => {
            if cli.dim.is_some_and(|d| d != 3) {
                return Err(CliError::Input("coulomb is defined for --dim 3 only".into()));
            }
            ConeOperator::coulomb(z.unwrap_or_else(|| Rational::from_integer(1.into())), kappa_sq.unwrap_or_else(zero), trunc)?
        }
        Some(other) => return Err(CliError::Input(format!("unknown operator '{other}'"))),
        None => return Err(CliError::Input("no operator: give a built-in name or --spec".into())),
    };
    Ok(Setup { op, gamma: flag_gamma })
}

/// JSON number with 16 significant digits; non-finite values become strings.
pub fn fnum(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.15e}")).expect("formatted float"))
    } else {
        Value::String(x.to_string())
    }
}

fn operator_json(op: &ConeOperator) -> Value {
    let mut params = Map::new();
    if let Some(k) = op.parameter_kappa_sq() {
        params.insert("kappa_sq".into(), Value::String(format_rational(k)));
    }
    if let Some(z) = op.parameter_z() {
        params.insert("Z".into(), Value::String(format_rational(z)));
    }
    json!({
        "name": op.name,
        "n": op.n,
        "truncation_order": op.truncation_order,
        "parameters": params,
    })
}

fn envelope(command: &str, op: &ConeOperator) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), Value::String(SCHEMA.into()));
    m.insert("command".into(), Value::String(command.into()));
    m.insert("operator".into(), operator_json(op));
    m
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|_| CliError::Input(format!("bad grid value '{t}'")))?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::Input(format!("grid value {v} is not a positive radius")))
            }
        })
        .collect()
}

fn contour_for(setup: &Setup) -> ContourSpec {
    match &setup.gamma {
        Some(g) => ContourSpec::new(g.clone()),
        None => default_contour(&setup.op),
    }
}

struct Output {
    body: String,
    passed: bool,
}

fn json_out(m: Map<String, Value>, passed: bool) -> Output {
    let mut body = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
    body.push('\n');
    Output { body, passed }
}

fn require_json(cli: &Cli, what: &str) -> Result<(), CliError> {
    if cli.format == Format::Csv {
        return Err(CliError::Input(format!("{what} has no CSV form; CSV is for grid output (fundsol, compare)")));
    }
    Ok(())
}

fn run_symbols(cli: &Cli, setup: &Setup) -> Result<Output, CliError> {
    require_json(cli, "symbols")?;
    let (ell, j) = (cli.ell.unwrap_or(0), cli.order.unwrap_or(0));
    let op = setup.op.clone().with_truncation(setup.op.truncation_order.max(j));
    let sym = asymptotic_symbol(&op, ell, j)?;
    let mut m = envelope("symbols", &op);
    m.insert("ell".into(), json!(ell));
    m.insert("order".into(), json!(j));
    m.insert("symbol".into(), serde_json::to_value(&*sym).expect("serializable"));
    m.insert("display".into(), Value::String(sym.to_string()));
    Ok(json_out(m, true))
}

fn run_poles(cli: &Cli, setup: &Setup) -> Result<Output, CliError> {
    require_json(cli, "poles")?;
    let (ell, j) = (cli.ell.unwrap_or(0), cli.order.unwrap_or(0));
    let op = setup.op.clone().with_truncation(setup.op.truncation_order.max(j));
    let contour = contour_for(setup);
    let poles = poles_with_residues(&op, ell, j, &contour)?;
    let mut m = envelope("poles", &op);
    m.insert("ell".into(), json!(ell));
    m.insert("order".into(), json!(j));
    m.insert(
        "contour".into(),
        json!({"gamma": format_rational(&contour.gamma), "real_part": format_rational(&contour.real_part(op.n))}),
    );
    m.insert("poles".into(), serde_json::to_value(&poles).expect("serializable"));
    Ok(json_out(m, true))
}

fn run_kernel(cli: &Cli, setup: &Setup) -> Result<Output, CliError> {
    require_json(cli, "kernel")?;
    let (ell, j) = (cli.ell.unwrap_or(0), cli.order.unwrap_or(0));
    let op = setup.op.clone().with_truncation(setup.op.truncation_order.max(j));
    let contour = contour_for(setup);
    let terms = kernel_terms(&op, ell, j, &contour)?;
    let (k0, k1) = kernel_split(&terms);
    let mut m = envelope("kernel", &op);
    m.insert("ell".into(), json!(ell));
    m.insert("order".into(), json!(j));
    m.insert("terms".into(), serde_json::to_value(&terms).expect("serializable"));
    m.insert("K0".into(), serde_json::to_value(&k0).expect("serializable"));
    m.insert("K1".into(), serde_json::to_value(&k1).expect("serializable"));
    if let Some(at) = &cli.at {
        let v = parse_grid_signed(at)?;
        let [r, rt, angle] = v[..] else {
            return Err(CliError::Input("--at takes r,rt,angle".into()));
        };
        let val = kernel_eval(&op, r, rt, angle, ell, j, &contour)?;
        m.insert(
            "value".into(),
            json!({"r": fnum(r), "rt": fnum(rt), "angle": fnum(angle), "max_ell": ell, "max_order": j, "kernel": fnum(val.value)}),
        );
    }
    Ok(json_out(m, true))
}

fn parse_grid_signed(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad number '{t}'"))))
        .collect()
}

struct GridRow {
    r: f64,
    fields: Vec<(&'static str, f64)>,
    status: &'static str,
}

fn grid_output(cli: &Cli, command: &str, op: &ConeOperator, extra: Map<String, Value>, rows: &[GridRow]) -> Output {
    let passed = rows.iter().all(|r| r.status == "ok");
    match cli.format {
        Format::Csv => {
            let mut body = String::from("r");
            if let Some(first) = rows.first() {
                for (k, _) in &first.fields {
                    body.push(',');
                    body.push_str(k);
                }
            }
            body.push_str(",status\n");
            for row in rows {
                body.push_str(&format!("{:.15e}", row.r));
                for (_, v) in &row.fields {
                    body.push_str(&format!(",{v:.15e}"));
                }
                body.push(',');
                body.push_str(row.status);
                body.push('\n');
            }
            Output { body, passed }
        }
        Format::Json => {
            let mut m = envelope(command, op);
            m.extend(extra);
            let pts: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut p = Map::new();
                    p.insert("r".into(), fnum(row.r));
                    for (k, v) in &row.fields {
                        p.insert((*k).into(), fnum(*v));
                    }
                    p.insert("status".into(), Value::String(row.status.into()));
                    Value::Object(p)
                })
                .collect();
            m.insert("points".into(), Value::Array(pts));
            m.insert("passed".into(), Value::Bool(passed));
            json_out(m, passed)
        }
    }
}

fn run_fundsol(cli: &Cli, setup: &Setup) -> Result<Output, CliError> {
    let grid = parse_grid(cli.grid.as_deref().unwrap_or("0.5,1,2"))?;
    let order = cli.order.unwrap_or(40);
    let tol = cli.tol.unwrap_or(1e-10);
    let series = fundamental_solution_series(&setup.op, order)?;
    let mut rows = Vec::new();
    for &r in &grid {
        match sum_series(&series, r, order, tol) {
            Ok(s) => rows.push(GridRow {
                r,
                fields: vec![("value", s.value), ("tail_bound", s.tail_bound)],
                status: "ok",
            }),
            Err(KernelError::TailBound { value, bound, .. }) => rows.push(GridRow {
                r,
                fields: vec![("value", value), ("tail_bound", bound)],
                status: "tail-bound-exceeded",
            }),
            Err(e) => return Err(e.into()),
        }
    }
    let mut extra = Map::new();
    extra.insert("max_order".into(), json!(order));
    extra.insert("tol".into(), fnum(tol));
    extra.insert("pi_power".into(), json!(series.pi_power));
    extra.insert("tail_constant".into(), fnum(series.tail_constant));
    extra.insert("heuristic_bound".into(), Value::Bool(series.heuristic_bound));
    Ok(grid_output(cli, "fundsol", &setup.op, extra, &rows))
}

/// Closed-form counterpart of the series fundamental solution, when one is known.
fn closed_form(op: &ConeOperator, order: usize) -> Result<(String, Box<dyn Fn(f64) -> f64>), CliError> {
    use std::f64::consts::PI;
    let unsupported = || CliError::Input(format!("no closed form for {} (n = {})", op.name, op.n));
    match &op.family {
        OperatorFamily::ShiftedLaplacian { kappa_sq } => {
            let k2 = rational_to_f64(kappa_sq);
            let n = op.n;
            if k2 == 0.0 {
                return Ok(("laplace".into(), Box::new(move |r| laplace_fs(n, r))));
            }
            match n {
                3 if k2 > 0.0 => {
                    let k = k2.sqrt();
                    Ok(("-cosh(kappa r)/(4 pi r)".into(), Box::new(move |r| -(k * r).cosh() / (4.0 * PI * r))))
                }
                3 => {
                    let mu = (-k2).sqrt();
                    Ok(("-cos(mu r)/(4 pi r)".into(), Box::new(move |r| -(mu * r).cos() / (4.0 * PI * r))))
                }
                _ if n % 2 == 0 && k2 > 0.0 => {
                    let k = k2.sqrt();
                    Ok((
                        "modified fundamental solution, alpha = 1".into(),
                        Box::new(move |r| modified_fs_even(n, k, r, 1.0).unwrap_or(f64::NAN)),
                    ))
                }
                _ => Err(unsupported()),
            }
        }
        OperatorFamily::Coulomb { z, kappa_sq } if kappa_sq == &Rational::from_integer(0.into()) => {
            let z = rational_to_f64(z);
            let p = order as u32;
            Ok((
                "coulomb harmonic-number series".into(),
                Box::new(move |r| coulomb_closed(z, r, p).unwrap_or(f64::NAN)),
            ))
        }
        _ => Err(unsupported()),
    }
}

fn run_compare(cli: &Cli, setup: &Setup) -> Result<Output, CliError> {
    let grid = parse_grid(cli.grid.as_deref().unwrap_or("0.5,1,2"))?;
    let order = cli.order.unwrap_or(40);
    let tol = cli.tol.unwrap_or(1e-10);
    let (name, reference) = closed_form(&setup.op, order)?;
    let series = fundamental_solution_series(&setup.op, order)?;
    let rows: Vec<GridRow> = grid
        .iter()
        .map(|&r| {
            let engine = series.partial_sum(r, order);
            let want = reference(r);
            let rel = (engine - want).abs() / want.abs();
            GridRow {
                r,
                fields: vec![("engine", engine), ("reference", want), ("rel_error", rel)],
                status: if rel <= tol { "ok" } else { "mismatch" },
            }
        })
        .collect();
    let mut extra = Map::new();
    extra.insert("reference".into(), Value::String(name));
    extra.insert("max_order".into(), json!(order));
    extra.insert("tol".into(), fnum(tol));
    Ok(grid_output(cli, "compare", &setup.op, extra, &rows))
}

fn run_verify(cli: &Cli, setup: &Setup) -> Result<Output, CliError> {
    require_json(cli, "verify")?;
    let suite = cli
        .suite
        .as_deref()
        .ok_or_else(|| CliError::Input(format!("--suite is required: one of {}", SUITES.join(", "))))?;
    let defaults = SuiteLimits::default();
    let limits = SuiteLimits {
        max_ell: cli.ell.unwrap_or(defaults.max_ell),
        max_order: cli.order.unwrap_or(defaults.max_order),
        tol: cli.tol.unwrap_or(defaults.tol),
    };
    let report = run_suite(&setup.op, suite, limits)?;
    let mut m = envelope("verify", &setup.op);
    m.insert("suite".into(), Value::String(report.suite.clone()));
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "residual": fnum(c.residual), "tolerance": fnum(c.tolerance), "passed": c.passed}))
        .collect();
    m.insert("checks".into(), Value::Array(checks));
    m.insert("passed".into(), Value::Bool(report.passed));
    Ok(json_out(m, report.passed))
}

fn run_words(cli: &Cli, setup: &Setup) -> Result<Output, CliError> {
    require_json(cli, "words")?;
    let p = cli.order.unwrap_or(4) as u64;
    if p > 30 {
        return Err(CliError::Input("--order above 30 would list more than a million words".into()));
    }
    let weights = match &setup.op.family {
        OperatorFamily::Coulomb { z, kappa_sq } => Some((z.clone(), kappa_sq.clone())),
        _ => None,
    };
    let words: Vec<Value> = enumerate_words(p)
        .iter()
        .map(|w| {
            let mut o = Map::new();
            o.insert("word".into(), Value::String(w.to_string()));
            o.insert("n_z".into(), json!(w.n_z()));
            o.insert("n_kappa".into(), json!(w.n_kappa()));
            if let Some((z, k)) = &weights {
                o.insert("weight".into(), Value::String(format_rational(&word_weight(w, z, k))));
            }
            Value::Object(o)
        })
        .collect();
    let mut m = envelope("words", &setup.op);
    m.insert("p".into(), json!(p));
    m.insert("cardinality".into(), Value::String(cardinality(p).to_string()));
    m.insert("cardinality_binomial".into(), Value::String(cardinality_binomial(p).to_string()));
    m.insert("words".into(), Value::Array(words));
    Ok(json_out(m, true))
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Io(_) => EXIT_FAILED,
        _ => EXIT_INPUT,
    }
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = build_operator(&cli).and_then(|setup| match cli.command {
        Command::Symbols => run_symbols(&cli, &setup),
        Command::Poles => run_poles(&cli, &setup),
        Command::Kernel => run_kernel(&cli, &setup),
        Command::Fundsol => run_fundsol(&cli, &setup),
        Command::Verify => run_verify(&cli, &setup),
        Command::Compare => run_compare(&cli, &setup),
        Command::Words => run_words(&cli, &setup),
    });
    match result {
        Ok(o) => {
            if let Err(e) = out.write_all(o.body.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILED;
            }
            if o.passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolcalc::MellinSymbol;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("conepar").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn symbols_round_trip() {
        let (code, out, _) = call(&["shifted-laplacian", "--dim", "3", "--kappa-sq", "1", "symbols", "--ell", "0", "--order", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        let sym: MellinSymbol = serde_json::from_value(v["symbol"].clone()).unwrap();
        let op = ConeOperator::shifted_laplacian(3, Rational::from_integer(1.into()), 4).unwrap();
        assert_eq!(sym, *asymptotic_symbol(&op, 0, 2).unwrap());
    }

    #[test]
    fn coulomb_double_pole() {
        let (code, out, _) = call(&["coulomb", "--Z", "1", "--kappa-sq", "0", "poles", "--ell", "0", "--order", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let poles = v["poles"].as_array().unwrap();
        assert!(poles.iter().any(|p| p["order"] == 2 && p["res1"] == "2"));
    }

    #[test]
    fn deterministic_output() {
        let args = ["coulomb", "--Z", "1/2", "--kappa-sq", "1/4", "fundsol", "--grid", "0.3,0.9", "--order", "25"];
        assert_eq!(call(&args), call(&args));
    }

    #[test]
    fn input_errors() {
        assert_eq!(call(&["nonsense", "symbols"]).0, EXIT_INPUT);
        assert_eq!(call(&["coulomb", "--Z", "x", "symbols"]).0, EXIT_INPUT);
        assert_eq!(call(&["coulomb", "verify", "--suite", "bogus"]).0, EXIT_INPUT);
        assert_eq!(call(&["coulomb", "symbols", "--format", "csv"]).0, EXIT_INPUT);
        assert_eq!(call(&["laplacian", "fundsol", "--grid", "-1"]).0, EXIT_INPUT);
    }

    #[test]
    fn spec_parsing() {
        let text = r#"{
  "name": "coulomb-like",
  "n": 3,
  "a2": ["1"],
  "a1": ["-1"],
  "a0": ["0", "2*Z", "-2*kappa_sq"],
  "b": ["-1"],
  "parameters": {"Z": "1", "kappa_sq": "1/4"},
  "truncation_order": 6
}"#;
        let (op, gamma) = parse_spec(text, &BTreeMap::new()).unwrap();
        assert!(gamma.is_none());
        let reference = ConeOperator::coulomb(Rational::from_integer(1.into()), Rational::new(1.into(), 4.into()), 6).unwrap();
        for j in 0..=4 {
            assert_eq!(asymptotic_symbol(&op, 1, j).unwrap(), asymptotic_symbol(&reference, 1, j).unwrap());
        }
        let bad = text.replace("\"2*Z\"", "\"2*Q\"");
        match parse_spec(&bad, &BTreeMap::new()) {
            Err(CliError::Spec { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        match parse_spec("{\n  \"name\": \"x\",\n  \"n\": 3,,\n}", &BTreeMap::new()) {
            Err(CliError::Spec { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
