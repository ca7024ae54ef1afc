use clap::Subcommand;
use latval_core::field::series::{artin_schreier_root, series_expand};
use latval_core::field::{AnyField, Evaluation, Field, FunctionField, PrimeField};
use serde_json::json;

use crate::input::parse;
use crate::report::{CliError, Outcome};

pub const DEFAULT_PRECISION: usize = 32;

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// Evaluate an expression to its canonical form
    Arith {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Value of a rational function at a constant or at `inf`
    Evaluate {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Power series expansion at t = 0 over GF(p)(t)
    Series {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
    /// Solve y^p - y = x modulo t^N over GF(p)(t)
    Asroot {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: usize,
    },
}

fn field(tag: &str) -> Result<AnyField, CliError> {
    AnyField::parse(tag).map_err(|e| CliError::usage(e.to_string()))
}

pub fn run(tag: &str, cmd: &FieldCmd) -> Result<Outcome, CliError> {
    let any = field(tag)?;
    match cmd {
        FieldCmd::Arith { expr } => match any {
            AnyField::Q(f) => arith(&f, expr),
            AnyField::Fp(f) => arith(&f, expr),
            AnyField::QT(f) => arith(&f, expr),
            AnyField::FpT(f) => arith(&f, expr),
            AnyField::FpST(f) => arith(&f, expr),
        },
        FieldCmd::Evaluate { expr, at } => match any {
            AnyField::QT(f) => evaluate(&f, expr, at),
            AnyField::FpT(f) => evaluate(&f, expr, at),
            AnyField::FpST(f) => evaluate(&f, expr, at),
            _ => Err(CliError::usage("evaluate needs a rational function field")),
        },
        FieldCmd::Series { expr, precision } => series(&power_series_field(any)?, expr, *precision),
        FieldCmd::Asroot { expr, precision } => asroot(&power_series_field(any)?, expr, *precision),
    }
}

fn power_series_field(any: AnyField) -> Result<FunctionField<PrimeField>, CliError> {
    match any {
        AnyField::FpT(f) => Ok(f),
        _ => Err(CliError::usage("series commands need a field GF(p)(t)")),
    }
}

fn arith<F: Field>(f: &F, expr: &str) -> Result<Outcome, CliError> {
    let x = parse(f, expr)?;
    let s = f.format(&x);
    Ok(Outcome::new(json!({ "field": f.tag(), "value": s })).line(s))
}

fn evaluate<K: Field>(f: &FunctionField<K>, expr: &str, at: &str) -> Result<Outcome, CliError> {
    let x = parse(f, expr)?;
    let point = match at.trim() {
        "inf" => None,
        c => Some(parse(f.base(), c)?),
    };
    let shown = match f.evaluate(&x, point.as_ref()) {
        Evaluation::Value(v) => f.base().format(&v),
        Evaluation::Pole => "pole".to_string(),
    };
    Ok(Outcome::new(json!({
        "field": f.tag(),
        "value": f.format(&x),
        "at": at.trim(),
        "result": shown,
    }))
    .line(shown))
}

fn check_precision(n: usize) -> Result<(), CliError> {
    if n == 0 || n > 4096 {
        return Err(CliError::usage("precision must be between 1 and 4096"));
    }
    Ok(())
}

fn series(f: &FunctionField<PrimeField>, expr: &str, n: usize) -> Result<Outcome, CliError> {
    check_precision(n)?;
    let x = parse(f, expr)?;
    let s = series_expand(f, &x, n)?;
    let shown = s.format(f.var());
    Ok(Outcome::new(json!({
        "field": f.tag(),
        "precision": n,
        "coeffs": s.coeffs(),
        "series": shown,
    }))
    .line(shown))
}

fn asroot(f: &FunctionField<PrimeField>, expr: &str, n: usize) -> Result<Outcome, CliError> {
    check_precision(n)?;
    let x = series_expand(f, &parse(f, expr)?, n)?;
    let y = artin_schreier_root(&x)?;
    let verified = y.artin_schreier() == x;
    let shown = y.format(f.var());
    Ok(Outcome::new(json!({
        "field": f.tag(),
        "precision": n,
        "x": x.format(f.var()),
        "y": shown,
        "coeffs": y.coeffs(),
        "verified": verified,
    }))
    .line(format!("y = {shown}"))
    .line(format!(
        "y^p - y = x mod t^{n}: {}",
        if verified { "yes" } else { "no" }
    ))
    .success(verified))
}
