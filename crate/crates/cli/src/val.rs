use clap::{Args, Subcommand};
use latval_core::field::{AnyField, Field, FunctionField, PrimeField};
use latval_core::valuation::{
    parse_places, split_top_level, BezoutCase, IntersectionRing, ValuedField,
};
use serde_json::json;

use crate::input::parse;
use crate::report::{fmt_vals, vals_json, CliError, Outcome};

#[derive(Args, Debug)]
pub struct ValArgs {
    /// Field tag: QQ, QQ(t), GF(p)(t) or GF(p)(s)(t)
    #[arg(long, global = true, default_value = "QQ")]
    pub field: String,
    /// Comma-separated places, e.g. `2,3` or `t,inf`
    #[arg(long, global = true, default_value = "")]
    pub vals: String,
    #[command(subcommand)]
    pub cmd: ValCmd,
}

#[derive(Subcommand, Debug)]
pub enum ValCmd {
    /// A generator of (x, y) with Bezout coefficients
    Gcd {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// An element u with val_1(u) > 0 and val_2(1 - u) > 0
    U,
    /// z congruent to a mod the first maximal ideal and to b mod the second
    Approx {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// res_1(y) - res_2(y) over GF(p)(t)
    Asdelta {
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// An element with prescribed residues, one per place
    Crt {
        #[arg(long, allow_hyphen_values = true)]
        residues: String,
    },
    /// Pairwise comparison of the valuation rings
    Compare,
}

macro_rules! with_valued {
    ($tag:expr, $f:ident => $body:expr) => {
        match AnyField::parse($tag).map_err(|e| CliError::usage(e.to_string()))? {
            AnyField::Q($f) => $body,
            AnyField::QT($f) => $body,
            AnyField::FpT($f) => $body,
            AnyField::FpST($f) => $body,
            AnyField::Fp(_) => Err(CliError::usage(
                "a finite field carries no nontrivial valuation",
            )),
        }
    };
}

pub fn run(args: &ValArgs) -> Result<Outcome, CliError> {
    if let ValCmd::Asdelta { y } = &args.cmd {
        return match AnyField::parse(&args.field).map_err(|e| CliError::usage(e.to_string()))? {
            AnyField::FpT(f) => asdelta(f, &args.vals, y),
            _ => Err(CliError::usage("asdelta needs a field GF(p)(t)")),
        };
    }
    with_valued!(&args.field, f => dispatch(f, &args.vals, &args.cmd))
}

fn ring<F: ValuedField>(f: F, vals: &str) -> Result<IntersectionRing<F>, CliError> {
    if vals.trim().is_empty() {
        return Err(CliError::usage("--vals is required"));
    }
    let places = parse_places(&f, vals)?;
    Ok(IntersectionRing::new(f, places)?)
}

fn place_names<F: ValuedField>(r: &IntersectionRing<F>) -> Vec<String> {
    r.places()
        .iter()
        .map(|p| r.field().format_place(p))
        .collect()
}

fn dispatch<F: ValuedField>(f: F, vals: &str, cmd: &ValCmd) -> Result<Outcome, CliError> {
    let r = ring(f, vals)?;
    match cmd {
        ValCmd::Gcd { x, y } => gcd(&r, x, y),
        ValCmd::U => u(&r),
        ValCmd::Approx { a, b } => approx(&r, a, b),
        ValCmd::Crt { residues } => crt(&r, residues),
        ValCmd::Compare => compare(&r),
        ValCmd::Asdelta { .. } => unreachable!("handled before dispatch"),
    }
}

fn case_name(c: BezoutCase) -> &'static str {
    match c {
        BezoutCase::X => "x",
        BezoutCase::Y => "y",
        BezoutCase::Difference => "difference",
        BezoutCase::Idempotent => "idempotent",
    }
}

fn gcd<F: ValuedField>(r: &IntersectionRing<F>, x: &str, y: &str) -> Result<Outcome, CliError> {
    let f = r.field();
    let (x, y) = (parse(f, x)?, parse(f, y)?);
    let b = r.bezout_gcd(&x, &y)?;
    let (g, c1, c2) = (f.format(&b.g), f.format(&b.r), f.format(&b.s));
    let vg = r.vals(&b.g);
    Ok(Outcome::new(json!({
        "places": place_names(r),
        "g": g,
        "vals": vals_json(&vg),
        "case": case_name(b.case),
    }))
    .witnesses(json!({ "r": c1, "s": c2 }))
    .line(format!("g = {g}, coeffs ({c1}, {c2})"))
    .line(format!("vals(g) = {}", fmt_vals(&vg)))
    .line(format!("case: {}", case_name(b.case))))
}

fn u<F: ValuedField>(r: &IntersectionRing<F>) -> Result<Outcome, CliError> {
    let f = r.field();
    let u = r.u_element()?;
    let cu = f.sub(&f.one(), &u);
    let (vu, vcu) = (r.vals(&u), r.vals(&cu));
    let s = f.format(&u);
    Ok(Outcome::new(json!({
        "places": place_names(r),
        "u": s,
        "vals_u": vals_json(&vu),
        "vals_one_minus_u": vals_json(&vcu),
    }))
    .line(format!("u = {s}"))
    .line(format!("vals(u) = {}", fmt_vals(&vu)))
    .line(format!("vals(1-u) = {}", fmt_vals(&vcu))))
}

fn approx<F: ValuedField>(r: &IntersectionRing<F>, a: &str, b: &str) -> Result<Outcome, CliError> {
    let f = r.field();
    let (a, b) = (parse(f, a)?, parse(f, b)?);
    let w = r.approx_witness(&a, &b)?;
    let p = r.places();
    let (d1, d2) = (
        f.val(&p[0], &f.sub(&w.z, &a)),
        f.val(&p[1], &f.sub(&w.z, &b)),
    );
    let z = f.format(&w.z);
    Ok(Outcome::new(json!({
        "places": place_names(r),
        "z": z,
        "k": w.k,
        "val1_z_minus_a": crate::report::val_json(d1),
        "val2_z_minus_b": crate::report::val_json(d2),
    }))
    .line(format!("z = {z}, k = {}", w.k))
    .line(format!("val_1(z - a) = {d1}, val_2(z - b) = {d2}")))
}

fn crt<F: ValuedField>(r: &IntersectionRing<F>, residues: &str) -> Result<Outcome, CliError> {
    let f = r.field();
    let parts = split_top_level(residues);
    if parts.len() != r.places().len() {
        return Err(CliError::usage(format!(
            "expected {} residues, got {}",
            r.places().len(),
            parts.len()
        )));
    }
    let targets = r
        .places()
        .iter()
        .zip(&parts)
        .map(|(p, s)| {
            let k = f.residue_field(p)?;
            parse(&k, s)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let x = r.crt(&targets)?;
    let got = r.residues(&x)?;
    let shown: Vec<String> = r
        .places()
        .iter()
        .zip(&got)
        .map(|(p, g)| Ok(f.residue_field(p)?.format(g)))
        .collect::<Result<_, CliError>>()?;
    let s = f.format(&x);
    Ok(Outcome::new(json!({
        "places": place_names(r),
        "x": s,
        "residues": shown,
    }))
    .line(format!("x = {s}"))
    .line(format!("residues = ({})", shown.join(", "))))
}

fn compare<F: ValuedField>(r: &IntersectionRing<F>) -> Result<Outcome, CliError> {
    let f = r.field();
    let p = r.places();
    let mut pairs = Vec::new();
    let mut out = Outcome::new(json!(null));
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let (ni, nj) = (f.format_place(&p[i]), f.format_place(&p[j]));
            match f.incomparability_witnesses(&p[i], &p[j]) {
                Some((a, b)) => {
                    let (sa, sb) = (f.format(&a), f.format(&b));
                    out = out.line(format!(
                        "{ni} vs {nj}: incomparable, {sa} in O_{ni} only, {sb} in O_{nj} only"
                    ));
                    pairs.push(
                        json!({ "places": [ni, nj], "incomparable": true, "a": sa, "b": sb }),
                    );
                }
                None => {
                    out = out.line(format!("{ni} vs {nj}: same valuation ring"));
                    pairs.push(json!({ "places": [ni, nj], "incomparable": false }));
                }
            }
        }
    }
    out.result = json!({ "places": place_names(r), "pairs": pairs });
    Ok(out)
}

fn asdelta(f: FunctionField<PrimeField>, vals: &str, y: &str) -> Result<Outcome, CliError> {
    let r = ring(f, vals)?;
    let y = parse(r.field(), y)?;
    let d = r.as_delta(&y)?;
    let f = r.field();
    let x = f.sub(&f.pow_u(&y, f.characteristic()), &y);
    let xs = f.format(&x);
    Ok(Outcome::new(json!({
        "places": place_names(&r),
        "delta": d,
        "x": xs,
    }))
    .line(format!("delta = {d}"))
    .line(format!("x = y^p - y = {xs}")))
}
