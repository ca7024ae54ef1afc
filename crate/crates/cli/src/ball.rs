use clap::{Args, Subcommand};
use latval_core::ball::{BallContext, BallGroup};
use latval_core::field::{AnyField, Field, FunctionField};
use latval_core::lattice::{bottom_rank, reduced_rank};
use latval_core::valuation::parse_places;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::input::{gamma, parse, parse_list};
use crate::report::{fmt_vals, vals_json, CliError, Outcome};

#[derive(Args, Debug)]
pub struct BallArgs {
    /// Field and places, e.g. `QQ(t);vals=t,t-1`
    #[arg(long, global = true, default_value = "QQ(t);vals=t,t-1")]
    pub context: String,
    #[command(subcommand)]
    pub cmd: BallCmd,
}

#[derive(Subcommand, Debug)]
pub enum BallCmd {
    /// Membership of x in a ball, its ring and its ideal
    Member {
        #[arg(long, allow_hyphen_values = true)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Meet, sum and scaling of balls
    Ops {
        #[arg(long, allow_hyphen_values = true)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        other: String,
        /// Also report s·J for this element
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<String>,
    },
    /// The mutation J^S for a set S containing 1
    Mutate {
        #[arg(long, allow_hyphen_values = true)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// An index i with 1/(alpha - q_i) integral at every place
    Unitshift {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// The groups G_i, H_i, H and the inverse Vandermonde certificate
    Vandermonde {
        #[arg(long, allow_hyphen_values = true)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Random draws used to test the sampled claims
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// The interval between two nested balls as a finite lattice
    Export {
        #[arg(long, allow_hyphen_values = true)]
        low: String,
        #[arg(long, allow_hyphen_values = true)]
        high: String,
    },
}

pub fn run(args: &BallArgs, seed: u64) -> Result<Outcome, CliError> {
    let (tag, vals) = args
        .context
        .split_once(';')
        .ok_or_else(|| CliError::usage("context must look like `QQ(t);vals=t,t-1`"))?;
    let vals = vals
        .trim()
        .strip_prefix("vals=")
        .ok_or_else(|| CliError::usage("context must list places after `vals=`"))?;
    match AnyField::parse(tag).map_err(|e| CliError::usage(e.to_string()))? {
        AnyField::QT(f) => dispatch(f, vals, &args.cmd, seed),
        AnyField::FpT(f) => dispatch(f, vals, &args.cmd, seed),
        AnyField::FpST(f) => dispatch(f, vals, &args.cmd, seed),
        _ => Err(CliError::usage(
            "balls live in a rational function field K(t)",
        )),
    }
}

fn dispatch<K: Field>(
    f: FunctionField<K>,
    vals: &str,
    cmd: &BallCmd,
    seed: u64,
) -> Result<Outcome, CliError> {
    let places = parse_places(&f, vals)?;
    let c = BallContext::new(f, places)?;
    let group = |s: &str| -> Result<BallGroup, CliError> { Ok(c.group(gamma(s)?)?) };
    match cmd {
        BallCmd::Member { group: g, x } => member(&c, &group(g)?, x),
        BallCmd::Ops {
            group: a,
            other,
            scale,
        } => ops(&c, &group(a)?, &group(other)?, scale.as_deref()),
        BallCmd::Mutate { group: g, set } => mutate(&c, &group(g)?, set),
        BallCmd::Unitshift { alpha, q } => unit_shift(&c, alpha, q),
        BallCmd::Vandermonde {
            group: g,
            alpha,
            q,
            samples,
        } => vandermonde(&c, &group(g)?, alpha, q, *samples, seed),
        BallCmd::Export { low, high } => export(&c, &group(low)?, &group(high)?),
    }
}

fn show(j: &BallGroup) -> String {
    let parts: Vec<String> = j.gamma.iter().map(|g| g.to_string()).collect();
    format!("gamma=({})", parts.join(","))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn member<K: Field>(c: &BallContext<K>, j: &BallGroup, x: &str) -> Result<Outcome, CliError> {
    let x = parse(c.field(), x)?;
    let vals = c.vals(&x);
    let (m, r, i) = (c.member(j, &x)?, c.in_ring(&x, j)?, c.in_ideal(&x, j)?);
    let unit = !c.field().is_zero(&x) && c.is_ring_unit(&x, j)?;
    Ok(Outcome::new(json!({
        "group": j.gamma,
        "x": c.field().format(&x),
        "vals": vals_json(&vals),
        "member": m,
        "in_ring": r,
        "in_ideal": i,
        "ring_unit": unit,
    }))
    .line(format!("vals(x) = {}", fmt_vals(&vals)))
    .line(format!("x in J: {}", yes(m)))
    .line(format!("x in R_J: {}", yes(r)))
    .line(format!("x in I_J: {}", yes(i)))
    .line(format!("x a unit of R_J: {}", yes(unit))))
}

fn ops<K: Field>(
    c: &BallContext<K>,
    a: &BallGroup,
    b: &BallGroup,
    scale: Option<&str>,
) -> Result<Outcome, CliError> {
    let meet = c.meet(a, b)?;
    let join = c.join(a, b)?;
    let dominates = c.dominates(b, a)?;
    let mut result = json!({
        "group": a.gamma,
        "other": b.gamma,
        "meet": meet.gamma,
        "join": join.gamma,
        "other_dominates_group": dominates,
    });
    let mut out = Outcome::new(json!(null))
        .line(format!("J ^ K = {}", show(&meet)))
        .line(format!("J + K = {}", show(&join)))
        .line(format!("K dominates J: {}", yes(dominates)));
    if let Some(s) = scale {
        let s = parse(c.field(), s)?;
        let scaled = c.scale(&s, a)?;
        let contracts = c.contracts(&s, a)?;
        result["scaled"] = json!(scaled.gamma);
        result["contracts"] = json!(contracts);
        out = out
            .line(format!("s J = {}", show(&scaled)))
            .line(format!("s contracts J: {}", yes(contracts)));
    }
    out.result = result;
    Ok(out)
}

fn mutate<K: Field>(c: &BallContext<K>, j: &BallGroup, set: &str) -> Result<Outcome, CliError> {
    let s = parse_list(c.field(), set)?;
    let m = c.mutate(j, &s)?;
    Ok(Outcome::new(json!({
        "group": j.gamma,
        "set": s.iter().map(|x| c.field().format(x)).collect::<Vec<_>>(),
        "mutation": m.gamma,
    }))
    .line(format!("J^S = {}", show(&m))))
}

fn unit_shift<K: Field>(c: &BallContext<K>, alpha: &str, q: &str) -> Result<Outcome, CliError> {
    let f = c.field();
    let alpha = parse(f, alpha)?;
    let qs = parse_list(f.base(), q)?;
    let i = c.unit_shift(&alpha, &qs)?;
    let inv = f.inv(&f.sub(&alpha, &f.constant(qs[i].clone())))?;
    let vals = c.vals(&inv);
    Ok(Outcome::new(json!({
        "index": i,
        "q": f.base().format(&qs[i]),
        "vals_inverse": vals_json(&vals),
    }))
    .line(format!("i = {}, q_i = {}", i, f.base().format(&qs[i])))
    .line(format!("vals(1/(alpha - q_i)) = {}", fmt_vals(&vals))))
}

fn vandermonde<K: Field>(
    c: &BallContext<K>,
    j: &BallGroup,
    alpha: &str,
    q: &str,
    samples: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let f = c.field();
    let alpha = parse(f, alpha)?;
    let qs = parse_list(f.base(), q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rep = c.vandermonde_check(j, &alpha, &qs, &mut rng, samples)?;
    let certified = rep.certified();
    let inverse: Vec<Vec<String>> = rep
        .inverse
        .iter()
        .map(|row| row.iter().map(|e| f.base().format(e)).collect())
        .collect();
    let mut out = Outcome::new(json!({
        "group": j.gamma,
        "g": rep.g.iter().map(|g| &g.gamma).collect::<Vec<_>>(),
        "h_i": rep.h_i.iter().map(|g| &g.gamma).collect::<Vec<_>>(),
        "h": rep.h.gamma,
        "collapsing": rep.collapsing,
        "h_i_equal_h": rep.h_i_equal_h,
        "inverse_ok": rep.inverse_ok,
        "key_ok": rep.key_ok,
        "tuple_ok": rep.tuple_ok,
        "certified": certified,
    }))
    .witnesses(json!({
        "inverse": inverse,
        "key_samples": rep.key_samples,
        "tuple_samples": rep.tuple_samples,
        "tuple_premises": rep.tuple_premises,
    }));
    for (i, (g, h)) in rep.g.iter().zip(&rep.h_i).enumerate() {
        out = out.line(format!("G_{i} = {}, H_{i} = {}", show(g), show(h)));
    }
    let collapsing: Vec<String> = rep.collapsing.iter().map(|i| i.to_string()).collect();
    Ok(out
        .line(format!("H = {}", show(&rep.h)))
        .line(format!("G_i = H for i in [{}]", collapsing.join(", ")))
        .line(format!(
            "inverse Vandermonde rows: {}",
            inverse
                .iter()
                .map(|r| format!("[{}]", r.join(", ")))
                .collect::<Vec<_>>()
                .join(" ")
        ))
        .line(format!("certified: {}", yes(certified)))
        .success(certified))
}

fn export<K: Field>(
    c: &BallContext<K>,
    low: &BallGroup,
    high: &BallGroup,
) -> Result<Outcome, CliError> {
    let l = c.export_interval(low, high)?;
    let r0 = reduced_rank(&l, l.top(), l.bot())?;
    let rb = bottom_rank(&l, l.top(), l.bot())?;
    let gaps: Vec<i64> = low
        .gamma
        .iter()
        .zip(&high.gamma)
        .map(|(a, b)| a - b)
        .collect();
    let positive = gaps.iter().filter(|&&d| d > 0).count();
    Ok(Outcome::new(json!({
        "low": low.gamma,
        "high": high.gamma,
        "size": l.len(),
        "rk0": r0.rank,
        "rk_bot": rb.rank,
        "positive_gaps": positive,
        "lattice": l.to_json_value(),
    }))
    .line(format!("interval: {} balls", l.len()))
    .line(format!("gaps: {gaps:?}, {positive} positive"))
    .line(format!(
        "rk0(top/bot) = {}, rk_bot(top/bot) = {}",
        r0.rank, rb.rank
    )))
}
