use clap::{Subcommand, ValueEnum};
use latval_core::gen::generate;
use latval_core::lattice::{
    bottom_rank, check_subadditive_rank, reduced_rank, Cube, FiniteLattice, RankTable,
};
use latval_core::pregeometry::Pregeometry;
use serde_json::{json, Value};

use crate::input::{element, element_list, names, read_payload, LatticeSource};
use crate::report::{CliError, Outcome};

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Validate a lattice and test the modular law
    Check {
        #[command(flatten)]
        src: LatticeSource,
    },
    /// Reduced rank and bottom rank of an interval, with witnesses
    Rank {
        #[command(flatten)]
        src: LatticeSource,
        /// Upper end of the interval (default: top)
        #[arg(long)]
        a: Option<String>,
        /// Lower end of the interval (default: bottom)
        #[arg(long)]
        b: Option<String>,
    },
    /// The quasi-atom pregeometry over a base element
    Pregeometry {
        #[command(flatten)]
        src: LatticeSource,
        /// Base element (default: bottom)
        #[arg(long)]
        base: Option<String>,
        /// Also report the closure of these quasi-atoms
        #[arg(long)]
        closure: Option<String>,
    },
    /// Check a rank table against the subadditive rank axioms
    RankAxioms {
        #[command(flatten)]
        src: LatticeSource,
        /// Table file `{"values": [[a, b, rank], ...]}`; overrides --kind
        #[arg(long)]
        table: Option<String>,
        #[arg(long, value_enum, default_value_t = TableKind::Reduced)]
        kind: TableKind,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum TableKind {
    Reduced,
    Bottom,
    Height,
}

pub fn run(cmd: &LatticeCmd) -> Result<Outcome, CliError> {
    match cmd {
        LatticeCmd::Check { src } => check(&src.load()?),
        LatticeCmd::Rank { src, a, b } => rank(&src.load()?, a.as_deref(), b.as_deref()),
        LatticeCmd::Pregeometry { src, base, closure } => {
            pregeometry(&src.load()?, base.as_deref(), closure.as_deref())
        }
        LatticeCmd::RankAxioms { src, table, kind } => {
            rank_axioms(&src.load()?, table.as_deref(), *kind)
        }
    }
}

pub fn gen(spec: &str) -> Result<Outcome, CliError> {
    let g = generate(spec)?;
    let lattice = g.lattice.to_json_value();
    // plain mode prints the lattice itself so it can be piped into --file
    Ok(Outcome::new(json!({
        "spec": spec,
        "size": g.lattice.len(),
        "lattice": lattice,
        "expected": g.expected,
    }))
    .line(g.lattice.to_json()))
}

fn check(l: &FiniteLattice) -> Result<Outcome, CliError> {
    let witness = l.modular_witness();
    let mut out = Outcome::new(json!({
        "size": l.len(),
        "covers": l.covers().len(),
        "height": l.height(l.top()),
        "bottom": l.name(l.bot()),
        "top": l.name(l.top()),
        "modular": witness.is_none(),
    }))
    .line(format!("elements: {}", l.len()))
    .line(format!("covering pairs: {}", l.covers().len()))
    .line(format!("height: {}", l.height(l.top())));
    match witness {
        None => out = out.line("modular: yes"),
        Some(w) => {
            let (x, a, b) = (l.name(w.x), l.name(w.a), l.name(w.b));
            out = out
                .line(format!(
                    "modular: no, (x v a) ^ b != (x ^ b) v a at x = {x}, a = {a}, b = {b}"
                ))
                .witnesses(json!({ "x": x, "a": a, "b": b }));
        }
    }
    Ok(out)
}

fn cube_json(l: &FiniteLattice, c: &Cube) -> Value {
    json!({
        "n": c.n,
        "assign": names(l, &c.assign),
        "strict": c.strict,
    })
}

fn rank(l: &FiniteLattice, a: Option<&str>, b: Option<&str>) -> Result<Outcome, CliError> {
    let ia = a.map(|s| element(l, s)).transpose()?.unwrap_or(l.top());
    let ib = b.map(|s| element(l, s)).transpose()?.unwrap_or(l.bot());
    let label = format!("{}/{}", a.unwrap_or("top"), b.unwrap_or("bot"));
    let r0 = reduced_rank(l, ia, ib)?;
    let rb = bottom_rank(l, ia, ib)?;
    let cube = &r0.cube;
    Ok(Outcome::new(json!({
        "a": l.name(ia),
        "b": l.name(ib),
        "rk0": r0.rank,
        "rk_bot": rb.rank,
    }))
    .witnesses(json!({
        "cube": cube_json(l, cube),
        "sequence": names(l, &rb.sequence),
    }))
    .line(format!("rk0({label}) = {}", r0.rank))
    .line(format!(
        "witness cube: bottom {}, atoms [{}], top {}",
        l.name(cube.bottom()),
        names(l, &cube.atoms()).join(", "),
        l.name(cube.top())
    ))
    .line(format!("rk_bot({label}) = {}", rb.rank))
    .line(format!(
        "independent sequence: [{}]",
        names(l, &rb.sequence).join(", ")
    )))
}

fn braces(l: &FiniteLattice, xs: &[usize]) -> String {
    format!("{{{}}}", names(l, xs).join(", "))
}

fn pregeometry(
    l: &FiniteLattice,
    base: Option<&str>,
    closure: Option<&str>,
) -> Result<Outcome, CliError> {
    let b = base.map(|s| element(l, s)).transpose()?.unwrap_or(l.bot());
    let g = Pregeometry::new(l, b);
    let (rank, basis) = g.geometry_rank();
    let closed = g.closed_sets();
    let closed_lattice = g.closed_set_lattice()?;
    let modular = closed_lattice.is_modular();
    let classes: Vec<Vec<String>> = g.classes().iter().map(|c| names(l, c)).collect();
    let mut result = json!({
        "base": l.name(b),
        "quasi_atoms": names(l, g.quasi_atoms()),
        "classes": classes,
        "geometry_rank": rank,
        "closed_sets": closed.iter().map(|c| names(l, c)).collect::<Vec<_>>(),
        "closed_set_lattice_modular": modular,
    });
    let mut out = Outcome::new(Value::Null)
        .line(format!("base: {}", l.name(b)))
        .line(format!(
            "quasi-atoms ({}): {}",
            g.quasi_atoms().len(),
            names(l, g.quasi_atoms()).join(", ")
        ))
        .line(format!(
            "classes: {}",
            g.classes()
                .iter()
                .map(|c| braces(l, c))
                .collect::<Vec<_>>()
                .join(" ")
        ))
        .line(format!(
            "geometry rank: {rank}, basis {}",
            braces(l, &basis)
        ))
        .line(format!("closed sets: {}", closed.len()))
        .line(format!(
            "closed-set lattice modular: {}",
            if modular { "yes" } else { "no" }
        ));
    if let Some(src) = closure {
        let set = element_list(l, src)?;
        let c = g.closure(&set)?;
        result["closure"] = json!({ "of": names(l, &set), "closure": names(l, &c) });
        out = out.line(format!("closure {} = {}", braces(l, &set), braces(l, &c)));
    }
    out.result = result;
    Ok(out.witnesses(json!({ "basis": names(l, &basis) })))
}

fn rank_axioms(
    l: &FiniteLattice,
    table: Option<&str>,
    kind: TableKind,
) -> Result<Outcome, CliError> {
    let (t, source) = match table {
        Some(path) => (
            RankTable::from_json(l, &read_payload(path, "table")?)?,
            path.to_string(),
        ),
        None => match kind {
            TableKind::Reduced => (RankTable::reduced(l), "rk0".into()),
            TableKind::Bottom => (RankTable::bottom(l), "rk_bot".into()),
            TableKind::Height => (RankTable::height_difference(l), "height".into()),
        },
    };
    let violation = check_subadditive_rank(l, &t)?;
    let dominates = t.dominates(&RankTable::reduced(l));
    let table_json: Value = serde_json::from_str(&t.to_json(l)).expect("valid JSON");
    let mut out = Outcome::new(json!({
        "table": table_json,
        "source": source,
        "passes": violation.is_none(),
        "dominates_rk0": dominates,
    }));
    match violation {
        None => {
            out = out
                .line(format!("{source}: all subadditive rank axioms hold"))
                .line(format!(
                    "dominates rk0: {}",
                    if dominates { "yes" } else { "no" }
                ));
        }
        Some(v) => {
            out = out
                .line(format!(
                    "{source}: axiom {} fails ({}) at [{}]",
                    v.axiom,
                    v.clause,
                    names(l, &v.elements).join(", ")
                ))
                .witnesses(json!({
                    "axiom": v.axiom,
                    "clause": v.clause,
                    "elements": names(l, &v.elements),
                }))
                .success(false);
        }
    }
    Ok(out)
}
