use clap::Subcommand;
use latval_core::grid::{Grid, GridRelation};
use serde_json::{json, Value};

use crate::input::read_payload;
use crate::report::{CliError, Outcome};

#[derive(Subcommand, Debug)]
pub enum GridCmd {
    /// The largest grid contained in a relation
    Max {
        /// Relation JSON `{"universes": [...], "tuples": [...]}`
        #[arg(long)]
        file: String,
    },
    /// A last-coordinate value whose slice still contains an m-grid
    Slice {
        #[arg(long)]
        file: String,
        /// Grid size (default: the maximum)
        #[arg(long)]
        m: Option<usize>,
    },
}

pub fn run(cmd: &GridCmd) -> Result<Outcome, CliError> {
    match cmd {
        GridCmd::Max { file } => max(&load(file)?),
        GridCmd::Slice { file, m } => slice(&load(file)?, *m),
    }
}

fn load(path: &str) -> Result<GridRelation, CliError> {
    Ok(GridRelation::from_json(&read_payload(path, "relation")?)?)
}

fn sets_json(y: &GridRelation, g: &Grid) -> Value {
    json!(g
        .sets
        .iter()
        .enumerate()
        .map(|(c, s)| s.iter().map(|&i| y.value(c, i).clone()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn set_lines(y: &GridRelation, g: &Grid) -> Vec<String> {
    g.sets
        .iter()
        .enumerate()
        .map(|(c, s)| {
            let vs: Vec<String> = s.iter().map(|&i| y.value(c, i).to_string()).collect();
            format!("S_{} = {{{}}}", c + 1, vs.join(", "))
        })
        .collect()
}

fn max(y: &GridRelation) -> Result<Outcome, CliError> {
    let g = y.max_grid();
    Ok(
        Outcome::new(json!({ "m": g.m, "arity": y.arity(), "tuples": y.tuples().len() }))
            .witnesses(json!({ "sets": sets_json(y, &g) }))
            .line(g.m.to_string())
            .lines(if g.m > 0 {
                set_lines(y, &g)
            } else {
                Vec::new()
            }),
    )
}

fn slice(y: &GridRelation, m: Option<usize>) -> Result<Outcome, CliError> {
    let m = m.unwrap_or_else(|| y.max_grid().m);
    let w = y.slice_witness(m)?;
    let n = y.arity();
    let b = y.value(n - 1, w.b).clone();
    let slice_max = w.slice.as_ref().map(|s| s.max_grid().m);
    let relation: Value = match &w.slice {
        Some(s) => serde_json::from_str(&s.to_json()).expect("valid JSON"),
        None => Value::Null,
    };
    let mut out = Outcome::new(json!({
        "m": m,
        "b": b,
        "relation": relation,
        "slice_max": slice_max,
    }))
    .witnesses(json!({ "sets": sets_json(y, &w.grid) }))
    .line(format!("b = {b}"));
    if let Some(k) = slice_max {
        out = out.line(format!("slice at b holds a grid of size {k} >= {m}"));
    }
    Ok(out.lines(set_lines(y, &w.grid)))
}
