use std::fs;

use clap::Args;
use latval_core::field::{parse_element, Field};
use latval_core::gen::generate;
use latval_core::lattice::{Elem, FiniteLattice};
use latval_core::valuation::split_top_level;
use serde_json::Value;

use crate::report::CliError;

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct LatticeSource {
    /// Lattice JSON file, or a saved `--json` report containing one
    #[arg(long)]
    pub file: Option<String>,
    /// Generator spec such as `subspace:q=2,n=3`
    #[arg(long)]
    pub gen: Option<String>,
}

impl LatticeSource {
    pub fn load(&self) -> Result<FiniteLattice, CliError> {
        match (&self.file, &self.gen) {
            (Some(path), _) => {
                let src = read_payload(path, "lattice")?;
                Ok(FiniteLattice::from_json(&src)?)
            }
            (None, Some(spec)) => Ok(generate(spec)?.lattice),
            (None, None) => Err(CliError::usage("one of --file or --gen is required")),
        }
    }
}

/// Reads a file, unwrapping `result.<key>` if the file is a saved report.
pub fn read_payload(path: &str, key: &str) -> Result<String, CliError> {
    let src = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
    if let Ok(Value::Object(m)) = serde_json::from_str::<Value>(&src) {
        if let Some(inner) = m.get("result").and_then(|r| r.get(key)) {
            return Ok(inner.to_string());
        }
    }
    Ok(src)
}

pub fn element(l: &FiniteLattice, name: &str) -> Result<Elem, CliError> {
    Ok(l.id(name)?)
}

pub fn element_list(l: &FiniteLattice, names: &str) -> Result<Vec<Elem>, CliError> {
    names
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| element(l, s))
        .collect()
}

pub fn names(l: &FiniteLattice, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&x| l.name(x).to_string()).collect()
}

pub fn parse<F: Field>(f: &F, src: &str) -> Result<F::Elem, CliError> {
    Ok(parse_element(f, src)?)
}

/// Comma-separated field elements; commas inside parentheses do not split.
pub fn parse_list<F: Field>(f: &F, src: &str) -> Result<Vec<F::Elem>, CliError> {
    split_top_level(src)
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| parse(f, s))
        .collect()
}

/// `gamma=1,0` or just `1,0`.
pub fn gamma(src: &str) -> Result<Vec<i64>, CliError> {
    let body = src.trim();
    let body = body.strip_prefix("gamma=").unwrap_or(body);
    body.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad bound `{s}` in `{src}`")))
        })
        .collect()
}
