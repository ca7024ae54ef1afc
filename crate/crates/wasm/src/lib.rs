//! Browser bindings for the latval demo page. Every export takes plain
//! strings and numbers and returns a JSON string: either the payload or
//! `{"error": message}`.

use latval_core::field::series::{artin_schreier_root, series_expand};
use latval_core::field::{parse_element, FunctionField, PrimeField};
use latval_core::gen::generate;
use latval_core::grid::GridRelation;
use latval_core::lattice::{bottom_rank, reduced_rank, FiniteLattice};
use latval_core::pregeometry::Pregeometry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub const MAX_PRECISION: usize = 256;
pub const MAX_CELLS: usize = 4096;

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn names(l: &FiniteLattice, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| l.name(x).to_string()).collect()
}

/// Structure of a generated lattice: Hasse diagram, modularity and ranks.
#[wasm_bindgen]
pub fn lattice_report(spec: &str) -> String {
    finish(lattice_value(spec))
}

fn lattice_value(spec: &str) -> Result<Value, String> {
    let l = generate(spec).map_err(|e| e.to_string())?.lattice;
    let witness = l
        .modular_witness()
        .map(|w| json!({ "x": l.name(w.x), "a": l.name(w.a), "b": l.name(w.b) }));
    let r0 = reduced_rank(&l, l.top(), l.bot()).map_err(|e| e.to_string())?;
    let rb = bottom_rank(&l, l.top(), l.bot()).map_err(|e| e.to_string())?;
    let heights: Vec<u32> = l.elements().map(|x| l.height(x)).collect();
    let mut out = json!({
        "spec": spec,
        "size": l.len(),
        "elements": l.names(),
        "heights": heights,
        "covers": l.covers(),
        "modular": witness.is_none(),
        "witness": witness,
        "rk0": r0.rank,
        "rk_bot": rb.rank,
        "cube": names(&l, &r0.cube.assign),
    });
    if witness.is_none() {
        let g = Pregeometry::new(&l, l.bot());
        let (rank, basis) = g.geometry_rank();
        out["pregeometry"] = json!({
            "quasi_atoms": names(&l, g.quasi_atoms()),
            "rank": rank,
            "basis": names(&l, &basis),
        });
    }
    Ok(out)
}

/// A random relation on `[k_1] x ... x [k_n]` keeping each tuple with
/// probability `density`, and its largest grid.
#[wasm_bindgen]
pub fn grid_max(sizes: &str, density: f64, seed: u32) -> String {
    finish(grid_value(sizes, density, seed))
}

fn grid_value(sizes: &str, density: f64, seed: u32) -> Result<Value, String> {
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad size `{s}`")))
        .collect::<Result<_, _>>()?;
    let cells = sizes.iter().try_fold(1usize, |acc, &k| acc.checked_mul(k));
    if !cells.is_some_and(|c| c <= MAX_CELLS) {
        return Err(format!("at most {MAX_CELLS} cells"));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err("density must lie in [0, 1]".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let y = GridRelation::from_fn(&sizes, |_| rng.gen_bool(density)).map_err(|e| e.to_string())?;
    let g = y.max_grid();
    Ok(json!({
        "sizes": sizes,
        "tuples": y.tuples(),
        "m": g.m,
        "sets": g.sets,
    }))
}

/// Solves `y^p - y = x` modulo `t^n` for `x` given as a rational function
/// over GF(p) regular at 0 with zero constant term.
#[wasm_bindgen]
pub fn artin_schreier(p: u32, expr: &str, n: u32) -> String {
    finish(artin_schreier_value(p, expr, n as usize))
}

fn artin_schreier_value(p: u32, expr: &str, n: usize) -> Result<Value, String> {
    if n == 0 || n > MAX_PRECISION {
        return Err(format!("precision must be between 1 and {MAX_PRECISION}"));
    }
    let k = PrimeField::new(p as u64).map_err(|e| e.to_string())?;
    let f = FunctionField::new(k, "t");
    let x = parse_element(&f, expr).map_err(|e| e.to_string())?;
    let xs = series_expand(&f, &x, n).map_err(|e| e.to_string())?;
    let y = artin_schreier_root(&xs).map_err(|e| e.to_string())?;
    Ok(json!({
        "x": xs.format("t"),
        "y": y.format("t"),
        "coeffs": y.coeffs(),
        "verified": y.artin_schreier() == xs,
    }))
}
