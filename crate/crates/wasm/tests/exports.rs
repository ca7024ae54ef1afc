use latval_wasm::{artin_schreier, grid_max, lattice_report};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("JSON")
}

#[test]
fn lattice_reports() {
    let v = parse(lattice_report("subspace:q=2,n=3"));
    assert_eq!(v["size"], 16);
    assert_eq!(v["modular"], true);
    assert_eq!(v["rk0"], 3);
    assert_eq!(v["pregeometry"]["quasi_atoms"].as_array().unwrap().len(), 7);
    assert_eq!(v["pregeometry"]["rank"], 3);
    assert_eq!(v["cube"].as_array().unwrap().len(), 8);

    let p = parse(lattice_report("pentagon"));
    assert_eq!(p["modular"], false);
    assert!(p["witness"]["x"].is_string());
    assert!(p.get("pregeometry").is_none());

    assert!(parse(lattice_report("nonsense:3"))["error"].is_string());
}

#[test]
fn grids() {
    let full = parse(grid_max("4,4", 1.0, 0));
    assert_eq!(full["m"], 4);
    assert_eq!(full["tuples"].as_array().unwrap().len(), 16);
    let empty = parse(grid_max("3,3,3", 0.0, 0));
    assert_eq!(empty["m"], 0);
    assert_eq!(grid_max("5,5", 0.5, 9), grid_max("5,5", 0.5, 9));
    assert!(parse(grid_max("100,100", 0.5, 0))["error"].is_string());
    assert!(parse(grid_max("3,x", 0.5, 0))["error"].is_string());
}

#[test]
fn artin_schreier_roots() {
    let v = parse(artin_schreier(2, "t", 8));
    assert_eq!(v["verified"], true);
    assert_eq!(v["coeffs"], serde_json::json!([0, 1, 1, 0, 1, 0, 0, 0]));
    let w = parse(artin_schreier(3, "t/(1-t)", 16));
    assert_eq!(w["verified"], true);
    assert!(parse(artin_schreier(2, "1+t", 8))["error"].is_string());
    assert!(parse(artin_schreier(4, "t", 8))["error"].is_string());
}
