use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn latval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latval"))
        .args(args)
        .env_remove("LATVAL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = latval(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("JSON report");
    (v, o.status.code().expect("exit code"))
}

fn tmp(name: &str, contents: &str) -> String {
    let p: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    std::fs::write(&p, contents).expect("writable");
    p.to_string_lossy().into_owned()
}

const M3: &str = r#"{"elements":["bot","a","b","c","top"],"covers":[["bot","a"],["bot","b"],["bot","c"],["a","top"],["b","top"],["c","top"]]}"#;

#[test]
fn rank_of_m3() {
    let file = tmp("m3.json", M3);
    let o = latval(&["lattice", "rank", "--file", &file]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("rk0(top/bot) = 2"));
    assert!(out.contains("witness cube: bottom bot"));

    let (v, code) = json(&["lattice", "rank", "--file", &file]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["rk0"], 2);
    let cube = &v["witnesses"]["cube"];
    assert_eq!(cube["n"], 2);
    assert_eq!(cube["strict"], true);
    assert_eq!(cube["assign"][0], "bot");
    assert_eq!(cube["assign"][3], "top");
}

#[test]
fn gcd_in_q23() {
    let o = latval(&[
        "val", "gcd", "--field", "QQ", "--vals", "2,3", "--x", "4", "--y", "6",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("g = 2, coeffs (-1, 1)"));

    let (v, _) = json(&[
        "val", "gcd", "--field", "QQ", "--vals", "2,3", "--x", "4", "--y", "6",
    ]);
    let r: i64 = v["witnesses"]["r"].as_str().unwrap().parse().unwrap();
    let s: i64 = v["witnesses"]["s"].as_str().unwrap().parse().unwrap();
    assert_eq!(r * 4 + s * 6, 2);
    assert_eq!(v["result"]["vals"], serde_json::json!([1, 0]));
}

#[test]
fn empty_relation_has_no_grid() {
    let file = tmp(
        "empty.json",
        r#"{"universes":[[1,2,3],[1,2,3]],"tuples":[]}"#,
    );
    let o = latval(&["grid", "max", "--file", &file]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn grid_max_and_slice() {
    // the full 2x2x2 cube plus a stray tuple
    let mut tuples = Vec::new();
    for a in 1..=2 {
        for b in 1..=2 {
            for c in 1..=2 {
                tuples.push(format!("[{a},{b},{c}]"));
            }
        }
    }
    tuples.push("[3,3,3]".into());
    let rel = format!(
        r#"{{"universes":[[1,2,3],[1,2,3],[1,2,3]],"tuples":[{}]}}"#,
        tuples.join(",")
    );
    let file = tmp("cube.json", &rel);
    let (v, code) = json(&["grid", "max", "--file", &file]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["m"], 2);
    assert_eq!(
        v["witnesses"]["sets"],
        serde_json::json!([[1, 2], [1, 2], [1, 2]])
    );

    let (s, code) = json(&["grid", "slice", "--file", &file]);
    assert_eq!(code, 0);
    assert_eq!(s["result"]["slice_max"], 2);
    // the slice relation round-trips through the grid parser
    let saved = tmp("slice.json", &s.to_string());
    let (back, _) = json(&["grid", "max", "--file", &saved]);
    assert_eq!(back["result"]["m"], 2);
    assert_eq!(back["result"]["arity"], 2);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = latval(&["verify", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let (v, code) = json(&["verify", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(v["exit_code"], 2);
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(latval(&["lattice", "rank"]).status.code(), Some(2));
    assert_eq!(latval(&["frobnicate"]).status.code(), Some(2));
    let (v, code) = json(&["val", "gcd", "--x", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["ok"], false);

    let (v, code) = json(&["lattice", "rank", "--gen", "chain:2", "--a", "nowhere"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "lattice");
    let (v, code) = json(&[
        "val", "gcd", "--field", "QQ", "--vals", "2,3", "--x", "1/2", "--y", "1",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "valuation");
    let (_, code) = json(&[
        "ball",
        "unitshift",
        "--context",
        "GF(2)(t);vals=t,inf",
        "--alpha",
        "t",
        "--q",
        "0,1,1",
    ]);
    assert_eq!(code, 1);
    assert_eq!(latval(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_suites() {
    let o = latval(&["verify", "lattice", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    assert!(out.trim_end().ends_with("checks passed"));

    let (v, code) = json(&["verify", "all", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);
    let suites: Vec<&str> = v["result"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert_eq!(
        suites,
        ["lattice", "pregeometry", "valuation", "ball", "grid"]
    );
}

#[test]
fn json_is_deterministic_given_seed() {
    let args = [
        "ball",
        "vandermonde",
        "--group",
        "0,0",
        "--alpha",
        "t",
        "--q",
        "0,1,2",
        "--seed",
        "11",
        "--json",
    ];
    let a = latval(&args);
    let b = latval(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["verify", "valuation", "--seed", "3", "--json"];
    assert_eq!(latval(&args).stdout, latval(&args).stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_latval"))
        .args(["verify", "grid", "--json"])
        .env("LATVAL_SEED", "42")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["seed"], 42);
    let (v, _) = json(&["verify", "grid", "--seed", "5"]);
    assert_eq!(v["result"]["seed"], 5);
}

#[test]
fn timing_only_on_request() {
    let (v, _) = json(&["lattice", "check", "--gen", "pentagon"]);
    assert!(v.get("timing_ms").is_none());
    let (v, _) = json(&["lattice", "check", "--gen", "pentagon", "--timing"]);
    assert!(v["timing_ms"].is_number());
}

#[test]
fn generated_lattices_round_trip() {
    let o = latval(&["gen", "subspace:q=2,n=3"]);
    let plain = tmp("l23.json", &stdout(&o));
    let (report, _) = json(&["gen", "subspace:q=2,n=3"]);
    assert_eq!(report["result"]["size"], 16);
    let saved = tmp("l23-report.json", &report.to_string());
    for file in [plain, saved] {
        let (v, code) = json(&["lattice", "check", "--file", &file]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["size"], 16);
        assert_eq!(v["result"]["modular"], true);
        let (r, _) = json(&["lattice", "rank", "--file", &file]);
        assert_eq!(r["result"]["rk0"], 3);
    }
}

#[test]
fn pentagon_is_not_modular() {
    let (v, code) = json(&["lattice", "check", "--gen", "pentagon"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["modular"], false);
    let w = &v["witnesses"];
    assert!(w["x"].is_string() && w["a"].is_string() && w["b"].is_string());
}

#[test]
fn pregeometry_of_fano_plane() {
    let (v, code) = json(&["lattice", "pregeometry", "--gen", "subspace:q=2,n=3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["quasi_atoms"].as_array().unwrap().len(), 7);
    assert_eq!(v["result"]["geometry_rank"], 3);
    assert_eq!(v["result"]["closed_set_lattice_modular"], true);
    assert_eq!(v["result"]["closed_sets"].as_array().unwrap().len(), 16);
}

#[test]
fn rank_axiom_tables() {
    let (v, code) = json(&["lattice", "rank-axioms", "--gen", "boolean:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passes"], true);
    let saved = tmp("b3-table.json", &v.to_string());
    assert_eq!(
        json(&[
            "lattice",
            "rank-axioms",
            "--gen",
            "boolean:3",
            "--table",
            &saved
        ])
        .1,
        0
    );

    // rk(top/bot) = 1 on the square sits below rk0, so some axiom has to fail
    let lowered = tmp(
        "b2-low.json",
        r#"{"values":[["{}","{}",0],["{1}","{1}",0],["{2}","{2}",0],["{1,2}","{1,2}",0],
            ["{1}","{}",1],["{2}","{}",1],["{1,2}","{1}",1],["{1,2}","{2}",1],["{1,2}","{}",1]]}"#,
    );
    let (v, code) = json(&[
        "lattice",
        "rank-axioms",
        "--gen",
        "boolean:2",
        "--table",
        &lowered,
    ]);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["result"]["passes"], false);
    assert!(v["witnesses"]["axiom"].is_number());
}

#[test]
fn ball_commands() {
    let (v, _) = json(&[
        "ball",
        "member",
        "--context",
        "QQ(t);vals=t,t-1",
        "--group",
        "gamma=0,0",
        "--x",
        "1/(t+1)",
    ]);
    assert_eq!(v["result"]["member"], true);
    assert_eq!(v["result"]["in_ideal"], false);
    assert_eq!(v["result"]["ring_unit"], true);

    let (v, _) = json(&["ball", "mutate", "--group", "0,0", "--set", "1,t"]);
    assert_eq!(v["result"]["mutation"], serde_json::json!([1, 0]));

    let (v, _) = json(&[
        "ball", "ops", "--group", "0,0", "--other", "1,-1", "--scale", "t",
    ]);
    assert_eq!(v["result"]["meet"], serde_json::json!([1, 0]));
    assert_eq!(v["result"]["join"], serde_json::json!([0, -1]));
    assert_eq!(v["result"]["scaled"], serde_json::json!([1, 0]));

    let (v, _) = json(&["ball", "unitshift", "--alpha", "t", "--q", "0,1,2"]);
    assert_eq!(v["result"]["index"], 2);
}

#[test]
fn vandermonde_worked_case() {
    let (v, code) = json(&[
        "ball",
        "vandermonde",
        "--context",
        "QQ(t);vals=t,t-1",
        "--group",
        "0,0",
        "--alpha",
        "t",
        "--q",
        "0,1,2",
    ]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["certified"], true);
    assert_eq!(r["collapsing"], serde_json::json!([2]));
    assert_eq!(r["g"], serde_json::json!([[-1, 0], [0, -1], [0, 0]]));
    assert_eq!(r["h"], serde_json::json!([0, 0]));
    assert_eq!(
        v["witnesses"]["inverse"],
        serde_json::json!([["1", "-3/2", "1/2"], ["0", "2", "-1"], ["0", "-1/2", "1/2"]])
    );
}

#[test]
fn exported_intervals_feed_the_lattice_commands() {
    let (v, code) = json(&[
        "ball",
        "export",
        "--context",
        "QQ(t);vals=t,t-1,inf",
        "--low",
        "2,0,1",
        "--high",
        "0,0,0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["size"], 6);
    assert_eq!(v["result"]["rk0"], 2);
    assert_eq!(v["result"]["positive_gaps"], 2);
    let saved = tmp("export.json", &v.to_string());
    let (r, _) = json(&["lattice", "rank", "--file", &saved]);
    assert_eq!(r["result"]["rk0"], 2);
    assert_eq!(r["result"]["a"], "(0,0,0)");
}

#[test]
fn valuation_commands() {
    let (v, _) = json(&["val", "u", "--field", "QQ", "--vals", "2,3"]);
    assert!(v["result"]["vals_u"][0].as_i64().unwrap() > 0);
    assert!(v["result"]["vals_one_minus_u"][1].as_i64().unwrap() > 0);

    let (v, _) = json(&[
        "val", "approx", "--field", "QQ", "--vals", "2,3", "--a", "1", "--b", "2",
    ]);
    assert!(v["result"]["val1_z_minus_a"].as_i64().unwrap() > 0);
    assert!(v["result"]["val2_z_minus_b"].as_i64().unwrap() > 0);

    let (v, _) = json(&[
        "val",
        "crt",
        "--field",
        "QQ",
        "--vals",
        "2,3,5",
        "--residues",
        "1,2,3",
    ]);
    let x: i64 = v["result"]["x"].as_str().unwrap().parse().unwrap();
    assert_eq!(
        (x.rem_euclid(2), x.rem_euclid(3), x.rem_euclid(5)),
        (1, 2, 3)
    );

    let (v, _) = json(&[
        "val", "asdelta", "--field", "GF(2)(t)", "--vals", "t,inf", "--y", "1/(1+t)",
    ]);
    assert_eq!(v["result"]["delta"], 1);

    let (v, _) = json(&["val", "compare", "--field", "QQ(t)", "--vals", "t,t-1,inf"]);
    let pairs = v["result"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    assert!(pairs.iter().all(|p| p["incomparable"] == true));
}

#[test]
fn field_commands() {
    assert_eq!(
        stdout(&latval(&["field", "arith", "--expr", "(t^2-1)/(t-1)"])).trim(),
        "t+1"
    );
    assert_eq!(
        stdout(&latval(&[
            "field", "evaluate", "--expr", "1/t", "--at", "0"
        ]))
        .trim(),
        "pole"
    );
    assert_eq!(
        stdout(&latval(&[
            "field",
            "evaluate",
            "--expr",
            "(2*t+1)/(t-3)",
            "--at",
            "inf"
        ]))
        .trim(),
        "2"
    );
    let (v, _) = json(&[
        "field",
        "series",
        "--field",
        "GF(3)(t)",
        "--expr",
        "1/(1-t)",
        "--precision",
        "5",
    ]);
    assert_eq!(v["result"]["coeffs"], serde_json::json!([1, 1, 1, 1, 1]));

    let (v, code) = json(&[
        "field",
        "asroot",
        "--field",
        "GF(3)(t)",
        "--expr",
        "t/(1+t^2)",
        "--precision",
        "24",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verified"], true);
    let (_, code) = json(&["field", "asroot", "--field", "GF(3)(t)", "--expr", "1+t"]);
    assert_eq!(code, 1);
}
