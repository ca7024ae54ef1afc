//! Property suites run by `latval verify`: every module invariant checked
//! over the generated corpus and seeded random samples.

use std::collections::HashSet;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ball::{BallContext, BallGroup};
use crate::field::series::{artin_schreier_root, TruncatedSeries};
use crate::field::{parse_element, rat, Field, FunctionField, PrimeField, Rationals};
use crate::gen::{generate, Generated};
use crate::grid::GridRelation;
use crate::lattice::independence::independent_unchecked;
use crate::lattice::{
    bottom_rank, check_subadditive_rank, cube_from_coindependent, cube_from_sequence, reduced_rank,
    split_cube, Elem, FiniteLattice, RankTable,
};
use crate::pregeometry::{is_quasi_atom, Pregeometry};
use crate::valuation::{parse_places, BezoutCase, IntersectionRing, Val, ValuedField};

pub const SUITES: [&str; 6] = ["lattice", "pregeometry", "valuation", "ball", "grid", "all"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`")]
pub struct SuiteUnknown(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of instances or samples examined.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Outcome = Result<usize, String>;

fn check(name: &str, f: impl FnOnce() -> Outcome) -> Check {
    match f() {
        Ok(cases) => Check {
            name: name.into(),
            passed: true,
            cases,
            failure: None,
        },
        Err(msg) => Check {
            name: name.into(),
            passed: false,
            cases: 0,
            failure: Some(msg),
        },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs one named suite, or every suite for `all`.
pub fn run(name: &str, seed: u64) -> Result<Vec<SuiteReport>, SuiteUnknown> {
    let one = |s: &str| -> SuiteReport {
        let checks = match s {
            "lattice" => lattice_suite(),
            "pregeometry" => pregeometry_suite(),
            "valuation" => valuation_suite(seed),
            "ball" => ball_suite(seed),
            "grid" => grid_suite(seed),
            _ => unreachable!(),
        };
        SuiteReport {
            suite: s.into(),
            seed,
            checks,
        }
    };
    match name {
        "all" => Ok(SUITES[..5].iter().map(|s| one(s)).collect()),
        s if SUITES.contains(&s) => Ok(vec![one(s)]),
        s => Err(SuiteUnknown(s.into())),
    }
}

/// Generator specs for the test corpus.
pub const CORPUS: &[&str] = &[
    "boolean:0",
    "boolean:1",
    "boolean:2",
    "boolean:3",
    "boolean:4",
    "boolean:5",
    "chain:0",
    "chain:1",
    "chain:2",
    "chain:4",
    "subspace:q=2,n=2",
    "subspace:q=2,n=3",
    "subspace:q=3,n=2",
    "subspace:q=3,n=3",
    "subspace:q=2,n=4",
    "product:lengths=2,3",
    "product:lengths=1,1,2",
    "product:lengths=2,2",
    "product:lengths=3,3,3",
    "subgroups:d=2,2",
    "subgroups:d=4",
    "subgroups:d=3",
    "subgroups:d=2,4",
    "subgroups:d=3,3",
    "subgroups:d=2,2,2",
    "subgroups:d=12",
    "subgroups:d=2,6",
    "subgroups:d=4,4",
    "diamond:1",
    "diamond:2",
    "diamond:3",
    "diamond:4",
    "pentagon",
    "interval:boolean:4;lo={1};hi={1,2,3,4}",
    "interval:product:lengths=2,3;lo=(1,0);hi=(2,3)",
    "interval:diamond:3;lo=a1;hi=a1",
];

pub fn corpus() -> Vec<(String, Generated)> {
    CORPUS
        .iter()
        .map(|s| (s.to_string(), generate(s).expect("corpus specs are valid")))
        .collect()
}

fn modular_corpus(max: usize) -> Vec<(String, Generated)> {
    corpus()
        .into_iter()
        .filter(|(_, g)| g.lattice.is_modular() && g.lattice.len() <= max)
        .collect()
}

/// Every sequence of length at most `max_len` over `items`.
pub fn sequences(items: &[Elem], max_len: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for &x in items {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Assignments of `n` indices to groups `1..` or to `0` (unused), with
/// groups labelled in order of first use.
fn groupings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    loop {
        let mut next_label = 1;
        let canonical = cur.iter().all(|&g| {
            if g == 0 || g < next_label {
                true
            } else if g == next_label {
                next_label += 1;
                true
            } else {
                false
            }
        });
        if canonical {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < n {
            cur[i] += 1;
            if cur[i] <= n {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

/// Checks the four independence laws on one sequence over `base`.
pub fn independence_laws(
    l: &FiniteLattice,
    seq: &[Elem],
    base: Elem,
    groups: &[Vec<usize>],
) -> Result<(), String> {
    let ind = independent_unchecked(l, seq, base);
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    let mut rev = seq.to_vec();
    rev.reverse();
    ensure(
        independent_unchecked(l, &sorted, base) == ind
            && independent_unchecked(l, &rev, base) == ind,
        || format!("permutation changes independence of {seq:?} over {base}"),
    )?;
    for k in 0..=seq.len() {
        let (c, a) = seq.split_at(k);
        let cj = l.join_all(c.iter().copied().chain([base]));
        let mut rest = vec![cj];
        rest.extend_from_slice(a);
        let split = independent_unchecked(l, c, base) && independent_unchecked(l, &rest, base);
        ensure(split == ind, || {
            format!("collapse fails for {seq:?} at {k} over {base}")
        })?;
    }
    if !ind {
        return Ok(());
    }
    for g in groups {
        let labels = g.iter().copied().max().unwrap_or(0);
        let joins: Vec<Elem> = (1..=labels)
            .map(|lab| {
                l.join_all(
                    (0..seq.len())
                        .filter(|&i| g[i] == lab)
                        .map(|i| seq[i])
                        .chain([base]),
                )
            })
            .collect();
        ensure(independent_unchecked(l, &joins, base), || {
            format!("grouping {g:?} of {seq:?} over {base} is not independent")
        })?;
    }
    for c in l.elements() {
        let image: Vec<Elem> = seq.iter().map(|&x| l.meet(x, c)).collect();
        ensure(independent_unchecked(l, &image, l.meet(base, c)), || {
            format!("meet with {c} breaks independence of {seq:?} over {base}")
        })?;
    }
    Ok(())
}

/// Exhaustive over all bases and sequences of length ≤ 4 when the lattice
/// has at most 32 elements, otherwise `random` random sequences over `⊥`.
pub fn independence_algebra(l: &FiniteLattice, rng: &mut dyn RngCore, random: usize) -> Outcome {
    let mut cases = 0;
    let group_sets: Vec<Vec<Vec<usize>>> = (0..=4).map(groupings).collect();
    if l.len() <= 32 {
        for base in l.elements() {
            let above = l.interval_elements(base, l.top());
            for seq in sequences(&above, 4) {
                independence_laws(l, &seq, base, &group_sets[seq.len()])?;
                cases += 1;
            }
        }
    } else {
        let all: Vec<Elem> = l.elements().collect();
        for _ in 0..random {
            let len = rng.gen_range(1..=4);
            // bias toward independent sequences by building them greedily
            let mut seq = Vec::new();
            let mut acc = l.bot();
            for _ in 0..len {
                let x = all[rng.gen_range(0..all.len())];
                if rng.gen_bool(0.3) || l.meet(x, acc) == l.bot() {
                    acc = l.join(acc, x);
                    seq.push(x);
                }
            }
            independence_laws(l, &seq, l.bot(), &group_sets[seq.len()])?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn rank_tables(l: &FiniteLattice) -> Outcome {
    let reduced = RankTable::reduced(l);
    let height = RankTable::height_difference(l);
    let candidates = [
        ("reduced", reduced.clone()),
        ("height", height.clone()),
        ("2*height", height.scaled(2)),
        ("reduced+height", reduced.sum(&height)),
        ("2*reduced", reduced.scaled(2)),
    ];
    for (name, t) in &candidates {
        let verdict = check_subadditive_rank(l, t).map_err(|e| e.to_string())?;
        ensure(verdict.is_none(), || {
            format!("{name} table fails: {verdict:?}")
        })?;
        ensure(t.dominates(&reduced), || {
            format!("{name} table does not dominate rk0")
        })?;
    }
    Ok(candidates.len())
}

fn rank_laws(l: &FiniteLattice) -> Outcome {
    let r = RankTable::reduced(l);
    let b = RankTable::bottom(l);
    let get = |t: &RankTable, a, c| t.get(a, c).expect("comparable");
    let mut cases = 0;
    for a in l.elements() {
        for c in l.down_set(a).iter() {
            for m in l.interval_elements(c, a) {
                ensure(get(&r, a, c) <= get(&r, a, m) + get(&r, m, c), || {
                    format!("rk0 not subadditive on {a} >= {m} >= {c}")
                })?;
                cases += 1;
            }
        }
    }
    for x in l.elements() {
        for y in l.elements() {
            let (j, m) = (l.join(x, y), l.meet(x, y));
            ensure(get(&r, j, m) == get(&r, x, m) + get(&r, y, m), || {
                format!("rk0 not additive on {x}, {y}")
            })?;
            ensure(get(&b, j, m) >= get(&b, x, m) + get(&b, y, m), || {
                format!("rk_bot not superadditive on {x}, {y}")
            })?;
            ensure(get(&b, j, x) == get(&b, y, m), || {
                format!("rk_bot(x v y / x) != rk_bot(y / x ^ y) on {x}, {y}")
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn splitting(l: &FiniteLattice) -> Outcome {
    let mut cases = 0;
    for z in l.elements() {
        for x in l.down_set(z).iter() {
            let seq = bottom_rank(l, z, x).map_err(|e| e.to_string())?.sequence;
            let cube = cube_from_sequence(l, &seq, x).map_err(|e| e.to_string())?;
            for y in l.interval_elements(x, cube.top()) {
                let (lo, hi) = split_cube(l, &cube, y).map_err(|e| e.to_string())?;
                ensure(lo.n + hi.n == cube.n, || {
                    format!("split dims at {x} <= {y} <= {z}")
                })?;
                ensure(
                    lo.inside(l, x, y)
                        && hi.inside(l, y, cube.top())
                        && lo.strict
                        && hi.strict
                        && lo.is_homomorphism(l)
                        && hi.is_homomorphism(l),
                    || format!("split cubes misplaced at {x} <= {y} <= {z}"),
                )?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn cube_round_trips(l: &FiniteLattice) -> Outcome {
    let all: Vec<Elem> = l.elements().collect();
    let mut cases = 0;
    for seq in sequences(&all, 3) {
        let (b, t) = (l.bot(), l.top());
        if seq.iter().all(|&x| x != b) && independent_unchecked(l, &seq, b) {
            let c = cube_from_sequence(l, &seq, b).map_err(|e| e.to_string())?;
            ensure(
                c.atoms() == seq && c.is_homomorphism(l) && c.is_injective(),
                || format!("sequence {seq:?} does not round-trip"),
            )?;
            cases += 1;
        }
        let co = crate::lattice::is_coindependent(l, &seq, t).map_err(|e| e.to_string())?;
        if seq.iter().all(|&x| x != t) && co {
            let c = cube_from_coindependent(l, &seq, t).map_err(|e| e.to_string())?;
            ensure(
                c.coatoms() == seq && c.top() == t && c.is_homomorphism(l),
                || format!("co-independent {seq:?} does not round-trip"),
            )?;
            cases += 1;
        }
    }
    Ok(cases)
}

pub fn lattice_suite() -> Vec<Check> {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    vec![
        check("modular law matches construction", || {
            for (spec, g) in &corpus {
                let l = &g.lattice;
                if let Some(m) = g.expected.modular {
                    ensure(l.is_modular() == m, || format!("{spec}: modularity"))?;
                }
                if let Some(w) = l.modular_witness() {
                    let lhs = l.meet(l.join(w.x, w.a), w.b);
                    let rhs = l.join(l.meet(w.x, w.b), w.a);
                    ensure(l.leq(w.a, w.b) && lhs != rhs, || {
                        format!("{spec}: bad witness")
                    })?;
                }
            }
            Ok(corpus.len())
        }),
        check("reduced rank matches metadata", || {
            let mut cases = 0;
            for (spec, g) in &corpus {
                let l = &g.lattice;
                let r = reduced_rank(l, l.top(), l.bot()).map_err(|e| e.to_string())?;
                if let Some(expected) = g.expected.rk0 {
                    ensure(r.rank == expected, || {
                        format!("{spec}: rk0 {} != {expected}", r.rank)
                    })?;
                    cases += 1;
                }
                ensure(
                    r.cube.is_homomorphism(l)
                        && r.cube.is_injective()
                        && r.cube.n == r.rank as usize,
                    || format!("{spec}: witness cube"),
                )?;
            }
            Ok(cases)
        }),
        check("subadditive rank tables dominate rk0", || {
            let mut cases = 0;
            for (spec, g) in modular_corpus(64) {
                cases += rank_tables(&g.lattice).map_err(|e| format!("{spec}: {e}"))?;
            }
            Ok(cases)
        }),
        check(
            "rk0 subadditive and modular-additive, rk_bot superadditive",
            || {
                let mut cases = 0;
                for (spec, g) in modular_corpus(32) {
                    cases += rank_laws(&g.lattice).map_err(|e| format!("{spec}: {e}"))?;
                }
                Ok(cases)
            },
        ),
        check("cubes split along intermediate elements", || {
            let mut cases = 0;
            for (spec, g) in modular_corpus(32) {
                cases += splitting(&g.lattice).map_err(|e| format!("{spec}: {e}"))?;
            }
            Ok(cases)
        }),
        check("cube and sequence round trips", || {
            let mut cases = 0;
            for (spec, g) in corpus.iter().filter(|(_, g)| g.lattice.len() <= 32) {
                cases += cube_round_trips(&g.lattice).map_err(|e| format!("{spec}: {e}"))?;
            }
            Ok(cases)
        }),
        check("independence algebra", || {
            let mut cases = 0;
            for (spec, g) in &corpus {
                cases += independence_algebra(&g.lattice, &mut rng, 1000)
                    .map_err(|e| format!("{spec}: {e}"))?;
            }
            Ok(cases)
        }),
    ]
}

/// Exchange, closure laws and V-meet law for one instance.
pub fn pregeometry_laws(l: &FiniteLattice) -> Outcome {
    let p = Pregeometry::new(l, l.bot());
    let q = p.quasi_atoms().to_vec();
    let mut cases = 0;
    ensure(q.len() <= 16, || {
        "too many quasi-atoms for exhaustive checks".into()
    })?;
    ensure(p.classes_are_transitive(), || {
        "classes not transitive".into()
    })?;
    let closed = p.closed_sets();
    let closed_set: HashSet<Vec<Elem>> = closed.iter().cloned().collect();
    for mask in 0u32..1 << q.len() {
        let a: Vec<Elem> = (0..q.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| q[i])
            .collect();
        let cl = p.closure(&a).map_err(|e| e.to_string())?;
        ensure(closed_set.contains(&cl), || {
            format!("closure of {a:?} is not some V(x)")
        })?;
        ensure(a.iter().all(|x| cl.contains(x)), || {
            format!("closure of {a:?} not extensive")
        })?;
        ensure(p.closure(&cl).map_err(|e| e.to_string())? == cl, || {
            format!("closure of {a:?} not idempotent")
        })?;
        for &x in &q {
            if cl.contains(&x) {
                continue;
            }
            let mut ax = a.clone();
            ax.push(x);
            let cl_ax = p.closure(&ax).map_err(|e| e.to_string())?;
            ensure(cl.iter().all(|y| cl_ax.contains(y)), || {
                "closure not monotone".into()
            })?;
            for &y in &q {
                if cl.contains(&y) || !cl_ax.contains(&y) {
                    continue;
                }
                let mut ay = a.clone();
                ay.push(y);
                ensure(
                    p.closure(&ay).map_err(|e| e.to_string())?.contains(&x),
                    || format!("exchange fails for {a:?}, {x}, {y}"),
                )?;
                cases += 1;
            }
        }
        if a.len() <= 4 {
            let lattice_ind = independent_unchecked(l, &a, l.bot());
            ensure(
                p.is_independent_set(&a).map_err(|e| e.to_string())? == lattice_ind,
                || format!("independence disagrees on {a:?}"),
            )?;
        }
    }
    for c in &closed {
        ensure(p.closure(c).map_err(|e| e.to_string())? == *c, || {
            "V(x) not closed".into()
        })?;
    }
    for x in l.elements() {
        for y in l.elements() {
            let vx = p.v_of(x);
            let vy = p.v_of(y);
            let both: Vec<Elem> = vx.iter().copied().filter(|a| vy.contains(a)).collect();
            ensure(both == p.v_of(l.meet(x, y)), || {
                format!("V-meet law fails on {x}, {y}")
            })?;
            cases += 1;
        }
    }
    let cl_lattice = p.closed_set_lattice().map_err(|e| e.to_string())?;
    ensure(cl_lattice.is_modular(), || {
        "closed-set lattice is not modular".into()
    })?;
    for a in l.elements().filter(|&a| a != l.bot()) {
        ensure(l.down_set(a).iter().any(|x| q.contains(&x)), || {
            format!("no quasi-atom below {a}")
        })?;
    }
    let all: Vec<Elem> = l.elements().collect();
    for seq in sequences(&q, 3) {
        if !independent_unchecked(l, &seq, l.bot()) {
            continue;
        }
        for i in 0..seq.len() {
            for &b in &q {
                if p.equivalent(seq[i], b) {
                    let mut s = seq.clone();
                    s[i] = b;
                    ensure(independent_unchecked(l, &s, l.bot()), || {
                        format!("substituting {b} into {seq:?} breaks independence")
                    })?;
                }
            }
        }
    }
    let bot = l.bot();
    let indep = |s: &[Elem]| independent_unchecked(l, s, bot);
    for &x in &all {
        for &a in &q {
            for &b in &all {
                if indep(&[x, a])
                    && indep(&[x, b])
                    && indep(&[a, b])
                    && !indep(&[x, a, b])
                    && x != bot
                    && b != bot
                {
                    let w = l.meet(l.join(a, b), x);
                    ensure(is_quasi_atom(l, bot, w) && !indep(&[w, a, b]), || {
                        format!("three-fold witness fails on {x}, {a}, {b}")
                    })?;
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

pub fn pregeometry_suite() -> Vec<Check> {
    vec![
        check("pregeometry laws on modular instances", || {
            let mut cases = 0;
            for (spec, g) in modular_corpus(32) {
                cases += pregeometry_laws(&g.lattice).map_err(|e| format!("{spec}: {e}"))?;
            }
            Ok(cases)
        }),
        check("quasi-atom counts and geometry rank match metadata", || {
            let mut cases = 0;
            for (spec, g) in corpus() {
                let l = &g.lattice;
                let p = Pregeometry::new(l, l.bot());
                if let Some(expected) = g.expected.quasi_atoms {
                    ensure(p.quasi_atoms().len() == expected, || {
                        format!("{spec}: |Q| = {} != {expected}", p.quasi_atoms().len())
                    })?;
                    cases += 1;
                }
                if spec.starts_with("subspace") && l.is_modular() {
                    let rk = reduced_rank(l, l.top(), l.bot()).map_err(|e| e.to_string())?;
                    ensure(p.geometry_rank().0 == rk.rank as usize, || {
                        format!("{spec}: geometry rank")
                    })?;
                }
            }
            let l = generate("subspace:q=2,n=3")
                .map_err(|e| e.to_string())?
                .lattice;
            let p = Pregeometry::new(&l, l.bot());
            ensure(
                p.geometry_rank().0 == 3 && p.quasi_atoms().len() == 7,
                || "L(F_2^3) geometry".into(),
            )?;
            Ok(cases + 1)
        }),
    ]
}

fn nonzero<F: Field>(f: &F, rng: &mut dyn RngCore, size: u32) -> F::Elem {
    loop {
        let x = f.random_elem(rng, size);
        if !f.is_zero(&x) {
            return x;
        }
    }
}

/// Gcd law on `pairs` random pairs of ring elements.
pub fn gcd_law<F: ValuedField>(
    ring: &IntersectionRing<F>,
    rng: &mut dyn RngCore,
    pairs: usize,
) -> Outcome {
    let f = ring.field();
    for _ in 0..pairs {
        let x = f.random_integral(rng, ring.places(), 3);
        let y = f.random_integral(rng, ring.places(), 3);
        let b = ring.bezout_gcd(&x, &y).map_err(|e| e.to_string())?;
        let target: Vec<Val> = ring
            .vals(&x)
            .iter()
            .zip(ring.vals(&y))
            .map(|(a, c)| *a.min(&c))
            .collect();
        ensure(ring.vals(&b.g) == target, || {
            format!(
                "gcd of {} and {} has wrong valuations",
                f.format(&x),
                f.format(&y)
            )
        })?;
        let combo = f.add(&f.mul(&b.r, &x), &f.mul(&b.s, &y));
        ensure(
            combo == b.g && ring.contains(&b.r) && ring.contains(&b.s),
            || format!("bad coefficients for {} and {}", f.format(&x), f.format(&y)),
        )?;
        if ring.places().len() == 2 {
            ensure(b.case != BezoutCase::Idempotent, || {
                "two places need no idempotents".into()
            })?;
        }
        if !f.is_zero(&b.g) {
            let qx = f.div(&x, &b.g).map_err(|e| e.to_string())?;
            let qy = f.div(&y, &b.g).map_err(|e| e.to_string())?;
            ensure(ring.contains(&qx) && ring.contains(&qy), || {
                "g does not divide".into()
            })?;
        }
    }
    Ok(pairs)
}

/// u-element signs, the two-maximal-ideal structure and approximation witnesses.
pub fn approximation_law<F: ValuedField>(
    ring: &IntersectionRing<F>,
    rng: &mut dyn RngCore,
    samples: usize,
) -> Outcome {
    let f = ring.field();
    let (p1, p2) = (&ring.places()[0], &ring.places()[1]);
    let u = ring.u_element().map_err(|e| e.to_string())?;
    let cu = f.sub(&f.one(), &u);
    ensure(
        f.val(p1, &u).is_positive()
            && !f.val(p2, &u).is_positive()
            && f.val(p2, &cu).is_positive()
            && !f.val(p1, &cu).is_positive(),
        || "u-element signs".into(),
    )?;
    for _ in 0..samples {
        let x = f.random_integral(rng, ring.places(), 3);
        ensure(
            ring.is_unit(&x) || f.val(p1, &x).is_positive() || f.val(p2, &x).is_positive(),
            || "non-unit outside both maximal ideals".into(),
        )?;
        let a = f.random_integral(rng, &ring.places()[..1], 3);
        let b = f.random_integral(rng, &ring.places()[1..], 3);
        let w = ring.approx_witness(&a, &b).map_err(|e| e.to_string())?;
        ensure(
            f.val(p1, &f.sub(&w.z, &a)).is_positive() && f.val(p2, &f.sub(&w.z, &b)).is_positive(),
            || {
                format!(
                    "approximation of {} and {} misses",
                    f.format(&a),
                    f.format(&b)
                )
            },
        )?;
        if w.k > 0 {
            let k = w.k as u64 - 1;
            let left = f.mul(&a, &f.pow_u(&cu, k));
            let right = f.mul(&b, &f.pow_u(&u, k));
            ensure(
                !(f.val(p2, &left).is_positive() && f.val(p1, &right).is_positive()),
                || "approximation exponent not minimal".into(),
            )?;
        }
        let z = ring
            .approx_witness(&a, &f.zero())
            .map_err(|e| e.to_string())?
            .z;
        ensure(
            f.val(p2, &z).is_nonneg() && f.val(p1, &f.sub(&z, &a)).is_positive(),
            || "residue lift fails".into(),
        )?;
    }
    Ok(samples)
}

/// CRT and localization recovery.
pub fn crt_law<F: ValuedField>(
    ring: &IntersectionRing<F>,
    rng: &mut dyn RngCore,
    samples: usize,
) -> Outcome {
    let f = ring.field();
    for _ in 0..samples {
        let targets: Vec<_> = ring
            .places()
            .iter()
            .map(|p| {
                let k = f.residue_field(p).expect("degree-one place");
                k.random_elem(rng, 2)
            })
            .collect();
        let x = ring.crt(&targets).map_err(|e| e.to_string())?;
        ensure(
            ring.residues(&x).map_err(|e| e.to_string())? == targets,
            || "crt residues".into(),
        )?;
        let y = nonzero(f, rng, 3);
        let mut all = true;
        for i in 0..ring.places().len() {
            let loc = ring.localization_test(i, &y).map_err(|e| e.to_string())?;
            ensure(loc.member || loc.inverse_member, || {
                "localization is not a valuation ring".into()
            })?;
            if let (Some(n), Some(d)) = (&loc.numerator, &loc.denominator) {
                ensure(
                    ring.contains(n)
                        && ring.contains(d)
                        && f.val(&ring.places()[i], d) == Val::Finite(0)
                        && f.mul(&y, d) == *n,
                    || "bad localization witness".into(),
                )?;
            }
            all &= loc.member;
        }
        ensure(all == ring.contains(&y), || {
            format!("intersection recovery fails on {}", f.format(&y))
        })?;
    }
    Ok(samples)
}

/// `as_delta` additivity, invariance under constants and surjectivity.
pub fn artin_schreier_law(p: u64, rng: &mut dyn RngCore, samples: usize) -> Outcome {
    let k = PrimeField::new(p).map_err(|e| e.to_string())?;
    let f = FunctionField::new(k, "t");
    let ring = IntersectionRing::new(
        f.clone(),
        parse_places(&f, "t,inf").map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let mut seen = HashSet::new();
    for _ in 0..samples {
        let y1 = f.random_integral(rng, ring.places(), 3);
        let y2 = f.random_integral(rng, ring.places(), 3);
        let d = |y: &_| ring.as_delta(y).map_err(|e| e.to_string());
        let (a, b, s) = (d(&y1)?, d(&y2)?, d(&f.add(&y1, &y2))?);
        ensure(k.add(&a, &b) == s, || "as_delta not additive".into())?;
        let c = rng.gen_range(0..p);
        ensure(d(&f.add(&y1, &f.constant(c)))? == a, || {
            "as_delta moves under constants".into()
        })?;
        seen.insert(a);
        seen.insert(s);
    }
    ensure(seen.len() == p as usize, || {
        format!("as_delta hit only {seen:?}")
    })?;
    if p == 2 {
        let y = parse_element(&f, "1/(1+t)").map_err(|e| e.to_string())?;
        ensure(ring.as_delta(&y) == Ok(1), || {
            "witness 1/(1+t) does not give 1".into()
        })?;
    }
    Ok(samples)
}

/// Root solver output satisfies the equation and `y + c` are roots too.
pub fn artin_schreier_roots(
    p: u64,
    precision: usize,
    rng: &mut dyn RngCore,
    samples: usize,
) -> Outcome {
    let k = PrimeField::new(p).map_err(|e| e.to_string())?;
    for _ in 0..samples {
        let mut coeffs: Vec<u64> = (0..precision).map(|_| rng.gen_range(0..p)).collect();
        coeffs[0] = 0;
        let x = TruncatedSeries::new(k, coeffs, precision);
        let y = artin_schreier_root(&x).map_err(|e| e.to_string())?;
        ensure(y.artin_schreier() == x, || "y^p - y != x".into())?;
        for c in 0..p {
            let yc = y.add(&TruncatedSeries::new(k, vec![c], precision));
            ensure(yc.artin_schreier() == x, || "shifted root fails".into())?;
        }
        if precision > 1 {
            let mut bump = vec![0; precision];
            bump[rng.gen_range(1..precision)] = rng.gen_range(1..p);
            let z = y.add(&TruncatedSeries::new(k, bump, precision));
            ensure(z.artin_schreier() != x, || {
                "non-constant shift is a root".into()
            })?;
        }
    }
    Ok(samples)
}

/// Printing then parsing returns the same element.
pub fn round_trip<F: Field>(f: &F, rng: &mut dyn RngCore, samples: usize) -> Outcome {
    for _ in 0..samples {
        let x = f.random_elem(rng, 3);
        let s = f.format(&x);
        let back = parse_element(f, &s).map_err(|e| format!("cannot parse `{s}`: {e}"))?;
        ensure(back == x, || format!("`{s}` does not round-trip"))?;
    }
    Ok(samples)
}

fn ring_of<F: ValuedField>(f: F, places: &str) -> IntersectionRing<F> {
    let p = parse_places(&f, places).expect("valid places");
    IntersectionRing::new(f, p).expect("distinct places")
}

pub fn valuation_suite(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f2 = FunctionField::new(PrimeField::new(2).unwrap(), "t");
    let f3 = FunctionField::new(PrimeField::new(3).unwrap(), "t");
    let qt = FunctionField::new(Rationals, "t");
    let q23 = ring_of(Rationals, "2,3");
    let q235 = ring_of(Rationals, "2,3,5");
    let f2ti = ring_of(f2.clone(), "t,inf");
    let f3ti = ring_of(f3.clone(), "t,inf");
    let f3three = ring_of(f3.clone(), "t,t-1,inf");
    let qtt = ring_of(qt.clone(), "t,t-1");
    let irreducible = ring_of(f2.clone(), "t^2+t+1,inf");
    vec![
        check("gcd law", || {
            Ok(gcd_law(&q23, &mut rng, 200)?
                + gcd_law(&f2ti, &mut rng, 200)?
                + gcd_law(&f3ti, &mut rng, 100)?
                + gcd_law(&qtt, &mut rng, 100)?
                + gcd_law(&irreducible, &mut rng, 100)?
                + gcd_law(&q235, &mut rng, 50)?
                + gcd_law(&f3three, &mut rng, 50)?)
        }),
        check("u-elements and approximation", || {
            Ok(approximation_law(&q23, &mut rng, 100)?
                + approximation_law(&f2ti, &mut rng, 100)?
                + approximation_law(&f3ti, &mut rng, 100)?
                + approximation_law(&qtt, &mut rng, 100)?)
        }),
        check("crt and localizations", || {
            Ok(crt_law(&q23, &mut rng, 200)?
                + crt_law(&f2ti, &mut rng, 200)?
                + crt_law(&q235, &mut rng, 50)?
                + crt_law(&f3three, &mut rng, 50)?)
        }),
        check("Artin-Schreier homomorphism", || {
            Ok(artin_schreier_law(2, &mut rng, 100)? + artin_schreier_law(3, &mut rng, 100)?)
        }),
        check("Artin-Schreier roots", || {
            let mut cases = 0;
            for (p, n) in [(2, 16), (3, 32), (5, 64), (2, 64)] {
                cases += artin_schreier_roots(p, n, &mut rng, 50)?;
            }
            Ok(cases)
        }),
        check("printer and parser round trip", || {
            Ok(round_trip(&Rationals, &mut rng, 100)?
                + round_trip(&qt, &mut rng, 100)?
                + round_trip(&f2, &mut rng, 100)?
                + round_trip(
                    &FunctionField::new(FunctionField::new(PrimeField::new(3).unwrap(), "s"), "t"),
                    &mut rng,
                    50,
                )?)
        }),
    ]
}

type QtElem = <FunctionField<Rationals> as Field>::Elem;

fn random_ball(rng: &mut dyn RngCore, m: usize) -> BallGroup {
    BallGroup::new((0..m).map(|_| rng.gen_range(-2..=2)).collect())
}

fn distinct_constants(rng: &mut dyn RngCore, n: usize) -> Vec<num_rational::BigRational> {
    let mut out: Vec<num_rational::BigRational> = Vec::new();
    while out.len() < n {
        let q = rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

fn mutation_set(c: &BallContext<Rationals>, rng: &mut dyn RngCore) -> Vec<QtElem> {
    let f = c.field();
    let mut s = vec![f.one()];
    for _ in 0..rng.gen_range(0..=3) {
        s.push(nonzero(f, rng, 2));
    }
    s
}

/// Mutation, ring and ideal laws on one context.
pub fn mutation_laws(c: &BallContext<Rationals>, rng: &mut dyn RngCore, samples: usize) -> Outcome {
    let f = c.field();
    let m = c.m();
    for _ in 0..samples {
        let j = random_ball(rng, m);
        let s = mutation_set(c, rng);
        let s2 = mutation_set(c, rng);
        let js = c.mutate(&j, &s).map_err(|e| e.to_string())?;
        let prod: Vec<QtElem> = s
            .iter()
            .flat_map(|a| s2.iter().map(move |b| f.mul(a, b)))
            .collect();
        ensure(
            c.mutate(&js, &s2).map_err(|e| e.to_string())?
                == c.mutate(&j, &prod).map_err(|e| e.to_string())?,
            || "mutations do not compose".into(),
        )?;
        let a = nonzero(f, rng, 2);
        let e = |r: Result<bool, _>| r.map_err(|e: crate::ball::BallError| e.to_string());
        ensure(e(c.in_ring(&a, &j))? == e(c.in_ring(&a, &js))?, || {
            "R_J changes under mutation".into()
        })?;
        ensure(e(c.in_ideal(&a, &j))? == e(c.in_ideal(&a, &js))?, || {
            "I_J changes under mutation".into()
        })?;
        let ones = BallGroup::new(vec![1; m]);
        let i = c.random_member(rng, &ones, 3);
        ensure(e(c.in_ideal(&i, &j))?, || {
            "sampled ideal element is not in I_J".into()
        })?;
        ensure(e(c.is_ring_unit(&f.add(&f.one(), &i), &j))?, || {
            "1 + I_J contains a non-unit".into()
        })?;
        let j2 = random_ball(rng, m);
        let s0 = nonzero(f, rng, 2);
        let sc = |x: &BallGroup| c.scale(&s0, x).map_err(|e| e.to_string());
        let meet = c.meet(&j, &j2).map_err(|e| e.to_string())?;
        let join = c.join(&j, &j2).map_err(|e| e.to_string())?;
        ensure(
            sc(&meet)? == c.meet(&sc(&j)?, &sc(&j2)?).map_err(|e| e.to_string())?
                && sc(&join)? == c.join(&sc(&j)?, &sc(&j2)?).map_err(|e| e.to_string())?,
            || "scaling is not a lattice map".into(),
        )?;
        let x = c.random_member(rng, &join, 3);
        let (u, v) = c.decompose_join(&j, &j2, &x).map_err(|e| e.to_string())?;
        ensure(
            e(c.member(&j, &u))? && e(c.member(&j2, &v))? && f.add(&u, &v) == x,
            || "join decomposition fails".into(),
        )?;
    }
    Ok(samples)
}

/// Unit shifts and Vandermonde reports on random draws.
pub fn unit_shift_law(
    c: &BallContext<Rationals>,
    rng: &mut dyn RngCore,
    samples: usize,
) -> Outcome {
    let f = c.field();
    for _ in 0..samples {
        let alpha = nonzero(f, rng, 2);
        let qs = distinct_constants(rng, c.m() + 1);
        let i = c.unit_shift(&alpha, &qs).map_err(|e| e.to_string())?;
        let d = f.sub(&alpha, &f.constant(qs[i].clone()));
        ensure(!f.is_zero(&d), || "unit shift picked alpha itself".into())?;
        let inv = f.inv(&d).map_err(|e| e.to_string())?;
        ensure(c.vals(&inv).iter().all(|v| v.is_nonneg()), || {
            "unit shift not integral".into()
        })?;
    }
    Ok(samples)
}

pub fn vandermonde_law(
    c: &BallContext<Rationals>,
    rng: &mut dyn RngCore,
    samples: usize,
) -> Outcome {
    let f = c.field();
    let mut done = 0;
    while done < samples {
        let j = random_ball(rng, c.m());
        let alpha = nonzero(f, rng, 2);
        let qs = distinct_constants(rng, c.m() + 1);
        if qs
            .iter()
            .any(|q| f.sub(&alpha, &f.constant(q.clone())) == f.zero())
        {
            continue;
        }
        let rep = c
            .vandermonde_check(&j, &alpha, &qs, rng, 10)
            .map_err(|e| e.to_string())?;
        ensure(rep.certified(), || {
            format!("uncertified configuration {:?}", rep.collapsing)
        })?;
        let expected: Vec<usize> = (0..qs.len())
            .filter(|&i| {
                let inv = f
                    .inv(&f.sub(&alpha, &f.constant(qs[i].clone())))
                    .expect("nonzero");
                c.vals(&inv).iter().all(|v| v.is_nonneg())
            })
            .collect();
        ensure(rep.collapsing == expected, || {
            "collapsing set disagrees with unit shifts".into()
        })?;
        done += 1;
    }
    Ok(samples)
}

/// Exported intervals have the rank predicted by their coordinates.
pub fn export_law(c: &BallContext<Rationals>, rng: &mut dyn RngCore, samples: usize) -> Outcome {
    for _ in 0..samples {
        let high = random_ball(rng, c.m());
        let low = BallGroup::new(
            high.gamma
                .iter()
                .map(|g| g + rng.gen_range(0..=2))
                .collect(),
        );
        let l = c.export_interval(&low, &high).map_err(|e| e.to_string())?;
        let strict = low
            .gamma
            .iter()
            .zip(&high.gamma)
            .filter(|(a, b)| a > b)
            .count() as u32;
        let r0 = reduced_rank(&l, l.top(), l.bot())
            .map_err(|e| e.to_string())?
            .rank;
        let rb = bottom_rank(&l, l.top(), l.bot())
            .map_err(|e| e.to_string())?
            .rank;
        ensure(r0 == strict && rb == strict, || {
            format!("export rank {r0}/{rb} != {strict}")
        })?;
        let dom = c.dominates(&high, &low).map_err(|e| e.to_string())?;
        ensure(dom == (rb as usize == c.m()), || {
            "domination disagrees with rk_bot".into()
        })?;
    }
    Ok(samples)
}

/// The limiting ring is Bezout with one maximal ideal per place.
pub fn limit_ring_law(
    c: &BallContext<Rationals>,
    rng: &mut dyn RngCore,
    samples: usize,
) -> Outcome {
    if c.m() < 2 {
        return Ok(0);
    }
    let ring =
        IntersectionRing::new(c.field().clone(), c.places().to_vec()).map_err(|e| e.to_string())?;
    gcd_law(&ring, rng, samples)?;
    let f = c.field();
    for i in 0..c.m() {
        let e = crate::valuation::idempotent(f, c.places(), i, 1);
        let v = ring.vals(&e);
        ensure(
            (0..c.m()).all(|j| {
                if j == i {
                    v[j] == Val::Finite(0)
                } else {
                    v[j].is_positive()
                }
            }),
            || "maximal ideals are not distinct".into(),
        )?;
    }
    for _ in 0..samples {
        let x = f.random_integral(rng, c.places(), 3);
        ensure(
            ring.is_unit(&x) || ring.vals(&x).iter().any(|v| v.is_positive()),
            || "non-unit outside every maximal ideal".into(),
        )?;
    }
    Ok(samples)
}

fn ball_context(places: &str) -> BallContext<Rationals> {
    let f = FunctionField::new(Rationals, "t");
    let p = parse_places(&f, places).expect("valid places");
    BallContext::new(f, p).expect("distinct places")
}

pub fn ball_suite(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = ball_context("t,t-1");
    let three = ball_context("t,t-1,inf");
    vec![
        check("mutation, ring and ideal laws", || {
            Ok(mutation_laws(&two, &mut rng, 100)? + mutation_laws(&three, &mut rng, 100)?)
        }),
        check("unit shift pigeonhole", || {
            Ok(unit_shift_law(&two, &mut rng, 200)? + unit_shift_law(&three, &mut rng, 200)?)
        }),
        check("Vandermonde reports", || {
            let f = two.field();
            let qs = [rat(0, 1), rat(1, 1), rat(2, 1)];
            let rep = two
                .vandermonde_check(&BallGroup::new(vec![0, 0]), &f.gen(), &qs, &mut rng, 50)
                .map_err(|e| e.to_string())?;
            ensure(rep.collapsing == vec![2] && rep.certified(), || {
                "worked case".into()
            })?;
            Ok(vandermonde_law(&two, &mut rng, 50)? + vandermonde_law(&three, &mut rng, 25)? + 1)
        }),
        check("exported intervals", || {
            Ok(export_law(&two, &mut rng, 50)? + export_law(&three, &mut rng, 30)?)
        }),
        check("limiting ring", || {
            Ok(limit_ring_law(&two, &mut rng, 50)? + limit_ring_law(&three, &mut rng, 50)?)
        }),
    ]
}

fn random_relation(rng: &mut dyn RngCore, sizes: &[usize], density: f64) -> GridRelation {
    GridRelation::from_fn(sizes, |_| rng.gen_bool(density)).expect("sizes within cap")
}

/// Witness validity and the slice law for one relation.
pub fn grid_laws(y: &GridRelation) -> Result<usize, String> {
    let g = y.max_grid();
    ensure(
        y.contains_grid(&g.sets) && g.sets.iter().all(|s| s.len() == g.m),
        || "invalid witness".into(),
    )?;
    ensure(y.grid_of_size(g.m + 1).is_none(), || {
        "grid not maximal".into()
    })?;
    if g.m > 0 && y.arity() > 1 {
        let w = y.slice_witness(g.m).map_err(|e| e.to_string())?;
        let slice = w.slice.expect("arity above one");
        ensure(slice.max_grid().m >= g.m, || "slice law fails".into())?;
    }
    Ok(g.m)
}

pub fn grid_suite(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        check("product law", || {
            let mut cases = 0;
            for n in [2usize, 3] {
                let per = 1u32 << 5;
                let total = per.pow(n as u32);
                for code in 0..total {
                    let masks: Vec<u32> = (0..n).map(|i| (code >> (5 * i)) & (per - 1)).collect();
                    let y = GridRelation::from_fn(&vec![5; n], |t| {
                        t.iter().zip(&masks).all(|(&x, &mk)| mk >> x & 1 == 1)
                    })
                    .map_err(|e| e.to_string())?;
                    let expected = masks
                        .iter()
                        .map(|m| m.count_ones() as usize)
                        .min()
                        .unwrap_or(0);
                    ensure(y.max_grid().m == expected, || format!("product {masks:?}"))?;
                    cases += 1;
                }
            }
            Ok(cases)
        }),
        check("slice law and maximality", || {
            let mut cases = 0;
            for sizes in [
                vec![2, 2],
                vec![2, 3],
                vec![3, 3],
                vec![2, 2, 2],
                vec![2, 2, 3],
            ] {
                let cells: usize = sizes.iter().product();
                for code in 0u32..1 << cells {
                    let mut idx = 0;
                    let y = GridRelation::from_fn(&sizes, |_| {
                        idx += 1;
                        code >> (idx - 1) & 1 == 1
                    })
                    .map_err(|e| e.to_string())?;
                    grid_laws(&y)?;
                    cases += 1;
                }
            }
            for _ in 0..200 {
                let n = rng.gen_range(2..=3);
                let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
                let density = rng.gen_range(0.3..0.95);
                grid_laws(&random_relation(&mut rng, &sizes, density))?;
                cases += 1;
            }
            Ok(cases)
        }),
        check("diagonal", || {
            let y = GridRelation::from_fn(&[4, 4], |t| t[0] == t[1]).map_err(|e| e.to_string())?;
            ensure(y.max_grid().m == 1, || "diagonal grid".into())?;
            Ok(1)
        }),
        check("monotonicity", || {
            for _ in 0..200 {
                let n = rng.gen_range(2..=3);
                let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
                let small = random_relation(&mut rng, &sizes, 0.5);
                let extra = random_relation(&mut rng, &sizes, 0.4);
                let mut tuples = small.tuples().to_vec();
                tuples.extend_from_slice(extra.tuples());
                let big = GridRelation::new(small.universes().to_vec(), tuples)
                    .map_err(|e| e.to_string())?;
                ensure(
                    small.is_subset_of(&big) && small.max_grid().m <= big.max_grid().m,
                    || "max grid not monotone".into(),
                )?;
            }
            Ok(200)
        }),
    ]
}
