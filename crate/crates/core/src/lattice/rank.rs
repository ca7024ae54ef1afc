use serde::{Deserialize, Serialize};

use super::independence::{cube_from_sequence, Cube};
use super::{Elem, FiniteLattice, LatticeError};

/// For a fixed base `b`: the longest strict cube with bottom `b` and a
/// given top, for every top `j ≥ b`, with one witness sequence per top.
struct Profile {
    best: Vec<Option<u32>>,
    witness: Vec<Vec<Elem>>,
}

impl Profile {
    fn compute(l: &FiniteLattice, b: Elem) -> Profile {
        if l.is_modular() {
            Self::by_dynamic_programming(l, b)
        } else {
            Self::by_cube_search(l, b)
        }
    }

    /// In a modular lattice an independent sequence over `b` of elements
    /// above `b` spans a strict cube, and independence only depends on the
    /// running join, so a longest-path computation over joins suffices.
    fn by_dynamic_programming(l: &FiniteLattice, b: Elem) -> Profile {
        let n = l.len();
        let mut best = vec![None; n];
        let mut pred: Vec<Option<(Elem, Elem)>> = vec![None; n];
        best[b] = Some(0);
        let above: Vec<Elem> = l
            .by_height()
            .iter()
            .copied()
            .filter(|&d| l.lt(b, d))
            .collect();
        for &j in l.by_height() {
            let Some(g) = best[j] else { continue };
            for &d in &above {
                if l.meet(d, j) != b {
                    continue;
                }
                let t = l.join(j, d);
                if best[t].is_none_or(|cur| cur < g + 1) {
                    best[t] = Some(g + 1);
                    pred[t] = Some((j, d));
                }
            }
        }
        let witness = (0..n)
            .map(|mut t| {
                let mut seq = Vec::new();
                while let Some((j, d)) = pred[t] {
                    seq.push(d);
                    t = j;
                }
                seq.reverse();
                seq
            })
            .collect();
        Profile { best, witness }
    }

    /// Direct search over families of atoms (in increasing id order) whose
    /// generated map is an injective lattice homomorphism. Sub-families of
    /// such a family are again such families, so the search can prune.
    fn by_cube_search(l: &FiniteLattice, b: Elem) -> Profile {
        let n = l.len();
        let mut prof = Profile {
            best: vec![None; n],
            witness: vec![Vec::new(); n],
        };
        prof.best[b] = Some(0);
        let cands: Vec<Elem> = l.elements().filter(|&d| l.lt(b, d)).collect();
        let mut stack = Vec::new();
        fn dfs(
            l: &FiniteLattice,
            b: Elem,
            cands: &[Elem],
            start: usize,
            stack: &mut Vec<Elem>,
            prof: &mut Profile,
        ) {
            for k in start..cands.len() {
                stack.push(cands[k]);
                if let Ok(cube) = cube_from_sequence(l, stack, b) {
                    if cube.is_injective() && cube.is_homomorphism(l) {
                        let top = cube.top();
                        let len = stack.len() as u32;
                        if prof.best[top].is_none_or(|cur| cur < len) {
                            prof.best[top] = Some(len);
                            prof.witness[top] = stack.clone();
                        }
                        dfs(l, b, cands, k + 1, stack, prof);
                    }
                }
                stack.pop();
            }
        }
        dfs(l, b, &cands, 0, &mut stack, &mut prof);
        prof
    }
}

fn lower_covers(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new(); l.len()];
    for &(lo, hi) in l.covers() {
        out[hi].push(lo);
    }
    out
}

fn upper_covers(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new(); l.len()];
    for &(lo, hi) in l.covers() {
        out[lo].push(hi);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BottomRank {
    pub rank: u32,
    /// Independent over the base, every term strictly above it.
    pub sequence: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedRank {
    pub rank: u32,
    pub cube: Cube,
}

/// `rk⊥(a/b)`: the largest strict cube in `[b, a]` with bottom exactly `b`.
pub fn bottom_rank(l: &FiniteLattice, a: Elem, b: Elem) -> Result<BottomRank, LatticeError> {
    l.require_leq(b, a)?;
    let prof = Profile::compute(l, b);
    let (rank, top) = l
        .interval_elements(b, a)
        .into_iter()
        .filter_map(|j| prof.best[j].map(|g| (g, j)))
        .max_by_key(|&(g, j)| (g, std::cmp::Reverse(j)))
        .expect("b itself is reachable");
    Ok(BottomRank {
        rank,
        sequence: prof.witness[top].clone(),
    })
}

/// `rk₀(a/b)`: the largest strict cube anywhere in `[b, a]`, found as the
/// best `rk⊥(a/b')` over `b' ∈ [b, a]`.
pub fn reduced_rank(l: &FiniteLattice, a: Elem, b: Elem) -> Result<ReducedRank, LatticeError> {
    l.require_leq(b, a)?;
    let mut best: Option<(u32, Elem, Vec<Elem>)> = None;
    for base in l.interval_elements(b, a) {
        let r = bottom_rank(l, a, base)?;
        if best.as_ref().is_none_or(|(g, _, _)| r.rank > *g) {
            best = Some((r.rank, base, r.sequence));
        }
    }
    let (rank, base, seq) = best.expect("interval is nonempty");
    let cube = cube_from_sequence(l, &seq, base)?;
    Ok(ReducedRank { rank, cube })
}

/// A candidate rank `rk(a/b)` on comparable pairs `a ≥ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    n: usize,
    values: Vec<Option<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RankTableJson {
    values: Vec<(String, String, u32)>,
}

impl RankTable {
    pub fn empty(n: usize) -> Self {
        RankTable {
            n,
            values: vec![None; n * n],
        }
    }

    pub fn from_fn(l: &FiniteLattice, mut f: impl FnMut(Elem, Elem) -> u32) -> Self {
        let mut t = Self::empty(l.len());
        for a in l.elements() {
            for b in l.elements() {
                if l.leq(b, a) {
                    t.set(a, b, f(a, b));
                }
            }
        }
        t
    }

    pub fn get(&self, a: Elem, b: Elem) -> Option<u32> {
        self.values[a * self.n + b]
    }

    pub fn set(&mut self, a: Elem, b: Elem, v: u32) {
        self.values[a * self.n + b] = Some(v);
    }

    fn at(&self, a: Elem, b: Elem) -> u32 {
        self.get(a, b).expect("table checked total")
    }

    /// `rk⊥` on every comparable pair.
    pub fn bottom(l: &FiniteLattice) -> Self {
        let n = l.len();
        let lower = lower_covers(l);
        let mut t = Self::empty(n);
        for b in l.elements() {
            let prof = Profile::compute(l, b);
            for &a in l.by_height() {
                if !l.leq(b, a) {
                    continue;
                }
                let mut v = prof.best[a].unwrap_or(0);
                for &c in &lower[a] {
                    if let Some(w) = t.get(c, b) {
                        v = v.max(w);
                    }
                }
                t.set(a, b, v);
            }
        }
        t
    }

    /// `rk₀` on every comparable pair.
    pub fn reduced(l: &FiniteLattice) -> Self {
        let bot = Self::bottom(l);
        let upper = upper_covers(l);
        let mut t = Self::empty(l.len());
        for &b in l.by_height().iter().rev() {
            for a in l.elements() {
                if !l.leq(b, a) {
                    continue;
                }
                let mut v = bot.at(a, b);
                for &c in &upper[b] {
                    if l.leq(c, a) {
                        v = v.max(t.at(a, c));
                    }
                }
                t.set(a, b, v);
            }
        }
        t
    }

    /// `height(a) − height(b)`; a subadditive rank on modular lattices.
    pub fn height_difference(l: &FiniteLattice) -> Self {
        Self::from_fn(l, |a, b| l.height(a) - l.height(b))
    }

    pub fn scaled(&self, k: u32) -> Self {
        RankTable {
            n: self.n,
            values: self.values.iter().map(|v| v.map(|x| x * k)).collect(),
        }
    }

    pub fn sum(&self, other: &RankTable) -> Self {
        RankTable {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| Some((*a)? + (*b)?))
                .collect(),
        }
    }

    /// Pointwise `self ≥ other` wherever both are defined.
    pub fn dominates(&self, other: &RankTable) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| match (a, b) {
                (Some(x), Some(y)) => x >= y,
                _ => true,
            })
    }

    pub fn to_json(&self, l: &FiniteLattice) -> String {
        let mut values = Vec::new();
        for a in l.elements() {
            for b in l.elements() {
                if let Some(v) = self.get(a, b) {
                    values.push((l.name(a).to_string(), l.name(b).to_string(), v));
                }
            }
        }
        serde_json::to_string(&RankTableJson { values }).expect("serializable")
    }

    /// Reads `{"values": [[a, b, rk], ...]}` with element names.
    pub fn from_json(l: &FiniteLattice, src: &str) -> Result<Self, LatticeError> {
        let json: RankTableJson =
            serde_json::from_str(src).map_err(|e| LatticeError::Json(e.to_string()))?;
        let mut t = Self::empty(l.len());
        for (a, b, v) in json.values {
            let (ia, ib) = (l.id(&a)?, l.id(&b)?);
            l.require_leq(ib, ia)?;
            t.set(ia, ib, v);
        }
        Ok(t)
    }
}

/// The first failed instance of an axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    /// 1: zero exactly on the diagonal; 2: chains `a ≥ b ≥ c`; 3: pairs `a, b`.
    pub axiom: u8,
    pub clause: &'static str,
    pub elements: Vec<Elem>,
}

/// Checks the subadditive rank axioms exhaustively; `Ok(None)` means all hold.
pub fn check_subadditive_rank(
    l: &FiniteLattice,
    t: &RankTable,
) -> Result<Option<AxiomViolation>, LatticeError> {
    for a in l.elements() {
        for b in l.elements() {
            if l.leq(b, a) && t.get(a, b).is_none() {
                return Err(LatticeError::IncompleteTable(
                    l.name(a).into(),
                    l.name(b).into(),
                ));
            }
        }
    }
    let fail = |axiom, clause, elements| {
        Ok(Some(AxiomViolation {
            axiom,
            clause,
            elements,
        }))
    };
    for a in l.elements() {
        for b in l.elements() {
            if l.leq(b, a) && (t.at(a, b) == 0) != (a == b) {
                return fail(1, "rk(a/b) = 0 iff a = b", vec![a, b]);
            }
        }
    }
    for a in l.elements() {
        for b in l.elements() {
            if !l.leq(b, a) {
                continue;
            }
            for c in l.elements() {
                if !l.leq(c, b) {
                    continue;
                }
                let (ac, ab, bc) = (t.at(a, c), t.at(a, b), t.at(b, c));
                if ac > ab + bc {
                    return fail(2, "rk(a/c) <= rk(a/b) + rk(b/c)", vec![a, b, c]);
                }
                if ac < ab {
                    return fail(2, "rk(a/c) >= rk(a/b)", vec![a, b, c]);
                }
                if ac < bc {
                    return fail(2, "rk(a/c) >= rk(b/c)", vec![a, b, c]);
                }
            }
        }
    }
    for a in l.elements() {
        for b in l.elements() {
            let (m, j) = (l.meet(a, b), l.join(a, b));
            if t.at(a, m) != t.at(j, b) {
                return fail(3, "rk(a/a∧b) = rk(a∨b/b)", vec![a, b]);
            }
            if t.at(b, m) != t.at(j, a) {
                return fail(3, "rk(b/a∧b) = rk(a∨b/a)", vec![a, b]);
            }
            if t.at(j, m) != t.at(a, m) + t.at(b, m) {
                return fail(3, "rk(a∨b/a∧b) = rk(a/a∧b) + rk(b/a∧b)", vec![a, b]);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{m3, pentagon};

    fn chain(k: usize) -> FiniteLattice {
        let names = (0..=k).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        FiniteLattice::from_covers(names, &covers).unwrap()
    }

    #[test]
    fn ranks_of_small_lattices() {
        let c = chain(2);
        assert_eq!(reduced_rank(&c, 2, 0).unwrap().rank, 1);
        assert_eq!(bottom_rank(&c, 2, 0).unwrap().rank, 1);
        assert_eq!(reduced_rank(&c, 1, 1).unwrap().rank, 0);
        let l = m3();
        let r = bottom_rank(&l, 4, 0).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.sequence, vec![1, 2]);
        let rr = reduced_rank(&l, 4, 0).unwrap();
        assert_eq!(rr.rank, 2);
        assert!(rr.cube.strict && rr.cube.is_homomorphism(&l));
    }

    #[test]
    fn pentagon_uses_cube_search() {
        let l = pentagon();
        let r = reduced_rank(&l, 4, 0).unwrap();
        assert_eq!(r.rank, 2);
        assert!(r.cube.is_homomorphism(&l) && r.cube.is_injective());
    }

    #[test]
    fn incomparable_pairs_rejected() {
        let l = m3();
        assert!(matches!(
            reduced_rank(&l, 1, 2),
            Err(LatticeError::NotComparable(_, _))
        ));
    }

    #[test]
    fn reduced_rank_table_on_diamond_is_subadditive() {
        let l = m3();
        let t = RankTable::reduced(&l);
        assert_eq!(check_subadditive_rank(&l, &t).unwrap(), None);
        assert_eq!(t.get(4, 0), Some(2));
    }

    #[test]
    fn zero_table_fails_first_axiom() {
        let l = m3();
        let t = RankTable::from_fn(&l, |_, _| 0);
        assert_eq!(check_subadditive_rank(&l, &t).unwrap().unwrap().axiom, 1);
        assert!(matches!(
            check_subadditive_rank(&l, &RankTable::empty(l.len())),
            Err(LatticeError::IncompleteTable(_, _))
        ));
    }

    #[test]
    fn triangle_violation_detected() {
        let c = chain(2);
        let t = RankTable::from_fn(&c, |a, b| {
            if a == b {
                0
            } else if a - b == 2 {
                5
            } else {
                1
            }
        });
        let v = check_subadditive_rank(&c, &t).unwrap().unwrap();
        assert_eq!((v.axiom, v.clause), (2, "rk(a/c) <= rk(a/b) + rk(b/c)"));
    }

    #[test]
    fn table_json_round_trip() {
        let l = m3();
        let t = RankTable::reduced(&l);
        assert_eq!(RankTable::from_json(&l, &t.to_json(&l)).unwrap(), t);
    }
}
