//! Finite lattices with precomputed meet and join tables.
//!
//! Elements are dense ids `0..len()`; names are kept only for I/O. The
//! order, both operation tables, element heights and the modularity
//! verdict are computed once at construction and every later query is a
//! lookup.

pub(crate) mod independence;
mod rank;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use independence::{
    cube_from_coindependent, cube_from_sequence, is_coindependent, is_independent, split_cube, Cube,
};
pub use rank::{
    bottom_rank, check_subadditive_rank, reduced_rank, AxiomViolation, BottomRank, RankTable,
    ReducedRank,
};

pub type Elem = usize;

/// Hard cap on lattice size; tables are quadratic.
pub const MAX_ELEMENTS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not a partial order: {0}")]
    NotAPoset(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("lattice has {0} elements, more than the limit")]
    TooLarge(usize),
    #[error("elements {0} and {1} are not comparable as required")]
    NotComparable(String, String),
    #[error("element {0} is not above the base")]
    ElementBelowBase(String),
    #[error("element {0} is not below the top")]
    ElementAboveTop(String),
    #[error("sequence is not independent")]
    NotIndependent,
    #[error("rank table has no value for ({0}, {1})")]
    IncompleteTable(String, String),
    #[error("invalid lattice JSON: {0}")]
    Json(String),
    #[error("invalid cube: {0}")]
    InvalidCube(String),
    #[error("operation requires a modular lattice")]
    NotModular,
    #[error("`{0}` is not a quasi-atom")]
    NotAQuasiAtom(String),
}

/// A fixed-width set of element ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| 64 * k + b)
        })
    }
}

/// A triple violating `(x ∨ a) ∧ b = (x ∧ b) ∨ a` with `a ≤ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModularWitness {
    pub x: Elem,
    pub a: Elem,
    pub b: Elem,
}

/// Serialized form: `first ⋖ second` for each pair in `covers`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

#[derive(Clone)]
pub struct FiniteLattice {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    down: Vec<BitSet>,
    meet: Vec<u16>,
    join: Vec<u16>,
    bot: Elem,
    top: Elem,
    height: Vec<u32>,
    by_height: Vec<Elem>,
    covers: Vec<(Elem, Elem)>,
    modular_witness: Option<ModularWitness>,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("elements", &self.names)
            .field("covers", &self.covers)
            .finish()
    }
}

impl FiniteLattice {
    /// Builds a lattice from the order relation `leq[a][b] ⇔ a ≤ b`.
    pub fn from_leq(names: Vec<String>, leq: &[Vec<bool>]) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::NotALattice("no elements".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(n));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LatticeError::NotAPoset(format!(
                    "duplicate element `{name}`"
                )));
            }
        }
        let mut down = vec![BitSet::new(n); n];
        for a in 0..n {
            if !leq[a][a] {
                return Err(LatticeError::NotAPoset(format!("`{}` ≰ itself", names[a])));
            }
            for b in 0..n {
                if leq[a][b] {
                    down[b].insert(a);
                    if a != b && leq[b][a] {
                        return Err(LatticeError::NotAPoset(format!(
                            "cycle through `{}` and `{}`",
                            names[a], names[b]
                        )));
                    }
                }
            }
        }
        for b in 0..n {
            for a in down[b].iter().collect::<Vec<_>>() {
                if !down[a].is_subset(&down[b]) {
                    return Err(LatticeError::NotAPoset("relation is not transitive".into()));
                }
            }
        }
        Self::from_down_sets(names, index, down)
    }

    /// Builds a lattice from covering pairs `(lower, upper)`, taking the
    /// reflexive-transitive closure.
    pub fn from_covers(names: Vec<String>, covers: &[(Elem, Elem)]) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::NotALattice("no elements".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(n));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LatticeError::NotAPoset(format!(
                    "duplicate element `{name}`"
                )));
            }
        }
        let mut preds = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(LatticeError::UnknownElement(format!("#{}", lo.max(hi))));
            }
            if lo == hi {
                return Err(LatticeError::NotAPoset(format!(
                    "`{}` covers itself",
                    names[lo]
                )));
            }
            preds[hi].push(lo);
            indeg[hi] += 1;
        }
        // Kahn's algorithm; anything left over lies on a cycle
        let mut succs = vec![Vec::new(); n];
        for &(lo, hi) in covers {
            succs[lo].push(hi);
        }
        let mut queue: Vec<Elem> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            topo.push(v);
            for &w in &succs[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if topo.len() != n {
            let stuck = (0..n)
                .find(|&i| indeg[i] > 0)
                .expect("some vertex on a cycle");
            return Err(LatticeError::NotAPoset(format!(
                "covers contain a cycle through `{}`",
                names[stuck]
            )));
        }
        let mut down = vec![BitSet::new(n); n];
        for &v in &topo {
            down[v].insert(v);
            for &p in &preds[v] {
                let d = down[p].clone();
                down[v].union_with(&d);
            }
        }
        Self::from_down_sets(names, index, down)
    }

    fn from_down_sets(
        names: Vec<String>,
        index: HashMap<String, Elem>,
        down: Vec<BitSet>,
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        let sizes: Vec<usize> = down.iter().map(BitSet::count).collect();
        let mut up = vec![BitSet::new(n); n];
        for (b, d) in down.iter().enumerate() {
            for a in d.iter() {
                up[a].insert(b);
            }
        }
        let up_sizes: Vec<usize> = up.iter().map(BitSet::count).collect();
        let mut meet = vec![0u16; n * n];
        let mut join = vec![0u16; n * n];
        for a in 0..n {
            for b in a..n {
                // the glb is the lower bound whose down-set is the whole common down-set
                let common = down[a].intersect(&down[b]);
                let size = common.count();
                let m = common.iter().find(|&c| sizes[c] == size).ok_or_else(|| {
                    LatticeError::NotALattice(format!(
                        "`{}` and `{}` have no meet",
                        names[a], names[b]
                    ))
                })?;
                meet[a * n + b] = m as u16;
                meet[b * n + a] = m as u16;
                let common = up[a].intersect(&up[b]);
                let size = common.count();
                let j = common
                    .iter()
                    .find(|&c| up_sizes[c] == size)
                    .ok_or_else(|| {
                        LatticeError::NotALattice(format!(
                            "`{}` and `{}` have no join",
                            names[a], names[b]
                        ))
                    })?;
                join[a * n + b] = j as u16;
                join[b * n + a] = j as u16;
            }
        }
        let bot = (0..n)
            .find(|&i| sizes[i] == 1)
            .expect("lattice has a bottom");
        let top = (0..n).find(|&i| sizes[i] == n).expect("lattice has a top");
        let mut order: Vec<Elem> = (0..n).collect();
        order.sort_by_key(|&i| sizes[i]);
        let mut height = vec![0u32; n];
        for &v in &order {
            for u in down[v].iter() {
                if u != v {
                    height[v] = height[v].max(height[u] + 1);
                }
            }
        }
        let mut by_height: Vec<Elem> = (0..n).collect();
        by_height.sort_by_key(|&i| (height[i], i));
        let mut covers = Vec::new();
        for hi in 0..n {
            for lo in down[hi].iter() {
                if lo != hi
                    && !down[hi]
                        .iter()
                        .any(|m| m != lo && m != hi && down[m].contains(lo))
                {
                    covers.push((lo, hi));
                }
            }
        }
        covers.sort_unstable();
        let mut lat = FiniteLattice {
            names,
            index,
            down,
            meet,
            join,
            bot,
            top,
            height,
            by_height,
            covers,
            modular_witness: None,
        };
        lat.modular_witness = lat.find_modular_violation();
        Ok(lat)
    }

    pub fn from_json_value(json: &LatticeJson) -> Result<Self, LatticeError> {
        let mut index = HashMap::new();
        for (i, name) in json.elements.iter().enumerate() {
            index.insert(name.as_str(), i);
        }
        let covers = json
            .covers
            .iter()
            .map(|(lo, hi)| {
                let l = index
                    .get(lo.as_str())
                    .ok_or_else(|| LatticeError::UnknownElement(lo.clone()))?;
                let h = index
                    .get(hi.as_str())
                    .ok_or_else(|| LatticeError::UnknownElement(hi.clone()))?;
                Ok((*l, *h))
            })
            .collect::<Result<Vec<_>, LatticeError>>()?;
        Self::from_covers(json.elements.clone(), &covers)
    }

    pub fn from_json(src: &str) -> Result<Self, LatticeError> {
        let json: LatticeJson =
            serde_json::from_str(src).map_err(|e| LatticeError::Json(e.to_string()))?;
        Self::from_json_value(&json)
    }

    pub fn to_json_value(&self) -> LatticeJson {
        LatticeJson {
            elements: self.names.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(lo, hi)| (self.names[lo].clone(), self.names[hi].clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn id(&self, name: &str) -> Result<Elem, LatticeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| LatticeError::UnknownElement(name.into()))
    }

    pub fn bot(&self) -> Elem {
        self.bot
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.down[b].contains(a)
    }

    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b] as Elem
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b] as Elem
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        xs.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    /// Length of the longest chain from the bottom.
    pub fn height(&self, x: Elem) -> u32 {
        self.height[x]
    }

    /// All elements sorted by height, ties by id; a linear extension of the order.
    pub fn by_height(&self) -> &[Elem] {
        &self.by_height
    }

    pub fn down_set(&self, x: Elem) -> &BitSet {
        &self.down[x]
    }

    /// Elements of `[b, a]` in height order.
    pub fn interval_elements(&self, b: Elem, a: Elem) -> Vec<Elem> {
        self.by_height
            .iter()
            .copied()
            .filter(|&x| self.leq(b, x) && self.leq(x, a))
            .collect()
    }

    /// Covering pairs `(lower, upper)` sorted by id.
    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    pub fn is_modular(&self) -> bool {
        self.modular_witness.is_none()
    }

    /// The first failing triple, scanning `a`, then `b > a`, then `x` by id.
    pub fn modular_witness(&self) -> Option<ModularWitness> {
        self.modular_witness
    }

    fn find_modular_violation(&self) -> Option<ModularWitness> {
        for a in self.elements() {
            for b in self.elements() {
                if !self.lt(a, b) {
                    continue;
                }
                for x in self.elements() {
                    if self.meet(self.join(x, a), b) != self.join(self.meet(x, b), a) {
                        return Some(ModularWitness { x, a, b });
                    }
                }
            }
        }
        None
    }

    /// Checks the lattice identities on the tables exhaustively. Tables
    /// built from an order satisfy them automatically; this is a guard on
    /// the construction itself.
    pub fn verify_axioms(&self) -> Result<(), String> {
        let e = self.elements();
        for a in e.clone() {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return Err(format!("idempotence fails at {}", self.names[a]));
            }
            if !self.leq(self.bot, a) || !self.leq(a, self.top) {
                return Err(format!("{} escapes [bot, top]", self.names[a]));
            }
            for b in e.clone() {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return Err("commutativity fails".into());
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return Err("absorption fails".into());
                }
                if self.leq(a, b) != (self.meet(a, b) == a) {
                    return Err("order and meet disagree".into());
                }
                for c in e.clone() {
                    if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c)
                        || self.join(a, self.join(b, c)) != self.join(self.join(a, b), c)
                    {
                        return Err("associativity fails".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// The sublattice `[b, a]`, with the map from its ids back to ours.
    pub fn interval(&self, b: Elem, a: Elem) -> Result<(FiniteLattice, Vec<Elem>), LatticeError> {
        if !self.leq(b, a) {
            return Err(LatticeError::NotComparable(
                self.names[b].clone(),
                self.names[a].clone(),
            ));
        }
        let elems = self.interval_elements(b, a);
        let pos: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let names = elems.iter().map(|&x| self.names[x].clone()).collect();
        let covers: Vec<(Elem, Elem)> = self
            .covers
            .iter()
            .filter_map(|(lo, hi)| Some((*pos.get(lo)?, *pos.get(hi)?)))
            .collect();
        Ok((Self::from_covers(names, &covers)?, elems))
    }

    /// Requires `a ≥ b`.
    pub(crate) fn require_leq(&self, b: Elem, a: Elem) -> Result<(), LatticeError> {
        if self.leq(b, a) {
            Ok(())
        } else {
            Err(LatticeError::NotComparable(
                self.names[a].clone(),
                self.names[b].clone(),
            ))
        }
    }
}
