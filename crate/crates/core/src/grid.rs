//! Largest grids `S_1 × ... × S_n` with `|S_i| = m` inside a finite relation.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const MAX_UNIVERSE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("invalid relation JSON: {0}")]
    Json(String),
    #[error("tuple {0} has the wrong arity")]
    Arity(usize),
    #[error("tuple {tuple} coordinate {coord} is not in its universe")]
    NotInUniverse { tuple: usize, coord: usize },
    #[error("universe {0} has more than {MAX_UNIVERSE} elements")]
    TooLarge(usize),
    #[error("relation needs arity at least 1")]
    EmptyArity,
    #[error("no grid of size {0}")]
    NoGrid(usize),
}

/// Universes `X_1..X_n` and a set of tuples in their product, stored by index.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRelation {
    universes: Vec<Vec<Value>>,
    tuples: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    universes: Vec<Vec<Value>>,
    tuples: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub m: usize,
    /// `S_1..S_n` as indices into the universes.
    pub sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceWitness {
    /// Index of `b` in the last universe.
    pub b: usize,
    /// The relation `{(x_1..x_{n-1}) : (x_1..x_{n-1}, b) ∈ Y}`; `None` when `n = 1`.
    pub slice: Option<GridRelation>,
    pub grid: Grid,
}

impl GridRelation {
    pub fn new(universes: Vec<Vec<Value>>, tuples: Vec<Vec<usize>>) -> Result<Self, GridError> {
        if universes.is_empty() {
            return Err(GridError::EmptyArity);
        }
        if let Some(i) = universes.iter().position(|u| u.len() > MAX_UNIVERSE) {
            return Err(GridError::TooLarge(i));
        }
        for (i, t) in tuples.iter().enumerate() {
            if t.len() != universes.len() {
                return Err(GridError::Arity(i));
            }
            if let Some(c) = (0..t.len()).find(|&c| t[c] >= universes[c].len()) {
                return Err(GridError::NotInUniverse { tuple: i, coord: c });
            }
        }
        let mut tuples = tuples;
        tuples.sort();
        tuples.dedup();
        Ok(GridRelation { universes, tuples })
    }

    /// The relation on `[k_1] × ... × [k_n]` (universes `1..=k_i`) given by a predicate.
    pub fn from_fn(
        sizes: &[usize],
        mut keep: impl FnMut(&[usize]) -> bool,
    ) -> Result<Self, GridError> {
        let universes = sizes
            .iter()
            .map(|&k| (1..=k as u64).map(Value::from).collect())
            .collect();
        let mut tuples = Vec::new();
        let mut cur = vec![0; sizes.len()];
        if sizes.iter().all(|&k| k > 0) {
            loop {
                if keep(&cur) {
                    tuples.push(cur.clone());
                }
                let mut c = 0;
                while c < sizes.len() {
                    cur[c] += 1;
                    if cur[c] < sizes[c] {
                        break;
                    }
                    cur[c] = 0;
                    c += 1;
                }
                if c == sizes.len() {
                    break;
                }
            }
        }
        GridRelation::new(universes, tuples)
    }

    pub fn from_json(src: &str) -> Result<Self, GridError> {
        let raw: RelationJson =
            serde_json::from_str(src).map_err(|e| GridError::Json(e.to_string()))?;
        let mut tuples = Vec::with_capacity(raw.tuples.len());
        for (i, t) in raw.tuples.iter().enumerate() {
            if t.len() != raw.universes.len() {
                return Err(GridError::Arity(i));
            }
            let idx = t
                .iter()
                .enumerate()
                .map(|(c, v)| {
                    raw.universes[c]
                        .iter()
                        .position(|u| u == v)
                        .ok_or(GridError::NotInUniverse { tuple: i, coord: c })
                })
                .collect::<Result<Vec<_>, _>>()?;
            tuples.push(idx);
        }
        GridRelation::new(raw.universes, tuples)
    }

    pub fn to_json(&self) -> String {
        let raw = RelationJson {
            universes: self.universes.clone(),
            tuples: self
                .tuples
                .iter()
                .map(|t| {
                    t.iter()
                        .enumerate()
                        .map(|(c, &i)| self.universes[c][i].clone())
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("serializable")
    }

    pub fn arity(&self) -> usize {
        self.universes.len()
    }

    pub fn universes(&self) -> &[Vec<Value>] {
        &self.universes
    }

    /// Sorted, without duplicates.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples
            .binary_search_by(|x| x.as_slice().cmp(t))
            .is_ok()
    }

    pub fn is_subset_of(&self, other: &GridRelation) -> bool {
        self.tuples.iter().all(|t| other.contains(t))
    }

    pub fn value(&self, coord: usize, idx: usize) -> &Value {
        &self.universes[coord][idx]
    }

    /// Whether `sets[0] × ... × sets[n-1]` lies inside the relation.
    pub fn contains_grid(&self, sets: &[Vec<usize>]) -> bool {
        fn rec(r: &GridRelation, sets: &[Vec<usize>], cur: &mut Vec<usize>) -> bool {
            if cur.len() == sets.len() {
                return r.contains(cur);
            }
            sets[cur.len()].clone().into_iter().all(|x| {
                cur.push(x);
                let ok = rec(r, sets, cur);
                cur.pop();
                ok
            })
        }
        sets.len() == self.arity() && rec(self, sets, &mut Vec::new())
    }

    /// The relation at `last = b` in the last coordinate, of arity one less.
    pub fn slice_last(&self, b: usize) -> Option<GridRelation> {
        let n = self.arity();
        if n < 2 {
            return None;
        }
        let tuples = self
            .tuples
            .iter()
            .filter(|t| t[n - 1] == b)
            .map(|t| t[..n - 1].to_vec())
            .collect();
        Some(
            GridRelation::new(self.universes[..n - 1].to_vec(), tuples)
                .expect("valid by construction"),
        )
    }

    /// The largest grid, with a witness.
    pub fn max_grid(&self) -> Grid {
        let n = self.arity();
        let mut best = Grid {
            m: 0,
            sets: vec![Vec::new(); n],
        };
        let mut m = 1;
        while let Some(sets) = find_grid(&self.tuples, n, m) {
            best = Grid { m, sets };
            m += 1;
        }
        best
    }

    /// A grid of size exactly `m`, if any.
    pub fn grid_of_size(&self, m: usize) -> Option<Grid> {
        if m == 0 {
            return Some(Grid {
                m: 0,
                sets: vec![Vec::new(); self.arity()],
            });
        }
        find_grid(&self.tuples, self.arity(), m).map(|sets| Grid { m, sets })
    }

    /// Some `b` whose slice still holds a grid of size `m`.
    pub fn slice_witness(&self, m: usize) -> Result<SliceWitness, GridError> {
        let grid = self.grid_of_size(m).ok_or(GridError::NoGrid(m))?;
        let n = self.arity();
        let b = *grid.sets[n - 1].first().ok_or(GridError::NoGrid(m))?;
        Ok(SliceWitness {
            b,
            slice: self.slice_last(b),
            grid,
        })
    }
}

/// Intersection of two sorted tuple lists.
fn intersect(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Searches for an `m`-grid in a sorted relation of arity `n`, fixing the
/// coordinate with the fewest live values first.
fn find_grid(tuples: &[Vec<usize>], n: usize, m: usize) -> Option<Vec<Vec<usize>>> {
    if n == 1 {
        return (tuples.len() >= m)
            .then(|| tuples[..m].iter().map(|t| t[0]).collect())
            .map(|s| vec![s]);
    }
    let need = m.checked_pow(n as u32 - 1)?;
    if tuples.len() < need.checked_mul(m)? {
        return None;
    }
    let values = |c: usize| -> Vec<usize> {
        let mut v: Vec<usize> = tuples.iter().map(|t| t[c]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let c = (0..n)
        .min_by_key(|&c| values(c).len())
        .expect("arity at least 2");
    // slices at coordinate c, keeping only values whose slice is big enough
    let candidates: Vec<(usize, Vec<Vec<usize>>)> = values(c)
        .into_iter()
        .map(|a| {
            let mut s: Vec<Vec<usize>> = tuples
                .iter()
                .filter(|t| t[c] == a)
                .map(|t| [&t[..c], &t[c + 1..]].concat())
                .collect();
            s.sort();
            (a, s)
        })
        .filter(|(_, s)| s.len() >= need)
        .collect();
    if candidates.len() < m {
        return None;
    }

    fn dfs(
        candidates: &[(usize, Vec<Vec<usize>>)],
        start: usize,
        chosen: &mut Vec<usize>,
        common: &[Vec<usize>],
        n: usize,
        m: usize,
        need: usize,
    ) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
        if chosen.len() == m {
            return find_grid(common, n - 1, m).map(|rest| (chosen.clone(), rest));
        }
        for i in start..candidates.len() {
            if candidates.len() - i < m - chosen.len() {
                break;
            }
            let next = intersect(common, &candidates[i].1);
            if next.len() < need {
                continue;
            }
            chosen.push(candidates[i].0);
            if let Some(found) = dfs(candidates, i + 1, chosen, &next, n, m, need) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    let all: Vec<Vec<usize>> = {
        let mut v: Vec<Vec<usize>> = tuples
            .iter()
            .map(|t| [&t[..c], &t[c + 1..]].concat())
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let (chosen, mut rest) = dfs(&candidates, 0, &mut Vec::new(), &all, n, m, need)?;
    rest.insert(c, chosen);
    Some(rest)
}
