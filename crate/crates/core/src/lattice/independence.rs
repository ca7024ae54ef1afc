use serde::Serialize;

use super::{Elem, FiniteLattice, LatticeError};

/// A map from subsets of `[n]` (as bitmasks) to lattice elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub n: usize,
    /// `assign[S]` for every bitmask `S < 2^n`.
    pub assign: Vec<Elem>,
    pub strict: bool,
}

impl Cube {
    pub fn at(&self, s: usize) -> Elem {
        self.assign[s]
    }

    pub fn bottom(&self) -> Elem {
        self.assign[0]
    }

    pub fn top(&self) -> Elem {
        self.assign[(1 << self.n) - 1]
    }

    /// The images of the singletons.
    pub fn atoms(&self) -> Vec<Elem> {
        (0..self.n).map(|i| self.assign[1 << i]).collect()
    }

    /// The images of the complements of singletons.
    pub fn coatoms(&self) -> Vec<Elem> {
        let full = (1 << self.n) - 1;
        (0..self.n).map(|i| self.assign[full & !(1 << i)]).collect()
    }

    pub fn is_homomorphism(&self, l: &FiniteLattice) -> bool {
        let size = 1 << self.n;
        self.assign.len() == size
            && (0..size).all(|s| {
                (0..size).all(|t| {
                    l.join(self.assign[s], self.assign[t]) == self.assign[s | t]
                        && l.meet(self.assign[s], self.assign[t]) == self.assign[s & t]
                })
            })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.assign.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Whether every element lies in `[b, a]`.
    pub fn inside(&self, l: &FiniteLattice, b: Elem, a: Elem) -> bool {
        l.leq(b, self.bottom()) && l.leq(self.top(), a)
    }
}

/// `a_k ∧ (a_1 ∨ … ∨ a_{k−1}) = base` for every `k ≥ 2`.
pub fn is_independent(l: &FiniteLattice, seq: &[Elem], base: Elem) -> Result<bool, LatticeError> {
    if let Some(&x) = seq.iter().find(|&&x| !l.leq(base, x)) {
        return Err(LatticeError::ElementBelowBase(l.name(x).into()));
    }
    Ok(independent_unchecked(l, seq, base))
}

pub(crate) fn independent_unchecked(l: &FiniteLattice, seq: &[Elem], base: Elem) -> bool {
    let mut acc = base;
    for (k, &x) in seq.iter().enumerate() {
        if k > 0 && l.meet(x, acc) != base {
            return false;
        }
        acc = l.join(acc, x);
    }
    true
}

/// `a_k ∨ (a_1 ∧ … ∧ a_{k−1}) = top` for every `k ≥ 2`.
pub fn is_coindependent(l: &FiniteLattice, seq: &[Elem], top: Elem) -> Result<bool, LatticeError> {
    if let Some(&x) = seq.iter().find(|&&x| !l.leq(x, top)) {
        return Err(LatticeError::ElementAboveTop(l.name(x).into()));
    }
    let mut acc = top;
    for (k, &x) in seq.iter().enumerate() {
        if k > 0 && l.join(x, acc) != top {
            return Ok(false);
        }
        acc = l.meet(acc, x);
    }
    Ok(true)
}

/// `S ↦ base ∨ ⋁_{i∈S} seq_i`, strict when every term is above the base.
pub fn cube_from_sequence(
    l: &FiniteLattice,
    seq: &[Elem],
    base: Elem,
) -> Result<Cube, LatticeError> {
    if !is_independent(l, seq, base)? {
        return Err(LatticeError::NotIndependent);
    }
    let n = seq.len();
    let mut assign = vec![base; 1 << n];
    for s in 1..1usize << n {
        let low = s.trailing_zeros() as usize;
        assign[s] = l.join(assign[s & (s - 1)], seq[low]);
    }
    let strict = seq.iter().all(|&x| x != base);
    Ok(Cube { n, assign, strict })
}

/// `S ↦ top ∧ ⋀_{i∉S} seq_i`, strict when every term is below the top.
pub fn cube_from_coindependent(
    l: &FiniteLattice,
    seq: &[Elem],
    top: Elem,
) -> Result<Cube, LatticeError> {
    if !is_coindependent(l, seq, top)? {
        return Err(LatticeError::NotIndependent);
    }
    let n = seq.len();
    let full = (1usize << n) - 1;
    let mut assign = vec![top; 1 << n];
    for s in (0..full).rev() {
        let missing = full & !s;
        let low = missing.trailing_zeros() as usize;
        assign[s] = l.meet(assign[s | 1 << low], seq[low]);
    }
    let strict = seq.iter().all(|&x| x != top);
    Ok(Cube { n, assign, strict })
}

/// Splits a strict cube in `[x, z]` at `x ≤ y ≤ z` into a strict cube in
/// `[x, y]` and one in `[y, z]` whose dimensions add up.
pub fn split_cube(l: &FiniteLattice, cube: &Cube, y: Elem) -> Result<(Cube, Cube), LatticeError> {
    if !l.is_modular() {
        return Err(LatticeError::NotModular);
    }
    if !cube.strict || !cube.is_homomorphism(l) {
        return Err(LatticeError::InvalidCube("expected a strict cube".into()));
    }
    let (x, z) = (cube.bottom(), cube.top());
    l.require_leq(x, y)?;
    l.require_leq(y, z)?;
    let floor = l.meet(x, y);
    let mut s0 = 0usize;
    for i in 0..cube.n {
        if l.meet(cube.at(s0 | 1 << i), y) == floor {
            s0 |= 1 << i;
        }
    }
    let inside: Vec<usize> = (0..cube.n).filter(|&i| s0 >> i & 1 == 1).collect();
    let outside: Vec<usize> = (0..cube.n).filter(|&i| s0 >> i & 1 == 0).collect();
    let upper_top = l.join(cube.at(s0), y);
    let co: Vec<Elem> = inside
        .iter()
        .map(|&i| l.join(cube.at(s0 & !(1 << i)), y))
        .collect();
    let lower_base = l.meet(cube.at(s0), y);
    let ind: Vec<Elem> = outside
        .iter()
        .map(|&j| l.meet(cube.at(s0 | 1 << j), y))
        .collect();
    let upper = cube_from_coindependent(l, &co, upper_top)?;
    let lower = cube_from_sequence(l, &ind, lower_base)?;
    if !upper.strict || !lower.strict {
        return Err(LatticeError::InvalidCube(
            "split produced a degenerate face".into(),
        ));
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{m3, pentagon};

    #[test]
    fn independence_in_diamond() {
        let l = m3();
        assert!(is_independent(&l, &[1, 2], 0).unwrap());
        assert!(!is_independent(&l, &[1, 2, 3], 0).unwrap());
        assert!(is_independent(&l, &[], 3).unwrap());
        assert_eq!(
            is_independent(&l, &[0], 1),
            Err(LatticeError::ElementBelowBase("bot".into()))
        );
    }

    #[test]
    fn coindependence() {
        let l = m3();
        assert!(is_coindependent(&l, &[1, 2], 4).unwrap());
        let chain =
            FiniteLattice::from_covers(vec!["0".into(), "1".into(), "2".into()], &[(0, 1), (1, 2)])
                .unwrap();
        assert!(!is_coindependent(&chain, &[0, 1], 2).unwrap());
        assert!(is_coindependent(&chain, &[1], 2).unwrap());
    }

    #[test]
    fn cubes_from_sequences() {
        let l = m3();
        let c = cube_from_sequence(&l, &[1, 2], 0).unwrap();
        assert_eq!(c.assign, vec![0, 1, 2, 4]);
        assert!(c.strict && c.is_homomorphism(&l) && c.is_injective());
        let d = cube_from_sequence(&l, &[1, 0], 0).unwrap();
        assert!(!d.strict && !d.is_injective());
        assert_eq!(
            cube_from_sequence(&l, &[1, 2, 3], 0),
            Err(LatticeError::NotIndependent)
        );
    }

    #[test]
    fn coindependent_cube_has_given_top() {
        let l = m3();
        let c = cube_from_coindependent(&l, &[1, 2], 4).unwrap();
        assert_eq!(c.top(), 4);
        assert_eq!(c.bottom(), 0);
        assert!(c.is_homomorphism(&l) && c.strict);
        assert_eq!(c.coatoms(), vec![1, 2]);
    }

    #[test]
    fn split_requires_modularity() {
        let l = pentagon();
        let c = cube_from_sequence(&l, &[2, 3], 0).unwrap();
        assert_eq!(split_cube(&l, &c, 1), Err(LatticeError::NotModular));
    }

    #[test]
    fn split_in_diamond() {
        let l = m3();
        let c = cube_from_sequence(&l, &[1, 2], 0).unwrap();
        let (lo, hi) = split_cube(&l, &c, 3).unwrap();
        assert_eq!(lo.n + hi.n, 2);
        assert!(lo.inside(&l, 0, 3) && hi.inside(&l, 3, 4));
    }
}
