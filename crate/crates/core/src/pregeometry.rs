//! The pregeometry on quasi-atoms of a finite lattice over a base element.

use serde::Serialize;

use crate::lattice::{Elem, FiniteLattice, LatticeError};

#[derive(Debug, Clone)]
pub struct Pregeometry<'a> {
    lattice: &'a FiniteLattice,
    base: Elem,
    quasi_atoms: Vec<Elem>,
    classes: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeBasis {
    pub y: Vec<Elem>,
    pub z: Vec<Elem>,
}

/// `a > base` with `(base, a]` downward directed.
pub fn is_quasi_atom(l: &FiniteLattice, base: Elem, a: Elem) -> bool {
    if !l.lt(base, a) {
        return false;
    }
    let below: Vec<Elem> = l.down_set(a).iter().filter(|&x| l.lt(base, x)).collect();
    below
        .iter()
        .all(|&x| below.iter().all(|&y| l.meet(x, y) != base))
}

impl<'a> Pregeometry<'a> {
    pub fn new(lattice: &'a FiniteLattice, base: Elem) -> Self {
        let quasi_atoms: Vec<Elem> = lattice
            .elements()
            .filter(|&a| is_quasi_atom(lattice, base, a))
            .collect();
        // union-find over the non-independence relation
        let mut parent: Vec<usize> = (0..quasi_atoms.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for i in 0..quasi_atoms.len() {
            for j in 0..i {
                if lattice.meet(quasi_atoms[i], quasi_atoms[j]) != base {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut classes: Vec<Vec<Elem>> = Vec::new();
        let mut slot = vec![usize::MAX; quasi_atoms.len()];
        for i in 0..quasi_atoms.len() {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[r]].push(quasi_atoms[i]);
        }
        Pregeometry {
            lattice,
            base,
            quasi_atoms,
            classes,
        }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        self.lattice
    }

    pub fn base(&self) -> Elem {
        self.base
    }

    pub fn quasi_atoms(&self) -> &[Elem] {
        &self.quasi_atoms
    }

    /// Equivalence classes, each sorted, ordered by their least element.
    pub fn classes(&self) -> &[Vec<Elem>] {
        &self.classes
    }

    /// Whether the pairwise relation `a ∧ a' > base` is already transitive.
    pub fn classes_are_transitive(&self) -> bool {
        self.classes.iter().all(|c| {
            c.iter()
                .all(|&a| c.iter().all(|&b| self.lattice.meet(a, b) != self.base))
        })
    }

    pub fn equivalent(&self, a: Elem, b: Elem) -> bool {
        self.lattice.meet(a, b) != self.base
    }

    /// `V(x) = {a ∈ Q : a ∧ x > base}`.
    pub fn v_of(&self, x: Elem) -> Vec<Elem> {
        self.quasi_atoms
            .iter()
            .copied()
            .filter(|&a| self.lattice.meet(a, x) != self.base)
            .collect()
    }

    fn check_members(&self, set: &[Elem]) -> Result<(), LatticeError> {
        match set
            .iter()
            .find(|a| self.quasi_atoms.binary_search(a).is_err())
        {
            Some(&a) => Err(LatticeError::NotAQuasiAtom(self.lattice.name(a).into())),
            None => Ok(()),
        }
    }

    /// The greedy independent subsequence.
    fn greedy_independent(&self, set: &[Elem]) -> Vec<Elem> {
        let l = self.lattice;
        let mut acc = self.base;
        let mut out = Vec::new();
        for &a in set {
            if l.meet(a, acc) == self.base {
                acc = l.join(acc, a);
                out.push(a);
            }
        }
        out
    }

    /// The smallest `V(x)` containing `set`.
    pub fn closure(&self, set: &[Elem]) -> Result<Vec<Elem>, LatticeError> {
        self.check_members(set)?;
        let basis = self.greedy_independent(set);
        Ok(self.v_of(self.lattice.join_all(basis.into_iter().chain([self.base]))))
    }

    /// Independence in the pregeometry: no member lies in the closure of the others.
    pub fn is_independent_set(&self, set: &[Elem]) -> Result<bool, LatticeError> {
        self.check_members(set)?;
        for (i, &a) in set.iter().enumerate() {
            let rest: Vec<Elem> = set
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &b)| b)
                .collect();
            if self.closure(&rest)?.contains(&a) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The size of a maximal independent set of quasi-atoms, with one such set.
    pub fn geometry_rank(&self) -> (usize, Vec<Elem>) {
        let basis = self.greedy_independent(&self.quasi_atoms);
        (basis.len(), basis)
    }

    /// A basis `y` of `V(x)` with every `y_i ≤ x`, extended by `z` to a
    /// basis of the whole pregeometry.
    pub fn relative_basis(&self, x: Elem) -> RelativeBasis {
        let l = self.lattice;
        let y: Vec<Elem> = self
            .greedy_independent(&self.v_of(x))
            .into_iter()
            .map(|a| l.meet(a, x))
            .collect();
        let mut acc = l.join_all(y.iter().copied().chain([self.base]));
        let mut z = Vec::new();
        for &a in &self.quasi_atoms {
            if l.meet(a, acc) == self.base {
                acc = l.join(acc, a);
                z.push(a);
            }
        }
        RelativeBasis { y, z }
    }

    /// All distinct closed sets `V(x)`, in order of first appearance by id.
    pub fn closed_sets(&self) -> Vec<Vec<Elem>> {
        let mut out: Vec<Vec<Elem>> = Vec::new();
        for x in self.lattice.elements() {
            let v = self.v_of(x);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    /// The closed sets ordered by inclusion, as a lattice.
    pub fn closed_set_lattice(&self) -> Result<FiniteLattice, LatticeError> {
        let sets = self.closed_sets();
        let names = sets
            .iter()
            .map(|s| {
                let inner: Vec<&str> = s.iter().map(|&a| self.lattice.name(a)).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        let leq: Vec<Vec<bool>> = sets
            .iter()
            .map(|a| {
                sets.iter()
                    .map(|b| a.iter().all(|x| b.contains(x)))
                    .collect()
            })
            .collect();
        FiniteLattice::from_leq(names, &leq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::m3;

    fn chain(k: usize) -> FiniteLattice {
        let names = (0..=k).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        FiniteLattice::from_covers(names, &covers).unwrap()
    }

    #[test]
    fn quasi_atoms_of_chain() {
        let l = chain(2);
        let p = Pregeometry::new(&l, 0);
        assert_eq!(p.quasi_atoms(), &[1, 2]);
        assert_eq!(p.classes().len(), 1);
        assert_eq!(p.geometry_rank().0, 1);
    }

    #[test]
    fn quasi_atoms_of_square() {
        let l = FiniteLattice::from_covers(
            vec!["0".into(), "x".into(), "y".into(), "xy".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        let p = Pregeometry::new(&l, 0);
        assert_eq!(p.quasi_atoms(), &[1, 2]);
        assert_eq!(p.classes().len(), 2);
    }

    #[test]
    fn diamond_closures() {
        let l = m3();
        let p = Pregeometry::new(&l, 0);
        assert_eq!(p.quasi_atoms(), &[1, 2, 3]);
        assert_eq!(p.classes().len(), 3);
        assert!(p.v_of(0).is_empty());
        assert_eq!(p.v_of(4), vec![1, 2, 3]);
        assert_eq!(p.closure(&[1]).unwrap(), vec![1]);
        assert_eq!(p.closure(&[1, 2]).unwrap(), vec![1, 2, 3]);
        assert!(p.closure(&[]).unwrap().is_empty());
        assert_eq!(
            p.closure(&[4]),
            Err(LatticeError::NotAQuasiAtom("top".into()))
        );
        assert_eq!(p.geometry_rank(), (2, vec![1, 2]));
    }

    #[test]
    fn diamond_relative_bases() {
        let l = m3();
        let p = Pregeometry::new(&l, 0);
        assert_eq!(
            p.relative_basis(1),
            RelativeBasis {
                y: vec![1],
                z: vec![2]
            }
        );
        assert_eq!(
            p.relative_basis(0),
            RelativeBasis {
                y: vec![],
                z: vec![1, 2]
            }
        );
        assert_eq!(
            p.relative_basis(4),
            RelativeBasis {
                y: vec![1, 2],
                z: vec![]
            }
        );
    }

    #[test]
    fn one_element_lattice() {
        let l = FiniteLattice::from_covers(vec!["o".into()], &[]).unwrap();
        let p = Pregeometry::new(&l, 0);
        assert!(p.quasi_atoms().is_empty());
        assert_eq!(p.geometry_rank().0, 0);
    }
}
