//! Brute-force reference implementations. Everything here is written from
//! the definitions and uses only the order relation, raw coefficients or
//! plain enumeration, never the library's own algorithms.

#![allow(dead_code)]

use latval_core::field::{Field, RatFunc};
use latval_core::grid::GridRelation;
use latval_core::lattice::{Elem, FiniteLattice};
use latval_core::valuation::Val;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Meet and join tables recovered from `leq` alone.
pub struct Tables {
    pub n: usize,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<Elem>>,
    pub join: Vec<Vec<Elem>>,
}

impl Tables {
    pub fn new(l: &FiniteLattice) -> Tables {
        let n = l.len();
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| l.leq(a, b)).collect())
            .collect();
        let below: Vec<usize> = (0..n)
            .map(|a| (0..n).filter(|&x| leq[x][a]).count())
            .collect();
        let above: Vec<usize> = (0..n)
            .map(|a| (0..n).filter(|&x| leq[a][x]).count())
            .collect();
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<Elem> = (0..n).filter(|&x| leq[x][a] && leq[x][b]).collect();
                let m = *lower
                    .iter()
                    .max_by_key(|&&x| below[x])
                    .expect("bounded lattice");
                assert!(
                    lower.iter().all(|&x| leq[x][m]),
                    "no greatest lower bound of {a}, {b}"
                );
                meet[a][b] = m;
                let upper: Vec<Elem> = (0..n).filter(|&x| leq[a][x] && leq[b][x]).collect();
                let j = *upper
                    .iter()
                    .max_by_key(|&&x| above[x])
                    .expect("bounded lattice");
                assert!(
                    upper.iter().all(|&x| leq[j][x]),
                    "no least upper bound of {a}, {b}"
                );
                join[a][b] = j;
            }
        }
        Tables { n, leq, meet, join }
    }

    pub fn join_all(&self, base: Elem, xs: &[Elem]) -> Elem {
        xs.iter().fold(base, |acc, &x| self.join[acc][x])
    }

    /// `(x ∨ a) ∧ b = (x ∧ b) ∨ a` whenever `a ≤ b`.
    pub fn modular_law_holds(&self, x: Elem, a: Elem, b: Elem) -> bool {
        !self.leq[a][b] || self.meet[self.join[x][a]][b] == self.join[self.meet[x][b]][a]
    }

    pub fn is_modular(&self) -> bool {
        (0..self.n)
            .all(|x| (0..self.n).all(|a| (0..self.n).all(|b| self.modular_law_holds(x, a, b))))
    }

    /// Independence read off the join map `S ↦ base ∨ ⋁_{i∈S} seq_i`: it
    /// must preserve meets. Equivalent to the sequential definition on
    /// modular lattices.
    pub fn independent_by_cube(&self, seq: &[Elem], base: Elem) -> bool {
        let k = seq.len();
        let img: Vec<Elem> = (0..1usize << k)
            .map(|s| {
                let xs: Vec<Elem> = (0..k).filter(|i| s >> i & 1 == 1).map(|i| seq[i]).collect();
                self.join_all(base, &xs)
            })
            .collect();
        (0..1usize << k).all(|s| (0..1usize << k).all(|t| self.meet[img[s]][img[t]] == img[s & t]))
    }

    /// The sequential definition of independence over `base`.
    pub fn independent(&self, seq: &[Elem], base: Elem) -> bool {
        (1..seq.len()).all(|k| self.meet[seq[k]][self.join_all(base, &seq[..k])] == base)
    }

    /// Whether `img` (indexed by bitmask) is an injective lattice map.
    pub fn is_strict_cube(&self, img: &[Elem]) -> bool {
        let size = img.len();
        for s in 0..size {
            for t in 0..size {
                if self.meet[img[s]][img[t]] != img[s & t]
                    || self.join[img[s]][img[t]] != img[s | t]
                {
                    return false;
                }
                if s != t && img[s] == img[t] {
                    return false;
                }
            }
        }
        true
    }

    /// The largest `n` with a strict `n`-cube inside `[b, a]`, by exhaustive
    /// search over bottoms and increasing atom lists.
    pub fn max_strict_cube(&self, a: Elem, b: Elem) -> u32 {
        let inside: Vec<Elem> = (0..self.n)
            .filter(|&x| self.leq[b][x] && self.leq[x][a])
            .collect();
        let mut best = 0;
        for &e in &inside {
            let above: Vec<Elem> = inside
                .iter()
                .copied()
                .filter(|&x| x != e && self.leq[e][x])
                .collect();
            let mut img = vec![e];
            self.extend_cube(&above, 0, &mut img, &mut best);
        }
        best
    }

    fn extend_cube(&self, cands: &[Elem], from: usize, img: &mut Vec<Elem>, best: &mut u32) {
        let dim = img.len().trailing_zeros();
        *best = (*best).max(dim);
        for i in from..cands.len() {
            let x = cands[i];
            let old = img.len();
            for s in 0..old {
                let v = self.join[img[s]][x];
                img.push(v);
            }
            if self.is_strict_cube(img) {
                self.extend_cube(cands, i + 1, img, best);
            }
            img.truncate(old);
        }
    }

    /// Length of a longest chain from `b` up to each `x ≥ b`.
    pub fn chain_lengths(&self, b: Elem) -> Vec<Option<u32>> {
        let below: Vec<usize> = (0..self.n)
            .map(|a| (0..self.n).filter(|&x| self.leq[x][a]).count())
            .collect();
        let mut order: Vec<Elem> = (0..self.n).collect();
        order.sort_by_key(|&x| below[x]);
        let mut len = vec![None; self.n];
        len[b] = Some(0);
        for &x in &order {
            for &y in &order {
                if y != x && self.leq[y][x] {
                    if let Some(h) = len[y] {
                        len[x] = Some(len[x].map_or(h + 1, |v: u32| v.max(h + 1)));
                    }
                }
            }
        }
        len
    }

    /// `a > base` with `(base, a]` downward directed.
    pub fn is_quasi_atom(&self, base: Elem, a: Elem) -> bool {
        if a == base || !self.leq[base][a] {
            return false;
        }
        let open: Vec<Elem> = (0..self.n)
            .filter(|&x| x != base && self.leq[base][x] && self.leq[x][a])
            .collect();
        open.iter().all(|&x| {
            open.iter()
                .all(|&y| open.iter().any(|&z| self.leq[z][x] && self.leq[z][y]))
        })
    }
}

/// A rank table as a function on comparable pairs `(a, b)` with `a ≥ b`.
pub type Rank<'a> = dyn Fn(Elem, Elem) -> u32 + 'a;

/// The three axiom groups of a subadditive rank, checked literally.
pub fn subadditive_by_definition(t: &Tables, rk: &Rank) -> bool {
    let n = t.n;
    for a in 0..n {
        for b in 0..n {
            if t.leq[b][a] && ((rk(a, b) == 0) != (a == b)) {
                return false;
            }
        }
    }
    for a in 0..n {
        for b in (0..n).filter(|&b| t.leq[b][a]) {
            for c in (0..n).filter(|&c| t.leq[c][b]) {
                let (ac, ab, bc) = (rk(a, c), rk(a, b), rk(b, c));
                if ac > ab + bc || ac < ab || ac < bc {
                    return false;
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (m, j) = (t.meet[a][b], t.join[a][b]);
            if rk(a, m) != rk(j, b) || rk(b, m) != rk(j, a) || rk(j, m) != rk(a, m) + rk(b, m) {
                return false;
            }
        }
    }
    true
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `v_p` of a nonzero rational by repeated division.
pub fn padic(p: u64, x: &BigRational) -> Val {
    if x.is_zero() {
        return Val::Infinite;
    }
    let p = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut k = 0i64;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    };
    Val::Finite(count(x.numer().clone()) - count(x.denom().clone()))
}

/// Multiplicity of the root `c` in a coefficient list, by synthetic division.
pub fn root_multiplicity<K: Field>(k: &K, coeffs: &[K::Elem], c: &K::Elem) -> i64 {
    let mut cur: Vec<K::Elem> = coeffs.to_vec();
    while cur.last().is_some_and(|x| k.is_zero(x)) {
        cur.pop();
    }
    assert!(!cur.is_empty(), "zero polynomial");
    let mut mult = 0;
    loop {
        // Horner: quotient coefficients and remainder at c
        let d = cur.len() - 1;
        if d == 0 {
            return mult;
        }
        let mut q = vec![k.zero(); d];
        let mut acc = cur[d].clone();
        for i in (0..d).rev() {
            q[i] = acc.clone();
            acc = k.add(&cur[i], &k.mul(&acc, c));
        }
        if !k.is_zero(&acc) {
            return mult;
        }
        cur = q;
        mult += 1;
    }
}

/// A degree-one place `t - c` or the place at infinity.
#[derive(Debug, Clone)]
pub enum Point<E> {
    At(E),
    Infinity,
}

fn degree<E>(coeffs: &[E]) -> i64 {
    coeffs.len() as i64 - 1
}

/// Valuation of `num/den` at a point, from the raw coefficient lists.
pub fn val_at<K: Field>(k: &K, x: &RatFunc<K::Elem>, at: &Point<K::Elem>) -> Val {
    let (num, den) = (x.num().coeffs(), x.den().coeffs());
    if num.iter().all(|c| k.is_zero(c)) {
        return Val::Infinite;
    }
    match at {
        Point::At(c) => Val::Finite(root_multiplicity(k, num, c) - root_multiplicity(k, den, c)),
        Point::Infinity => Val::Finite(degree(den) - degree(num)),
    }
}

fn horner<K: Field>(k: &K, coeffs: &[K::Elem], c: &K::Elem) -> K::Elem {
    coeffs
        .iter()
        .rev()
        .fold(k.zero(), |acc, a| k.add(&k.mul(&acc, c), a))
}

/// Residue of an element integral at the point.
pub fn residue_at<K: Field>(k: &K, x: &RatFunc<K::Elem>, at: &Point<K::Elem>) -> K::Elem {
    let (num, den) = (x.num().coeffs(), x.den().coeffs());
    match at {
        Point::At(c) => {
            let d = horner(k, den, c);
            assert!(!k.is_zero(&d), "pole at the point");
            k.div(&horner(k, num, c), &d).expect("nonzero")
        }
        Point::Infinity => {
            if num.is_empty() || num.len() < den.len() {
                k.zero()
            } else {
                assert_eq!(num.len(), den.len(), "pole at infinity");
                k.div(num.last().unwrap(), den.last().unwrap())
                    .expect("nonzero")
            }
        }
    }
}

/// Lagrange rows: row `i` holds the coefficients of the polynomial that is
/// 1 at `q_i` and 0 at the other constants, which is the inverse of the
/// Vandermonde matrix with rows `q^n`.
pub fn lagrange_rows(qs: &[BigRational]) -> Vec<Vec<BigRational>> {
    let n = qs.len();
    (0..n)
        .map(|i| {
            let mut poly = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, qj) in qs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * qj;
                }
                poly = next;
                denom *= &qs[i] - qj;
            }
            poly.into_iter().map(|c| c / &denom).collect()
        })
        .collect()
}

/// Largest `m` with an `m × … × m` product inside `y`, by enumerating the
/// first `n − 1` coordinate sets and intersecting fibres.
pub fn max_grid_brute(y: &GridRelation) -> usize {
    let sizes: Vec<usize> = y.universes().iter().map(|u| u.len()).collect();
    let n = sizes.len();
    if n == 1 {
        return y.tuples().len();
    }
    let mut best = 0;
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    enumerate_sets(y, &sizes, &mut chosen, &mut best);
    best
}

fn enumerate_sets(
    y: &GridRelation,
    sizes: &[usize],
    chosen: &mut Vec<Vec<usize>>,
    best: &mut usize,
) {
    let n = sizes.len();
    if chosen.len() == n - 1 {
        let m = chosen.iter().map(|s| s.len()).min().unwrap_or(0);
        let last = (0..sizes[n - 1])
            .filter(|&b| {
                let mut t = vec![0; n];
                t[n - 1] = b;
                all_tuples(chosen, 0, &mut t, &mut |t| y.contains(t))
            })
            .count();
        *best = (*best).max(m.min(last));
        return;
    }
    let k = chosen.len();
    for mask in 1u32..1 << sizes[k] {
        let set: Vec<usize> = (0..sizes[k]).filter(|&i| mask >> i & 1 == 1).collect();
        chosen.push(set);
        enumerate_sets(y, sizes, chosen, best);
        chosen.pop();
    }
}

fn all_tuples(
    sets: &[Vec<usize>],
    k: usize,
    t: &mut Vec<usize>,
    pred: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if k == sets.len() {
        return pred(t);
    }
    for &x in &sets[k] {
        t[k] = x;
        if !all_tuples(sets, k + 1, t, pred) {
            return false;
        }
    }
    true
}

/// `y^p − y` truncated at `t^n`, by schoolbook multiplication mod `p`.
pub fn artin_schreier_image(p: u64, y: &[u64], n: usize) -> Vec<u64> {
    let mul = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; n];
        for (i, x) in a.iter().enumerate().take(n) {
            for (j, z) in b.iter().enumerate().take(n - i) {
                out[i + j] = (out[i + j] + x * z) % p;
            }
        }
        out
    };
    let mut yy: Vec<u64> = y
        .iter()
        .copied()
        .chain(std::iter::repeat(0))
        .take(n)
        .collect();
    yy.iter_mut().for_each(|c| *c %= p);
    let mut pow = yy.clone();
    for _ in 1..p {
        pow = mul(&pow, &yy);
    }
    pow.iter().zip(&yy).map(|(a, b)| (a + p - b) % p).collect()
}
