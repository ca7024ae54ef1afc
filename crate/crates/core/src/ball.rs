//! Ball subgroups `J = {x : val_j(x) ≥ γ_j}` of a rational function field
//! `K(t)` cut out by finitely many places, with their rings, ideals,
//! mutations and the Vandermonde construction.

use rand::{Rng, RngCore};
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldError, FunctionField};
use crate::lattice::{FiniteLattice, LatticeError};
use crate::valuation::{element_with_vals, idempotent, Place, Val, ValError, ValuedField};

pub const MAX_EXPORT: u128 = 512;
const MAX_SPLIT_PRECISION: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallError {
    #[error("expected {expected} coordinates, got {got}")]
    FieldMismatch { expected: usize, got: usize },
    #[error("a mutation set may not contain 0")]
    ZeroInS,
    #[error("a mutation set must contain 1")]
    MissingOne,
    #[error("cannot scale by 0")]
    ZeroScale,
    #[error("need {0} distinct constants from an infinite constant field")]
    NotEnoughConstants(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("groups are not nested")]
    NotComparable,
    #[error("interval would have {0} elements, more than {MAX_EXPORT}")]
    TooLarge(u128),
    #[error(transparent)]
    Val(#[from] ValError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The ball with lower bounds `gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BallGroup {
    pub gamma: Vec<i64>,
}

impl BallGroup {
    pub fn new(gamma: Vec<i64>) -> Self {
        BallGroup { gamma }
    }

    /// Inclusion `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &BallGroup) -> bool {
        self.gamma.iter().zip(&other.gamma).all(|(a, b)| a >= b)
    }
}

/// A rational function field with an ordered list of distinct places.
#[derive(Debug, Clone)]
pub struct BallContext<K: Field> {
    field: FunctionField<K>,
    places: Vec<Place<K::Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VandermondeReport<E> {
    pub g: Vec<BallGroup>,
    pub h: BallGroup,
    pub h_i: Vec<BallGroup>,
    /// Every `i` with `G_i = H`.
    pub collapsing: Vec<usize>,
    pub h_i_equal_h: bool,
    /// Rows of the inverse Vandermonde matrix over the constants.
    #[serde(skip)]
    pub inverse: Vec<Vec<E>>,
    pub inverse_ok: bool,
    /// Sampled `x ∈ G_i` with `f(g(x)) ≡ x·e_i` modulo `J^{r+1}`.
    pub key_samples: usize,
    pub key_ok: bool,
    /// Sampled tuples of `G_0 × ... × G_r` whose sum lies in `H`.
    pub tuple_samples: usize,
    pub tuple_premises: usize,
    pub tuple_ok: bool,
}

impl<E> VandermondeReport<E> {
    pub fn certified(&self) -> bool {
        !self.collapsing.is_empty()
            && self.h_i_equal_h
            && self.inverse_ok
            && self.key_ok
            && self.tuple_ok
    }
}

fn finite(v: Val) -> i64 {
    v.finite().expect("nonzero element")
}

impl<K: Field> BallContext<K> {
    pub fn new(field: FunctionField<K>, places: Vec<Place<K::Elem>>) -> Result<Self, BallError> {
        if places.is_empty() {
            return Err(ValError::TooFewValuations(1).into());
        }
        for i in 0..places.len() {
            if places[..i].contains(&places[i]) {
                return Err(ValError::Comparable.into());
            }
        }
        Ok(BallContext { field, places })
    }

    pub fn field(&self) -> &FunctionField<K> {
        &self.field
    }

    pub fn places(&self) -> &[Place<K::Elem>] {
        &self.places
    }

    pub fn m(&self) -> usize {
        self.places.len()
    }

    fn check(&self, j: &BallGroup) -> Result<(), BallError> {
        if j.gamma.len() != self.m() {
            return Err(BallError::FieldMismatch {
                expected: self.m(),
                got: j.gamma.len(),
            });
        }
        Ok(())
    }

    pub fn group(&self, gamma: Vec<i64>) -> Result<BallGroup, BallError> {
        let j = BallGroup::new(gamma);
        self.check(&j)?;
        Ok(j)
    }

    pub fn vals(&self, x: &<FunctionField<K> as Field>::Elem) -> Vec<Val> {
        self.field.val_vector(&self.places, x)
    }

    pub fn member(
        &self,
        j: &BallGroup,
        x: &<FunctionField<K> as Field>::Elem,
    ) -> Result<bool, BallError> {
        self.check(j)?;
        Ok(self
            .vals(x)
            .iter()
            .zip(&j.gamma)
            .all(|(v, &g)| v.cmp_int(g).is_ge()))
    }

    /// Intersection.
    pub fn meet(&self, a: &BallGroup, b: &BallGroup) -> Result<BallGroup, BallError> {
        self.check(a)?;
        self.check(b)?;
        Ok(BallGroup::new(
            a.gamma
                .iter()
                .zip(&b.gamma)
                .map(|(x, y)| *x.max(y))
                .collect(),
        ))
    }

    /// Sum.
    pub fn join(&self, a: &BallGroup, b: &BallGroup) -> Result<BallGroup, BallError> {
        self.check(a)?;
        self.check(b)?;
        Ok(BallGroup::new(
            a.gamma
                .iter()
                .zip(&b.gamma)
                .map(|(x, y)| *x.min(y))
                .collect(),
        ))
    }

    /// `s·J`.
    pub fn scale(
        &self,
        s: &<FunctionField<K> as Field>::Elem,
        j: &BallGroup,
    ) -> Result<BallGroup, BallError> {
        self.check(j)?;
        if self.field.is_zero(s) {
            return Err(BallError::ZeroScale);
        }
        let shift = self.vals(s);
        Ok(BallGroup::new(
            j.gamma
                .iter()
                .zip(shift)
                .map(|(g, v)| g + finite(v))
                .collect(),
        ))
    }

    /// `D ⊇ J` with every coordinate strictly enlarged.
    pub fn dominates(&self, d: &BallGroup, j: &BallGroup) -> Result<bool, BallError> {
        self.check(d)?;
        self.check(j)?;
        Ok(d.gamma.iter().zip(&j.gamma).all(|(a, b)| a < b))
    }

    /// `a = 0` or `J` dominates `a·J`.
    pub fn contracts(
        &self,
        a: &<FunctionField<K> as Field>::Elem,
        j: &BallGroup,
    ) -> Result<bool, BallError> {
        if self.field.is_zero(a) {
            self.check(j)?;
            return Ok(true);
        }
        self.dominates(j, &self.scale(a, j)?)
    }

    /// `a ∈ R_J`, i.e. `a·J ⊆ J`.
    pub fn in_ring(
        &self,
        a: &<FunctionField<K> as Field>::Elem,
        j: &BallGroup,
    ) -> Result<bool, BallError> {
        if self.field.is_zero(a) {
            self.check(j)?;
            return Ok(true);
        }
        Ok(self.scale(a, j)?.is_subgroup_of(j))
    }

    /// `a ∈ I_J`.
    pub fn in_ideal(
        &self,
        a: &<FunctionField<K> as Field>::Elem,
        j: &BallGroup,
    ) -> Result<bool, BallError> {
        self.contracts(a, j)
    }

    /// `a` is a unit of `R_J`.
    pub fn is_ring_unit(
        &self,
        a: &<FunctionField<K> as Field>::Elem,
        j: &BallGroup,
    ) -> Result<bool, BallError> {
        if self.field.is_zero(a) {
            return Ok(false);
        }
        let inv = self.field.inv(a)?;
        Ok(self.in_ring(a, j)? && self.in_ring(&inv, j)?)
    }

    /// `J^S = ⋂_{s∈S} s·J`.
    pub fn mutate(
        &self,
        j: &BallGroup,
        s: &[<FunctionField<K> as Field>::Elem],
    ) -> Result<BallGroup, BallError> {
        self.check(j)?;
        if s.iter().any(|x| self.field.is_zero(x)) {
            return Err(BallError::ZeroInS);
        }
        if !s.iter().any(|x| self.field.is_one(x)) {
            return Err(BallError::MissingOne);
        }
        let mut out = j.clone();
        for x in s {
            out = self.meet(&out, &self.scale(x, j)?)?;
        }
        Ok(out)
    }

    fn require_infinite_constants(&self, needed: usize, qs: &[K::Elem]) -> Result<(), BallError> {
        if self.field.base().is_finite() || qs.len() < needed {
            return Err(BallError::NotEnoughConstants(needed));
        }
        for i in 0..qs.len() {
            if qs[..i].contains(&qs[i]) {
                return Err(BallError::DegenerateInput(
                    "constants must be distinct".into(),
                ));
            }
        }
        Ok(())
    }

    /// The first `i` with `α ≠ q_i` and `1/(α − q_i)` integral at every place.
    pub fn unit_shift(
        &self,
        alpha: &<FunctionField<K> as Field>::Elem,
        qs: &[K::Elem],
    ) -> Result<usize, BallError> {
        self.require_infinite_constants(self.m() + 1, qs)?;
        let f = &self.field;
        for (i, q) in qs.iter().enumerate() {
            let diff = f.sub(alpha, &f.constant(q.clone()));
            if f.is_zero(&diff) {
                continue;
            }
            let inv = f.inv(&diff)?;
            if self.vals(&inv).iter().all(|v| v.is_nonneg()) {
                return Ok(i);
            }
        }
        unreachable!("each place rejects at most one constant")
    }

    /// `{x : a^k x ∈ J for k in range}` as a ball.
    fn preimage(
        &self,
        j: &BallGroup,
        a: &<FunctionField<K> as Field>::Elem,
        ks: std::ops::RangeInclusive<i64>,
    ) -> BallGroup {
        let v: Vec<i64> = self.vals(a).into_iter().map(finite).collect();
        BallGroup::new(
            j.gamma
                .iter()
                .zip(&v)
                .map(|(g, vj)| {
                    ks.clone()
                        .map(|k| g - k * vj)
                        .max()
                        .expect("nonempty range")
                })
                .collect(),
        )
    }

    /// A random element of `J`.
    pub fn random_member(
        &self,
        rng: &mut dyn RngCore,
        j: &BallGroup,
        size: u32,
    ) -> <FunctionField<K> as Field>::Elem {
        let f = &self.field;
        let base = element_with_vals(f, &self.places, &j.gamma);
        let r = f.random_integral(rng, &self.places, size);
        f.mul(&base, &r)
    }

    /// Computes `G_i`, `H_i` and `H` for `α` and constants `q_0..q_m`, and
    /// checks the claims relating them on `samples` random draws.
    pub fn vandermonde_check(
        &self,
        j: &BallGroup,
        alpha: &<FunctionField<K> as Field>::Elem,
        qs: &[K::Elem],
        rng: &mut dyn RngCore,
        samples: usize,
    ) -> Result<VandermondeReport<K::Elem>, BallError> {
        self.check(j)?;
        let r = self.m();
        self.require_infinite_constants(r + 1, qs)?;
        if qs.len() != r + 1 {
            return Err(BallError::DegenerateInput(format!(
                "expected {} constants",
                r + 1
            )));
        }
        let f = &self.field;
        let k = f.base();
        let mut alphas = Vec::new();
        for q in qs {
            let a = f.sub(alpha, &f.constant(q.clone()));
            if f.is_zero(&a) {
                return Err(BallError::DegenerateInput("alpha equals some q_i".into()));
            }
            alphas.push(a);
        }
        let ri = r as i64;
        let g: Vec<BallGroup> = alphas.iter().map(|a| self.preimage(j, a, 1..=ri)).collect();
        let h_i: Vec<BallGroup> = alphas.iter().map(|a| self.preimage(j, a, 0..=ri)).collect();
        let h = self.preimage(j, alpha, 0..=ri);
        let collapsing: Vec<usize> = (0..=r).filter(|&i| g[i] == h).collect();
        let h_i_equal_h = h_i.iter().all(|x| *x == h);

        let vm: Vec<Vec<K::Elem>> = (0..=r)
            .map(|row| qs.iter().map(|q| k.pow_u(q, row as u64)).collect())
            .collect();
        let inverse = invert(k, &vm)?;
        let inverse_ok = (0..=r).all(|i| {
            (0..=r).all(|c| {
                let col: Vec<K::Elem> = (0..=r).map(|row| vm[row][c].clone()).collect();
                let entry = dot(k, &inverse[i], &col);
                if i == c {
                    k.is_one(&entry)
                } else {
                    k.is_zero(&entry)
                }
            })
        });

        // f(g(x)) = (L_0 x, ..., L_r x) where L_i = Σ_n f_{i,n} α^n
        let powers: Vec<_> = (0..=r).map(|n| f.pow_u(alpha, n as u64)).collect();
        let rows: Vec<_> = inverse
            .iter()
            .map(|row| {
                let terms: Vec<_> = row
                    .iter()
                    .zip(&powers)
                    .map(|(c, p)| f.mul(&f.constant(c.clone()), p))
                    .collect();
                f.sum(&terms)
            })
            .collect();
        let fg = |x: &<FunctionField<K> as Field>::Elem| -> Vec<<FunctionField<K> as Field>::Elem> {
            rows.iter().map(|l| f.mul(l, x)).collect()
        };
        let in_j =
            |x: &<FunctionField<K> as Field>::Elem| self.member(j, x).expect("arity checked");
        let in_ball = |b: &BallGroup, x: &<FunctionField<K> as Field>::Elem| {
            self.member(b, x).expect("arity checked")
        };

        let mut key_ok = true;
        for n in 0..samples {
            let i = n % (r + 1);
            let x = self.random_member(rng, &g[i], 3);
            let image = fg(&x);
            for (c, y) in image.iter().enumerate() {
                let rem = if c == i { f.sub(y, &x) } else { y.clone() };
                key_ok &= in_j(&rem);
            }
        }

        let mut tuple_premises = 0;
        let mut tuple_ok = true;
        for _ in 0..samples {
            let mut xs: Vec<_> = (0..=r)
                .map(|i| {
                    let mut x = self.random_member(rng, &h, 2);
                    if rng.gen_bool(0.5) {
                        x = f.add(&x, &self.random_member(rng, &g[i], 3));
                    }
                    x
                })
                .collect();
            if rng.gen_bool(0.5) {
                // force the sum into H and keep the tuple only if it stays in the G_i
                let rest: Vec<_> = xs[..r].to_vec();
                let target = self.random_member(rng, &h, 2);
                xs[r] = f.sub(&target, &f.sum(&rest));
            }
            let valid = xs.iter().zip(&g).all(|(x, gi)| in_ball(gi, x));
            if valid && in_ball(&h, &f.sum(&xs)) {
                tuple_premises += 1;
                tuple_ok &= xs.iter().all(|x| in_ball(&h, x));
            }
        }

        Ok(VandermondeReport {
            g,
            h,
            h_i,
            collapsing,
            h_i_equal_h,
            inverse,
            inverse_ok,
            key_samples: samples,
            key_ok,
            tuple_samples: samples,
            tuple_premises,
            tuple_ok,
        })
    }

    /// All balls between `low ⊆ high`, as a product of chains; elements are
    /// named by their bound vectors, e.g. `(1,0)`.
    pub fn export_interval(
        &self,
        low: &BallGroup,
        high: &BallGroup,
    ) -> Result<FiniteLattice, BallError> {
        self.check(low)?;
        self.check(high)?;
        if !low.is_subgroup_of(high) {
            return Err(BallError::NotComparable);
        }
        let lengths: Vec<usize> = low
            .gamma
            .iter()
            .zip(&high.gamma)
            .map(|(l, h)| (l - h) as usize)
            .collect();
        let size = lengths
            .iter()
            .try_fold(1u128, |acc, &l| acc.checked_mul(l as u128 + 1))
            .unwrap_or(u128::MAX);
        if size > MAX_EXPORT {
            return Err(BallError::TooLarge(size));
        }
        let size = size as usize;
        let decode = |mut idx: usize| -> Vec<usize> {
            lengths
                .iter()
                .map(|&l| {
                    let c = idx % (l + 1);
                    idx /= l + 1;
                    c
                })
                .collect()
        };
        let names = (0..size)
            .map(|i| {
                let gamma: Vec<String> = decode(i)
                    .iter()
                    .zip(&low.gamma)
                    .map(|(d, g)| (g - *d as i64).to_string())
                    .collect();
                format!("({})", gamma.join(","))
            })
            .collect();
        let mut covers = Vec::new();
        for i in 0..size {
            let coords = decode(i);
            let mut stride = 1;
            for (c, &l) in lengths.iter().enumerate() {
                if coords[c] < l {
                    covers.push((i, i + stride));
                }
                stride *= l + 1;
            }
        }
        Ok(FiniteLattice::from_covers(names, &covers)?)
    }

    /// Writes `x ∈ a + b` as `u + v` with `u ∈ a` and `v ∈ b`.
    pub fn decompose_join(
        &self,
        a: &BallGroup,
        b: &BallGroup,
        x: &<FunctionField<K> as Field>::Elem,
    ) -> Result<
        (
            <FunctionField<K> as Field>::Elem,
            <FunctionField<K> as Field>::Elem,
        ),
        BallError,
    > {
        let sum = self.join(a, b)?;
        if !self.member(&sum, x)? {
            return Err(BallError::DegenerateInput(
                "element is not in the sum".into(),
            ));
        }
        let f = &self.field;
        let looser: Vec<usize> = (0..self.m())
            .filter(|&j| a.gamma[j] <= b.gamma[j])
            .collect();
        if looser.len() == self.m() {
            return Ok((x.clone(), f.zero()));
        }
        if looser.is_empty() {
            return Ok((f.zero(), x.clone()));
        }
        let mut k = 1;
        loop {
            let parts: Vec<_> = looser
                .iter()
                .map(|&i| idempotent(f, &self.places, i, k))
                .collect();
            let e = f.sum(&parts);
            let u = f.mul(x, &e);
            let v = f.sub(x, &u);
            if self.member(a, &u)? && self.member(b, &v)? {
                return Ok((u, v));
            }
            assert!(k < MAX_SPLIT_PRECISION, "decomposition did not converge");
            k *= 2;
        }
    }
}

fn dot<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> K::Elem {
    let terms: Vec<K::Elem> = a.iter().zip(b).map(|(x, y)| k.mul(x, y)).collect();
    k.sum(&terms)
}

/// Gauss-Jordan inverse of a square matrix.
pub fn invert<K: Field>(k: &K, m: &[Vec<K::Elem>]) -> Result<Vec<Vec<K::Elem>>, FieldError> {
    let n = m.len();
    let mut a: Vec<Vec<K::Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { k.one() } else { k.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !k.is_zero(&a[r][col]))
            .ok_or(FieldError::DivisionByZero)?;
        a.swap(col, pivot);
        let inv = k.inv(&a[col][col])?;
        for x in a[col].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for r in 0..n {
            if r != col && !k.is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x = k.sub(x, &k.mul(&factor, p));
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
