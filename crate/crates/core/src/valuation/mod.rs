//! Discrete valuations on the rationals and on rational function fields,
//! and the ring cut out by finitely many of them.

mod ring;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};
use thiserror::Error;

use crate::field::{
    is_prime, parse_element, poly::is_irreducible, Evaluation, Field, FieldError, FunctionField,
    Poly, PrimeField, Rationals,
};

pub use ring::{
    element_with_vals, idempotent, incomparable, Approximation, Bezout, BezoutCase,
    IntersectionRing, Localization,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("`{0}` is not a valid place")]
    BadPlace(String),
    #[error("residue field at {0} is larger than the prime field")]
    ResidueFieldTooLarge(String),
    #[error("element is not in the ring")]
    NotInRing,
    #[error("residue target not in the residue field: {0}")]
    ResidueNotInField(String),
    #[error("valuations are comparable")]
    Comparable,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("need at least {0} valuations")]
    TooFewValuations(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A value in `Z ∪ {∞}`; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(i64),
    Infinite,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinite => None,
        }
    }

    pub fn is_nonneg(self) -> bool {
        self >= Val::Finite(0)
    }

    pub fn is_positive(self) -> bool {
        self > Val::Finite(0)
    }

    pub fn cmp_int(self, n: i64) -> Ordering {
        self.cmp(&Val::Finite(n))
    }
}

impl std::ops::Add for Val {
    type Output = Val;

    fn add(self, other: Val) -> Val {
        match (self, other) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinite,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

/// A field with a family of discrete valuations indexed by places.
pub trait ValuedField: Field {
    type Place: Clone + PartialEq + fmt::Debug;
    type Residue: Field;

    fn parse_place(&self, s: &str) -> Result<Self::Place, ValError>;
    fn format_place(&self, place: &Self::Place) -> String;
    fn val(&self, place: &Self::Place, x: &Self::Elem) -> Val;
    /// An element of valuation exactly 1 at `place`.
    fn uniformizer(&self, place: &Self::Place) -> Self::Elem;
    /// Fails unless the residue field is the ground prime or constant field.
    fn residue_field(&self, place: &Self::Place) -> Result<Self::Residue, ValError>;
    fn residue(
        &self,
        place: &Self::Place,
        x: &Self::Elem,
    ) -> Result<<Self::Residue as Field>::Elem, ValError>;
    /// A representative in the field of a residue class.
    fn lift_residue(
        &self,
        place: &Self::Place,
        r: &<Self::Residue as Field>::Elem,
    ) -> Result<Self::Elem, ValError>;
    /// `y` with `val_i(y) < 0` and `val_j(y) > 0` for every `j != i`.
    fn separating_element(&self, places: &[Self::Place], i: usize) -> Self::Elem;
    /// `(a, b)` with `a ∈ O_1 \ O_2` and `b ∈ O_2 \ O_1`, or `None` if the
    /// valuation rings coincide.
    fn incomparability_witnesses(
        &self,
        p1: &Self::Place,
        p2: &Self::Place,
    ) -> Option<(Self::Elem, Self::Elem)>;
    /// A random element with nonnegative valuation at every place.
    fn random_integral(
        &self,
        rng: &mut dyn RngCore,
        places: &[Self::Place],
        size: u32,
    ) -> Self::Elem;
    /// Preferred representative of `x + ∩ m_i`, used to make CRT output canonical.
    fn canonical_crt(
        &self,
        _places: &[Self::Place],
        _residues: &[<Self::Residue as Field>::Elem],
    ) -> Option<Self::Elem> {
        None
    }
    /// A unit multiple of `x` in normal form, with the unit.
    fn normalize(&self, x: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// A product of uniformizers with the given valuations, when one is
    /// available without approximation.
    fn monomial_with_vals(&self, _places: &[Self::Place], _target: &[i64]) -> Option<Self::Elem> {
        None
    }

    fn val_vector(&self, places: &[Self::Place], x: &Self::Elem) -> Vec<Val> {
        places.iter().map(|p| self.val(p, x)).collect()
    }
}

fn padic(p: u64, n: &BigInt) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        k += 1;
    }
    k
}

impl ValuedField for Rationals {
    /// A rational prime.
    type Place = u64;
    type Residue = PrimeField;

    fn parse_place(&self, s: &str) -> Result<u64, ValError> {
        let p: u64 = s.trim().parse().map_err(|_| ValError::BadPlace(s.into()))?;
        if !is_prime(p) || p >= 1 << 31 {
            return Err(ValError::BadPlace(s.into()));
        }
        Ok(p)
    }

    fn format_place(&self, place: &u64) -> String {
        place.to_string()
    }

    fn val(&self, place: &u64, x: &BigRational) -> Val {
        if x.is_zero() {
            return Val::Infinite;
        }
        Val::Finite(padic(*place, x.numer()) - padic(*place, x.denom()))
    }

    fn uniformizer(&self, place: &u64) -> BigRational {
        BigRational::from_integer((*place).into())
    }

    fn residue_field(&self, place: &u64) -> Result<PrimeField, ValError> {
        Ok(PrimeField::new(*place)?)
    }

    fn residue(&self, place: &u64, x: &BigRational) -> Result<u64, ValError> {
        self.residue_field(place)?
            .reduce_rational(x)
            .ok_or(ValError::NotInRing)
    }

    fn lift_residue(&self, place: &u64, r: &u64) -> Result<BigRational, ValError> {
        if *r >= *place {
            return Err(ValError::ResidueNotInField(format!("{r} mod {place}")));
        }
        Ok(BigRational::from_integer((*r).into()))
    }

    fn separating_element(&self, places: &[u64], i: usize) -> BigRational {
        let num: BigInt = places
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &p)| BigInt::from(p))
            .product();
        BigRational::new(num, places[i].into())
    }

    fn incomparability_witnesses(&self, p1: &u64, p2: &u64) -> Option<(BigRational, BigRational)> {
        (p1 != p2).then(|| {
            (
                BigRational::new(BigInt::one(), (*p2).into()),
                BigRational::new(BigInt::one(), (*p1).into()),
            )
        })
    }

    fn random_integral(&self, rng: &mut dyn RngCore, places: &[u64], size: u32) -> BigRational {
        let bound = 4 * size.max(1) as i64 + 2;
        let n = rng.gen_range(-bound..=bound);
        let mut d = rng.gen_range(1..=bound);
        for &p in places {
            while d % p as i64 == 0 {
                d /= p as i64;
            }
        }
        BigRational::new(n.into(), d.into())
    }

    fn canonical_crt(&self, places: &[u64], residues: &[u64]) -> Option<BigRational> {
        // the integer in [0, prod p) with the given residues
        let mut x = BigInt::zero();
        let mut m = BigInt::one();
        for (&p, &r) in places.iter().zip(residues) {
            let p = BigInt::from(p);
            let inv = m.mod_floor(&p).extended_gcd(&p).x;
            let step = ((BigInt::from(r) - &x) * inv).mod_floor(&p);
            x += &m * step;
            m *= &p;
        }
        Some(BigRational::from_integer(x))
    }

    fn normalize(&self, x: &BigRational) -> (BigRational, BigRational) {
        if x.is_negative() {
            (-x, -BigRational::one())
        } else {
            (x.clone(), BigRational::one())
        }
    }

    fn monomial_with_vals(&self, places: &[u64], target: &[i64]) -> Option<BigRational> {
        let mut x = BigRational::one();
        for (&p, &v) in places.iter().zip(target) {
            x *= self.pow(&BigRational::from_integer(p.into()), v).ok()?;
        }
        Some(x)
    }
}

/// A place of `K(t)`: a monic irreducible polynomial or the place at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place<E> {
    Finite(Poly<E>),
    Infinity,
}

impl<K: Field> FunctionField<K> {
    fn place_degree(&self, place: &Place<K::Elem>) -> usize {
        match place {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    /// The root `c` of a degree-one place `t - c`; `None` at infinity.
    fn rational_point(&self, place: &Place<K::Elem>) -> Result<Option<K::Elem>, ValError> {
        match place {
            Place::Infinity => Ok(None),
            Place::Finite(p) if p.degree() == Some(1) => {
                Ok(Some(self.base().neg(&p.coeff(self.base(), 0))))
            }
            Place::Finite(_) => Err(ValError::ResidueFieldTooLarge(self.format_place(place))),
        }
    }
}

impl<K: Field> ValuedField for FunctionField<K> {
    type Place = Place<K::Elem>;
    type Residue = K;

    fn parse_place(&self, s: &str) -> Result<Self::Place, ValError> {
        let s = s.trim();
        if s == "inf" || s == "oo" || s == "infinity" {
            return Ok(Place::Infinity);
        }
        let x = parse_element(self, s).map_err(|_| ValError::BadPlace(s.into()))?;
        let k = self.base();
        if !x.den().is_one(k) || x.num().degree().unwrap_or(0) == 0 {
            return Err(ValError::BadPlace(s.into()));
        }
        let p = x.num().make_monic(k);
        let cands = k.root_candidates(&p);
        match is_irreducible(k, &p, cands) {
            Some(true) => Ok(Place::Finite(p)),
            Some(false) => Err(ValError::BadPlace(format!("{s} is reducible"))),
            None => Err(ValError::Unsupported(format!(
                "cannot decide irreducibility of {s} over {}",
                k.tag()
            ))),
        }
    }

    fn format_place(&self, place: &Self::Place) -> String {
        match place {
            Place::Finite(p) => self.format_poly(p),
            Place::Infinity => "inf".into(),
        }
    }

    fn val(&self, place: &Self::Place, x: &Self::Elem) -> Val {
        if self.is_zero(x) {
            return Val::Infinite;
        }
        let k = self.base();
        match place {
            Place::Finite(p) => {
                Val::Finite(x.num().multiplicity(k, p) as i64 - x.den().multiplicity(k, p) as i64)
            }
            Place::Infinity => Val::Finite(
                x.den().degree().unwrap_or(0) as i64 - x.num().degree().unwrap_or(0) as i64,
            ),
        }
    }

    fn uniformizer(&self, place: &Self::Place) -> Self::Elem {
        match place {
            Place::Finite(p) => self.from_poly(p.clone()),
            Place::Infinity => self.inv(&self.gen()).expect("t is nonzero"),
        }
    }

    fn residue_field(&self, place: &Self::Place) -> Result<K, ValError> {
        self.rational_point(place)?;
        Ok(self.base().clone())
    }

    fn residue(&self, place: &Self::Place, x: &Self::Elem) -> Result<K::Elem, ValError> {
        let c = self.rational_point(place)?;
        match self.evaluate(x, c.as_ref()) {
            Evaluation::Value(v) => Ok(v),
            Evaluation::Pole => Err(ValError::NotInRing),
        }
    }

    fn lift_residue(&self, place: &Self::Place, r: &K::Elem) -> Result<Self::Elem, ValError> {
        self.rational_point(place)?;
        Ok(self.constant(r.clone()))
    }

    fn separating_element(&self, places: &[Self::Place], i: usize) -> Self::Elem {
        let k = self.base();
        let others: Vec<&Poly<K::Elem>> = places
            .iter()
            .enumerate()
            .filter_map(|(j, p)| match p {
                Place::Finite(q) if j != i => Some(q),
                _ => None,
            })
            .collect();
        let prod = others.iter().fold(Poly::one(k), |acc, q| acc.mul(k, q));
        let has_inf = places.contains(&Place::Infinity);
        match &places[i] {
            Place::Finite(pi) => {
                let n = if has_inf {
                    prod.degree().unwrap_or(0) / pi.degree().unwrap() + 1
                } else {
                    1
                };
                self.fraction(prod, pi.pow(k, n as u64)).expect("nonzero")
            }
            Place::Infinity => {
                if others.is_empty() {
                    self.gen()
                } else {
                    self.from_poly(prod)
                }
            }
        }
    }

    fn incomparability_witnesses(
        &self,
        p1: &Self::Place,
        p2: &Self::Place,
    ) -> Option<(Self::Elem, Self::Elem)> {
        if p1 == p2 {
            return None;
        }
        let pi1 = self.uniformizer(p1);
        let pi2 = self.uniformizer(p2);
        Some(match (p1, p2) {
            (Place::Finite(_), Place::Finite(_)) => {
                (self.inv(&pi2).unwrap(), self.inv(&pi1).unwrap())
            }
            (Place::Finite(_), Place::Infinity) => (pi1.clone(), self.inv(&pi1).unwrap()),
            (Place::Infinity, Place::Finite(_)) => (self.inv(&pi2).unwrap(), pi2),
            (Place::Infinity, Place::Infinity) => unreachable!(),
        })
    }

    fn random_integral(
        &self,
        rng: &mut dyn RngCore,
        places: &[Self::Place],
        size: u32,
    ) -> Self::Elem {
        let k = self.base();
        let size = size.max(1) as usize;
        let inner = (size as u32 / 2).max(1);
        let dd = rng.gen_range(0..=size);
        let mut den_coeffs: Vec<K::Elem> = (0..dd).map(|_| k.random_elem(rng, inner)).collect();
        den_coeffs.push(k.one());
        let mut den = Poly::from_coeffs(k, den_coeffs);
        for p in places {
            if let Place::Finite(q) = p {
                while let Some(d) = den.div_exact(k, q) {
                    den = d;
                }
            }
        }
        let max_num = if places.contains(&Place::Infinity) {
            den.degree().unwrap_or(0)
        } else {
            size
        };
        let dn = rng.gen_range(0..=max_num);
        let num = Poly::from_coeffs(k, (0..=dn).map(|_| k.random_elem(rng, inner)).collect());
        self.fraction(num, den).expect("nonzero denominator")
    }

    fn monomial_with_vals(&self, places: &[Self::Place], target: &[i64]) -> Option<Self::Elem> {
        let k = self.base();
        let mut x = self.one();
        let mut at_infinity = None;
        for (p, &v) in places.iter().zip(target) {
            match p {
                Place::Finite(pi) => {
                    x = self.mul(&x, &self.pow(&self.from_poly(pi.clone()), v).ok()?);
                }
                Place::Infinity => at_infinity = Some(v),
            }
        }
        let Some(goal) = at_infinity else {
            return Some(x);
        };
        // fix the value at infinity with a power of some t - c that is not a place
        let shift = self.val(&Place::Infinity, &x).finite()? - goal;
        let line = (0..64)
            .map(|c| Poly::linear_root(k, &k.from_bigint(&c.into())))
            .find(|l| !places.contains(&Place::Finite(l.clone())))?;
        let factor = self.pow(&self.from_poly(line), shift).ok()?;
        Some(self.mul(&x, &factor))
    }

    fn normalize(&self, x: &Self::Elem) -> (Self::Elem, Self::Elem) {
        match x.num().leading() {
            None => (x.clone(), self.one()),
            Some(lc) => {
                let u = self.constant(self.base().inv(lc).expect("nonzero"));
                (self.mul(x, &u), u)
            }
        }
    }
}

impl<K: Field> FunctionField<K> {
    /// Degree of the residue field over the constants.
    pub fn residue_degree(&self, place: &Place<K::Elem>) -> usize {
        self.place_degree(place)
    }
}

/// Parses a comma-separated list of places.
pub fn parse_places<F: ValuedField>(field: &F, s: &str) -> Result<Vec<F::Place>, ValError> {
    split_top_level(s)
        .iter()
        .map(|p| field.parse_place(p))
        .collect()
}

/// Splits on commas that are not inside parentheses.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(std::mem::take(&mut cur).trim().to_string());
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn qt() -> FunctionField<Rationals> {
        FunctionField::new(Rationals, "t")
    }

    #[test]
    fn valuations_on_function_fields() {
        let f = qt();
        let t = f.parse_place("t").unwrap();
        let inf = f.parse_place("inf").unwrap();
        let x = parse_element(&f, "t^2/(1-t)").unwrap();
        assert_eq!(f.val(&t, &x), Val::Finite(2));
        let y = parse_element(&f, "(t^2+1)/t^5").unwrap();
        assert_eq!(f.val(&inf, &y), Val::Finite(3));
        assert_eq!(f.val(&t, &f.zero()), Val::Infinite);
    }

    #[test]
    fn valuations_on_rationals() {
        assert_eq!(Rationals.val(&2, &rat(4, 6)), Val::Finite(1));
        assert_eq!(Rationals.val(&3, &rat(4, 6)), Val::Finite(-1));
        assert_eq!(Rationals.val(&5, &rat(4, 6)), Val::Finite(0));
    }

    #[test]
    fn place_parsing() {
        let f = qt();
        assert!(matches!(f.parse_place("t^2+t+1"), Ok(Place::Finite(_))));
        assert!(matches!(f.parse_place("t^2-1"), Err(ValError::BadPlace(_))));
        assert!(matches!(f.parse_place("3"), Err(ValError::BadPlace(_))));
        assert!(matches!(f.parse_place("1/t"), Err(ValError::BadPlace(_))));
        assert_eq!(f.format_place(&f.parse_place("2*t-2").unwrap()), "t-1");
        let g = FunctionField::new(PrimeField::new(2).unwrap(), "t");
        assert!(matches!(g.parse_place("t^2+t+1"), Ok(Place::Finite(_))));
        assert!(matches!(g.parse_place("t^2+1"), Err(ValError::BadPlace(_))));
        assert!(Rationals.parse_place("4").is_err());
    }

    #[test]
    fn separating_elements_separate() {
        let f = qt();
        let places = parse_places(&f, "t,t-1,t^2+1,inf").unwrap();
        for i in 0..places.len() {
            let y = f.separating_element(&places, i);
            for (j, p) in places.iter().enumerate() {
                let v = f.val(p, &y);
                if i == j {
                    assert!(v < Val::Finite(0), "{i} {j}");
                } else {
                    assert!(v.is_positive(), "{i} {j}");
                }
            }
        }
        let qp = [2u64, 3, 7];
        for i in 0..3 {
            let y = Rationals.separating_element(&qp, i);
            assert!(Rationals.val(&qp[i], &y) < Val::Finite(0));
        }
    }

    #[test]
    fn residues_at_rational_points() {
        let f = qt();
        let p = f.parse_place("t-2").unwrap();
        let x = parse_element(&f, "(t+1)/(t^2+1)").unwrap();
        assert_eq!(f.residue(&p, &x).unwrap(), rat(3, 5));
        let q = f.parse_place("t^2+1").unwrap();
        assert!(matches!(
            f.residue(&q, &x),
            Err(ValError::ResidueFieldTooLarge(_))
        ));
        assert_eq!(
            f.residue(&Place::Infinity, &f.gen()),
            Err(ValError::NotInRing)
        );
    }

    #[test]
    fn split_respects_parentheses() {
        assert_eq!(split_top_level("t,(t-1),inf"), vec!["t", "(t-1)", "inf"]);
        assert_eq!(split_top_level("1/(t+1), 2"), vec!["1/(t+1)", "2"]);
        assert!(split_top_level("").is_empty());
    }
}
