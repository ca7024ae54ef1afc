//! Exact fields: the rationals, prime fields, and rational function fields
//! over any of these, plus truncated power series and an expression parser.
//!
//! Fields are values (a `PrimeField` carries its modulus, a
//! `FunctionField` carries its base field and variable name) and elements
//! are plain data manipulated through the field, so that towers such as
//! `GF(p)(s)(t)` can be built at run time from a tag string.

mod parse;
pub mod poly;
mod ratfunc;
pub mod series;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use thiserror::Error;

pub use parse::parse_element;
pub use poly::Poly;
pub use ratfunc::{Evaluation, FunctionField, RatFunc};
pub use series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("element has negative valuation at t = 0")]
    NegativeValuation,
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("unknown field tag `{0}`")]
    UnknownField(String),
}

/// A field whose elements are manipulated through `&self`.
pub trait Field: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    /// The tag used on the command line, e.g. `QQ`, `GF(3)(t)`.
    fn tag(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn is_finite(&self) -> bool;
    /// Resolves a variable name (`t`, `s`, ...) to an element, if the field has one.
    fn variable(&self, name: &str) -> Option<Self::Elem>;
    fn format(&self, x: &Self::Elem) -> String;
    /// A random element of modest height; `size` bounds degrees and coefficients.
    fn random_elem(&self, rng: &mut dyn RngCore, size: u32) -> Self::Elem;

    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }

    fn is_one(&self, x: &Self::Elem) -> bool {
        *x == self.one()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem, FieldError> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        Ok(self.pow_u(&base, e.unsigned_abs()))
    }

    fn pow_u(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut sq = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// All elements, when the field is finite and small.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// A finite set containing every root of `p` in the field, when one is
    /// cheap to produce.
    fn root_candidates(&self, _p: &Poly<Self::Elem>) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> String {
        "QQ".into()
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn variable(&self, _name: &str) -> Option<BigRational> {
        None
    }

    fn format(&self, x: &BigRational) -> String {
        // BigRational's Display already prints `n` or `n/d` with a positive denominator
        x.to_string()
    }

    fn random_elem(&self, rng: &mut dyn RngCore, size: u32) -> BigRational {
        let bound = 2 * size.max(1) as i64 + 1;
        let n = rng.gen_range(-bound..=bound);
        let d = rng.gen_range(1..=bound);
        BigRational::new(n.into(), d.into())
    }

    fn root_candidates(&self, p: &Poly<BigRational>) -> Option<Vec<BigRational>> {
        // rational root theorem on the primitive integer multiple of p
        let lcm = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
        let mut out = vec![BigRational::zero()];
        let low = ints.iter().find(|c| !c.is_zero())?;
        let lead = ints.last()?;
        let num_divs = small_divisors(low)?;
        let den_divs = small_divisors(lead)?;
        for n in &num_divs {
            for d in &den_divs {
                let r = BigRational::new(n.clone(), d.clone());
                out.push(-r.clone());
                out.push(r);
            }
        }
        Some(out)
    }
}

/// Positive divisors of `n`, if `|n|` is small enough to factor by trial division.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&n| n <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// The prime field `Z/p`, elements stored as canonical residues `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Fails unless `p` is a prime below 2^31.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(FieldError::UnknownField(format!("GF({p})")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Reduces a rational number with denominator prime to `p`.
    pub fn reduce_rational(&self, x: &BigRational) -> Option<u64> {
        let p = BigInt::from(self.p);
        let d = x.denom().mod_floor(&p).to_u64()?;
        if d == 0 {
            return None;
        }
        let n = x.numer().mod_floor(&p).to_u64()?;
        Some(n * self.inv_raw(d) % self.p)
    }

    fn inv_raw(&self, a: u64) -> u64 {
        // Fermat: a^(p-2)
        let mut acc = 1u64;
        let mut sq = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq % self.p;
            }
            sq = sq * sq % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> String {
        format!("GF({})", self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if (*a).is_multiple_of(self.p) {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv_raw(*a))
        }
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap_or(0)
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn variable(&self, _name: &str) -> Option<u64> {
        None
    }

    fn format(&self, x: &u64) -> String {
        x.to_string()
    }

    fn random_elem(&self, rng: &mut dyn RngCore, _size: u32) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn elements(&self) -> Option<Vec<u64>> {
        (self.p <= 1 << 16).then(|| (0..self.p).collect())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Positive-denominator rational from a pair of machine integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A field chosen at run time from its tag. The command-line front end
/// dispatches on this; library code stays generic over [`Field`].
#[derive(Debug, Clone)]
pub enum AnyField {
    Q(Rationals),
    Fp(PrimeField),
    QT(FunctionField<Rationals>),
    FpT(FunctionField<PrimeField>),
    FpST(FunctionField<FunctionField<PrimeField>>),
}

impl AnyField {
    /// Parses `QQ`, `QQ(t)`, `GF(p)`, `GF(p)(t)`, `GF(p)(s)(t)`.
    pub fn parse(tag: &str) -> Result<Self, FieldError> {
        let compact: String = tag.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || FieldError::UnknownField(tag.to_string());
        let (head, rest) = if let Some(rest) = compact.strip_prefix("QQ") {
            (None, rest)
        } else if let Some(rest) = compact.strip_prefix("GF(") {
            let close = rest.find(')').ok_or_else(unknown)?;
            let p: u64 = rest[..close].parse().map_err(|_| unknown())?;
            (Some(PrimeField::new(p)?), &rest[close + 1..])
        } else {
            return Err(unknown());
        };
        match (head, rest) {
            (None, "") => Ok(AnyField::Q(Rationals)),
            (None, "(t)") => Ok(AnyField::QT(FunctionField::new(Rationals, "t"))),
            (Some(fp), "") => Ok(AnyField::Fp(fp)),
            (Some(fp), "(t)") => Ok(AnyField::FpT(FunctionField::new(fp, "t"))),
            (Some(fp), "(s)(t)") => Ok(AnyField::FpST(FunctionField::new(
                FunctionField::new(fp, "s"),
                "t",
            ))),
            _ => Err(unknown()),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            AnyField::Q(f) => f.tag(),
            AnyField::Fp(f) => f.tag(),
            AnyField::QT(f) => f.tag(),
            AnyField::FpT(f) => f.tag(),
            AnyField::FpST(f) => f.tag(),
        }
    }
}
