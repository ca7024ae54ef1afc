//! Dense univariate polynomials over a [`Field`], coefficients stored low
//! degree first with no trailing zeros.

use super::{Field, FieldError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

impl<E: Clone + PartialEq + Eq + std::fmt::Debug> Poly<E> {
    pub fn from_coeffs<F: Field<Elem = E>>(field: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant<F: Field<Elem = E>>(field: &F, c: E) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// `c * x^k`
    pub fn monomial<F: Field<Elem = E>>(field: &F, c: E, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Self::from_coeffs(field, coeffs)
    }

    /// `x - c`
    pub fn linear_root<F: Field<Elem = E>>(field: &F, c: &E) -> Self {
        Self::from_coeffs(field, vec![field.neg(c), field.one()])
    }

    pub fn coeff<F: Field<Elem = E>>(&self, field: &F, k: usize) -> E {
        self.coeffs.get(k).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_one<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.coeffs.len() == 1 && field.is_one(&self.coeffs[0])
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.leading().is_some_and(|c| field.is_one(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| field.add(&self.coeff(field, i), &other.coeff(field, i)))
            .collect();
        Self::from_coeffs(field, coeffs)
    }

    pub fn neg<F: Field<Elem = E>>(&self, field: &F) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        Self::from_coeffs(field, self.coeffs.iter().map(|a| field.mul(a, c)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Self::from_coeffs(field, out)
    }

    pub fn pow<F: Field<Elem = E>>(&self, field: &F, mut e: u64) -> Self {
        let mut acc = Self::one(field);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(field, &sq);
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem<F: Field<Elem = E>>(
        &self,
        field: &F,
        divisor: &Self,
    ) -> Result<(Self, Self), FieldError> {
        let dd = divisor.degree().ok_or(FieldError::DivisionByZero)?;
        let lead_inv = field.inv(divisor.leading().expect("nonzero"))?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = field.mul(&rem[k + dd], &lead_inv);
            if field.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = field.sub(&rem[k + j], &field.mul(&c, d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((
            Self::from_coeffs(field, quot),
            Self::from_coeffs(field, rem),
        ))
    }

    /// Exact quotient; `None` when `divisor` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, field: &F, divisor: &Self) -> Option<Self> {
        match self.div_rem(field, divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn make_monic<F: Field<Elem = E>>(&self, field: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(field, &field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(field, &b).expect("nonzero divisor");
            a = b;
            b = r.make_monic(field);
        }
        a.make_monic(field)
    }

    /// Horner evaluation.
    pub fn eval<F: Field<Elem = E>>(&self, field: &F, x: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
    }

    /// Multiplicity of a linear `factor`, by repeated synthetic division at its root.
    fn root_multiplicity<F: Field<Elem = E>>(&self, field: &F, factor: &Self) -> u64 {
        let c = field
            .div(&field.neg(&factor.coeffs[0]), &factor.coeffs[1])
            .expect("linear factor");
        let mut cur = self.coeffs.clone();
        let mut k = 0;
        while cur.len() > 1 {
            let d = cur.len() - 1;
            let mut quot = vec![field.zero(); d];
            let mut acc = cur[d].clone();
            for i in (0..d).rev() {
                quot[i] = acc.clone();
                acc = field.add(&cur[i], &field.mul(&acc, &c));
            }
            if !field.is_zero(&acc) {
                break;
            }
            cur = quot;
            k += 1;
        }
        k
    }

    /// Multiplicity of `factor` as a divisor of `self` (`self` nonzero).
    pub fn multiplicity<F: Field<Elem = E>>(&self, field: &F, factor: &Self) -> u64 {
        debug_assert!(!self.is_zero());
        if factor.degree() == Some(1) {
            return self.root_multiplicity(field, factor);
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(field, factor) {
            cur = q;
            k += 1;
        }
        k
    }

    /// Terms as `(degree, coefficient)` from the highest degree down.
    pub fn terms_desc(&self) -> impl Iterator<Item = (usize, &E)> {
        self.coeffs.iter().enumerate().rev()
    }
}

/// Monic irreducibility, decided where it is cheap: degree 1 always,
/// finite coefficient fields by trial division, and degree 2 or 3 by
/// searching for a root among `candidates` (rational-root style).
/// Returns `None` when the question is out of reach.
pub fn is_irreducible<F: Field>(
    field: &F,
    p: &Poly<F::Elem>,
    root_candidates: Option<Vec<F::Elem>>,
) -> Option<bool> {
    let d = p.degree()?;
    if d == 0 {
        return Some(false);
    }
    if d == 1 {
        return Some(true);
    }
    if let Some(elems) = field.elements() {
        // trial division by every monic polynomial of degree <= d/2
        for k in 1..=d / 2 {
            let mut idx = vec![0usize; k];
            loop {
                let mut coeffs: Vec<F::Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
                coeffs.push(field.one());
                let q = Poly::from_coeffs(field, coeffs);
                if p.div_exact(field, &q).is_some() {
                    return Some(false);
                }
                let mut pos = 0;
                loop {
                    if pos == k {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < elems.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
        }
        return Some(true);
    }
    if d <= 3 {
        let cands = root_candidates?;
        return Some(!cands.iter().any(|c| field.is_zero(&p.eval(field, c))));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, PrimeField, Rationals};

    fn qp(cs: &[i64]) -> Poly<num_rational::BigRational> {
        Poly::from_coeffs(&Rationals, cs.iter().map(|&c| rat(c, 1)).collect())
    }

    #[test]
    fn division_with_remainder() {
        let q = Rationals;
        let a = qp(&[-1, 0, 1]); // t^2 - 1
        let b = qp(&[-1, 1]); // t - 1
        let (quo, rem) = a.div_rem(&q, &b).unwrap();
        assert_eq!(quo, qp(&[1, 1]));
        assert!(rem.is_zero());
        let (_, rem) = qp(&[1, 0, 1]).div_rem(&q, &b).unwrap();
        assert_eq!(rem, qp(&[2]));
    }

    #[test]
    fn gcd_is_monic() {
        let q = Rationals;
        let a = qp(&[-2, 0, 2]); // 2(t-1)(t+1)
        let b = qp(&[3, 3]); // 3(t+1)
        assert_eq!(a.gcd(&q, &b), qp(&[1, 1]));
        assert!(Poly::<num_rational::BigRational>::zero()
            .gcd(&q, &Poly::zero())
            .is_zero());
    }

    #[test]
    fn multiplicity_counts_repeated_factor() {
        let q = Rationals;
        let t = qp(&[0, 1]);
        let p = t.pow(&q, 3).mul(&q, &qp(&[1, 1]));
        assert_eq!(p.multiplicity(&q, &t), 3);
    }

    #[test]
    fn irreducibility_over_small_fields() {
        let f2 = PrimeField::new(2).unwrap();
        let p = |cs: &[u64]| Poly::from_coeffs(&f2, cs.to_vec());
        assert_eq!(is_irreducible(&f2, &p(&[1, 1, 1]), None), Some(true));
        assert_eq!(is_irreducible(&f2, &p(&[1, 0, 1]), None), Some(false));
        assert_eq!(is_irreducible(&f2, &p(&[1, 1, 0, 0, 1]), None), Some(true));
        assert_eq!(is_irreducible(&f2, &p(&[1, 0, 1, 0, 1]), None), Some(false));
    }
}
