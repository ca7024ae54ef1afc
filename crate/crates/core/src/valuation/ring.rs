use super::{Val, ValError, ValuedField};
use crate::field::{Field, FunctionField, PrimeField};

const MAX_PRECISION: u64 = 1 << 12;

/// The intersection of the valuation rings at finitely many distinct places.
#[derive(Debug, Clone)]
pub struct IntersectionRing<F: ValuedField> {
    field: F,
    places: Vec<F::Place>,
}

/// Which construction produced a gcd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BezoutCase {
    X,
    Y,
    Difference,
    Idempotent,
}

/// `g = r*x + s*y` generating the ideal `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bezout<E> {
    pub g: E,
    pub r: E,
    pub s: E,
    pub case: BezoutCase,
}

/// `z = a(1-u)^k + b u^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximation<E> {
    pub z: E,
    pub k: u32,
}

/// Membership in the localization at one maximal ideal; members come with
/// `x = numerator / denominator`, the denominator a unit at that ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Localization<E> {
    pub member: bool,
    pub numerator: Option<E>,
    pub denominator: Option<E>,
    pub inverse_member: bool,
}

/// `y^k / (1 + y^k)` for the separating element `y` of place `i`: close to 1
/// at place `i` and close to 0 at the others, the closeness growing with `k`.
pub fn idempotent<F: ValuedField>(field: &F, places: &[F::Place], i: usize, k: u64) -> F::Elem {
    let yk = field.pow_u(&field.separating_element(places, i), k);
    let den = field.add(&field.one(), &yk);
    field
        .div(&yk, &den)
        .expect("1 + y^k has negative valuation at place i")
}

/// An element whose valuation at `places[i]` is exactly `target[i]`.
pub fn element_with_vals<F: ValuedField>(
    field: &F,
    places: &[F::Place],
    target: &[i64],
) -> F::Elem {
    let goal: Vec<Val> = target.iter().map(|&v| Val::Finite(v)).collect();
    if let Some(x) = field.monomial_with_vals(places, target) {
        if field.val_vector(places, &x) == goal {
            return x;
        }
    }
    let mut k = 1;
    loop {
        let terms: Vec<F::Elem> = places
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let pi = field
                    .pow(&field.uniformizer(p), target[i])
                    .expect("nonzero");
                field.mul(&idempotent(field, places, i, k), &pi)
            })
            .collect();
        let x = field.sum(&terms);
        if field.val_vector(places, &x) == goal {
            return x;
        }
        assert!(k < MAX_PRECISION, "approximation did not converge");
        k *= 2;
    }
}

/// Incomparability witnesses, checked against the valuations.
pub fn incomparable<F: ValuedField>(
    field: &F,
    p1: &F::Place,
    p2: &F::Place,
) -> Option<(F::Elem, F::Elem)> {
    let (a, b) = field.incomparability_witnesses(p1, p2)?;
    debug_assert!(field.val(p1, &a).is_nonneg() && !field.val(p2, &a).is_nonneg());
    debug_assert!(field.val(p2, &b).is_nonneg() && !field.val(p1, &b).is_nonneg());
    Some((a, b))
}

impl<F: ValuedField> IntersectionRing<F> {
    pub fn new(field: F, places: Vec<F::Place>) -> Result<Self, ValError> {
        if places.len() < 2 {
            return Err(ValError::TooFewValuations(2));
        }
        for i in 0..places.len() {
            for j in 0..i {
                if places[i] == places[j] {
                    return Err(ValError::Comparable);
                }
            }
        }
        Ok(IntersectionRing { field, places })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn places(&self) -> &[F::Place] {
        &self.places
    }

    pub fn vals(&self, x: &F::Elem) -> Vec<Val> {
        self.field.val_vector(&self.places, x)
    }

    pub fn contains(&self, x: &F::Elem) -> bool {
        self.vals(x).iter().all(|v| v.is_nonneg())
    }

    /// Membership in the Jacobson radical: positive valuation everywhere.
    pub fn in_radical(&self, x: &F::Elem) -> bool {
        self.vals(x).iter().all(|v| v.is_positive())
    }

    pub fn is_unit(&self, x: &F::Elem) -> bool {
        self.vals(x).iter().all(|&v| v == Val::Finite(0))
    }

    fn require_two(&self) -> Result<(), ValError> {
        if self.places.len() != 2 {
            return Err(ValError::PreconditionViolated(
                "operation needs exactly two valuations".into(),
            ));
        }
        Ok(())
    }

    /// A generator of `(x, y)` with explicit coefficients in the ring.
    pub fn bezout_gcd(&self, x: &F::Elem, y: &F::Elem) -> Result<Bezout<F::Elem>, ValError> {
        if !self.contains(x) || !self.contains(y) {
            return Err(ValError::NotInRing);
        }
        let f = &self.field;
        let vx = self.vals(x);
        let vy = self.vals(y);
        let target: Vec<Val> = vx.iter().zip(&vy).map(|(a, b)| *a.min(b)).collect();
        let finish = |g: F::Elem, r: F::Elem, s: F::Elem, case| {
            let (g, unit) = f.normalize(&g);
            Bezout {
                g,
                r: f.mul(&r, &unit),
                s: f.mul(&s, &unit),
                case,
            }
        };
        let one = f.one();
        let zero = f.zero();
        if vx == target {
            return Ok(finish(x.clone(), one, zero, BezoutCase::X));
        }
        if vy == target {
            return Ok(finish(y.clone(), zero, one, BezoutCase::Y));
        }
        let d = f.sub(x, y);
        if self.vals(&d) == target {
            return Ok(finish(d, one, f.neg(&f.one()), BezoutCase::Difference));
        }
        let in_a: Vec<usize> = (0..self.places.len()).filter(|&i| vx[i] <= vy[i]).collect();
        let mut k = 1;
        loop {
            let terms: Vec<F::Elem> = in_a
                .iter()
                .map(|&i| idempotent(f, &self.places, i, k))
                .collect();
            let e = f.sum(&terms);
            let ce = f.sub(&f.one(), &e);
            let g = f.add(&f.mul(x, &e), &f.mul(y, &ce));
            if self.vals(&g) == target {
                return Ok(finish(g, e, ce, BezoutCase::Idempotent));
            }
            if k >= MAX_PRECISION {
                return Err(ValError::PreconditionViolated("gcd search diverged".into()));
            }
            k *= 2;
        }
    }

    /// `u` with `val_1(u) > 0` and `val_2(1 - u) > 0`.
    pub fn u_element(&self) -> Result<F::Elem, ValError> {
        self.require_two()?;
        let f = &self.field;
        let (a, mut b) =
            incomparable(f, &self.places[0], &self.places[1]).ok_or(ValError::Comparable)?;
        for _ in 0..8 {
            let s = f.add(&a, &b);
            if !f.is_zero(&s) {
                let u = f.div(&a, &s)?;
                debug_assert!(f.val(&self.places[0], &u).is_positive());
                debug_assert!(f.val(&self.places[1], &f.sub(&f.one(), &u)).is_positive());
                return Ok(u);
            }
            b = f.mul(&b, &b);
        }
        Err(ValError::Comparable)
    }

    /// `z` congruent to `a` modulo the first maximal ideal and to `b` modulo the second.
    pub fn approx_witness(
        &self,
        a: &F::Elem,
        b: &F::Elem,
    ) -> Result<Approximation<F::Elem>, ValError> {
        self.require_two()?;
        let f = &self.field;
        let (p1, p2) = (&self.places[0], &self.places[1]);
        if !f.val(p1, a).is_nonneg() || !f.val(p2, b).is_nonneg() {
            return Err(ValError::PreconditionViolated(
                "need a in O_1 and b in O_2".into(),
            ));
        }
        if f.val(p2, &f.sub(a, b)).is_positive() {
            return Ok(Approximation { z: a.clone(), k: 0 });
        }
        let u = self.u_element()?;
        let cu = f.sub(&f.one(), &u);
        let mut left = a.clone();
        let mut right = b.clone();
        for k in 0..=(MAX_PRECISION as u32) {
            if f.val(p2, &left).is_positive() && f.val(p1, &right).is_positive() {
                return Ok(Approximation {
                    z: f.add(&left, &right),
                    k,
                });
            }
            left = f.mul(&left, &cu);
            right = f.mul(&right, &u);
        }
        Err(ValError::PreconditionViolated(
            "approximation diverged".into(),
        ))
    }

    pub fn residues(&self, x: &F::Elem) -> Result<Vec<<F::Residue as Field>::Elem>, ValError> {
        self.places
            .iter()
            .map(|p| self.field.residue(p, x))
            .collect()
    }

    /// An element with the prescribed residue at every place.
    pub fn crt(&self, targets: &[<F::Residue as Field>::Elem]) -> Result<F::Elem, ValError> {
        let f = &self.field;
        if targets.len() != self.places.len() {
            return Err(ValError::PreconditionViolated(format!(
                "expected {} targets",
                self.places.len()
            )));
        }
        let lifts: Vec<F::Elem> = self
            .places
            .iter()
            .zip(targets)
            .map(|(p, t)| f.lift_residue(p, t))
            .collect::<Result<_, _>>()?;
        let x = if self.places.len() == 2 {
            self.approx_witness(&lifts[0], &lifts[1])?.z
        } else {
            let terms: Vec<F::Elem> = lifts
                .iter()
                .enumerate()
                .map(|(i, c)| f.mul(c, &idempotent(f, &self.places, i, 1)))
                .collect();
            f.sum(&terms)
        };
        debug_assert_eq!(self.residues(&x).as_deref(), Ok(targets));
        Ok(f.canonical_crt(&self.places, targets).unwrap_or(x))
    }

    /// Membership of a nonzero `x` in the localization at the `i`-th maximal ideal.
    pub fn localization_test(
        &self,
        i: usize,
        x: &F::Elem,
    ) -> Result<Localization<F::Elem>, ValError> {
        let f = &self.field;
        if f.is_zero(x) {
            return Err(ValError::PreconditionViolated("x must be nonzero".into()));
        }
        if i >= self.places.len() {
            return Err(ValError::PreconditionViolated(format!(
                "no place with index {i}"
            )));
        }
        let vi = f.val(&self.places[i], x);
        let inverse_member = f.val(&self.places[i], &f.inv(x)?).is_nonneg();
        if !vi.is_nonneg() {
            return Ok(Localization {
                member: false,
                numerator: None,
                denominator: None,
                inverse_member,
            });
        }
        let mut k = 1;
        loop {
            let s = idempotent(f, &self.places, i, k);
            let b = f.mul(&s, x);
            if self.contains(&b) {
                debug_assert!(self.contains(&s) && f.val(&self.places[i], &s) == Val::Finite(0));
                return Ok(Localization {
                    member: true,
                    numerator: Some(b),
                    denominator: Some(s),
                    inverse_member,
                });
            }
            if k >= MAX_PRECISION {
                return Err(ValError::PreconditionViolated(
                    "localization diverged".into(),
                ));
            }
            k *= 2;
        }
    }
}

impl IntersectionRing<FunctionField<PrimeField>> {
    /// `res_1(y) - res_2(y)` in the prime field, which depends on `y` only
    /// through `y^p - y`.
    pub fn as_delta(
        &self,
        y: &<FunctionField<PrimeField> as Field>::Elem,
    ) -> Result<u64, ValError> {
        self.require_two()?;
        let f = self.field();
        let r1 = f.residue(&self.places[0], y)?;
        let r2 = f.residue(&self.places[1], y)?;
        Ok(f.base().sub(&r1, &r2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{parse_element, rat, Rationals};
    use crate::valuation::parse_places;

    fn q23() -> IntersectionRing<Rationals> {
        IntersectionRing::new(Rationals, vec![2, 3]).unwrap()
    }

    fn f2_t_inf() -> IntersectionRing<FunctionField<PrimeField>> {
        let f = FunctionField::new(PrimeField::new(2).unwrap(), "t");
        let places = parse_places(&f, "t,inf").unwrap();
        IntersectionRing::new(f, places).unwrap()
    }

    #[test]
    fn gcd_of_four_and_six() {
        let r = q23();
        let b = r.bezout_gcd(&rat(4, 1), &rat(6, 1)).unwrap();
        assert_eq!(b.g, rat(2, 1));
        assert_eq!((b.r.clone(), b.s.clone()), (rat(-1, 1), rat(1, 1)));
        assert_eq!(b.case, BezoutCase::Difference);
        let z = r.bezout_gcd(&rat(5, 7), &rat(0, 1)).unwrap();
        assert_eq!(z.g, rat(5, 7));
    }

    #[test]
    fn gcd_unit_in_char_two() {
        let r = f2_t_inf();
        let f = r.field();
        let x = parse_element(f, "t/(1+t)").unwrap();
        let y = parse_element(f, "1/(1+t)").unwrap();
        let b = r.bezout_gcd(&x, &y).unwrap();
        assert!(r.is_unit(&b.g));
        assert_eq!(b.case, BezoutCase::Difference);
    }

    #[test]
    fn gcd_with_three_places_uses_idempotents() {
        let r = IntersectionRing::new(Rationals, vec![2, 3, 5]).unwrap();
        let x = rat(2 * 9, 1);
        let y = rat(4 * 3 * 5, 1);
        let b = r.bezout_gcd(&x, &y).unwrap();
        assert_eq!(
            r.vals(&b.g),
            vec![Val::Finite(1), Val::Finite(1), Val::Finite(0)]
        );
        assert_eq!(&b.r * &x + &b.s * &y, b.g);
        assert!(r.contains(&b.r) && r.contains(&b.s));
    }

    #[test]
    fn u_elements() {
        assert_eq!(q23().u_element().unwrap(), rat(2, 5));
        let r = f2_t_inf();
        let u = r.u_element().unwrap();
        assert_eq!(u, parse_element(r.field(), "t^2/(t^2+1)").unwrap());
    }

    #[test]
    fn approximation_examples() {
        let r = f2_t_inf();
        let f = r.field();
        let w = r.approx_witness(&f.one(), &f.zero()).unwrap();
        assert_eq!(w.z, parse_element(f, "1/(t^2+1)").unwrap());
        assert_eq!(w.k, 1);
        let a = parse_element(f, "t+1").unwrap();
        let w = r.approx_witness(&a, &f.zero()).unwrap();
        assert_eq!(w.z, parse_element(f, "(t+1)/(t^2+1)").unwrap());
        let c = parse_element(f, "1/(t^2+t+1)").unwrap();
        assert_eq!(
            r.approx_witness(&c, &c).unwrap(),
            Approximation { z: c, k: 0 }
        );
    }

    #[test]
    fn crt_examples() {
        assert_eq!(q23().crt(&[1, 0]).unwrap(), rat(3, 1));
        assert_eq!(q23().crt(&[0, 0]).unwrap(), rat(0, 1));
        let r = f2_t_inf();
        assert_eq!(
            r.crt(&[1, 0]).unwrap(),
            parse_element(r.field(), "1/(t^2+1)").unwrap()
        );
        let r3 = IntersectionRing::new(Rationals, vec![2, 3, 5]).unwrap();
        assert_eq!(r3.crt(&[1, 2, 3]).unwrap(), rat(23, 1));
    }

    #[test]
    fn localization() {
        let r = q23();
        let l = r.localization_test(0, &rat(1, 3)).unwrap();
        assert!(l.member);
        let (b, s) = (l.numerator.unwrap(), l.denominator.unwrap());
        assert_eq!(&b / &s, rat(1, 3));
        assert!(r.contains(&b) && Rationals.val(&2, &s) == Val::Finite(0));
        let l = r.localization_test(0, &rat(1, 2)).unwrap();
        assert!(!l.member && l.inverse_member);
        assert!(r.localization_test(0, &rat(1, 1)).unwrap().member);
    }

    #[test]
    fn artin_schreier_delta() {
        let r = f2_t_inf();
        let f = r.field();
        let y = parse_element(f, "1/(1+t)").unwrap();
        assert_eq!(r.as_delta(&y).unwrap(), 1);
        assert_eq!(r.as_delta(&f.one()).unwrap(), 0);
        let y1 = f.add(&y, &f.one());
        assert_eq!(r.as_delta(&y1).unwrap(), 1);
        assert_eq!(r.as_delta(&f.gen()), Err(ValError::NotInRing));
    }

    #[test]
    fn prescribed_valuations() {
        let f = FunctionField::new(Rationals, "t");
        let places = parse_places(&f, "t,t-1,inf").unwrap();
        let x = element_with_vals(&f, &places, &[2, -1, 3]);
        assert_eq!(
            f.val_vector(&places, &x),
            vec![Val::Finite(2), Val::Finite(-1), Val::Finite(3)]
        );
    }
}
