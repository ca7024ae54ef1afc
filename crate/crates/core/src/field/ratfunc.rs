use num_bigint::BigInt;
use rand::{Rng, RngCore};

use super::{Field, FieldError, Poly};

/// The rational function field `K(var)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionField<K: Field> {
    base: K,
    var: String,
}

/// A reduced fraction `num/den` with `den` monic; zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc<E> {
    num: Poly<E>,
    den: Poly<E>,
}

impl<E> RatFunc<E> {
    pub fn num(&self) -> &Poly<E> {
        &self.num
    }

    pub fn den(&self) -> &Poly<E> {
        &self.den
    }
}

/// Value of a rational function at a point of the projective line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation<E> {
    Value(E),
    Pole,
}

impl<K: Field> FunctionField<K> {
    pub fn new(base: K, var: &str) -> Self {
        FunctionField {
            base,
            var: var.to_string(),
        }
    }

    pub fn base(&self) -> &K {
        &self.base
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Builds the canonical form of `num/den`.
    pub fn fraction(
        &self,
        num: Poly<K::Elem>,
        den: Poly<K::Elem>,
    ) -> Result<RatFunc<K::Elem>, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let k = &self.base;
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly::one(k),
            });
        }
        let g = num.gcd(k, &den);
        let (mut num, mut den) = if g.is_one(k) {
            (num, den)
        } else {
            (
                num.div_exact(k, &g).expect("gcd divides"),
                den.div_exact(k, &g).expect("gcd divides"),
            )
        };
        let lc = den.leading().expect("nonzero").clone();
        if !k.is_one(&lc) {
            let inv = k.inv(&lc)?;
            num = num.scale(k, &inv);
            den = den.scale(k, &inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(&self, p: Poly<K::Elem>) -> RatFunc<K::Elem> {
        RatFunc {
            num: p,
            den: Poly::one(&self.base),
        }
    }

    pub fn constant(&self, c: K::Elem) -> RatFunc<K::Elem> {
        self.from_poly(Poly::constant(&self.base, c))
    }

    pub fn gen(&self) -> RatFunc<K::Elem> {
        self.from_poly(Poly::monomial(&self.base, self.base.one(), 1))
    }

    /// The constant value, if `x` lies in the base field.
    pub fn as_constant(&self, x: &RatFunc<K::Elem>) -> Option<K::Elem> {
        match (x.num.degree(), x.den.degree()) {
            (None, _) => Some(self.base.zero()),
            (Some(0), Some(0)) => Some(x.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    /// Value at `t = c`, or at infinity when `point` is `None`.
    pub fn evaluate(&self, x: &RatFunc<K::Elem>, point: Option<&K::Elem>) -> Evaluation<K::Elem> {
        let k = &self.base;
        match point {
            Some(c) => {
                let d = x.den.eval(k, c);
                if k.is_zero(&d) {
                    // reduced fraction: numerator cannot also vanish here
                    Evaluation::Pole
                } else {
                    Evaluation::Value(k.div(&x.num.eval(k, c), &d).expect("nonzero"))
                }
            }
            None => {
                let dd = x.den.degree().expect("nonzero denominator");
                match x.num.degree() {
                    None => Evaluation::Value(k.zero()),
                    Some(dn) if dn < dd => Evaluation::Value(k.zero()),
                    Some(dn) if dn == dd => Evaluation::Value(
                        k.div(x.num.leading().unwrap(), x.den.leading().unwrap())
                            .expect("nonzero"),
                    ),
                    Some(_) => Evaluation::Pole,
                }
            }
        }
    }

    pub fn format_poly(&self, p: &Poly<K::Elem>) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let k = &self.base;
        let mut out = String::new();
        for (deg, c) in p.terms_desc() {
            if k.is_zero(c) {
                continue;
            }
            let mono = match deg {
                0 => String::new(),
                1 => self.var.clone(),
                d => format!("{}^{}", self.var, d),
            };
            let term = if deg == 0 {
                let s = k.format(c);
                if has_top_level_sum(&s) {
                    format!("({s})")
                } else {
                    s
                }
            } else if k.is_one(c) {
                mono
            } else if k.is_one(&k.neg(c)) && k.characteristic() != 2 {
                format!("-{mono}")
            } else {
                let s = k.format(c);
                if has_top_level_sum(&s) {
                    format!("({s})*{mono}")
                } else {
                    format!("{s}*{mono}")
                }
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push('-');
                out.push_str(rest);
            } else {
                out.push('+');
                out.push_str(&term);
            }
        }
        out
    }
}

/// True when `s` is a sum or difference at parenthesis depth zero.
pub(crate) fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

impl<K: Field> Field for FunctionField<K> {
    type Elem = RatFunc<K::Elem>;

    fn tag(&self) -> String {
        format!("{}({})", self.base.tag(), self.var)
    }

    fn zero(&self) -> Self::Elem {
        self.from_poly(Poly::zero())
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.num.is_zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        if a.den == b.den {
            return self
                .fraction(a.num.add(k, &b.num), a.den.clone())
                .expect("nonzero denominator");
        }
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        // Henrici: only factors of gcd(a.den, b.den) can cancel
        let g = a.den.gcd(k, &b.den);
        let (ad, bd) = if g.is_one(k) {
            (a.den.clone(), b.den.clone())
        } else {
            (
                a.den.div_exact(k, &g).expect("gcd divides"),
                b.den.div_exact(k, &g).expect("gcd divides"),
            )
        };
        let num = a.num.mul(k, &bd).add(k, &b.num.mul(k, &ad));
        if num.is_zero() {
            return self.zero();
        }
        if g.is_one(k) {
            return RatFunc {
                num,
                den: ad.mul(k, &bd),
            };
        }
        let h = num.gcd(k, &g);
        let (num, rest) = if h.is_one(k) {
            (num, g)
        } else {
            (
                num.div_exact(k, &h).expect("gcd divides"),
                g.div_exact(k, &h).expect("gcd divides"),
            )
        };
        RatFunc {
            num,
            den: ad.mul(k, &bd).mul(k, &rest),
        }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFunc {
            num: a.num.neg(&self.base),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.base;
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        // both inputs are reduced, so only the cross gcds can cancel
        let g1 = a.num.gcd(k, &b.den);
        let g2 = b.num.gcd(k, &a.den);
        let part = |p: &Poly<K::Elem>, g: &Poly<K::Elem>| {
            if g.is_one(k) {
                p.clone()
            } else {
                p.div_exact(k, g).expect("gcd divides")
            }
        };
        RatFunc {
            num: part(&a.num, &g1).mul(k, &part(&b.num, &g2)),
            den: part(&a.den, &g2).mul(k, &part(&b.den, &g1)),
        }
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError> {
        if a.num.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        self.fraction(a.den.clone(), a.num.clone())
    }

    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.constant(self.base.from_bigint(n))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn variable(&self, name: &str) -> Option<Self::Elem> {
        if name == self.var {
            Some(self.gen())
        } else {
            self.base.variable(name).map(|c| self.constant(c))
        }
    }

    fn format(&self, x: &Self::Elem) -> String {
        let num = self.format_poly(&x.num);
        if x.den.is_one(&self.base) {
            return num;
        }
        let den = self.format_poly(&x.den);
        let num = if has_top_level_sum(&num) {
            format!("({num})")
        } else {
            num
        };
        let den = if has_top_level_sum(&den) || den.contains('*') {
            format!("({den})")
        } else {
            den
        };
        format!("{num}/{den}")
    }

    fn random_elem(&self, rng: &mut dyn RngCore, size: u32) -> Self::Elem {
        let k = &self.base;
        let size = size.max(1);
        let dn = rng.gen_range(0..=size as usize);
        let dd = rng.gen_range(0..=size as usize);
        let inner = (size / 2).max(1);
        let num = Poly::from_coeffs(k, (0..=dn).map(|_| k.random_elem(rng, inner)).collect());
        let mut den_coeffs: Vec<_> = (0..dd).map(|_| k.random_elem(rng, inner)).collect();
        den_coeffs.push(k.one());
        self.fraction(num, Poly::from_coeffs(k, den_coeffs))
            .expect("monic denominator")
    }
}
