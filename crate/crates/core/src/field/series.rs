//! Power series over a prime field, truncated at a fixed precision.

use super::{Field, FieldError, FunctionField, Poly, PrimeField, RatFunc};

pub const DEFAULT_PRECISION: usize = 32;

/// `c_0 + c_1 t + ... + c_{N-1} t^{N-1}` modulo `t^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl TruncatedSeries {
    /// Coefficients beyond the precision are dropped.
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>, precision: usize) -> Self {
        coeffs.resize(precision, 0);
        for c in &mut coeffs {
            *c %= field.modulus();
        }
        TruncatedSeries { field, coeffs }
    }

    pub fn zero(field: PrimeField, precision: usize) -> Self {
        Self::new(field, Vec::new(), precision)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Order of the first nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.field, other.field, "series over different fields");
        assert_eq!(
            self.precision(),
            other.precision(),
            "series precision mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let f = &self.field;
        TruncatedSeries {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| f.neg(a)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.precision();
        let f = &self.field;
        let mut out = vec![0u64; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        TruncatedSeries {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::new(self.field, vec![1], self.precision());
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// `x^p`, which in characteristic `p` just spreads the coefficients.
    pub fn frobenius(&self) -> Self {
        let p = self.field.modulus() as usize;
        let n = self.precision();
        let mut out = vec![0u64; n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            match k.checked_mul(p) {
                Some(idx) if idx < n => out[idx] = c,
                _ => break,
            }
        }
        TruncatedSeries {
            field: self.field,
            coeffs: out,
        }
    }

    /// `y^p - y`.
    pub fn artin_schreier(&self) -> Self {
        self.frobenius().sub(self)
    }

    /// Human form such as `1+t^2+2*t^5+O(t^8)`.
    pub fn format(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(match (k, c) {
                (0, _) => c.to_string(),
                (_, 1) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.push(format!("O({var}^{})", self.precision()));
        parts.join("+")
    }
}

/// Expansion at `t = 0` by long division.
pub fn series_expand(
    field: &FunctionField<PrimeField>,
    x: &RatFunc<u64>,
    precision: usize,
) -> Result<TruncatedSeries, FieldError> {
    let k = field.base();
    let den = x.den();
    let d0 = den.coeff(k, 0);
    if d0 == 0 {
        // numerator and denominator are coprime, so t | den means a pole at 0
        return Err(FieldError::NegativeValuation);
    }
    let d0_inv = k.inv(&d0)?;
    let mut rem: Vec<u64> = (0..precision).map(|i| x.num().coeff(k, i)).collect();
    let mut out = vec![0u64; precision];
    for i in 0..precision {
        let c = k.mul(&rem[i], &d0_inv);
        out[i] = c;
        if c == 0 {
            continue;
        }
        for (j, dj) in den.coeffs().iter().enumerate() {
            if i + j >= precision {
                break;
            }
            rem[i + j] = k.sub(&rem[i + j], &k.mul(&c, dj));
        }
    }
    Ok(TruncatedSeries::new(*k, out, precision))
}

/// The polynomial `c_0 + ... + c_{N-1} t^{N-1}` as an element of `K(t)`.
pub fn series_to_element(field: &FunctionField<PrimeField>, s: &TruncatedSeries) -> RatFunc<u64> {
    field.from_poly(Poly::from_coeffs(field.base(), s.coeffs().to_vec()))
}

/// The root of `y^p - y = x` with zero constant term, by iterating
/// `y <- y^p - x`; each step multiplies the order of the error by `p`.
pub fn artin_schreier_root(x: &TruncatedSeries) -> Result<TruncatedSeries, FieldError> {
    if x.coeffs().first().is_some_and(|&c| c != 0) {
        return Err(FieldError::NonzeroConstantTerm);
    }
    let mut y = x.neg();
    loop {
        let next = y.frobenius().sub(x);
        if next == y {
            break;
        }
        y = next;
    }
    debug_assert_eq!(y.pow(x.field().modulus()).sub(&y), *x);
    Ok(y)
}
