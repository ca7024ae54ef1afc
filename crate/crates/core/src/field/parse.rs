use num_bigint::BigInt;

use super::{Field, FieldError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, FieldError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(FieldError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    field: &'a F,
    toks: Vec<Tok>,
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<F::Elem, FieldError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = self.field.add(&acc, &self.term()?);
            } else if self.eat_op('-') {
                acc = self.field.sub(&acc, &self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<F::Elem, FieldError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = self.field.mul(&acc, &self.unary()?);
            } else if self.eat_op('/') {
                acc = self.field.div(&acc, &self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<F::Elem, FieldError> {
        if self.eat_op('-') {
            Ok(self.field.neg(&self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<F::Elem, FieldError> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let e: u64 = n
                    .try_into()
                    .map_err(|_| FieldError::Parse("exponent too large".into()))?;
                Ok(self.field.pow_u(&base, e))
            }
            _ => Err(FieldError::Parse(
                "expected a nonnegative integer exponent".into(),
            )),
        }
    }

    fn atom(&mut self) -> Result<F::Elem, FieldError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(self.field.from_bigint(&n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.field.variable(&name).ok_or_else(|| {
                    FieldError::Parse(format!("unknown variable `{name}` in {}", self.field.tag()))
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat_op(')') {
                    return Err(FieldError::Parse("missing `)`".into()));
                }
                Ok(v)
            }
            Some(t) => Err(FieldError::Parse(format!("unexpected token {t:?}"))),
            None => Err(FieldError::Parse("unexpected end of input".into())),
        }
    }
}

/// Parses an arithmetic expression in integers, the field's variables and
/// `+ - * / ^ ( )`.
pub fn parse_element<F: Field>(field: &F, src: &str) -> Result<F::Elem, FieldError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(FieldError::Parse("empty expression".into()));
    }
    let mut p = Parser {
        field,
        toks,
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(FieldError::Parse(format!(
            "trailing input at token {:?}",
            p.toks[p.pos]
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, FunctionField, PrimeField, Rationals};

    #[test]
    fn rationals() {
        assert_eq!(parse_element(&Rationals, "4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_element(&Rationals, "-2^2").unwrap(), rat(-4, 1));
        assert_eq!(
            parse_element(&Rationals, "(1+2)*3-1/2").unwrap(),
            rat(17, 2)
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_element(&Rationals, "1/0"),
            Err(FieldError::DivisionByZero)
        );
        assert!(matches!(
            parse_element(&Rationals, "t"),
            Err(FieldError::Parse(_))
        ));
        assert!(matches!(
            parse_element(&Rationals, "(1"),
            Err(FieldError::Parse(_))
        ));
        assert!(matches!(
            parse_element(&Rationals, "1 2"),
            Err(FieldError::Parse(_))
        ));
        assert!(matches!(
            parse_element(&Rationals, ""),
            Err(FieldError::Parse(_))
        ));
        assert!(matches!(
            parse_element(&Rationals, "2^t"),
            Err(FieldError::Parse(_))
        ));
    }

    #[test]
    fn prime_field_literals_reduce() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(parse_element(&f, "7").unwrap(), 2);
        assert_eq!(parse_element(&f, "1/2").unwrap(), 3);
    }

    #[test]
    fn round_trip_function_field() {
        let f = FunctionField::new(Rationals, "t");
        let x = parse_element(&f, "(t^2+1)/(t-3)").unwrap();
        assert_eq!(f.format(&x), "(t^2+1)/(t-3)");
        let y = parse_element(&f, "-t^3/2 + 5").unwrap();
        assert_eq!(f.format(&y), "-1/2*t^3+5");
        assert_eq!(parse_element(&f, &f.format(&y)).unwrap(), y);
    }
}
