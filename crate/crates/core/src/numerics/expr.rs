//! Closed-form constants built from integers, `i`, square roots and the four
//! field operations, such as `2*sqrt(9*sqrt(5) - 20)`.
//!
//! Grammar: integers, `i`, `sqrt(expr)`, `+ - * /`, unary minus, parentheses.
//! Nested radicals are kept symbolic and evaluated numerically; expressions
//! that stay in one quadratic field also fold exactly into a [`Surd`].

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::complex::BigComplex;
use super::{NumericsError, Surd};
use crate::series::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurdExpr {
    Int(i64),
    I,
    Sqrt(Box<SurdExpr>),
    Neg(Box<SurdExpr>),
    Add(Box<SurdExpr>, Box<SurdExpr>),
    Sub(Box<SurdExpr>, Box<SurdExpr>),
    Mul(Box<SurdExpr>, Box<SurdExpr>),
    Div(Box<SurdExpr>, Box<SurdExpr>),
}

impl SurdExpr {
    /// Exact value, when the expression lies in a single quadratic field and
    /// every radicand is rational.
    pub fn exact(&self) -> Result<Surd, NumericsError> {
        use SurdExpr::*;
        Ok(match self {
            Int(n) => Surd::from_int(*n),
            I => Surd::i(),
            Sqrt(e) => {
                let v = e.exact()?;
                if !v.is_rational() {
                    return Err(NumericsError::NotQuadratic(format!(
                        "nested radical sqrt({e})"
                    )));
                }
                let r = v.r();
                let (n, d) = (r.numer(), r.denom());
                let nd: i64 = (n * d).try_into().map_err(|_| {
                    NumericsError::NotQuadratic(format!("radicand too large in sqrt({e})"))
                })?;
                // √(n/d) = √(nd) / d
                Surd::new(Rational::zero(), Rational::one() / d.clone(), nd)
            }
            Neg(e) => e.exact()?.neg(),
            Add(a, b) => a.exact()?.add(&b.exact()?)?,
            Sub(a, b) => a.exact()?.sub(&b.exact()?)?,
            Mul(a, b) => a.exact()?.mul(&b.exact()?)?,
            Div(a, b) => a.exact()?.div(&b.exact()?)?,
        })
    }

    /// Numerical value at `prec` bits, using principal square roots.
    pub fn eval(&self, prec: usize) -> Result<BigComplex, NumericsError> {
        use SurdExpr::*;
        // Guard bits absorb cancellation inside nested radicals.
        let g = prec + 64;
        let v = match self {
            Int(n) => BigComplex::from_i64(*n, g),
            I => BigComplex::i(g),
            Sqrt(e) => e.eval(g)?.sqrt(),
            Neg(e) => e.eval(g)?.neg(),
            Add(a, b) => a.eval(g)?.add(&b.eval(g)?),
            Sub(a, b) => a.eval(g)?.sub(&b.eval(g)?),
            Mul(a, b) => a.eval(g)?.mul(&b.eval(g)?),
            Div(a, b) => {
                let d = b.eval(g)?;
                if d.is_zero() {
                    return Err(NumericsError::DivisionByZero);
                }
                a.eval(g)?.div(&d)
            }
        };
        Ok(v.with_precision(prec))
    }
}

impl fmt::Display for SurdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SurdExpr::*;
        match self {
            Int(n) if *n < 0 => write!(f, "({n})"),
            Int(n) => write!(f, "{n}"),
            I => write!(f, "i"),
            Sqrt(e) => write!(f, "sqrt({e})"),
            Neg(e) => write!(f, "-({e})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "{a}*{b}"),
            Div(a, b) => write!(f, "{a}/({b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> NumericsError {
        NumericsError::SurdParse(format!("{what} at byte {} in `{}`", self.pos, self.src))
    }

    fn peek(&mut self) -> Option<u8> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SurdExpr, NumericsError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = SurdExpr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = SurdExpr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SurdExpr, NumericsError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = SurdExpr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                acc = SurdExpr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<SurdExpr, NumericsError> {
        if self.eat(b'-') {
            return Ok(SurdExpr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<SurdExpr, NumericsError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self
                    .src
                    .as_bytes()
                    .get(self.pos)
                    .is_some_and(u8::is_ascii_digit)
                {
                    self.pos += 1;
                }
                let n = self.src[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("integer out of range"))?;
                Ok(SurdExpr::Int(n))
            }
            Some(b's') if self.src[self.pos..].starts_with("sqrt") => {
                self.pos += 4;
                if !self.eat(b'(') {
                    return Err(self.err("expected `(` after sqrt"));
                }
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(SurdExpr::Sqrt(Box::new(v)))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(SurdExpr::I)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

impl FromStr for SurdExpr {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let v = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::complex::log10_abs;

    #[test]
    fn nested_radicals_evaluate() {
        let e: SurdExpr = "2*sqrt(9*sqrt(5) - 20)".parse().unwrap();
        assert!(e.exact().is_err());
        let v = e.eval(256).unwrap();
        let (re, im) = v.to_f64();
        assert!((re - 2.0 * (9.0 * 5f64.sqrt() - 20.0).sqrt()).abs() < 1e-12 && im == 0.0);
    }

    #[test]
    fn exact_and_numeric_agree() {
        let e: SurdExpr = "(31 - 8*i*sqrt(2))/66".parse().unwrap();
        let x = e.exact().unwrap();
        assert_eq!(x.radicand(), -2);
        let a = e.eval(200).unwrap();
        let b = x.to_complex(200);
        assert!(log10_abs(&a.dist(&b)) < -55.0);
    }

    #[test]
    fn display_reparses() {
        for s in [
            "sqrt(8 - 31*i/sqrt(2))/5",
            "-3/2 + sqrt(5/2)",
            "646*sqrt(27379 - 8658*sqrt(10))",
        ] {
            let e: SurdExpr = s.parse().unwrap();
            assert_eq!(
                e.to_string()
                    .parse::<SurdExpr>()
                    .unwrap()
                    .eval(128)
                    .unwrap()
                    .to_f64(),
                e.eval(128).unwrap().to_f64()
            );
        }
    }
}
