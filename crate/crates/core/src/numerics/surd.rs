//! Exact quadratic surds `r + s√D` with rational `r, s` and squarefree `D`.
//!
//! `D` may be negative, which covers purely imaginary values such as
//! `i/(8√2) = √−2 / 16` without a separate flag.
//!
//! Surds parse through [`SurdExpr`]; any expression that folds exactly
//! into a single quadratic field is accepted.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use astro_float::BigFloat;

use super::complex::{bigfloat_from_rational, BigComplex, RM};
use super::{NumericsError, SurdExpr};
use crate::series::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    r: Rational,
    s: Rational,
    /// Squarefree, never 1 unless `s = 0`.
    d: i64,
}

/// Splits `n = f² · m` with `m` squarefree.
fn squarefree_part(n: i64) -> (i64, i64) {
    let sign = n.signum();
    let mut m = n.abs();
    let mut f = 1;
    let mut p = 2;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            f *= p;
        }
        p += 1;
    }
    (f, sign * m)
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl Surd {
    pub fn new(r: Rational, s: Rational, radicand: i64) -> Self {
        if s.is_zero() || radicand == 0 {
            return Surd::rational(r);
        }
        let (f, d) = squarefree_part(radicand);
        if d == 1 {
            return Surd::rational(r + s * rat(f));
        }
        Surd {
            r,
            s: s * rat(f),
            d,
        }
    }

    pub fn rational(r: Rational) -> Self {
        Surd {
            r,
            s: Rational::zero(),
            d: 1,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Surd::rational(rat(n))
    }

    /// `√n`.
    pub fn sqrt(n: i64) -> Self {
        Surd::new(Rational::zero(), Rational::one(), n)
    }

    /// The imaginary unit, `√−1`.
    pub fn i() -> Self {
        Surd::sqrt(-1)
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    /// Whether the value is real (radicand positive or no radical part).
    pub fn is_real(&self) -> bool {
        self.s.is_zero() || self.d > 0
    }

    /// Whether the value is `i` times a nonzero real number.
    pub fn imaginary_unit_factor(&self) -> bool {
        self.r.is_zero() && !self.s.is_zero() && self.d < 0
    }

    /// Galois conjugate `r − s√D`; complex conjugate when `D < 0`.
    pub fn conj(&self) -> Self {
        Surd {
            r: self.r.clone(),
            s: -self.s.clone(),
            d: self.d,
        }
    }

    /// Field norm `r² − D s²`.
    pub fn norm(&self) -> Rational {
        &self.r * &self.r - rat(self.d) * &self.s * &self.s
    }

    fn common_radicand(&self, other: &Surd) -> Option<i64> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Some(other.d),
            (_, true) => Some(self.d),
            _ => (self.d == other.d).then_some(self.d),
        }
    }

    fn mismatch(&self, other: &Surd) -> NumericsError {
        NumericsError::NotQuadratic(format!("{self} and {other}"))
    }

    pub fn add(&self, other: &Surd) -> Result<Surd, NumericsError> {
        let d = self
            .common_radicand(other)
            .ok_or_else(|| self.mismatch(other))?;
        Ok(Surd::new(&self.r + &other.r, &self.s + &other.s, d))
    }

    pub fn neg(&self) -> Surd {
        Surd {
            r: -self.r.clone(),
            s: -self.s.clone(),
            d: self.d,
        }
    }

    pub fn sub(&self, other: &Surd) -> Result<Surd, NumericsError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Surd {
        Surd::new(&self.r * c, &self.s * c, self.d)
    }

    pub fn mul(&self, other: &Surd) -> Result<Surd, NumericsError> {
        if let Some(d) = self.common_radicand(other) {
            let r = &self.r * &other.r + rat(d) * &self.s * &other.s;
            let s = &self.r * &other.s + &self.s * &other.r;
            return Ok(Surd::new(r, s, d));
        }
        // Two different radicals multiply to a single one only when both
        // values are pure radicals.
        if self.r.is_zero() && other.r.is_zero() {
            return Ok(Surd::new(
                Rational::zero(),
                &self.s * &other.s,
                self.d * other.d,
            ));
        }
        Err(self.mismatch(other))
    }

    pub fn inv(&self) -> Result<Surd, NumericsError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, other: &Surd) -> Result<Surd, NumericsError> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Result<Surd, NumericsError> {
        (0..k).try_fold(Surd::from_int(1), |acc, _| acc.mul(self))
    }

    /// `Σ c_k x^k` evaluated exactly by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[Rational]) -> Result<Surd, NumericsError> {
        coeffs.iter().rev().try_fold(Surd::from_int(0), |acc, c| {
            acc.mul(self)?.add(&Surd::rational(c.clone()))
        })
    }

    /// Value rounded to `prec` bits; both parts are computed with 64 guard
    /// bits and rounded once.
    pub fn to_complex(&self, prec: usize) -> BigComplex {
        let g = prec + 64;
        let r = bigfloat_from_rational(&self.r, g);
        let root = BigFloat::from_i64(self.d.abs(), g).sqrt(g, RM).mul(
            &bigfloat_from_rational(&self.s, g),
            g,
            RM,
        );
        let v = if self.d < 0 {
            BigComplex::new(r, root, g)
        } else {
            BigComplex::from_real(r.add(&root, g, RM), g)
        };
        v.with_precision(prec)
    }

    /// Approximate value as `(re, im)` doubles, for diagnostics.
    pub fn to_f64(&self) -> (f64, f64) {
        let f = |x: &Rational| x.to_f64().unwrap_or(f64::NAN);
        let root = (self.d.abs() as f64).sqrt() * f(&self.s);
        if self.d < 0 {
            (f(&self.r), root)
        } else {
            (f(&self.r) + root, 0.0)
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frac = |x: &Rational| {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        };
        if self.s.is_zero() {
            return write!(f, "{}", frac(&self.r));
        }
        let radical = format!("sqrt({})", self.d);
        let coef = if self.s.abs().is_one() {
            radical
        } else {
            format!("{}*{radical}", frac(&self.s.abs()))
        };
        match (self.r.is_zero(), self.s.is_negative()) {
            (true, false) => write!(f, "{coef}"),
            (true, true) => write!(f, "-{coef}"),
            (false, neg) => write!(
                f,
                "{} {} {coef}",
                frac(&self.r),
                if neg { "-" } else { "+" }
            ),
        }
    }
}

impl FromStr for Surd {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<SurdExpr>()?.exact()
    }
}

impl From<BigInt> for Surd {
    fn from(n: BigInt) -> Self {
        Surd::rational(Rational::from_integer(n))
    }
}
