//! Sparse polynomials in `X, Y` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::series::{QSeries, Rational, EXACT};

/// `Σ c_ij X^i Y^j`, zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut p = BivarPoly::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        BivarPoly::from_terms(
            terms
                .iter()
                .map(|&(i, j, c)| ((i, j), Rational::from_integer(c.into()))),
        )
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
        let slot = self.terms.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `((i, j), c_ij)` in lexicographic order of `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(deg_X, deg_Y)`.
    pub fn bidegree(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(a, b), &(i, j)| (a.max(i), b.max(j)))
    }

    /// Leading term under graded-lex order with `X > Y`.
    pub fn leading_term(&self) -> Option<((u32, u32), &Rational)> {
        self.terms
            .iter()
            .max_by_key(|((i, j), _)| (i + j, *i))
            .map(|(k, c)| (*k, c))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Rational::is_integer)
    }

    /// Swaps `X` and `Y`.
    pub fn transpose(&self) -> Self {
        BivarPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BivarPoly::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    /// Primitive integer multiple with the `X^{deg_X}` coefficient of lowest
    /// `Y` degree positive; falls back to the graded-lex leading coefficient
    /// when there is no pure `X^{deg_X}` term.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let dx = self.bidegree().0;
        let pivot = self
            .terms
            .iter()
            .find(|((i, _), _)| *i == dx)
            .map(|(_, c)| c)
            .or_else(|| self.leading_term().map(|(_, c)| c))
            .expect("nonzero polynomial");
        let sign = if pivot.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let factor = Rational::new(lcm * sign, content);
        self.scale(&factor)
    }

    /// `P(x, y)` for series `x`, `y`; the result is exact only as far as the
    /// inputs are.
    pub fn eval_series(&self, x: &QSeries, y: &QSeries) -> QSeries {
        let (dx, dy) = self.bidegree();
        let powers = |s: &QSeries, d: u32| {
            let mut v = vec![QSeries::one()];
            for k in 1..=d as usize {
                v.push(v[k - 1].mul(s));
            }
            v
        };
        let (xp, yp) = (powers(x, dx), powers(y, dy));
        self.terms
            .iter()
            .fold(QSeries::zero_with_order(EXACT), |acc, (&(i, j), c)| {
                acc.add(&xp[i as usize].mul(&yp[j as usize]).scale(c))
            })
    }

    /// Coefficients of `P(X, X)` from degree 0 upward.
    pub fn diagonal(&self) -> Vec<Rational> {
        let (dx, dy) = self.bidegree();
        let mut out = vec![Rational::zero(); (dx + dy + 1) as usize];
        for (&(i, j), c) in &self.terms {
            out[(i + j) as usize] += c;
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }
}

/// Product of univariate polynomials given by ascending coefficients.
pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|((i, j), _)| std::cmp::Reverse((i + j, *i)));
        for (n, (&(i, j), c)) in terms.into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (n, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let mag = c.abs();
            let mono: Vec<String> = [("X", i), ("Y", j)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| {
                    if *e == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            match (mag.is_one(), mono.is_empty()) {
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (_, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}
