//! Truncated q-series with exact rational coefficients.
//!
//! Every exponent lives on the grid `(1/24)·Z`, which is fine enough for the
//! `q^{1/24}` prefactor of the Dedekind eta function and the `q^{1/4}` of
//! `theta_2`. A series stores its coefficients densely along an arithmetic
//! progression `lead + k·step` (both in units of 1/24), so `P(q^20)` or a
//! function of `q^2` costs no more than its nonzero terms.
//!
//! The truncation order is part of the value: coefficients are known for all
//! exponents strictly below `order/24`, and every operation returns the
//! tightest order it can prove. Exact polynomials carry the sentinel order
//! [`EXACT`].

mod arith;
mod compose;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use arith::lcm_of_denominators;

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Number of grid points per unit exponent.
pub const DENOM: i64 = 24;

/// Order assigned to series that are known exactly (finite polynomials).
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by a series that vanishes below q^({0}/24)")]
    DivisionByZero(i64),
    #[error("inverse of an exact non-monomial series has no finite truncation order")]
    Unbounded,
    #[error("inner series of a composition must have positive valuation")]
    ConstantTermInner,
    #[error("outer series of a composition must have non-negative integer exponents")]
    NonIntegralOuter,
    #[error("reversion needs a series of the form q + O(q^2)")]
    NotNormalized,
    #[error("series has exponents off the integer grid")]
    NotIntegral,
}

/// A truncated Laurent/Puiseux series in `q^{1/24}`.
#[derive(Clone, Debug)]
pub struct QSeries {
    /// Exponent of `coeffs[0]`, in 1/24 units.
    lead: i64,
    /// Spacing of the stored coefficients, in 1/24 units.
    step: i64,
    coeffs: Vec<Rational>,
    /// Exclusive truncation bound, in 1/24 units.
    order: i64,
}

pub(crate) fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

impl QSeries {
    /// The zero series known to vanish below exponent `order24 / 24`.
    pub fn zero_with_order(order24: i64) -> Self {
        QSeries {
            lead: 0,
            step: DENOM,
            coeffs: Vec::new(),
            order: order24,
        }
    }

    /// The zero series known to order `q^order`.
    pub fn zero(order: i64) -> Self {
        Self::zero_with_order(order.saturating_mul(DENOM).min(EXACT))
    }

    /// Exact constant.
    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, EXACT)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The series variable `q` itself, known exactly.
    pub fn q() -> Self {
        Self::monomial(Rational::one(), DENOM, EXACT)
    }

    /// `c · q^{exp24/24} + O(q^{order24/24})`.
    pub fn monomial(c: Rational, exp24: i64, order24: i64) -> Self {
        Self::from_terms([(exp24, c)], order24)
    }

    /// Builds a series from `(exponent in 1/24 units, coefficient)` pairs.
    /// Terms at or beyond the order are dropped; repeated exponents add up.
    pub fn from_terms<I>(terms: I, order24: i64) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut terms: Vec<(i64, Rational)> = terms
            .into_iter()
            .filter(|(e, c)| *e < order24 && !c.is_zero())
            .collect();
        terms.sort_by_key(|t| t.0);
        if terms.is_empty() {
            return Self::zero_with_order(order24);
        }
        let lead = terms[0].0;
        let step = terms
            .iter()
            .fold(0i64, |g, (e, _)| g.gcd(&(e - lead)))
            .max(1);
        let step = if terms.len() == 1 { DENOM } else { step };
        let len = ((terms.last().unwrap().0 - lead) / step + 1) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (e, c) in terms {
            let i = ((e - lead) / step) as usize;
            coeffs[i] += c;
        }
        QSeries {
            lead,
            step,
            coeffs,
            order: order24,
        }
        .normalized()
    }

    /// Integer-exponent series `Σ c_k q^{start+k} + O(q^order)`.
    pub fn from_integer_coeffs<T: Into<BigInt>>(start: i64, coeffs: Vec<T>, order: i64) -> Self {
        let order24 = if order >= EXACT / DENOM {
            EXACT
        } else {
            order * DENOM
        };
        let coeffs = coeffs
            .into_iter()
            .map(|c| Rational::from_integer(c.into()))
            .collect();
        QSeries {
            lead: start * DENOM,
            step: DENOM,
            coeffs,
            order: order24,
        }
        .normalized()
    }

    pub(crate) fn from_raw(lead: i64, step: i64, coeffs: Vec<Rational>, order: i64) -> Self {
        QSeries {
            lead,
            step,
            coeffs,
            order,
        }
        .normalized()
    }

    /// Restores the representation invariants: no terms at or beyond the
    /// order, nonzero first and last stored coefficient, and the coarsest
    /// step compatible with the nonzero terms.
    fn normalized(mut self) -> Self {
        if self.order < EXACT {
            let keep = if self.order <= self.lead {
                0
            } else {
                ceil_div(self.order - self.lead, self.step) as usize
            };
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip == self.coeffs.len() {
            self.coeffs.clear();
            self.lead = 0;
            self.step = DENOM;
            return self;
        }
        if skip > 0 {
            self.coeffs.drain(..skip);
            self.lead += skip as i64 * self.step;
        }
        let g = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .fold(0usize, |g, (i, _)| g.gcd(&i));
        if g > 1 {
            self.coeffs = self.coeffs.into_iter().step_by(g).collect();
            self.step *= g as i64;
        }
        if self.coeffs.len() == 1 {
            self.step = DENOM;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    /// Truncation order in 1/24 units.
    pub fn order24(&self) -> i64 {
        self.order
    }

    /// Truncation order as a rational power of `q`.
    pub fn order(&self) -> Rational {
        Rational::new(self.order.into(), DENOM.into())
    }

    /// Lowest exponent with a nonzero coefficient (1/24 units), if any.
    pub fn valuation24(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lead)
    }

    /// Lower bound for the valuation: the lead, or the order for zero.
    pub(crate) fn val_bound(&self) -> i64 {
        if self.is_zero() {
            self.order
        } else {
            self.lead
        }
    }

    pub fn step24(&self) -> i64 {
        self.step
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// Coefficient of `q^{exp24/24}`. Returns `None` if the exponent is at or
    /// beyond the truncation order.
    pub fn coeff24(&self, exp24: i64) -> Option<Rational> {
        if exp24 >= self.order {
            return None;
        }
        if self.is_zero() || exp24 < self.lead || (exp24 - self.lead) % self.step != 0 {
            return Some(Rational::zero());
        }
        let i = ((exp24 - self.lead) / self.step) as usize;
        Some(self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero))
    }

    /// Coefficient of `q^n` for integer `n`; panics beyond the order.
    pub fn coeff(&self, n: i64) -> Rational {
        self.coeff24(n * DENOM)
            .unwrap_or_else(|| panic!("coefficient of q^{n} is beyond the truncation order"))
    }

    /// Nonzero terms as `(exponent in 1/24 units, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lead + i as i64 * self.step, c))
    }

    /// Whether every exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.is_zero() || (self.lead % DENOM == 0 && self.step % DENOM == 0)
    }

    pub fn require_integral(&self) -> Result<(), SeriesError> {
        if self.is_integral() {
            Ok(())
        } else {
            Err(SeriesError::NotIntegral)
        }
    }

    /// Whether every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coefficients `c_0..c_{n-1}` of an integral series with nonnegative
    /// exponents, padded with zeros up to `n` (or up to the order).
    pub fn integer_coefficients(&self, n: usize) -> Vec<Rational> {
        (0..n as i64)
            .take_while(|&k| k * DENOM < self.order)
            .map(|k| self.coeff(k))
            .collect()
    }

    /// Drops every term at or beyond `q^{order24/24}`.
    pub fn truncate24(&self, order24: i64) -> Self {
        let mut s = self.clone();
        s.order = s.order.min(order24);
        s.normalized()
    }

    pub fn truncate(&self, order: i64) -> Self {
        self.truncate24(order.saturating_mul(DENOM).min(EXACT))
    }

    /// Reinterprets the coefficients as known to a larger order. Only
    /// meaningful when the caller knows the extra terms vanish, as in
    /// Newton iteration where the next step repairs them.
    pub(crate) fn with_order24(&self, order24: i64) -> Self {
        let mut s = self.clone();
        s.order = order24;
        s.normalized()
    }

    /// Multiplies by `q^{exp24/24}`.
    pub fn shift24(&self, exp24: i64) -> Self {
        let mut s = self.clone();
        if !s.is_zero() {
            s.lead += exp24;
        }
        s.order = sat_add(s.order, exp24);
        s
    }

    /// Substitutes `q -> q^n` for a positive integer `n`.
    pub fn dilate(&self, n: i64) -> Self {
        assert!(n >= 1, "dilation factor must be positive");
        let mut s = self.clone();
        s.lead *= n;
        s.step *= n;
        s.order = if s.order >= EXACT { EXACT } else { s.order * n };
        if s.coeffs.len() <= 1 {
            s.step = DENOM;
        }
        s
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero_with_order(self.order);
        }
        let mut s = self.clone();
        for x in s.coeffs.iter_mut() {
            *x *= c;
        }
        s
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&Rational::from_integer(c.into()))
    }

    /// The operator `q d/dq`.
    pub fn q_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = self.lead + i as i64 * self.step;
                c * Rational::new(e.into(), DENOM.into())
            })
            .collect();
        Self::from_raw(self.lead, self.step, coeffs, self.order)
    }

    /// The ordinary derivative `d/dq`.
    pub fn derivative(&self) -> Self {
        self.q_derivative().shift24(-DENOM)
    }

    /// Substitutes `q -> -q`, flipping the sign of every odd power. Only
    /// defined for integral series.
    pub fn negate_q(&self) -> Result<Self, SeriesError> {
        self.require_integral()?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = (self.lead + i as i64 * self.step) / DENOM;
                if e.rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        Ok(Self::from_raw(self.lead, self.step, coeffs, self.order))
    }

    /// Largest absolute coefficient, as a rational.
    pub fn max_abs_coefficient(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Number of stored coefficients (including interior zeros).
    pub fn stored_len(&self) -> usize {
        self.coeffs.len()
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.terms().eq(other.terms())
    }
}

impl Eq for QSeries {}

fn fmt_exponent(e: i64) -> String {
    let r = Rational::new(e.into(), DENOM.into());
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("({r})")
    }
}

impl fmt::Display for QSeries {
    /// Human-readable form such as `2q^(1/4) + 2q^(9/4) + O(q^10)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag_s = if mag.is_integer() {
                mag.to_integer().to_string()
            } else {
                format!("({mag})")
            };
            match e {
                0 => write!(f, "{mag_s}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_s}")?;
                    }
                    if e == DENOM {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{}", fmt_exponent(e))?;
                    }
                }
            }
        }
        if self.order < EXACT {
            if first {
                write!(f, "O(q^{})", fmt_exponent(self.order))?;
            } else {
                write!(f, " + O(q^{})", fmt_exponent(self.order))?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn from_terms_detects_step() {
        let s = QSeries::from_terms([(6, r(2)), (54, r(2)), (150, r(2))], 24 * 10);
        assert_eq!(s.step24(), 48);
        assert_eq!(s.valuation24(), Some(6));
        assert_eq!(s.coeff24(54), Some(r(2)));
        assert_eq!(s.coeff24(30), Some(r(0)));
        assert_eq!(s.coeff24(240), None);
    }

    #[test]
    fn terms_beyond_order_are_dropped() {
        let s = QSeries::from_integer_coeffs(0, vec![1, 2, 3, 4], 2);
        assert_eq!(s.stored_len(), 2);
        assert_eq!(s.to_string(), "1 + 2q + O(q^2)");
    }

    #[test]
    fn display_fractional() {
        let s = QSeries::from_terms([(6, r(2)), (54, r(-1))], 24 * 3);
        assert_eq!(s.to_string(), "2q^(1/4) - q^(9/4) + O(q^3)");
        assert_eq!(QSeries::zero(5).to_string(), "O(q^5)");
    }

    #[test]
    fn dilate_and_shift() {
        let s = QSeries::from_integer_coeffs(0, vec![1, -1], 10);
        let d = s.dilate(3);
        assert_eq!(d.coeff(3), r(-1));
        assert_eq!(d.order24(), 24 * 30);
        let sh = s.shift24(24);
        assert_eq!(sh.coeff(1), r(1));
        assert_eq!(sh.order24(), 24 * 11);
    }

    #[test]
    fn q_derivative_of_monomial_and_constant() {
        let m = QSeries::monomial(r(1), 24 * 7, 24 * 20);
        assert_eq!(m.q_derivative().coeff(7), r(7));
        assert!(QSeries::from_int(5).q_derivative().is_zero());
    }

    #[test]
    fn equality_ignores_representation_step() {
        let a = QSeries::from_terms([(0, r(1)), (48, r(1))], 24 * 5);
        let b = QSeries::from_raw(0, 24, vec![r(1), r(0), r(1)], 24 * 5);
        assert_eq!(a, b);
        assert_eq!(b.step24(), 48);
    }
}
