//! Ring operations, division and powers.
//!
//! Products and inverses are computed over the integers after clearing
//! denominators, so no rational gcd runs inside the quadratic loops.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{sat_add, QSeries, Rational, SeriesError, EXACT};

/// Least common multiple of the denominators of `xs`.
pub fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a Rational>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| {
        if x.denom().is_one() {
            l
        } else {
            l.lcm(x.denom())
        }
    })
}

fn to_integers(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = lcm_of_denominators(xs);
    let v = xs
        .iter()
        .map(|x| {
            if l.is_one() {
                x.numer().clone()
            } else {
                x.numer() * (&l / x.denom())
            }
        })
        .collect();
    (v, l)
}

/// Re-expresses `s` on the grid `lead + k·step`; `lead` and `step` must be
/// compatible with the series' own grid.
fn regrid(s: &QSeries, lead: i64, step: i64, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (e, c) in s.terms() {
        let i = ((e - lead) / step) as usize;
        if i < len {
            out[i] = c.clone();
        }
    }
    out
}

impl QSeries {
    pub fn add(&self, other: &QSeries) -> QSeries {
        let order = self.order.min(other.order);
        if other.is_zero() {
            return self.truncate24(order);
        }
        if self.is_zero() {
            return other.truncate24(order);
        }
        let lead = self.lead.min(other.lead);
        let step = self
            .step
            .gcd(&other.step)
            .gcd(&(self.lead - other.lead).abs());
        let last = |s: &QSeries| s.lead + (s.coeffs.len() as i64 - 1) * s.step;
        let hi = last(self).max(last(other));
        let len = ((hi - lead) / step + 1) as usize;
        let mut out = regrid(self, lead, step, len);
        for (e, c) in other.terms() {
            out[((e - lead) / step) as usize] += c;
        }
        QSeries::from_raw(lead, step, out, order)
    }

    pub fn neg(&self) -> QSeries {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        s
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    pub fn add_constant(&self, c: &Rational) -> QSeries {
        self.add(&QSeries::constant(c.clone()))
    }

    /// Cauchy product. The order is `min(order_a + val_b, order_b + val_a)`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order =
            sat_add(self.order, other.val_bound()).min(sat_add(other.order, self.val_bound()));
        if self.is_zero() || other.is_zero() {
            return QSeries::zero_with_order(order);
        }
        let lead = self.lead + other.lead;
        let step = self.step.gcd(&other.step);
        let full = ((self.coeffs.len() as i64 - 1) * self.step
            + (other.coeffs.len() as i64 - 1) * other.step)
            / step
            + 1;
        let len = if order >= EXACT {
            full
        } else {
            full.min(((order - lead) + step - 1).div_euclid(step))
                .max(0)
        } as usize;
        let (a, la) = to_integers(&self.coeffs);
        let (b, lb) = to_integers(&other.coeffs);
        let (sa, sb) = ((self.step / step) as usize, (other.step / step) as usize);
        let mut acc = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let base = i * sa;
            if base >= len {
                break;
            }
            for (j, y) in b.iter().enumerate() {
                let k = base + j * sb;
                if k >= len {
                    break;
                }
                if !y.is_zero() {
                    acc[k] += x * y;
                }
            }
        }
        let den = la * lb;
        let coeffs = acc
            .into_iter()
            .map(|n| Rational::new(n, den.clone()))
            .collect();
        QSeries::from_raw(lead, step, coeffs, order)
    }

    /// Inverse of the unit part `c_0 (1 + …)` to `rel` grid steps of relative
    /// precision, computed fraction-free.
    fn inverse_coeffs(&self, len: usize) -> Vec<Rational> {
        let (e, l) = to_integers(&self.coeffs);
        let e0 = e[0].clone();
        // N_n = -Σ_{k=1..n} e_k N_{n-k} e_0^{k-1}, and 1/E has c_n = N_n / e_0^{n+1}.
        let mut pows = vec![BigInt::one()];
        let unit = e0.abs().is_one();
        let mut nums: Vec<BigInt> = Vec::with_capacity(len);
        for n in 0..len {
            if n == 0 {
                nums.push(BigInt::one());
                continue;
            }
            if !unit {
                let next = pows.last().unwrap() * &e0;
                pows.push(next);
            }
            let mut s = BigInt::zero();
            for k in 1..=n.min(e.len() - 1) {
                if e[k].is_zero() {
                    continue;
                }
                let t = &e[k] * &nums[n - k];
                if unit {
                    // e_0^{k-1} = ±1
                    if e0.is_negative() && (k - 1) % 2 == 1 {
                        s -= t;
                    } else {
                        s += t;
                    }
                } else {
                    s += t * &pows[k - 1];
                }
            }
            nums.push(-s);
        }
        let mut den = e0.clone();
        nums.into_iter()
            .map(|n| {
                let r = Rational::new(n * &l, den.clone());
                den *= &e0;
                r
            })
            .collect()
    }

    /// Multiplicative inverse. The relative precision of the result equals
    /// that of the input.
    pub fn inv(&self) -> Result<QSeries, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero(self.order));
        }
        if self.order >= EXACT && self.coeffs.len() > 1 {
            return Err(SeriesError::Unbounded);
        }
        self.inv_rel(self.rel_precision())
    }

    /// Width of the known window above the valuation, in 1/24 units.
    pub(crate) fn rel_precision(&self) -> i64 {
        if self.order >= EXACT {
            EXACT
        } else {
            self.order - self.val_bound()
        }
    }

    fn inv_rel(&self, rel: i64) -> Result<QSeries, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero(self.order));
        }
        let lead = -self.lead;
        if self.coeffs.len() == 1 && rel >= EXACT {
            let c = self.coeffs[0].recip();
            return Ok(QSeries::monomial(c, lead, EXACT));
        }
        if rel >= EXACT {
            return Err(SeriesError::Unbounded);
        }
        let len = ((rel + self.step - 1) / self.step).max(0) as usize;
        let coeffs = self.inverse_coeffs(len);
        Ok(QSeries::from_raw(lead, self.step, coeffs, lead + rel))
    }

    /// `self / other`, exact up to the combined relative precision.
    pub fn div(&self, other: &QSeries) -> Result<QSeries, SeriesError> {
        if other.is_zero() {
            return Err(SeriesError::DivisionByZero(other.order));
        }
        if self.is_zero() {
            return Ok(QSeries::zero_with_order(sat_add(self.order, -other.lead)));
        }
        let rel = self.rel_precision().min(other.rel_precision());
        let inv = other.inv_rel(rel)?;
        let prod = self.mul(&inv);
        let order = if rel >= EXACT {
            EXACT
        } else {
            self.lead - other.lead + rel
        };
        Ok(prod.truncate24(order))
    }

    /// Integer power by repeated squaring; negative powers invert first.
    pub fn pow(&self, k: i64) -> Result<QSeries, SeriesError> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = QSeries::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}
