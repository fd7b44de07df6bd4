//! Eta products `∏ η(δτ)^{r_δ}` and the membership test for `M_k(Γ₀(ℓ))`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::FormsError;
use crate::series::{QSeries, Rational, DENOM};

/// `∏_{δ | ℓ} η(δτ)^{r_δ}`. Zero exponents are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaProduct {
    level: i64,
    exponents: BTreeMap<i64, i64>,
}

/// Outcome of the five sufficient conditions for `f ∈ M_k(Γ₀(ℓ))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaMembership {
    pub level: i64,
    /// `k = Σ r_δ / 2`, possibly a half-integer.
    pub weight: String,
    /// Weight is an even integer.
    pub even_weight: bool,
    /// `∏ δ^{|r_δ|}` is a perfect square.
    pub square_product: bool,
    /// `Σ δ r_δ ≡ 0 (mod 24)`.
    pub order_at_infinity: bool,
    /// `Σ (ℓ/δ) r_δ ≡ 0 (mod 24)`.
    pub order_at_zero: bool,
    /// `Σ gcd(d, δ)² r_δ / δ ≥ 0` for every `d | ℓ`.
    pub holomorphic_at_cusps: bool,
}

impl EtaMembership {
    pub fn conditions(&self) -> [bool; 5] {
        [
            self.even_weight,
            self.square_product,
            self.order_at_infinity,
            self.order_at_zero,
            self.holomorphic_at_cusps,
        ]
    }

    pub fn passes(&self) -> bool {
        self.conditions().iter().all(|&c| c)
    }
}

pub fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

impl EtaProduct {
    /// Builds the product from `(δ, r_δ)` pairs; every `δ` must divide `level`.
    /// Repeated divisors add their exponents.
    pub fn new(level: i64, exponents: &[(i64, i64)]) -> Result<Self, FormsError> {
        if level < 1 {
            return Err(FormsError::InvalidLevel(level));
        }
        let mut map = BTreeMap::new();
        for &(d, r) in exponents {
            if d < 1 || level % d != 0 {
                return Err(FormsError::NotADivisor { divisor: d, level });
            }
            *map.entry(d).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaProduct {
            level,
            exponents: map,
        })
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<i64, i64> {
        &self.exponents
    }

    pub fn exponent(&self, delta: i64) -> i64 {
        self.exponents.get(&delta).copied().unwrap_or(0)
    }

    /// Twice the weight, `Σ r_δ`.
    pub fn twice_weight(&self) -> i64 {
        self.exponents.values().sum()
    }

    pub fn weight(&self) -> Rational {
        Rational::new(self.twice_weight().into(), 2.into())
    }

    /// Exponent of the leading power of `q`, in 1/24 units: `Σ δ r_δ`.
    pub fn lead24(&self) -> i64 {
        self.exponents.iter().map(|(d, r)| d * r).sum()
    }

    /// Product of two eta products over the lcm of their levels.
    pub fn mul(&self, other: &EtaProduct) -> EtaProduct {
        let level = self.level.lcm(&other.level);
        let mut map = self.exponents.clone();
        for (d, r) in &other.exponents {
            *map.entry(*d).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        EtaProduct {
            level,
            exponents: map,
        }
    }

    pub fn pow(&self, k: i64) -> EtaProduct {
        let mut map: BTreeMap<i64, i64> = self.exponents.iter().map(|(d, r)| (*d, r * k)).collect();
        map.retain(|_, r| *r != 0);
        EtaProduct {
            level: self.level,
            exponents: map,
        }
    }

    pub fn inv(&self) -> EtaProduct {
        self.pow(-1)
    }

    /// q-expansion known below `q^order`, including the `q^{Σδr/24}` prefactor.
    pub fn expand(&self, order: i64) -> QSeries {
        let order24 = order * DENOM;
        let lead = self.lead24();
        if order24 <= lead {
            return QSeries::zero_with_order(order24);
        }
        let terms = (order24 - lead + DENOM - 1) / DENOM;
        let mut acc = QSeries::one().truncate(terms);
        for (&d, &r) in &self.exponents {
            let len = ((terms + d - 1) / d) as usize;
            let factor = QSeries::from_integer_coeffs(0, euler_power(r, len), len as i64);
            acc = acc.mul(&factor.dilate(d));
        }
        acc.shift24(lead).truncate24(order24)
    }

    /// Evaluates the five sufficient conditions for membership in
    /// `M_k(Γ₀(ℓ))`.
    pub fn membership(&self) -> EtaMembership {
        let l = self.level;
        let sum_r = self.twice_weight();
        let even_weight = sum_r.rem_euclid(4) == 0;
        let s = self.exponents.iter().fold(BigInt::from(1), |acc, (d, r)| {
            acc * BigInt::from(*d).pow(r.unsigned_abs() as u32)
        });
        let square_product = s.sqrt().pow(2) == s;
        let order_at_infinity = self.lead24().rem_euclid(24) == 0;
        let order_at_zero = self
            .exponents
            .iter()
            .map(|(d, r)| (l / d) * r)
            .sum::<i64>()
            .rem_euclid(24)
            == 0;
        // Scaled by ℓ so that every term is an integer.
        let holomorphic_at_cusps = divisors(l).into_iter().all(|c| {
            self.exponents
                .iter()
                .map(|(d, r)| c.gcd(d).pow(2) * r * (l / d))
                .sum::<i64>()
                >= 0
        });
        EtaMembership {
            level: l,
            weight: self.weight().to_string(),
            even_weight,
            square_product,
            order_at_infinity,
            order_at_zero,
            holomorphic_at_cusps,
        }
    }
}

impl fmt::Display for EtaProduct {
    /// Compact form such as `η2^2 η10^2` (level omitted).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(d, r)| format!("η{d}^{r}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Coefficients of `∏_{j≥1} (1 − q^j)` below `q^len`, by the pentagonal
/// number theorem.
pub fn euler_product(len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigInt::from(1);
    for k in 1i64.. {
        let p1 = (k * (3 * k - 1) / 2) as usize;
        if p1 >= len {
            break;
        }
        let sign = if k % 2 == 1 { -1 } else { 1 };
        c[p1] += sign;
        let p2 = (k * (3 * k + 1) / 2) as usize;
        if p2 < len {
            c[p2] += sign;
        }
    }
    c
}

/// Coefficients of `∏_{j≥1} (1 − q^j)^r` below `q^len`.
///
/// With `f = Σ e_k q^k`, `e_0 = 1`, the power `g = f^r` satisfies
/// `n g_n = Σ_{k=1}^{n} ((r+1)k − n) e_k g_{n−k}`, and `f` has only
/// `O(√len)` nonzero terms.
pub fn euler_power(r: i64, len: usize) -> Vec<BigInt> {
    let e = euler_product(len);
    if r == 1 {
        return e;
    }
    let support: Vec<(usize, &BigInt)> = e
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, x)| !x.is_zero())
        .collect();
    let mut g = Vec::with_capacity(len);
    if len == 0 {
        return g;
    }
    g.push(BigInt::from(1));
    for n in 1..len {
        let mut s = BigInt::zero();
        for &(k, ek) in &support {
            if k > n {
                break;
            }
            let w = (r + 1) * k as i64 - n as i64;
            if w != 0 {
                s += ek * &g[n - k] * w;
            }
        }
        let (q, rem) = s.div_rem(&BigInt::from(n));
        debug_assert!(rem.is_zero());
        g.push(q);
    }
    g
}
