//! Null theta functions, Eisenstein series and binary lattice thetas.

use num_bigint::BigInt;
use num_integer::Roots;

use super::FormsError;
use crate::series::{QSeries, Rational, DENOM};

/// Which null theta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theta {
    Two,
    Three,
    Four,
}

impl TryFrom<u8> for Theta {
    type Error = FormsError;

    fn try_from(i: u8) -> Result<Self, FormsError> {
        match i {
            2 => Ok(Theta::Two),
            3 => Ok(Theta::Three),
            4 => Ok(Theta::Four),
            _ => Err(FormsError::UnknownKey(format!("theta{i}"))),
        }
    }
}

/// `θ₂`, `θ₃` or `θ₄` below `q^order`, summed directly over the lattice.
pub fn theta_series(which: Theta, order: i64) -> QSeries {
    let order24 = order * DENOM;
    let mut terms = Vec::new();
    match which {
        Theta::Three | Theta::Four => {
            for n in 0i64.. {
                let e = n * n * DENOM;
                if e >= order24 {
                    break;
                }
                let c = match (n, which) {
                    (0, _) => 1,
                    (_, Theta::Four) if n % 2 == 1 => -2,
                    _ => 2,
                };
                terms.push((e, Rational::from_integer(c.into())));
            }
        }
        Theta::Two => {
            // (n + 1/2)² = (2n+1)²/4, i.e. 6(2n+1)² in 1/24 units.
            for n in 0i64.. {
                let e = 6 * (2 * n + 1) * (2 * n + 1);
                if e >= order24 {
                    break;
                }
                terms.push((e, Rational::from_integer(2.into())));
            }
        }
    }
    QSeries::from_terms(terms, order24)
}

/// `σ_k(n)` for `n < len`, by a divisor sieve. Entry 0 is 0.
pub fn divisor_sums(k: u32, len: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::from(0); len];
    for d in 1..len {
        let dk = BigInt::from(d).pow(k);
        for m in (d..len).step_by(d) {
            s[m] += &dk;
        }
    }
    s
}

fn eisenstein(k: u32, factor: i64, scale: i64, order: i64) -> QSeries {
    assert!(scale >= 1, "scale must be positive");
    let len = ((order - 1) / scale + 1).max(0) as usize;
    let sig = divisor_sums(k, len);
    let mut terms = vec![(0, Rational::from_integer(1.into()))];
    for (n, s) in sig.into_iter().enumerate().skip(1) {
        terms.push((n as i64 * scale * DENOM, Rational::from_integer(s * factor)));
    }
    QSeries::from_terms(terms, order * DENOM)
}

/// `P(q^scale) = 1 − 24 Σ σ₁(n) q^{scale·n}` below `q^order`.
pub fn eisenstein_p(scale: i64, order: i64) -> QSeries {
    eisenstein(1, -24, scale, order)
}

/// `Q(q^scale) = 1 + 240 Σ σ₃(n) q^{scale·n}` below `q^order`.
pub fn eisenstein_q(scale: i64, order: i64) -> QSeries {
    eisenstein(3, 240, scale, order)
}

/// `Σ_{m,n} q^{A m² + B m n + C n²}` below `q^order` for a positive-definite form.
pub fn lattice_sum(form: (i64, i64, i64), order: i64) -> Result<QSeries, FormsError> {
    let (a, b, c) = form;
    let disc = 4 * a * c - b * b;
    if a <= 0 || disc <= 0 {
        return Err(FormsError::NotPositiveDefinite(a, b, c));
    }
    // Completing the square: Q(m,n) ≥ disc·n²/(4A) and ≥ disc·m²/(4C),
    // so Q < order forces n² < 4A·order/disc and m² < 4C·order/disc.
    let n_max = (4 * a * order / disc).sqrt() + 1;
    let m_max = (4 * c * order / disc).sqrt() + 1;
    let len = order.max(0) as usize;
    let mut counts = vec![0i64; len];
    for n in -n_max..=n_max {
        for m in -m_max..=m_max {
            let e = a * m * m + b * m * n + c * n * n;
            if e < order {
                counts[e as usize] += 1;
            }
        }
    }
    Ok(QSeries::from_integer_coeffs(0, counts, order))
}

/// The square of [`lattice_sum`].
pub fn lattice_theta(form: (i64, i64, i64), order: i64) -> Result<QSeries, FormsError> {
    let s = lattice_sum(form, order)?;
    Ok(s.mul(&s))
}
