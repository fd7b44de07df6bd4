//! The coefficients `a_n` of `Z = Σ a_n X^n`, two ways.

use num_bigint::BigInt;
use serde::Serialize;

use super::OdeError;
use crate::forms;
use crate::series::Rational;

/// `a_0, a_1, …` as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffSequence {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub a: Vec<Rational>,
}

impl CoeffSequence {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// The entries as integers, or the index of the first non-integer.
    pub fn integers(&self) -> Result<Vec<BigInt>, OdeError> {
        self.a
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(OdeError::NonIntegral(i))
                }
            })
            .collect()
    }
}

/// The first `count` terms of
/// `(n+1)³ a_{n+1} = 4(2n+1)(2n²+2n+1) a_n − 16n(4n²+1) a_{n−1} + 8(2n−1)³ a_{n−2}`
/// from the seeds `1, 4, 20`. Integrality is checked, not assumed.
pub fn recurrence_coeffs(count: usize) -> Result<CoeffSequence, OdeError> {
    let int = |n: i64| Rational::from_integer(n.into());
    let mut a: Vec<Rational> = [1, 4, 20].into_iter().map(int).take(count).collect();
    for n in 2..count.saturating_sub(1) as i64 {
        let i = n as usize;
        let next = (int(4 * (2 * n + 1) * (2 * n * n + 2 * n + 1)) * &a[i]
            - int(16 * n * (4 * n * n + 1)) * &a[i - 1]
            + int(8 * (2 * n - 1).pow(3)) * &a[i - 2])
            / int((n + 1).pow(3));
        if !next.is_integer() {
            return Err(OdeError::NonIntegral(i + 1));
        }
        a.push(next);
    }
    Ok(CoeffSequence { a })
}

/// `a_0 … a_{order−1}` read off `Z(q(X))`, where `q(X)` is the
/// compositional inverse of `X(q)`.
pub fn z_in_x(order: i64) -> Result<CoeffSequence, OdeError> {
    if order < 3 {
        return Err(OdeError::OrderTooSmall { min: 3, got: order });
    }
    let x = forms::build("X", order)?;
    let q_of_x = x.revert()?;
    let z = forms::build("Z", order)?;
    let zx = z.compose(&q_of_x)?;
    Ok(CoeffSequence {
        a: zx.integer_coefficients(order as usize),
    })
}
