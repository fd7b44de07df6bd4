//! Modular objects of level 20 as exact q-series.
//!
//! Everything here is addressable by a string key through [`build`], so the
//! identity catalog and the command line share one vocabulary:
//!
//! | key | object |
//! |-----|--------|
//! | `theta2`, `theta3`, `theta4` | null theta functions |
//! | `P<n>`, `Q<n>` | `P(q^n)`, `Q(q^n)` |
//! | `u`, `v`, `k`, `w` | level-20 eta quotients |
//! | `z` | `η₂² η₁₀²`, the weight-2 cusp form |
//! | `zu`, `z/u`, `zv`, `z/v` | weight-2 products |
//! | `Z`, `boldZ` | squared lattice thetas of `(1,0,5)` and `(2,2,3)` |
//! | `X` | `z / Z` |
//! | `F`, `T` | `θ₃⁴` and `θ₂⁴θ₄⁴ / (16 θ₃⁸)` |
//! | `t20+`, `t20|2+`, `t20+4`, `t20|2+5`, `t20|2+10`, `t20+20` | normalized Hauptmoduln |

mod eta;
mod relations;
mod theta;

use num_traits::Zero;
use thiserror::Error;

pub use eta::{divisors, euler_power, euler_product, EtaMembership, EtaProduct};
pub use relations::{
    find_relation, m20_basis, membership_decomposition, p_combination, Decomposition,
    RelationReport, M20_BASIS_NAMES, M20_SCALES, RELATION_GUARD,
};
pub use theta::{
    divisor_sums, eisenstein_p, eisenstein_q, lattice_sum, lattice_theta, theta_series, Theta,
};

use crate::series::{QSeries, Rational, SeriesError, DENOM};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("unknown form key `{0}`")]
    UnknownKey(String),
    #[error("level must be positive, got {0}")]
    InvalidLevel(i64),
    #[error("{divisor} does not divide the level {level}")]
    NotADivisor { divisor: i64, level: i64 },
    #[error("form ({0}, {1}, {2}) is not positive definite")]
    NotPositiveDefinite(i64, i64, i64),
    #[error("series known only below q^{got}, need q^{needed}")]
    InsufficientOrder { needed: i64, got: String },
    #[error("series is not in the span of the basis to the tested order")]
    NotInSpan,
    #[error("basis is dependent to the tested order ({0} relations)")]
    NotUnique(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Level-20 Hauptmodul keys with the matching group label.
pub const HAUPTMODULN: [(&str, &str); 6] = [
    ("t20+", "1/u - 2 + u"),
    ("t20|2+", "1/w - w"),
    ("t20+4", "1/v + 2"),
    ("t20|2+5", "1/k"),
    ("t20|2+10", "1/w"),
    ("t20+20", "1/u - 2"),
];

/// Fixed catalog keys, in display order. `P<n>` and `Q<n>` accept any
/// positive `n`.
pub const KEYS: [&str; 27] = [
    "theta2", "theta3", "theta4", "P1", "P2", "Q1", "Q2", "u", "v", "k", "w", "z", "zu", "z/u",
    "zv", "z/v", "Z", "boldZ", "X", "F", "T", "t20+", "t20|2+", "t20+4", "t20|2+5", "t20|2+10",
    "t20+20",
];

/// Eta-quotient definitions at level 20.
pub fn named_eta(key: &str) -> Option<EtaProduct> {
    let e: &[(i64, i64)] = match key {
        "u" => &[(1, 2), (20, 2), (4, -2), (5, -2)],
        "v" => &[(2, 2), (5, 2), (20, 2), (1, -2), (4, -2), (10, -2)],
        "k" => &[(4, 2), (20, 2), (2, -2), (10, -2)],
        "w" => &[(2, 3), (20, 3), (4, -3), (10, -3)],
        "z" => &[(2, 2), (10, 2)],
        _ => {
            let (num, den) = match key {
                "zu" => ("z", ("u", 1)),
                "z/u" => ("z", ("u", -1)),
                "zv" => ("z", ("v", 1)),
                "z/v" => ("z", ("v", -1)),
                _ => return None,
            };
            let (other, power) = den;
            return Some(named_eta(num)?.mul(&named_eta(other)?.pow(power)));
        }
    };
    Some(EtaProduct::new(20, e).expect("level-20 divisors"))
}

fn scale_of(key: &str, prefix: char) -> Option<i64> {
    let rest = key.strip_prefix(prefix)?;
    let n: i64 = rest.parse().ok()?;
    (n >= 1).then_some(n)
}

/// Whether `key` names a catalog object.
pub fn is_key(key: &str) -> bool {
    KEYS.contains(&key) || scale_of(key, 'P').is_some() || scale_of(key, 'Q').is_some()
}

fn shifted_inverse(
    s: &QSeries,
    plus: Option<&QSeries>,
    constant: i64,
) -> Result<QSeries, FormsError> {
    let mut t = s.inv()?;
    if let Some(p) = plus {
        t = t.add(p);
    }
    Ok(t.add_constant(&Rational::from_integer(constant.into())))
}

fn build_raw(key: &str, order: i64) -> Result<QSeries, FormsError> {
    if let Some(n) = scale_of(key, 'P') {
        return Ok(eisenstein_p(n, order));
    }
    if let Some(n) = scale_of(key, 'Q') {
        return Ok(eisenstein_q(n, order));
    }
    if let Some(e) = named_eta(key) {
        return Ok(e.expand(order));
    }
    let eta = |k: &str| named_eta(k).expect("named eta quotient").expand(order);
    let theta4 = |t: Theta| theta_series(t, order).pow(4);
    Ok(match key {
        "theta2" => theta_series(Theta::Two, order),
        "theta3" => theta_series(Theta::Three, order),
        "theta4" => theta_series(Theta::Four, order),
        "Z" => lattice_theta((1, 0, 5), order)?,
        "boldZ" => lattice_theta((2, 2, 3), order)?,
        "X" => eta("z").div(&lattice_theta((1, 0, 5), order)?)?,
        "F" => theta4(Theta::Three)?,
        "T" => {
            let t3 = theta4(Theta::Three)?;
            let num = theta4(Theta::Two)?.mul(&theta4(Theta::Four)?);
            num.div(&t3.mul(&t3).scale_int(16))?
        }
        "t20+" => {
            let u = eta("u");
            shifted_inverse(&u, Some(&u), -2)?
        }
        "t20|2+" => {
            let w = eta("w");
            shifted_inverse(&w, Some(&w.neg()), 0)?
        }
        "t20+4" => shifted_inverse(&eta("v"), None, 2)?,
        "t20|2+5" => shifted_inverse(&eta("k"), None, 0)?,
        "t20|2+10" => shifted_inverse(&eta("w"), None, 0)?,
        "t20+20" => shifted_inverse(&eta("u"), None, -2)?,
        _ => return Err(FormsError::UnknownKey(key.to_string())),
    })
}

/// Catalog object `key` known exactly below `q^order`.
///
/// Quotients lose a few terms of precision, so components are built with a
/// margin that grows until the result reaches the requested order.
pub fn build(key: &str, order: i64) -> Result<QSeries, FormsError> {
    let target = order * DENOM;
    let mut margin = 2;
    loop {
        let s = build_raw(key, order + margin)?;
        if s.order24() >= target {
            return Ok(s.truncate(order));
        }
        margin *= 2;
        if margin > order.max(8) * 4 {
            return Err(FormsError::InsufficientOrder {
                needed: order,
                got: s.order().to_string(),
            });
        }
    }
}

/// `θ₂⁴`, `θ₃⁴`, `θ₄⁴` and `P₂` below `q^order`.
pub fn level_two_forms(order: i64) -> [QSeries; 4] {
    let t = |w| theta_series(w, order).pow(4).expect("positive power");
    [
        t(Theta::Two),
        t(Theta::Three),
        t(Theta::Four),
        eisenstein_p(2, order),
    ]
}

/// Whether a series has the normalized Hauptmodul shape
/// `q^{-1} + 0 + Σ_{n≥1} c_n q^n` with integer `c_n`.
pub fn is_normalized_hauptmodul(s: &QSeries) -> bool {
    s.is_integral()
        && s.valuation24() == Some(-DENOM)
        && s.coeff24(-DENOM)
            .is_some_and(|c| c == Rational::from_integer(1.into()))
        && s.coeff24(0).is_some_and(|c| c.is_zero())
        && s.has_integer_coefficients()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_resolve() {
        for key in KEYS {
            assert!(is_key(key));
            assert_eq!(build(key, 12).unwrap().order24(), 12 * DENOM, "{key}");
        }
        assert!(is_key("P20") && is_key("Q7"));
        assert!(!is_key("P0") && !is_key("nope"));
        assert_eq!(build("nope", 5), Err(FormsError::UnknownKey("nope".into())));
    }

    #[test]
    fn named_products_have_weight_two() {
        for key in ["z", "zu", "z/u", "zv", "z/v"] {
            assert_eq!(named_eta(key).unwrap().twice_weight(), 4, "{key}");
        }
    }
}
