//! Modular equations for the Hauptmodul `X = z/Z` and the Atkin-Lehner
//! witnesses that place singular values on them.
//!
//! Equations are derived by undetermined coefficients: the monomials
//! `X(q)^i X(q^n)^j` are expanded and an exact nullspace is taken, so no
//! roots of unity or fractional powers of `q` appear.

mod atkin;
mod bivar;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

pub use atkin::{
    al_membership, check_table2_row, index_conditions, solve_witness, witness_identity, MoebiusMap,
    RowStatus, SearchTier, Table2Report, ENTRY_BOUND, LEVEL, SOLVER_BOUND,
};
pub use bivar::{poly_mul, BivarPoly};

use crate::forms::{self, find_relation, FormsError, RELATION_GUARD};
use crate::numerics::{Surd, Tables};
use crate::ode::{IdentityReport, MARGIN};
use crate::series::{QSeries, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModeqError {
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: i64, got: i64 },
    #[error("degree {0} shares a factor with the level 20")]
    NotCoprime(i64),
    #[error("no relation at bidegree {0}")]
    NoRelation(u32),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

/// `Ψ₃(X, Y)`, exponents `(i, j, c)` for `c X^i Y^j`.
pub const PSI3_TERMS: [(u32, u32, i64); 11] = [
    (4, 0, 1),
    (3, 3, -256),
    (3, 2, 192),
    (3, 1, -30),
    (2, 3, 192),
    (2, 2, -93),
    (2, 1, 12),
    (1, 3, -30),
    (1, 2, 12),
    (1, 1, -1),
    (0, 4, 1),
];

pub fn psi3() -> BivarPoly {
    BivarPoly::from_int_terms(&PSI3_TERMS)
}

/// `X(q)` and `X(q^n)` known below `q^order`.
fn x_pair(n: i64, order: i64) -> Result<(QSeries, QSeries), ModeqError> {
    let x = forms::build("X", order + MARGIN)?;
    let y = x.truncate((order + n - 1) / n + 1).dilate(n);
    Ok((x, y))
}

fn check_order(order: i64, min: i64) -> Result<(), ModeqError> {
    if order < min {
        return Err(ModeqError::OrderTooSmall { min, got: order });
    }
    Ok(())
}

/// `P(X(q), X(q^n))` judged to `order`.
pub fn verify_modeq(
    name: &str,
    p: &BivarPoly,
    n: i64,
    order: i64,
) -> Result<IdentityReport, ModeqError> {
    let (x, y) = x_pair(n, order)?;
    Ok(IdentityReport::from_residual(
        name,
        order,
        &p.eval_series(&x, &y),
    ))
}

/// `Ψ₃(X(q), X(q³))`, and with `swapped` the transposed substitution
/// `Ψ₃(X(q³), X(q))`.
pub fn psi3_verify(order: i64, swapped: bool) -> Result<IdentityReport, ModeqError> {
    check_order(order, 50)?;
    let (x, y) = x_pair(3, order)?;
    let (name, r) = if swapped {
        ("psi3-swapped", psi3().eval_series(&y, &x))
    } else {
        ("psi3", psi3().eval_series(&x, &y))
    };
    Ok(IdentityReport::from_residual(name, order, &r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedEquation {
    pub n: i64,
    pub bidegree: u32,
    pub order: i64,
    /// Canonical representatives of a nullspace basis.
    pub relations: Vec<BivarPoly>,
}

/// Relations `Σ c_ij X(q)^i X(q^n)^j = O(q^order)` with `i, j ≤ bidegree`.
pub fn derive_modeq(n: i64, bidegree: u32, order: i64) -> Result<DerivedEquation, ModeqError> {
    if n < 1 || n.gcd(&LEVEL) != 1 {
        return Err(ModeqError::NotCoprime(n));
    }
    let b = bidegree as i64;
    check_order(order, (b + 1) * (b + 1) + RELATION_GUARD + 1)?;
    let (x, y) = x_pair(n, order)?;
    let pow = |s: &QSeries| {
        let mut v = vec![QSeries::one()];
        for k in 1..=bidegree as usize {
            v.push(v[k - 1].mul(s));
        }
        v
    };
    let (xp, yp) = (pow(&x), pow(&y));
    let mut monomials = Vec::new();
    let mut cols = Vec::new();
    for i in 0..=bidegree {
        for j in 0..=bidegree {
            monomials.push((i, j));
            cols.push(xp[i as usize].mul(&yp[j as usize]).truncate(order));
        }
    }
    let report = find_relation(&cols, order)?;
    if report.independent() {
        return Err(ModeqError::NoRelation(bidegree));
    }
    let relations = report
        .relations
        .iter()
        .map(|v| {
            BivarPoly::from_terms(
                monomials
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&k, c)| (k, Rational::from_integer(c.clone()))),
            )
            .canonical()
        })
        .collect();
    Ok(DerivedEquation {
        n,
        bidegree,
        order,
        relations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalReport {
    /// Expanded `−X²(X−1)(16X−1)(16X²−7X+1)` equals `Ψ₃(X, X)`.
    pub factorization_matches: bool,
    /// Exact roots of `Ψ₃(X, X)` other than 0.
    pub roots: Vec<String>,
    /// Every listed root annihilates `Ψ₃(X, X)` exactly.
    pub roots_verified: bool,
}

fn ints(c: &[i64]) -> Vec<Rational> {
    c.iter()
        .map(|&x| Rational::from_integer(x.into()))
        .collect()
}

/// The factorization of `Ψ₃(X, X)` and its roots.
pub fn diagonal_factor() -> DiagonalReport {
    let factors = [
        ints(&[0, 0, -1]),
        ints(&[-1, 1]),
        ints(&[-1, 16]),
        ints(&[1, -7, 16]),
    ];
    let product = factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| poly_mul(&acc, f));
    let diag = psi3().diagonal();
    // Roots of 16X² − 7X + 1 by the quadratic formula: (7 ± √−15)/32.
    let quad = [
        Rational::from_integer(7.into()),
        Rational::new(1.into(), 32.into()),
    ];
    let roots = vec![
        Surd::from_int(1),
        Surd::rational(Rational::new(1.into(), 16.into())),
        Surd::new(quad[0].clone() * &quad[1], quad[1].clone(), -15),
        Surd::new(quad[0].clone() * &quad[1], -quad[1].clone(), -15),
    ];
    let roots_verified = roots
        .iter()
        .all(|r| r.eval_poly(&diag).is_ok_and(|v| v.is_zero()));
    DiagonalReport {
        factorization_matches: product == diag,
        roots: roots.iter().map(ToString::to_string).collect(),
        roots_verified,
    }
}

/// All witness rows of the loaded tables, in table order.
pub fn verify_table2(tables: &Tables) -> Vec<Table2Report> {
    tables.witnesses.iter().map(check_table2_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi3_is_symmetric_and_integral() {
        let p = psi3();
        assert!(p.is_symmetric() && p.is_integral());
        assert_eq!(p.canonical(), p);
        assert_eq!(p.bidegree(), (4, 4));
    }

    #[test]
    fn order_and_degree_preconditions() {
        assert!(matches!(
            psi3_verify(49, false),
            Err(ModeqError::OrderTooSmall { .. })
        ));
        assert_eq!(derive_modeq(2, 2, 100), Err(ModeqError::NotCoprime(2)));
        assert!(matches!(
            derive_modeq(3, 4, 30),
            Err(ModeqError::OrderTooSmall { .. })
        ));
    }
}
