//! Linear relations among q-series and coordinates in the weight-2 basis.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{eisenstein_p, named_eta, FormsError};
use crate::linalg::{primitive_integer_vector, RationalMatrix};
use crate::series::{QSeries, Rational, DENOM};

/// Minimum number of coefficients beyond the number of unknowns before a
/// relation search is trusted.
pub const RELATION_GUARD: i64 = 10;

/// Scales `ℓ` of the Eisenstein part `c_ℓ P(q^ℓ)` of the weight-2 basis.
pub const M20_SCALES: [i64; 6] = [1, 2, 4, 5, 10, 20];

pub const M20_BASIS_NAMES: [&str; 6] = [
    "2P2 - P1",
    "4P4 - P1",
    "5P5 - P1",
    "10P10 - P1",
    "20P20 - P1",
    "z",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    /// Truncation order the relations were tested to.
    pub order: i64,
    /// Number of coefficient equations used.
    pub equations: usize,
    /// Primitive integer vectors spanning the relation space; empty means
    /// the series are independent to `order`.
    #[serde(serialize_with = "crate::report::ser_bigint_rows")]
    pub relations: Vec<Vec<BigInt>>,
}

impl RelationReport {
    pub fn independent(&self) -> bool {
        self.relations.is_empty()
    }
}

/// Coefficient vectors `c` with `Σ c_i s_i = O(q^order)`.
pub fn find_relation(series: &[QSeries], order: i64) -> Result<RelationReport, FormsError> {
    let needed = series.len() as i64 + RELATION_GUARD;
    if order < needed {
        return Err(FormsError::InsufficientOrder {
            needed,
            got: order.to_string(),
        });
    }
    let order24 = order * DENOM;
    if let Some(s) = series.iter().find(|s| s.order24() < order24) {
        return Err(FormsError::InsufficientOrder {
            needed: order,
            got: s.order().to_string(),
        });
    }
    let exps: BTreeSet<i64> = series
        .iter()
        .flat_map(|s| {
            s.terms()
                .map(|(e, _)| e)
                .filter(|&e| e < order24)
                .collect::<Vec<_>>()
        })
        .collect();
    let mut m = RationalMatrix::new(series.len());
    for e in &exps {
        m.push_row(
            series
                .iter()
                .map(|s| s.coeff24(*e).expect("below order"))
                .collect(),
        );
    }
    let relations = m
        .nullspace_incremental()
        .iter()
        .map(|v| primitive_integer_vector(v))
        .collect();
    Ok(RelationReport {
        order,
        equations: exps.len(),
        relations,
    })
}

/// `Σ c_ℓ P(q^ℓ)` below `q^order`.
pub fn p_combination(coeffs: &[(i64, Rational)], order: i64) -> QSeries {
    coeffs.iter().fold(QSeries::zero(order), |acc, (l, c)| {
        acc.add(&eisenstein_p(*l, order).scale(c))
    })
}

/// The spanning set `{2P₂−P₁, 4P₄−P₁, 5P₅−P₁, 10P₁₀−P₁, 20P₂₀−P₁, z}`
/// of the weight-2 forms on `Γ₀(20)`.
pub fn m20_basis(order: i64) -> Vec<QSeries> {
    let one = Rational::one();
    let mut basis: Vec<QSeries> = M20_SCALES[1..]
        .iter()
        .map(|&l| {
            p_combination(
                &[(l, Rational::from_integer(l.into())), (1, -one.clone())],
                order,
            )
        })
        .collect();
    basis.push(named_eta("z").expect("z").expand(order));
    basis
}

/// Coordinates of a form in the weight-2 basis, with the equivalent
/// `Σ c_ℓ P_ℓ + c_z z` view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub order: i64,
    /// Coefficients on [`M20_BASIS_NAMES`].
    pub basis: Vec<Rational>,
    /// Coefficients on `P_ℓ` for `ℓ` in [`M20_SCALES`].
    pub p: Vec<Rational>,
    pub z: Rational,
}

impl Decomposition {
    /// The series `Σ c_ℓ P_ℓ + c_z z` rebuilt from the coordinates.
    pub fn rebuild(&self, order: i64) -> QSeries {
        let pairs: Vec<(i64, Rational)> = M20_SCALES
            .iter()
            .copied()
            .zip(self.p.iter().cloned())
            .collect();
        let z = named_eta("z").expect("z").expand(order);
        p_combination(&pairs, order).add(&z.scale(&self.z))
    }
}

/// Solves `f = Σ c_i b_i` over the weight-2 basis using coefficients below
/// `q^order`.
pub fn membership_decomposition(f: &QSeries, order: i64) -> Result<Decomposition, FormsError> {
    let mut cols = m20_basis(order);
    cols.push(f.truncate(order));
    let report = find_relation(&cols, order)?;
    let rels: Vec<&Vec<BigInt>> = report
        .relations
        .iter()
        .filter(|v| !v[6].is_zero())
        .collect();
    match rels.len() {
        0 => return Err(FormsError::NotInSpan),
        1 if report.relations.len() == 1 => {}
        _ => return Err(FormsError::NotUnique(report.relations.len())),
    }
    let v = rels[0];
    let last = Rational::from_integer(v[6].clone());
    let basis: Vec<Rational> = v[..6]
        .iter()
        .map(|x| -Rational::from_integer(x.clone()) / &last)
        .collect();
    let mut p = vec![Rational::zero(); 6];
    for (i, &l) in M20_SCALES[1..].iter().enumerate() {
        p[i + 1] = &basis[i] * Rational::from_integer(l.into());
        p[0] -= &basis[i];
    }
    Ok(Decomposition {
        order,
        z: basis[5].clone(),
        basis,
        p,
    })
}
