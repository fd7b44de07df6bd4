//! Property checks shared by the property tests and the acceptance harness.

#![allow(dead_code)]

use std::sync::OnceLock;

use astro_float::BigFloat;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use qmodular::forms::{build, find_relation};
use qmodular::linalg::RationalMatrix;
use qmodular::numerics::{eta, eval_qseries, BigComplex};
use qmodular::{QSeries, Rational};

pub const ORDER: i64 = 50;

fn rat((n, d): (i64, i64)) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `Σ c_k q^{start+k} + O(q^ORDER)` with small rational coefficients.
pub fn series() -> impl Strategy<Value = QSeries> {
    (0i64..3, prop::collection::vec((-9i64..=9, 1i64..=4), 1..ORDER as usize)).prop_map(
        |(start, cs)| {
            QSeries::from_terms(
                cs.into_iter().enumerate().map(|(k, c)| ((start + k as i64) * 24, rat(c))),
                ORDER * 24,
            )
        },
    )
}

/// Series with nonzero constant term.
pub fn unit_series() -> impl Strategy<Value = QSeries> {
    ((1i64..=9, 1i64..=4), prop::bool::ANY, series()).prop_map(|(c, neg, s)| {
        let c = if neg { -rat(c) } else { rat(c) };
        let rest = s.mul(&QSeries::q());
        rest.add(&QSeries::from_terms([(0, c)], ORDER * 24)).truncate(ORDER)
    })
}

/// `q + O(q²)` to `ORDER`.
pub fn tangent_series() -> impl Strategy<Value = QSeries> {
    series().prop_map(|s| {
        QSeries::q()
            .add(&s.mul(&QSeries::q()).mul(&QSeries::q()))
            .truncate(ORDER)
    })
}

/// Coefficients agree below the smaller known order. Two evaluation orders
/// may prove different truncation orders (`0·O(q⁵⁰)` is `O(q¹⁰⁰)`).
fn agree(x: &QSeries, y: &QSeries) -> Result<(), TestCaseError> {
    let o = x.order24().min(y.order24());
    prop_assert_eq!(x.truncate24(o), y.truncate24(o));
    Ok(())
}

pub fn ring_axioms(a: &QSeries, b: &QSeries, c: &QSeries) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(a.add(b), b.add(a));
    agree(&a.mul(b).mul(c), &a.mul(&b.mul(c)))?;
    agree(&a.add(b).add(c), &a.add(&b.add(c)))?;
    agree(&a.mul(&b.add(c)), &a.mul(b).add(&a.mul(c)))?;
    // Rationals stay reduced.
    for (_, x) in a.mul(b).terms() {
        prop_assert!(num_integer::Integer::gcd(x.numer(), x.denom()).is_one());
    }
    Ok(())
}

pub fn inverse_involution(s: &QSeries) -> Result<(), TestCaseError> {
    let i = s.inv().unwrap();
    prop_assert_eq!(s.mul(&i).truncate(ORDER), QSeries::one().truncate(ORDER));
    prop_assert_eq!(i.inv().unwrap(), s.clone());
    Ok(())
}

pub fn reversion_round_trip(s: &QSeries) -> Result<(), TestCaseError> {
    let r = s.revert().unwrap();
    let q = QSeries::q().truncate(ORDER);
    prop_assert_eq!(r.compose(s).unwrap().truncate(ORDER), q.clone());
    prop_assert_eq!(s.compose(&r).unwrap().truncate(ORDER), q);
    Ok(())
}

pub fn product_rule(a: &QSeries, b: &QSeries) -> Result<(), TestCaseError> {
    let lhs = a.mul(b).q_derivative();
    let rhs = a.q_derivative().mul(b).add(&a.mul(&b.q_derivative()));
    agree(&lhs, &rhs)
}

/// Rank by plain Gaussian elimination, independent of the library.
fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..8).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
    })
}

/// The nullspace has dimension `cols − rank` and every basis vector is
/// annihilated, with the product recomputed here.
pub fn nullspace_soundness(rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let m = RationalMatrix::from_int_rows(rows);
    let q: Vec<Vec<Rational>> =
        rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let ns = m.nullspace();
    prop_assert_eq!(ns.len(), m.ncols() - rank(&q));
    for v in &ns {
        for row in &q {
            let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
            prop_assert!(dot.is_zero());
        }
    }
    prop_assert_eq!(rank(&ns), ns.len());
    Ok(())
}

/// A planted combination `Σ c_i s_i` is recovered by the relation finder.
pub fn relation_soundness(parts: &[QSeries], coeffs: &[i64]) -> Result<(), TestCaseError> {
    let combo = parts
        .iter()
        .zip(coeffs)
        .fold(QSeries::zero(ORDER), |acc, (s, &c)| acc.add(&s.scale_int(c)));
    let mut all = parts.to_vec();
    all.push(combo);
    let rep = find_relation(&all, ORDER).unwrap();
    prop_assert!(!rep.independent());
    for v in &rep.relations {
        let s = all
            .iter()
            .zip(v)
            .fold(QSeries::zero(ORDER), |acc, (s, c)| acc.add(&s.scale(&Rational::from_integer(c.clone()))));
        prop_assert!(s.truncate(ORDER).is_zero());
    }
    Ok(())
}

pub fn x_series() -> &'static QSeries {
    static X: OnceLock<QSeries> = OnceLock::new();
    X.get_or_init(|| build("X", 200).unwrap())
}

pub fn tau_strategy() -> impl Strategy<Value = (f64, f64, usize)> {
    (-0.5f64..0.5, 0.35f64..1.5, 64usize..200)
}

/// Re-evaluating at `prec + 64` moves the value by less than the certificate.
pub fn certificate_soundness((re, im, prec): (f64, f64, usize)) -> Result<(), TestCaseError> {
    let tau = BigComplex::new(BigFloat::from_f64(re, 320), BigFloat::from_f64(im, 320), 320);
    let lo = eval_qseries(x_series(), &tau, prec).unwrap();
    let hi = eval_qseries(x_series(), &tau, prec + 64).unwrap();
    prop_assert!(lo.value.dist(&hi.value).cmp(&lo.error).is_some_and(|c| c <= 0));
    let e1 = eta(&tau, prec).unwrap();
    let e2 = eta(&tau, prec + 64).unwrap();
    prop_assert!(e1.value.dist(&e2.value).cmp(&e1.error).is_some_and(|c| c <= 0));
    Ok(())
}

