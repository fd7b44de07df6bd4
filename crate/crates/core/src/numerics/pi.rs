//! Partial sums of `1/π = A Σ a_n (n + B) C^n` against an independent π.

use astro_float::BigFloat;
use serde::Serialize;

use super::complex::{log10_abs, BigComplex, RM};
use super::singular::{tau_of, x_at};
use super::{NumericsError, PiSeriesRow, QuadForm, Tables};
use crate::ode::recurrence_coeffs;

/// `arctan(1/n)` by its alternating Taylor series.
fn atan_inv(n: i64, prec: usize) -> BigFloat {
    let x = BigFloat::from_i64(n, prec).reciprocal(prec, RM);
    let x2 = x.mul(&x, prec, RM);
    let threshold_log10 = -(prec as f64) * 2f64.log10();
    let mut power = x;
    let mut sum = BigFloat::from_i32(0, prec);
    let mut k: i64 = 0;
    while log10_abs(&power) > threshold_log10 {
        let term = power.div(&BigFloat::from_i64(2 * k + 1, prec), prec, RM);
        sum = if k % 2 == 0 {
            sum.add(&term, prec, RM)
        } else {
            sum.sub(&term, prec, RM)
        };
        power = power.mul(&x2, prec, RM);
        k += 1;
    }
    sum
}

/// `π = 16 arctan(1/5) − 4 arctan(1/239)`, computed with 64 guard bits.
pub fn reference_pi(prec: usize) -> BigFloat {
    let g = prec + 64;
    let a = atan_inv(5, g).mul(&BigFloat::from_i32(16, g), g, RM);
    let b = atan_inv(239, g).mul(&BigFloat::from_i32(4, g), g, RM);
    let mut pi = a.sub(&b, g, RM);
    pi.set_precision(prec, RM).expect("valid precision");
    pi
}

#[derive(Clone, Debug)]
pub struct PiSum {
    pub value: BigComplex,
    pub terms: usize,
    /// Heuristic `log₁₀` of the neglected tail.
    pub tail_log10: f64,
}

/// `A Σ_{n<terms} a_n (n + B) C^n`.
///
/// The tail estimate is `|last term| · ρ / (1 − ρ)` with `ρ = |C| · r` and
/// `r = 8/(3 − √5)` the limiting coefficient ratio.
pub fn pi_series_sum(row: &PiSeriesRow, terms: usize, prec: usize) -> Result<PiSum, NumericsError> {
    if terms == 0 {
        return Err(NumericsError::NoTerms);
    }
    let g = prec + 64;
    let a_n = recurrence_coeffs(terms)
        .and_then(|s| s.integers())
        .expect("recurrence is integral");
    let a = row.a.eval(g)?;
    let b = row.b.to_complex(g);
    let c = row.c.to_complex(g);
    let mut cn = BigComplex::one(g);
    let mut sum = BigComplex::zero(g);
    let mut last = BigComplex::zero(g);
    for (n, an) in a_n.iter().enumerate() {
        let t = BigComplex::from_bigint(an, g)
            .mul(&BigComplex::from_i64(n as i64, g).add(&b))
            .mul(&cn);
        sum = sum.add(&t);
        last = t;
        cn = cn.mul(&c);
    }
    let value = a.mul(&sum).with_precision(prec);
    let rho = term_ratio(row);
    let tail_log10 = log10_abs(&a.mul(&last).abs()) + (rho / (1.0 - rho)).log10();
    Ok(PiSum {
        value,
        terms,
        tail_log10,
    })
}

/// `ρ = |C| · 8/(3 − √5)`, the asymptotic ratio of consecutive terms.
pub fn term_ratio(row: &PiSeriesRow) -> f64 {
    let (cr, ci) = row.c.to_f64();
    cr.hypot(ci) * 8.0 / (3.0 - 5f64.sqrt())
}

/// Terms needed for `digits` correct digits, from the term ratio.
pub fn terms_for_digits(row: &PiSeriesRow, digits: u32) -> usize {
    let rho = term_ratio(row);
    ((f64::from(digits) + 5.0) / -rho.log10()).ceil() as usize + 20
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiReport {
    pub row: usize,
    pub a: String,
    pub b: String,
    pub c: String,
    pub terms: usize,
    pub precision: usize,
    pub value: String,
    /// `log₁₀ |sum − 1/π|`.
    pub error_log10: f64,
    /// `log₁₀ |Im sum|`.
    pub imag_log10: f64,
    /// Correct decimal digits, `⌊−log₁₀ |sum − 1/π|⌋`.
    pub digits: i64,
    pub tail_log10: f64,
}

/// Required accuracy for a row to count as verified.
pub const PI_TOLERANCE_LOG10: f64 = -40.0;

impl PiReport {
    pub fn pass(&self) -> bool {
        self.error_log10 < PI_TOLERANCE_LOG10 && self.imag_log10 < PI_TOLERANCE_LOG10
    }
}

pub fn pi_report(row: &PiSeriesRow, terms: usize, prec: usize) -> Result<PiReport, NumericsError> {
    let s = pi_series_sum(row, terms, prec)?;
    let inv_pi =
        BigComplex::from_real(reference_pi(prec + 64).reciprocal(prec + 64, RM), prec + 64);
    let error_log10 = log10_abs(&s.value.dist(&inv_pi));
    Ok(PiReport {
        row: row.row,
        a: row.a_text.clone(),
        b: row.b_text.clone(),
        c: row.c_text.clone(),
        terms,
        precision: prec,
        value: s.value.to_decimal(50),
        error_log10,
        imag_log10: log10_abs(s.value.im()),
        digits: (-error_log10).floor().min(prec as f64 * 0.30103) as i64,
        tail_log10: s.tail_log10,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchEntry {
    pub row: usize,
    pub c: String,
    /// Forms with `X(τ) = C`.
    pub forms: Vec<QuadForm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    pub rows: Vec<MatchEntry>,
    /// Series rows with no matching form.
    pub unmatched_rows: Vec<usize>,
    /// Forms with no series row.
    pub unmatched_forms: Vec<QuadForm>,
}

/// Pairs each series constant `C` with the forms whose `X(τ)` equals it
/// numerically (to `2^{−prec/2}`).
pub fn match_table3_to_forms(tables: &Tables, prec: usize) -> Result<MatchReport, NumericsError> {
    let tol = -(prec as f64) / 2.0 * 2f64.log10();
    let xs = tables
        .singular
        .iter()
        .map(|r| Ok((r.form, x_at(&tau_of(&r.form, prec), prec)?.value)))
        .collect::<Result<Vec<_>, NumericsError>>()?;
    let rows: Vec<MatchEntry> = tables
        .pi_series
        .iter()
        .map(|row| {
            let c = row.c.to_complex(prec);
            let forms = xs
                .iter()
                .filter(|(_, x)| log10_abs(&x.dist(&c)) < tol)
                .map(|(f, _)| *f)
                .collect();
            MatchEntry {
                row: row.row,
                c: row.c_text.clone(),
                forms,
            }
        })
        .collect();
    let unmatched_rows = rows
        .iter()
        .filter(|m| m.forms.is_empty())
        .map(|m| m.row)
        .collect();
    let unmatched_forms = xs
        .iter()
        .map(|(f, _)| *f)
        .filter(|f| !rows.iter().any(|m| m.forms.contains(f)))
        .collect();
    Ok(MatchReport {
        rows,
        unmatched_rows,
        unmatched_forms,
    })
}

/// `1/π` to `prec` bits from the reference value.
pub fn inverse_pi(prec: usize) -> BigFloat {
    reference_pi(prec + 64).reciprocal(prec, RM)
}
