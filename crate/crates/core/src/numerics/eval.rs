//! Numerical evaluation of q-series and eta products at a point `τ` of the
//! upper half plane, with an error certificate.

use astro_float::BigFloat;
use serde::Serialize;

use super::complex::{bigfloat_from_rational, log10_abs, with_consts, BigComplex, RM};
use super::NumericsError;
use crate::forms::EtaProduct;
use crate::series::{QSeries, DENOM};

/// Extra bits carried through every summation.
pub const GUARD_BITS: usize = 64;

/// A value with an absolute error bound.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: BigComplex,
    /// Bound on `|value − exact|`.
    pub error: BigFloat,
    /// Number of series terms summed.
    pub terms: usize,
}

impl Certified {
    pub fn error_log10(&self) -> f64 {
        log10_abs(&self.error)
    }
}

/// Summary of a [`Certified`] value for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedSummary {
    pub value: String,
    pub error_log10: f64,
    pub terms: usize,
}

impl From<&Certified> for CertifiedSummary {
    fn from(c: &Certified) -> Self {
        CertifiedSummary {
            value: c.value.to_decimal(40),
            error_log10: c.error_log10(),
            terms: c.terms,
        }
    }
}

/// `e^{2πiτ·k/24}`.
pub fn q_power24(tau: &BigComplex, k: i64, prec: usize) -> BigComplex {
    let g = prec + 32;
    let two_pi = with_consts(|cc| cc.pi(g, RM)).mul(&BigFloat::from_i32(2, g), g, RM);
    let scale =
        two_pi
            .mul(&BigFloat::from_i64(k, g), g, RM)
            .div(&BigFloat::from_i64(DENOM, g), g, RM);
    // 2πiτ·k/24 = (−Im τ + i Re τ)·scale
    let arg = BigComplex::new(
        tau.im().neg().mul(&scale, g, RM),
        tau.re().mul(&scale, g, RM),
        g,
    );
    arg.exp().with_precision(prec)
}

fn check_tau(tau: &BigComplex) -> Result<(), NumericsError> {
    if !tau.im().is_positive() {
        return Err(NumericsError::NotInUpperHalfPlane);
    }
    Ok(())
}

fn two_pow(e: i64, prec: usize) -> BigFloat {
    let two = BigFloat::from_i32(2, prec);
    let p = two.powi(e.unsigned_abs() as usize, prec, RM);
    if e < 0 {
        p.reciprocal(prec, RM)
    } else {
        p
    }
}

/// Bound on rounding a guarded value `v` to `prec` bits, per component.
fn output_rounding(v: &BigComplex, prec: usize, g: usize) -> BigFloat {
    v.abs().mul(&two_pow(2 - prec as i64, g), g, RM)
}

/// `Σ c_e q^{e/24}` at `τ`.
///
/// Terms are summed until the geometric tail bound `M |q|^n / (1 − |q|)`,
/// with `M` the largest stored coefficient, falls below `2^{−prec−64}`. For
/// an exact polynomial the tail is zero. Fails when the series is too short
/// for that, or `|q|` is too close to 1.
pub fn eval_qseries(
    s: &QSeries,
    tau: &BigComplex,
    prec: usize,
) -> Result<Certified, NumericsError> {
    check_tau(tau)?;
    let g = prec + GUARD_BITS;
    let q = q_power24(tau, DENOM, g);
    let qabs = q.abs();
    if qabs
        .cmp(&BigFloat::from_f64(0.999, g))
        .is_none_or(|c| c >= 0)
    {
        return Err(NumericsError::QTooLarge(format!(
            "{:.3}",
            10f64.powf(log10_abs(&qabs))
        )));
    }
    let threshold = two_pow(-(g as i64), g);
    let one = BigFloat::from_i32(1, g);
    let geo = one.sub(&qabs, g, RM).reciprocal(g, RM);
    let m = bigfloat_from_rational(&s.max_abs_coefficient(), g);
    let tail_bound = |n24: i64| -> BigFloat {
        // |q|^{n} for n = n24/24, via the 24th root of |q|.
        let qn = q_power24(
            &BigComplex::new(BigFloat::from_i32(0, g), tau.im().clone(), g),
            n24,
            g,
        )
        .abs();
        m.mul(&qn, g, RM).mul(&geo, g, RM)
    };

    let mut sum = BigComplex::zero(g);
    let mut terms = 0;
    let mut stopped = None;
    let step = s.step24();
    let qstep = q_power24(tau, step, g);
    let mut cur: Option<(i64, BigComplex)> = None;
    for (e, c) in s.terms() {
        let pw = match cur.take() {
            Some((last, p)) if (e - last) % step == 0 && (e - last) / step <= 64 => {
                let mut p = p;
                for _ in 0..(e - last) / step {
                    p = p.mul(&qstep);
                }
                p
            }
            _ => q_power24(tau, e, g),
        };
        sum = sum.add(&pw.mul(&BigComplex::from_rational(c, g)));
        terms += 1;
        cur = Some((e, pw));
        if !s.is_exact() && terms % 8 == 0 {
            let b = tail_bound(e + step);
            if b.cmp(&threshold).is_some_and(|c| c < 0) {
                stopped = Some(b);
                break;
            }
        }
    }
    let tail = match stopped {
        Some(b) => b,
        None if s.is_exact() => BigFloat::from_i32(0, g),
        None => {
            let b = tail_bound(s.order24());
            if b.cmp(&threshold).is_none_or(|c| c > 0) {
                let tail = format!("1e{:.1}", log10_abs(&b));
                return Err(NumericsError::SeriesTooShort {
                    order: s.order24() / DENOM,
                    tail,
                });
            }
            b
        }
    };
    // Each product and sum loses at most a few ulps at the guarded precision.
    let lost_bits = 8 + (terms.max(1) as f64).log2().ceil() as i64;
    let rounding = sum
        .abs()
        .add(&one, g, RM)
        .mul(&two_pow(lost_bits - g as i64, g), g, RM);
    let error = tail
        .add(&rounding, g, RM)
        .add(&output_rounding(&sum, prec, g), g, RM);
    Ok(Certified {
        value: sum.with_precision(prec),
        error,
        terms,
    })
}

/// `η(τ) = q^{1/24} Σ_k (−1)^k q^{k(3k−1)/2}` with a rigorous tail bound.
pub fn eta(tau: &BigComplex, prec: usize) -> Result<Certified, NumericsError> {
    check_tau(tau)?;
    let g = prec + GUARD_BITS;
    let q = q_power24(tau, DENOM, g);
    let qabs = q.abs();
    let one = BigFloat::from_i32(1, g);
    if qabs
        .cmp(&BigFloat::from_f64(0.999, g))
        .is_none_or(|c| c >= 0)
    {
        return Err(NumericsError::QTooLarge(format!(
            "{:.3}",
            10f64.powf(log10_abs(&qabs))
        )));
    }
    let threshold = two_pow(-(g as i64), g);
    let mut sum = BigComplex::one(g);
    let mut terms = 1;
    let mut k: u64 = 1;
    let tail = loop {
        // Pentagonal exponents k(3k∓1)/2 for ±k.
        let (e1, e2) = (k * (3 * k - 1) / 2, k * (3 * k + 1) / 2);
        let t = q.powi(e1).add(&q.powi(e2));
        sum = if k % 2 == 1 { sum.sub(&t) } else { sum.add(&t) };
        terms += 2;
        k += 1;
        // Remaining terms are bounded by 2|q|^{e}/(1 − |q|) with e the next
        // smallest exponent.
        let next = k * (3 * k - 1) / 2;
        let bound = qabs
            .powi(next as usize, g, RM)
            .mul(&BigFloat::from_i32(2, g), g, RM)
            .div(&one.sub(&qabs, g, RM), g, RM);
        if bound.cmp(&threshold).is_some_and(|c| c < 0) {
            break bound;
        }
    };
    let value = q_power24(tau, 1, g).mul(&sum);
    let rounding = two_pow(-(g as i64) + 16, g);
    let error = tail
        .add(&rounding, g, RM)
        .add(&output_rounding(&value, prec, g), g, RM);
    Ok(Certified {
        value: value.with_precision(prec),
        error,
        terms,
    })
}

/// `Π η(δτ)^{r_δ}` with a first-order error bound.
pub fn eval_eta_product(
    e: &EtaProduct,
    tau: &BigComplex,
    prec: usize,
) -> Result<Certified, NumericsError> {
    check_tau(tau)?;
    let g = prec + GUARD_BITS;
    let mut value = BigComplex::one(g);
    let mut rel = BigFloat::from_i32(0, g);
    let mut terms = 0;
    for (&delta, &r) in e.exponents() {
        let t = tau.mul(&BigComplex::from_i64(delta, g));
        let c = eta(&t, g)?;
        terms += c.terms;
        let mag = c.value.abs();
        // Relative error of η(δτ), amplified |r| times by the power.
        let rel_d = c
            .error
            .div(&mag, g, RM)
            .mul(&BigFloat::from_i64(r.abs(), g), g, RM);
        rel = rel.add(&rel_d, g, RM);
        let p = c.value.powi(r.unsigned_abs());
        value = if r < 0 { value.div(&p) } else { value.mul(&p) };
    }
    // First-order bound, doubled to cover the quadratic terms.
    let error = value
        .abs()
        .mul(&rel, g, RM)
        .mul(&BigFloat::from_i32(2, g), g, RM)
        .add(&two_pow(-(g as i64) + 16, g), g, RM)
        .add(&output_rounding(&value, prec, g), g, RM);
    Ok(Certified {
        value: value.with_precision(prec),
        error,
        terms,
    })
}
