//! Finite-order verification of the q-series identities and differential
//! equations of level 20.
//!
//! An identity is a residual `lhs − rhs` built from catalog forms; it passes
//! when the residual vanishes below the requested order *and* that order was
//! actually reached. A report records the order tested and, on failure, the
//! exponent of the first surviving term, so an under-resolved check is never
//! confused with a false identity.

mod coeffs;
mod equations;

use std::collections::HashMap;

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

pub use coeffs::{recurrence_coeffs, z_in_x, CoeffSequence};
pub use equations::{
    f_in_t, ode_residual_f, ode_residual_z, operator_forms_agree, z_series_in_x, EquationReport,
};

use crate::forms::{self, EtaProduct, FormsError};
use crate::series::{QSeries, Rational, SeriesError, DENOM, EXACT};

/// Extra q-order used when building components, covering the precision
/// lost to quotients and derivatives.
pub const MARGIN: i64 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OdeError {
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: i64, got: i64 },
    #[error("recurrence produced a non-integer at index {0}")]
    NonIntegral(usize),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Outcome of one finite-order check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    /// Requested order.
    pub order: i64,
    /// Order below which the residual is actually known.
    pub tested_order: i64,
    pub pass: bool,
    /// Exponent of the lowest nonzero residual term, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonzero_exponent: Option<String>,
    /// For radical identities checked in squared form: whether the leading
    /// coefficients of the unsquared sides agree in sign.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_check: Option<bool>,
}

impl IdentityReport {
    /// Judges a residual against the requested `order`.
    pub fn from_residual(name: &str, order: i64, residual: &QSeries) -> Self {
        let r = residual.truncate(order);
        let tested_order = if r.is_exact() {
            order
        } else {
            r.order24().div_euclid(DENOM)
        };
        let first_nonzero_exponent = r
            .valuation24()
            .map(|e| Rational::new(e.into(), DENOM.into()).to_string());
        IdentityReport {
            name: name.to_string(),
            order,
            tested_order,
            pass: r.is_zero() && tested_order >= order,
            first_nonzero_exponent,
            sign_check: None,
        }
    }
}

/// Catalog entries as `(key, statement)`, in report order.
pub const IDENTITIES: [(&str, &str); 32] = [
    ("jacobi-quartic", "θ3⁴ = θ4⁴ + θ2⁴"),
    ("deq-theta3", "q dθ3⁴/dq = (θ2⁸ − θ4⁸ + θ3⁴P2)/3"),
    ("deq-theta4", "q dθ4⁴/dq = (θ2⁸ − θ3⁸ + θ4⁴P2)/3"),
    ("deq-theta2", "q dθ2⁴/dq = (θ3⁸ − θ4⁸ + θ2⁴P2)/3"),
    ("deq-P2", "q dP2/dq = (2P2² − θ2⁸ − θ3⁸ − θ4⁸)/12"),
    ("ramanujan-P", "q dP/dq = (P² − Q)/12"),
    ("Q2-theta", "Q(q²) = (θ2⁸ + θ3⁸ + θ4⁸)/2"),
    ("dx-jacobi", "q dx/dq = θ3⁴ x(1 − x), x = θ2⁴/θ3⁴"),
    ("sign-flip-theta3", "θ3(−q) = θ4(q)"),
    ("sign-flip-theta2-8", "θ2⁸(−q) = θ2⁸(q)"),
    ("sign-flip-P2", "P2(−q) = P2(q)"),
    ("dT", "q dT/dq = θ2⁴θ4⁴/(16θ3⁴) · (1 − 2θ2⁴/θ3⁴)"),
    (
        "dF-dT",
        "dF/dT = 16θ3⁸(θ2⁸ − θ4⁸ + θ3⁴P2) / (3θ2⁴θ4⁴(θ3⁴ − 2θ2⁴))",
    ),
    (
        "zu-eisenstein",
        "zu = (P1 − 6P2 + 20P4 − 25P5 + 30P10 − 20P20)/72 + z/3",
    ),
    (
        "z/u-eisenstein",
        "z/u = (−5P1 + 6P2 − 4P4 + 5P5 − 30P10 + 100P20)/72 + z/3",
    ),
    ("zv-eisenstein", "zv = (−P1 + 4P4 + P5 − 4P20)/72 − z/3"),
    (
        "z/v-eisenstein",
        "z/v = (P1 − 4P4 − 25P5 + 100P20)/72 − 5z/3",
    ),
    ("uv-hauptmodul", "1/u + u = 1/v + 4 + 5v"),
    ("z-family-relation", "4z + 5zv + z/v − zu − z/u = 0"),
    ("one-plus-v", "1 + v = η10⁸ / (η1 η4 η5³ η20³)"),
    ("one-plus-5v", "1 + 5v = η2¹⁰ η5 η20 / (η1⁵ η4⁵ η10²)"),
    ("X-in-u", "X = u/(1 + u)²"),
    ("X-in-v", "X = v/((1 + v)(1 + 5v))"),
    ("Z-in-u", "Z = zu + z/u + 2z"),
    ("Z-in-u-product", "Z = z(1 + u)²/u"),
    ("Z-eta-quotient", "Z = η2¹⁰ η10¹⁰ / (η1⁴ η4⁴ η5⁴ η20⁴)"),
    ("Z-in-v", "Z = z(1 + v)(1 + 5v)/v"),
    ("F-in-v", "F = z(1 + 5v)²/v"),
    ("T-in-v", "T = v/((1 + v)(1 + 5v)⁵)"),
    (
        "dlogu-eisenstein",
        "q d(log u)/dq = P1/12 − P4/3 − 5P5/12 + 5P20/3",
    ),
    ("dlogu-zv", "q d(log u)/dq = z/v − 5zv"),
    (
        "P2-parameterization",
        "P(q²) = (1 − 2x)θ3⁴ + 3x(1 − x) dθ3⁴/dx",
    ),
];

/// Radical identities, checked squared.
pub const SQRT_IDENTITIES: [(&str, &str); 2] = [
    (
        "du-squared",
        "(q d(log u)/dq)² = (z/u)² (1 − 8u − 2u² − 8u³ + u⁴)",
    ),
    (
        "dX-squared",
        "(q d(log X)/dq)² = Z² (1 − 4X)(1 − 12X + 16X²)",
    ),
];

/// Basis decompositions, checked as identities.
pub const DECOMPOSITIONS: [(&str, &str); 2] = [
    (
        "Z-decomposition",
        "Z = −P1/18 + 2P4/9 − 5P5/18 + 10P20/9 + 8z/3",
    ),
    (
        "z-one-plus-v-decomposition",
        "z + zv = −P1/72 + P4/18 + P5/72 − P20/18 + 2z/3",
    ),
];

/// Every key accepted by [`verify_identity`], in report order.
pub fn all_keys() -> Vec<&'static str> {
    IDENTITIES
        .iter()
        .chain(DECOMPOSITIONS.iter())
        .chain(SQRT_IDENTITIES.iter())
        .map(|(k, _)| *k)
        .collect()
}

/// Memoized catalog forms at one working order.
pub(crate) struct Forms {
    order: i64,
    cache: HashMap<String, QSeries>,
}

impl Forms {
    pub(crate) fn new(order: i64) -> Self {
        Forms {
            order,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, key: &str) -> Result<QSeries, OdeError> {
        if let Some(s) = self.cache.get(key) {
            return Ok(s.clone());
        }
        let s = forms::build(key, self.order)?;
        self.cache.insert(key.to_string(), s.clone());
        Ok(s)
    }

    fn pow(&mut self, key: &str, k: i64) -> Result<QSeries, OdeError> {
        Ok(self.get(key)?.pow(k)?)
    }

    fn eta(&self, e: &[(i64, i64)]) -> QSeries {
        EtaProduct::new(20, e)
            .expect("level-20 divisors")
            .expand(self.order)
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `Σ c_i s^i` by Horner's rule.
pub(crate) fn poly_in(s: &QSeries, coeffs: &[i64]) -> QSeries {
    let mut acc = QSeries::zero_with_order(EXACT);
    for &c in coeffs.iter().rev() {
        acc = acc.mul(s).add_constant(&int(c));
    }
    acc
}

/// `q d(log s)/dq`.
fn log_derivative(s: &QSeries) -> Result<QSeries, SeriesError> {
    s.q_derivative().div(s)
}

fn p_comb(f: &mut Forms, num: &[(i64, i64)], den: i64) -> Result<QSeries, OdeError> {
    let mut acc = QSeries::zero(f.order);
    for &(l, c) in num {
        acc = acc.add(&f.get(&format!("P{l}"))?.scale(&frac(c, den)));
    }
    Ok(acc)
}

fn residual(name: &str, f: &mut Forms) -> Result<QSeries, OdeError> {
    let one = QSeries::one();
    Ok(match name {
        "jacobi-quartic" => f
            .pow("theta3", 4)?
            .sub(&f.pow("theta4", 4)?)
            .sub(&f.pow("theta2", 4)?),
        "deq-theta3" | "deq-theta4" | "deq-theta2" => {
            let (t2, t3, t4) = (
                f.pow("theta2", 4)?,
                f.pow("theta3", 4)?,
                f.pow("theta4", 4)?,
            );
            let p2 = f.get("P2")?;
            let (lhs, a, b, c) = match name {
                "deq-theta3" => (&t3, &t2, &t4, &t3),
                "deq-theta4" => (&t4, &t2, &t3, &t4),
                _ => (&t2, &t3, &t4, &t2),
            };
            let rhs = a.mul(a).sub(&b.mul(b)).add(&c.mul(&p2)).scale(&frac(1, 3));
            lhs.q_derivative().sub(&rhs)
        }
        "deq-P2" => {
            let (t2, t3, t4) = (
                f.pow("theta2", 8)?,
                f.pow("theta3", 8)?,
                f.pow("theta4", 8)?,
            );
            let p2 = f.get("P2")?;
            let rhs = p2
                .mul(&p2)
                .scale_int(2)
                .sub(&t2)
                .sub(&t3)
                .sub(&t4)
                .scale(&frac(1, 12));
            p2.q_derivative().sub(&rhs)
        }
        "ramanujan-P" => {
            let p = f.get("P1")?;
            let rhs = p.mul(&p).sub(&f.get("Q1")?).scale(&frac(1, 12));
            p.q_derivative().sub(&rhs)
        }
        "Q2-theta" => {
            let s = f
                .pow("theta2", 8)?
                .add(&f.pow("theta3", 8)?)
                .add(&f.pow("theta4", 8)?);
            f.get("Q2")?.sub(&s.scale(&frac(1, 2)))
        }
        "dx-jacobi" => {
            let t3 = f.pow("theta3", 4)?;
            let x = f.pow("theta2", 4)?.div(&t3)?;
            x.q_derivative().sub(&t3.mul(&x).mul(&one.sub(&x)))
        }
        "sign-flip-theta3" => f.get("theta3")?.negate_q()?.sub(&f.get("theta4")?),
        "sign-flip-theta2-8" => {
            let t = f.pow("theta2", 8)?;
            t.negate_q()?.sub(&t)
        }
        "sign-flip-P2" => {
            let p = f.get("P2")?;
            p.negate_q()?.sub(&p)
        }
        "dT" => {
            let (t2, t3, t4) = (
                f.pow("theta2", 4)?,
                f.pow("theta3", 4)?,
                f.pow("theta4", 4)?,
            );
            let ratio = one.sub(&t2.div(&t3)?.scale_int(2));
            let rhs = t2.mul(&t4).div(&t3.scale_int(16))?.mul(&ratio);
            f.get("T")?.q_derivative().sub(&rhs)
        }
        "dF-dT" => {
            let (t2, t3, t4) = (
                f.pow("theta2", 4)?,
                f.pow("theta3", 4)?,
                f.pow("theta4", 4)?,
            );
            let p2 = f.get("P2")?;
            let lhs = f
                .get("F")?
                .q_derivative()
                .div(&f.get("T")?.q_derivative())?;
            let num = t3
                .mul(&t3)
                .scale_int(16)
                .mul(&t2.mul(&t2).sub(&t4.mul(&t4)).add(&t3.mul(&p2)));
            let den = t2.mul(&t4).scale_int(3).mul(&t3.sub(&t2.scale_int(2)));
            lhs.sub(&num.div(&den)?)
        }
        "zu-eisenstein" => f.get("zu")?.sub(
            &p_comb(
                f,
                &[(1, 1), (2, -6), (4, 20), (5, -25), (10, 30), (20, -20)],
                72,
            )?
            .add(&f.get("z")?.scale(&frac(1, 3))),
        ),
        "z/u-eisenstein" => f.get("z/u")?.sub(
            &p_comb(
                f,
                &[(1, -5), (2, 6), (4, -4), (5, 5), (10, -30), (20, 100)],
                72,
            )?
            .add(&f.get("z")?.scale(&frac(1, 3))),
        ),
        "zv-eisenstein" => f.get("zv")?.sub(
            &p_comb(f, &[(1, -1), (4, 4), (5, 1), (20, -4)], 72)?
                .add(&f.get("z")?.scale(&frac(-1, 3))),
        ),
        "z/v-eisenstein" => f.get("z/v")?.sub(
            &p_comb(f, &[(1, 1), (4, -4), (5, -25), (20, 100)], 72)?
                .add(&f.get("z")?.scale(&frac(-5, 3))),
        ),
        "uv-hauptmodul" => {
            let (u, v) = (f.get("u")?, f.get("v")?);
            u.inv()?
                .add(&u)
                .sub(&v.inv()?)
                .sub(&v.scale_int(5))
                .add_constant(&int(-4))
        }
        "z-family-relation" => f
            .get("z")?
            .scale_int(4)
            .add(&f.get("zv")?.scale_int(5))
            .add(&f.get("z/v")?)
            .sub(&f.get("zu")?)
            .sub(&f.get("z/u")?),
        "one-plus-v" => {
            f.get("v")?
                .add(&one)
                .sub(&f.eta(&[(10, 8), (1, -1), (4, -1), (5, -3), (20, -3)]))
        }
        "one-plus-5v" => {
            let e = f.eta(&[(2, 10), (5, 1), (20, 1), (1, -5), (4, -5), (10, -2)]);
            f.get("v")?.scale_int(5).add(&one).sub(&e)
        }
        "X-in-u" => {
            let u = f.get("u")?;
            let d = u.add(&one);
            f.get("X")?.sub(&u.div(&d.mul(&d))?)
        }
        "X-in-v" => {
            let v = f.get("v")?;
            let d = v.add(&one).mul(&v.scale_int(5).add(&one));
            f.get("X")?.sub(&v.div(&d)?)
        }
        "Z-in-u" => {
            let sum = f
                .get("zu")?
                .add(&f.get("z/u")?)
                .add(&f.get("z")?.scale_int(2));
            f.get("Z")?.sub(&sum)
        }
        "Z-in-u-product" => {
            let (u, z) = (f.get("u")?, f.get("z")?);
            let d = u.add(&one);
            f.get("Z")?.sub(&z.mul(&d).mul(&d).div(&u)?)
        }
        "Z-eta-quotient" => {
            f.get("Z")?
                .sub(&f.eta(&[(2, 10), (10, 10), (1, -4), (4, -4), (5, -4), (20, -4)]))
        }
        "Z-in-v" => {
            let (v, z) = (f.get("v")?, f.get("z")?);
            let p = v.add(&one).mul(&v.scale_int(5).add(&one));
            f.get("Z")?.sub(&z.mul(&p).div(&v)?)
        }
        "F-in-v" => {
            let (v, z) = (f.get("v")?, f.get("z")?);
            let a = v.scale_int(5).add(&one);
            f.get("F")?.sub(&z.mul(&a).mul(&a).div(&v)?)
        }
        "T-in-v" => {
            let v = f.get("v")?;
            let d = v.add(&one).mul(&v.scale_int(5).add(&one).pow(5)?);
            f.get("T")?.sub(&v.div(&d)?)
        }
        "dlogu-eisenstein" => {
            let rhs = p_comb(f, &[(1, 1), (4, -4), (5, -5), (20, 20)], 12)?;
            log_derivative(&f.get("u")?)?.sub(&rhs)
        }
        "dlogu-zv" => {
            let rhs = f.get("z/v")?.sub(&f.get("zv")?.scale_int(5));
            log_derivative(&f.get("u")?)?.sub(&rhs)
        }
        "P2-parameterization" => p2_residual(f, false)?,
        "Z-decomposition" => f.get("Z")?.sub(
            &p_comb(f, &[(1, -1), (4, 4), (5, -5), (20, 20)], 18)?
                .add(&f.get("z")?.scale(&frac(8, 3))),
        ),
        "z-one-plus-v-decomposition" => f.get("z")?.add(&f.get("zv")?).sub(
            &p_comb(f, &[(1, -1), (4, 4), (5, 1), (20, -4)], 72)?
                .add(&f.get("z")?.scale(&frac(2, 3))),
        ),
        _ => return Err(OdeError::UnknownIdentity(name.to_string())),
    })
}

/// `P(q²) − [(1 − 2x)θ₃⁴ + c·x(1 − x)·dG/dx]` with `x = θ₂⁴/θ₃⁴` and
/// `d/dx = (q d/dq) / (q dx/dq)`. The corrected reading uses `c = 3`,
/// `G = θ₃⁴`; the literal one uses `c = 6`, `G = θ₃²`.
fn p2_residual(f: &mut Forms, literal: bool) -> Result<QSeries, OdeError> {
    let one = QSeries::one();
    let t3 = f.pow("theta3", 4)?;
    let x = f.pow("theta2", 4)?.div(&t3)?;
    let dx = x.q_derivative();
    let (c, g) = if literal {
        (6, f.pow("theta3", 2)?)
    } else {
        (3, t3.clone())
    };
    let dg_dx = g.q_derivative().div(&dx)?;
    let rhs = one
        .sub(&x.scale_int(2))
        .mul(&t3)
        .add(&x.mul(&one.sub(&x)).mul(&dg_dx).scale_int(c));
    Ok(f.get("P2")?.sub(&rhs))
}

/// Checks one catalog identity to `order`.
pub fn verify_identity(name: &str, order: i64) -> Result<IdentityReport, OdeError> {
    if order < 2 {
        return Err(OdeError::OrderTooSmall { min: 2, got: order });
    }
    if SQRT_IDENTITIES.iter().any(|(k, _)| *k == name) {
        return verify_sqrt_identity(name, order);
    }
    let mut f = Forms::new(order + MARGIN);
    let r = residual(name, &mut f)?;
    Ok(IdentityReport::from_residual(name, order, &r))
}

fn sign_of_lead(s: &QSeries) -> Option<bool> {
    s.leading_coefficient().map(|c| c.is_positive())
}

/// Checks `lhs = A·√B` as `lhs² = A²·B`, plus agreement of the leading
/// signs of `lhs` and `A` (the root is taken with `√B → 1` at `q = 0`).
pub fn verify_sqrt_identity(name: &str, order: i64) -> Result<IdentityReport, OdeError> {
    if order < 2 {
        return Err(OdeError::OrderTooSmall { min: 2, got: order });
    }
    let mut f = Forms::new(order + MARGIN);
    let (lhs, a, b) = match name {
        "du-squared" => {
            let u = f.get("u")?;
            (
                log_derivative(&u)?,
                f.get("z/u")?,
                poly_in(&u, &[1, -8, -2, -8, 1]),
            )
        }
        "dX-squared" => {
            let x = f.get("X")?;
            let b = poly_in(&x, &[1, -4]).mul(&poly_in(&x, &[1, -12, 16]));
            (log_derivative(&x)?, f.get("Z")?, b)
        }
        _ => return Err(OdeError::UnknownIdentity(name.to_string())),
    };
    let r = lhs.mul(&lhs).sub(&a.mul(&a).mul(&b));
    let b0_positive = b.coeff24(0).is_some_and(|c| c.is_positive());
    let signs =
        sign_of_lead(&lhs).is_some() && sign_of_lead(&lhs) == sign_of_lead(&a) && b0_positive;
    let mut rep = IdentityReport::from_residual(name, order, &r);
    rep.sign_check = Some(signs);
    rep.pass &= signs;
    Ok(rep)
}

/// The P(q²) parameterization: the corrected reading (`literal = false`)
/// vanishes identically; the literal printed reading leaves a residual.
pub fn verify_p2_parameterization(order: i64, literal: bool) -> Result<IdentityReport, OdeError> {
    if order < 4 {
        return Err(OdeError::OrderTooSmall { min: 4, got: order });
    }
    let mut f = Forms::new(order + MARGIN);
    let r = p2_residual(&mut f, literal)?;
    let name = if literal {
        "P2-parameterization-literal"
    } else {
        "P2-parameterization"
    };
    Ok(IdentityReport::from_residual(name, order, &r))
}

/// Whether `a_n` is positive for every `n`.
pub fn all_positive(seq: &CoeffSequence) -> bool {
    seq.a.iter().all(|x| x.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_is_an_error() {
        assert_eq!(
            verify_identity("nope", 10),
            Err(OdeError::UnknownIdentity("nope".into()))
        );
        assert!(matches!(
            verify_identity("jacobi-quartic", 1),
            Err(OdeError::OrderTooSmall { .. })
        ));
    }

    #[test]
    fn report_flags_unreached_order() {
        let r = QSeries::zero(5);
        let rep = IdentityReport::from_residual("t", 10, &r);
        assert!(!rep.pass);
        assert_eq!(rep.tested_order, 5);
        let rep = IdentityReport::from_residual("t", 4, &r);
        assert!(rep.pass);
    }

    #[test]
    fn poly_in_evaluates_by_horner() {
        let s = QSeries::q().truncate(10);
        assert_eq!(
            poly_in(&s, &[1, 2, 3]),
            QSeries::from_integer_coeffs(0, vec![1, 2, 3], 10)
        );
    }
}
