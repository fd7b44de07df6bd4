//! The third-order equations for `Z(X)` and `F(T)`.
//!
//! Each equation is checked along two independent paths. On the power-series
//! path the solution is a series in the placeholder variable (`X` or `T`)
//! and derivatives act on it directly. On the q-series path both the
//! solution and the variable stay q-expansions and `d/dX` is realized as
//! `(q d/dq) / (q dX/dq)`.

use serde::Serialize;

use super::{poly_in, recurrence_coeffs, IdentityReport, OdeError, MARGIN};
use crate::forms;
use crate::series::{QSeries, SeriesError};

/// Outcome of one differential-equation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationReport {
    pub name: String,
    pub order: i64,
    pub checks: Vec<IdentityReport>,
    /// Whether the two printed forms of the operator coincide.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator_forms_agree: Option<bool>,
    pub pass: bool,
}

// Coefficients in ascending powers of the variable.
const ZX_D3: [i64; 6] = [0, 0, 1, -16, 64, -64];
const ZX_D2: [i64; 5] = [0, 3, -72, 384, -480];
const ZX_D1: [i64; 4] = [1, -56, 464, -784];
const ZX_D0: [i64; 3] = [-4, 80, -216];

const COMPACT_C0: [i64; 4] = [0, 4, -80, 216];
const COMPACT_C1: [i64; 4] = [0, 16, -208, 432];
const COMPACT_C2: [i64; 4] = [0, 24, -192, 288];
const COMPACT_C3: [i64; 4] = [-1, 16, -64, 64];

const FT_E3: [i64; 4] = [0, 0, 1, -64];
const FT_E2: [i64; 3] = [0, 3, -288];
const FT_E1: [i64; 2] = [1, -208];
const FT_E0: [i64; 1] = [-8];

/// `Σ_{n<order} a_n X^n` with `X` written as `q`.
pub fn z_series_in_x(order: i64) -> Result<QSeries, OdeError> {
    let a = recurrence_coeffs(order.max(0) as usize)?.integers()?;
    Ok(QSeries::from_integer_coeffs(0, a, order))
}

/// `F = θ₃⁴` as a series in `T = θ₂⁴θ₄⁴/(16θ₃⁸)`, with `T` written as `q`.
pub fn f_in_t(order: i64) -> Result<QSeries, OdeError> {
    let t = forms::build("T", order)?;
    let f = forms::build("F", order)?;
    Ok(f.compose(&t.revert()?)?)
}

fn exact_poly(c: &[i64]) -> QSeries {
    poly_in(&QSeries::q(), c)
}

/// Derivative with respect to `x`, both given as q-series.
fn d_dx(f: &QSeries, dx: &QSeries) -> Result<QSeries, SeriesError> {
    f.q_derivative().div(dx)
}

/// `Σ p_i(x) · f_i`.
fn combine(x: &QSeries, terms: &[(&[i64], &QSeries)]) -> QSeries {
    terms.iter().fold(
        QSeries::zero_with_order(crate::series::EXACT),
        |acc, (p, f)| acc.add(&poly_in(x, p).mul(f)),
    )
}

fn zx_operator(x: &QSeries, d: [&QSeries; 4]) -> QSeries {
    combine(
        x,
        &[
            (&ZX_D3, d[3]),
            (&ZX_D2, d[2]),
            (&ZX_D1, d[1]),
            (&ZX_D0, d[0]),
        ],
    )
}

fn compact_operator(x: &QSeries, t: [&QSeries; 4]) -> QSeries {
    combine(
        x,
        &[
            (&COMPACT_C0, t[0]),
            (&COMPACT_C1, t[1]),
            (&COMPACT_C2, t[2]),
            (&COMPACT_C3, t[3]),
        ],
    )
}

/// Whether the compact operator equals `−X` times the expanded one, after
/// rewriting `θ = X d/dX` through `θ² = X D + X² D²`,
/// `θ³ = X D + 3X² D² + X³ D³`.
pub fn operator_forms_agree() -> bool {
    let x = QSeries::q();
    let p = |c: &[i64]| exact_poly(c);
    let (c0, c1, c2, c3) = (
        p(&COMPACT_C0),
        p(&COMPACT_C1),
        p(&COMPACT_C2),
        p(&COMPACT_C3),
    );
    let x2 = x.mul(&x);
    let x3 = x2.mul(&x);
    let on_d = [
        c0,
        x.mul(&c1.add(&c2).add(&c3)),
        x2.mul(&c2.add(&c3.scale_int(3))),
        x3.mul(&c3),
    ];
    let expanded = [p(&ZX_D0), p(&ZX_D1), p(&ZX_D2), p(&ZX_D3)];
    on_d.iter()
        .zip(&expanded)
        .all(|(a, b)| *a == x.mul(b).neg())
}

/// Residuals of the `Z(X)` equation in expanded and compact form, along
/// both paths, to `X^order` (equivalently `q^order`).
pub fn ode_residual_z(order: i64) -> Result<EquationReport, OdeError> {
    if order < 5 {
        return Err(OdeError::OrderTooSmall { min: 5, got: order });
    }
    let work = order + MARGIN;
    let mut checks = Vec::new();

    let z = z_series_in_x(work)?;
    let x = QSeries::q();
    let (z1, z2) = (z.derivative(), z.derivative().derivative());
    let z3 = z2.derivative();
    checks.push(IdentityReport::from_residual(
        "ZX-equation/X-series",
        order,
        &zx_operator(&x, [&z, &z1, &z2, &z3]),
    ));
    let t1 = z.q_derivative();
    let t2 = t1.q_derivative();
    let t3 = t2.q_derivative();
    checks.push(IdentityReport::from_residual(
        "ZX-compact/X-series",
        order,
        &compact_operator(&x, [&z, &t1, &t2, &t3]),
    ));

    let xq = forms::build("X", work)?;
    let zq = forms::build("Z", work)?;
    let dx = xq.q_derivative();
    let z1 = d_dx(&zq, &dx)?;
    let z2 = d_dx(&z1, &dx)?;
    let z3 = d_dx(&z2, &dx)?;
    checks.push(IdentityReport::from_residual(
        "ZX-equation/q-series",
        order,
        &zx_operator(&xq, [&zq, &z1, &z2, &z3]),
    ));
    let theta = |f: &QSeries| d_dx(f, &dx).map(|d| xq.mul(&d));
    let t1 = theta(&zq)?;
    let t2 = theta(&t1)?;
    let t3 = theta(&t2)?;
    checks.push(IdentityReport::from_residual(
        "ZX-compact/q-series",
        order,
        &compact_operator(&xq, [&zq, &t1, &t2, &t3]),
    ));

    let agree = operator_forms_agree();
    let pass = agree && checks.iter().all(|c| c.pass);
    Ok(EquationReport {
        name: "ZX-equation".into(),
        order,
        checks,
        operator_forms_agree: Some(agree),
        pass,
    })
}

fn ft_operator(t: &QSeries, d: [&QSeries; 4]) -> QSeries {
    combine(
        t,
        &[
            (&FT_E3, d[3]),
            (&FT_E2, d[2]),
            (&FT_E1, d[1]),
            (&FT_E0, d[0]),
        ],
    )
}

/// Residual of the `F(T)` equation to `T^order`, along both paths.
pub fn ode_residual_f(order: i64) -> Result<EquationReport, OdeError> {
    if order < 5 {
        return Err(OdeError::OrderTooSmall { min: 5, got: order });
    }
    let work = order + MARGIN;
    let mut checks = Vec::new();

    let f = f_in_t(work)?;
    let (f1, f2) = (f.derivative(), f.derivative().derivative());
    let f3 = f2.derivative();
    checks.push(IdentityReport::from_residual(
        "FT-equation/T-series",
        order,
        &ft_operator(&QSeries::q(), [&f, &f1, &f2, &f3]),
    ));

    let tq = forms::build("T", work)?;
    let fq = forms::build("F", work)?;
    let dt = tq.q_derivative();
    let f1 = d_dx(&fq, &dt)?;
    let f2 = d_dx(&f1, &dt)?;
    let f3 = d_dx(&f2, &dt)?;
    checks.push(IdentityReport::from_residual(
        "FT-equation/q-series",
        order,
        &ft_operator(&tq, [&fq, &f1, &f2, &f3]),
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(EquationReport {
        name: "FT-equation".into(),
        order,
        checks,
        operator_forms_agree: None,
        pass,
    })
}
