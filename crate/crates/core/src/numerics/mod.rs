//! Arbitrary-precision evaluation at CM points, binary quadratic forms,
//! singular values of `X` and the 1/π series.

mod complex;
mod eval;
mod expr;
mod pi;
mod quadform;
mod singular;
mod surd;
mod tables;

use thiserror::Error;

pub use complex::{
    bigfloat_from_bigint, bigfloat_from_rational, log10_abs, pow10, with_consts, BigComplex, RM,
};
pub use eval::{
    eta, eval_eta_product, eval_qseries, q_power24, Certified, CertifiedSummary, GUARD_BITS,
};
pub use expr::SurdExpr;
pub use pi::{
    inverse_pi, match_table3_to_forms, pi_report, pi_series_sum, reference_pi, term_ratio,
    terms_for_digits, MatchEntry, MatchReport, PiReport, PiSum, PI_TOLERANCE_LOG10,
};
pub use quadform::{class_group_enumerate, class_number, QuadForm};
pub use singular::{
    equation_on_file, tau_of, verify_singular_value, verify_singular_values, x_at, x_eta_quotient,
    SingularReport, SingularStatus, SubstituteCheck,
};
pub use surd::Surd;
pub use tables::{
    convergence_radius, PiSeriesRow, SingularRow, Table2Row, Tables, DATA_ENV, FORMAT_VERSION,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("form ({0}, {1}, {2}) is not positive definite")]
    NotPositiveDefinite(i64, i64, i64),
    #[error("invalid discriminant {0}: must be negative and 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("cannot parse surd: {0}")]
    SurdParse(String),
    #[error("values do not lie in one quadratic field: {0}")]
    NotQuadratic(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("tau must lie in the upper half plane")]
    NotInUpperHalfPlane,
    #[error("|q| = {0} is too close to 1")]
    QTooLarge(String),
    #[error("series known below q^{order} leaves a tail bound of {tail}")]
    SeriesTooShort { order: i64, tail: String },
    #[error("a partial sum needs at least one term")]
    NoTerms,
    #[error("data file line {line}: {msg}")]
    Data { line: usize, msg: String },
}
