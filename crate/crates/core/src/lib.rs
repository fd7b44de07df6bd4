//! Exact q-series engine and verifier for level-20 modular forms.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: truncated series in `q^{1/24}` with exact rational coefficients.
//! - [`linalg`]: fraction-free nullspaces over the rationals.
//! - [`forms`]: eta products, theta functions, Eisenstein series, the level-20
//!   Hauptmoduln and the weight-2 basis, plus a linear-relation finder.
//! - [`ode`]: the identity catalog, the differential equations for `Z(X)` and
//!   `F(T)`, and the coefficient sequence `a_n`.
//! - [`modeq`]: modular equations for `X`, Atkin-Lehner matrices and the
//!   table of degree-`n` witnesses.
//! - [`numerics`]: arbitrary-precision evaluation at CM points, binary
//!   quadratic forms, singular values and 1/π series.

pub mod forms;
pub mod linalg;
pub mod modeq;
pub mod numerics;
pub mod ode;
pub mod report;
pub mod series;

pub use series::{QSeries, Rational, SeriesError};
