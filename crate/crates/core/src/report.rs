//! Serializable report records shared by the library and the command line.

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, Serializer};

use crate::series::Rational;

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "qmodular-report/1";

/// Big integers serialize as decimal strings so no JSON reader truncates them.
pub fn ser_bigint_rows<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for row in rows {
        let strs: Vec<String> = row.iter().map(BigInt::to_string).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

pub fn ser_rationals<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}
