//! The shipped data file of singular values, Atkin-Lehner witnesses and
//! 1/π series constants.
//!
//! The file is compiled in; setting `QMODULAR_DATA` to a path loads that
//! file instead.

use std::path::Path;

use serde::Serialize;

use super::{NumericsError, QuadForm, Surd, SurdExpr};

/// Environment variable naming an alternative data file.
pub const DATA_ENV: &str = "QMODULAR_DATA";

pub const FORMAT_VERSION: u32 = 1;

const BUILTIN: &str = include_str!("../../data/tables.txt");

/// Radius of convergence of `Σ a_n X^n`, `(3 − √5)/8`.
pub fn convergence_radius() -> f64 {
    (3.0 - 5f64.sqrt()) / 8.0
}

/// A singular value `X(τ)` at a CM point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularRow {
    pub form: QuadForm,
    pub discriminant: i64,
    /// The value as written in the data file.
    pub value_text: String,
    #[serde(skip)]
    pub value: SurdExpr,
    /// Set when the printed value is known to be wrong.
    pub anomaly: bool,
}

/// A degree-`n` witness `(ατ + β)/δ = γτ` with `γ ∈ W_e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table2Row {
    pub form: QuadForm,
    pub n: i64,
    pub e: i64,
    /// `(α, β, δ)`.
    pub abd: (i64, i64, i64),
    /// `γ = (p, q; r, s)` as printed.
    pub gamma: [i64; 4],
    pub anomaly: bool,
}

/// Constants of `1/π = A Σ a_n (n + B) C^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiSeriesRow {
    /// Position in the table, from 1.
    pub row: usize,
    pub a_text: String,
    pub b_text: String,
    pub c_text: String,
    #[serde(skip)]
    pub a: SurdExpr,
    #[serde(skip)]
    pub b: Surd,
    #[serde(skip)]
    pub c: Surd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub version: u32,
    pub singular: Vec<SingularRow>,
    pub witnesses: Vec<Table2Row>,
    pub pi_series: Vec<PiSeriesRow>,
}

fn data_err(line: usize, msg: impl Into<String>) -> NumericsError {
    NumericsError::Data {
        line,
        msg: msg.into(),
    }
}

fn ints<const N: usize>(field: &str, line: usize) -> Result<[i64; N], NumericsError> {
    let v: Vec<i64> = field
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| data_err(line, format!("`{field}`: {e}")))?;
    v.try_into()
        .map_err(|_| data_err(line, format!("`{field}`: expected {N} integers")))
}

fn int(field: &str, line: usize) -> Result<i64, NumericsError> {
    Ok(ints::<1>(field, line)?[0])
}

fn form(field: &str, line: usize) -> Result<QuadForm, NumericsError> {
    let [a, b, c] = ints::<3>(field, line)?;
    QuadForm::new(a, b, c).map_err(|e| data_err(line, e.to_string()))
}

fn expr(field: &str, line: usize) -> Result<SurdExpr, NumericsError> {
    field
        .parse()
        .map_err(|e: NumericsError| data_err(line, e.to_string()))
}

fn surd(field: &str, line: usize) -> Result<Surd, NumericsError> {
    expr(field, line)?
        .exact()
        .map_err(|e| data_err(line, e.to_string()))
}

/// Splits off a trailing `anomaly` marker.
fn flagged<'a>(
    fields: &'a [&'a str],
    n: usize,
    line: usize,
) -> Result<(&'a [&'a str], bool), NumericsError> {
    match fields.len() {
        k if k == n => Ok((fields, false)),
        k if k == n + 1 && fields[n] == "anomaly" => Ok((&fields[..n], true)),
        k => Err(data_err(line, format!("expected {n} fields, got {k}"))),
    }
}

impl Tables {
    /// Series row `k`, counting from 1.
    pub fn pi_row(&self, k: usize) -> Option<&PiSeriesRow> {
        k.checked_sub(1).and_then(|i| self.pi_series.get(i))
    }

    pub fn parse(text: &str) -> Result<Tables, NumericsError> {
        let mut version = None;
        let mut t = Tables {
            version: 0,
            singular: vec![],
            witnesses: vec![],
            pi_series: vec![],
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(v) = body.strip_prefix("format") {
                let v: u32 = v
                    .trim()
                    .parse()
                    .map_err(|_| data_err(line, "bad format version"))?;
                if v != FORMAT_VERSION {
                    return Err(data_err(line, format!("unsupported format {v}")));
                }
                version = Some(v);
                continue;
            }
            let fields: Vec<&str> = body.split('|').map(str::trim).collect();
            let (tag, rest) = fields.split_first().expect("split yields one field");
            match *tag {
                "t1" => {
                    let (f, anomaly) = flagged(rest, 3, line)?;
                    let row = SingularRow {
                        form: form(f[0], line)?,
                        discriminant: int(f[1], line)?,
                        value_text: f[2].to_string(),
                        value: expr(f[2], line)?,
                        anomaly,
                    };
                    if row.form.discriminant() != row.discriminant {
                        return Err(data_err(
                            line,
                            format!(
                                "form {} has discriminant {}",
                                row.form,
                                row.form.discriminant()
                            ),
                        ));
                    }
                    t.singular.push(row);
                }
                "t2" => {
                    let (f, anomaly) = flagged(rest, 5, line)?;
                    let [alpha, beta, delta] = ints::<3>(f[3], line)?;
                    t.witnesses.push(Table2Row {
                        form: form(f[0], line)?,
                        n: int(f[1], line)?,
                        e: int(f[2], line)?,
                        abd: (alpha, beta, delta),
                        gamma: ints::<4>(f[4], line)?,
                        anomaly,
                    });
                }
                "t3" => {
                    let (f, _) = flagged(rest, 3, line)?;
                    let row = PiSeriesRow {
                        row: t.pi_series.len() + 1,
                        a_text: f[0].to_string(),
                        b_text: f[1].to_string(),
                        c_text: f[2].to_string(),
                        a: expr(f[0], line)?,
                        b: surd(f[1], line)?,
                        c: surd(f[2], line)?,
                    };
                    let (re, im) = row.c.to_f64();
                    if re.hypot(im) >= convergence_radius() {
                        return Err(data_err(
                            line,
                            format!(
                                "|C| = {} is outside the radius of convergence",
                                re.hypot(im)
                            ),
                        ));
                    }
                    t.pi_series.push(row);
                }
                other => return Err(data_err(line, format!("unknown record `{other}`"))),
            }
        }
        t.version = version.ok_or_else(|| data_err(0, "missing format line"))?;
        Ok(t)
    }

    /// The compiled-in tables.
    pub fn builtin() -> Tables {
        Tables::parse(BUILTIN).expect("shipped data file parses")
    }

    pub fn from_path(path: &Path) -> Result<Tables, NumericsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| data_err(0, format!("{}: {e}", path.display())))?;
        Tables::parse(&text)
    }

    /// `$QMODULAR_DATA` if set, else the compiled-in tables.
    pub fn load() -> Result<Tables, NumericsError> {
        match std::env::var_os(DATA_ENV) {
            Some(p) => Tables::from_path(Path::new(&p)),
            None => Ok(Tables::builtin()),
        }
    }
}
