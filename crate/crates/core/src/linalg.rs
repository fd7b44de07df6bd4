//! Exact linear algebra over the rationals.
//!
//! Nullspaces are computed with Bareiss fraction-free elimination on an
//! integer copy of the matrix (each row scaled by the lcm of its
//! denominators, which leaves the nullspace unchanged). Pivots are taken in
//! the first column with a nonzero entry, from the smallest row index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::series::{lcm_of_denominators, Rational};

/// Dense matrix of exact rationals, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

/// Integer echelon form produced by Bareiss elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    cols: usize,
}

impl RationalMatrix {
    pub fn new(cols: usize) -> Self {
        RationalMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        RationalMatrix { cols, rows }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn push_row(&mut self, row: Vec<Rational>) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    fn echelon(&self, take_rows: usize) -> Echelon {
        let mut m: Vec<Vec<BigInt>> = self.rows[..take_rows]
            .iter()
            .map(|row| {
                let l = lcm_of_denominators(row);
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let nrows = m.len();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let (top, rest) = m.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let piv = &pivot_row[c];
            for row in rest.iter_mut() {
                let factor = std::mem::take(&mut row[c]);
                for j in c + 1..self.cols {
                    let v = piv * &row[j] - &factor * &pivot_row[j];
                    let (q, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
            }
            prev = m[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        Echelon {
            rows: m,
            pivots,
            cols: self.cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon(self.rows.len()).pivots.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, each with a 1
    /// in its free column and 0 in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        self.echelon(self.rows.len()).nullspace()
    }

    /// Same space as [`nullspace`](Self::nullspace), computed from a prefix
    /// of the rows that is doubled until every candidate vector also
    /// annihilates the remaining rows. Tall matrices with a small nullspace
    /// only pay for the rows they need.
    pub fn nullspace_incremental(&self) -> Vec<Vec<Rational>> {
        let n = self.rows.len();
        let mut take = n.min(2 * self.cols + 8);
        loop {
            let basis = self.echelon(take).nullspace();
            if take == n || basis.iter().all(|v| self.annihilates(v)) {
                return basis;
            }
            take = n.min(2 * take);
        }
    }

    /// Whether `M v = 0`.
    pub fn annihilates(&self, v: &[Rational]) -> bool {
        self.rows.iter().all(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                .is_zero()
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

impl Echelon {
    fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (i, &pc) in self.pivots.iter().enumerate().rev() {
                    let row = &self.rows[i];
                    let s = (pc + 1..self.cols)
                        .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                        .fold(Rational::zero(), |acc, j| {
                            acc + Rational::from_integer(row[j].clone()) * &x[j]
                        });
                    x[pc] = -s / Rational::from_integer(row[pc].clone());
                }
                x
            })
            .collect()
    }
}

/// Scales `v` to a primitive integer vector whose first nonzero entry is
/// positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}
