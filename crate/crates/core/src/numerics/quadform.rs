//! Positive definite binary quadratic forms `ax² + bxy + cy²`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::NumericsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    /// A form with `a > 0` and negative discriminant.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, NumericsError> {
        let f = QuadForm { a, b, c };
        if a <= 0 || f.discriminant() >= 0 {
            return Err(NumericsError::NotPositiveDefinite(a, b, c));
        }
        Ok(f)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` whenever `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }

    /// The reduced form properly equivalent to `self`.
    pub fn reduce(&self) -> QuadForm {
        let d = self.discriminant();
        let QuadForm {
            mut a,
            mut b,
            mut c,
        } = *self;
        loop {
            // Bring b into (−a, a].
            if b <= -a || b > a {
                let k = Integer::div_floor(&(a - b), &(2 * a));
                b += 2 * a * k;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return QuadForm { a, b, c };
        }
    }

    /// Root `(−b + i√|d|)/(2a)` in the upper half plane, as
    /// `(real part, squared imaginary part)` over the rationals.
    pub fn root_parts(&self) -> ((i64, i64), (i64, i64)) {
        (
            (-self.b, 2 * self.a),
            (-self.discriminant(), 4 * self.a * self.a),
        )
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn check_discriminant(d: i64) -> Result<(), NumericsError> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(NumericsError::InvalidDiscriminant(d));
    }
    Ok(())
}

/// All primitive reduced forms of discriminant `d`, sorted.
pub fn class_group_enumerate(d: i64) -> Result<Vec<QuadForm>, NumericsError> {
    check_discriminant(d)?;
    let mut out = Vec::new();
    // Reduced forms satisfy 3b² ≤ |d|.
    let bmax = ((-d / 3) as f64).sqrt() as i64 + 1;
    for b in -bmax..=bmax {
        if (b * b - d) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        let mut a = b.abs().max(1);
        while a * a <= ac {
            if ac % a == 0 {
                let f = QuadForm { a, b, c: ac / a };
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            a += 1;
        }
    }
    out.sort();
    Ok(out)
}

/// Class number `h(d)` of primitive forms.
pub fn class_number(d: i64) -> Result<usize, NumericsError> {
    Ok(class_group_enumerate(d)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_idempotent_on_reduced_forms() {
        for f in class_group_enumerate(-6220).unwrap() {
            assert_eq!(f.reduce(), f);
        }
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(class_group_enumerate(-6).is_err());
        assert!(class_group_enumerate(4).is_err());
        assert!(QuadForm::new(1, 3, 1).is_err());
    }
}
