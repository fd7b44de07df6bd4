//! Complex numbers over `astro_float::BigFloat` with an explicit precision.
//!
//! Every value carries its precision in bits. A binary operation returns a
//! value at the smaller of the two operand precisions, so a result never
//! claims more bits than its least precise input.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::series::Rational;

pub const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Runs `f` with this thread's constant cache.
pub fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Exact conversion of an integer, rounded once to `prec` bits.
pub fn bigfloat_from_bigint(n: &BigInt, prec: usize) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_i32(0, prec);
    }
    let words = n.magnitude().to_u64_digits();
    let sign = if n.is_negative() {
        Sign::Neg
    } else {
        Sign::Pos
    };
    let mut x = BigFloat::from_words(&words, sign, (64 * words.len()) as i32);
    x.set_precision(prec, RM).expect("valid precision");
    x
}

/// `p / q` rounded to `prec` bits.
pub fn bigfloat_from_rational(r: &Rational, prec: usize) -> BigFloat {
    let guard = prec + 64;
    let n = bigfloat_from_bigint(r.numer(), guard);
    let d = bigfloat_from_bigint(r.denom(), guard);
    n.div(&d, prec, RM)
}

/// `log₁₀ |x|`, accurate to about 1e−12 relative; `-inf` for zero.
pub fn log10_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let s = with_consts(|cc| x.abs().format(Radix::Dec, RM, cc)).expect("finite value");
    let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
    let m: f64 = mant
        .chars()
        .take(17)
        .collect::<String>()
        .parse()
        .unwrap_or(1.0);
    m.log10() + exp.parse::<f64>().unwrap_or(0.0)
}

/// `10^k` at `prec` bits.
pub fn pow10(k: i32, prec: usize) -> BigFloat {
    let ten = BigFloat::from_i32(10, prec + 32);
    let p = ten.powi(k.unsigned_abs() as usize, prec + 32, RM);
    if k < 0 {
        p.reciprocal(prec, RM)
    } else {
        p
    }
}

#[derive(Clone, Debug)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        BigComplex { re, im, prec }
    }

    pub fn zero(prec: usize) -> Self {
        BigComplex::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        BigComplex::from_i64(1, prec)
    }

    pub fn i(prec: usize) -> Self {
        BigComplex::new(
            BigFloat::from_i32(0, prec),
            BigFloat::from_i32(1, prec),
            prec,
        )
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        BigComplex::from_real(BigFloat::from_i64(n, prec), prec)
    }

    pub fn from_real(re: BigFloat, prec: usize) -> Self {
        BigComplex::new(re, BigFloat::from_i32(0, prec), prec)
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        BigComplex::from_real(bigfloat_from_rational(r, prec), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        BigComplex::from_real(bigfloat_from_bigint(n, prec), prec)
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Rounds (or pads) to `prec` bits.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        re.set_precision(prec, RM).expect("valid precision");
        im.set_precision(prec, RM).expect("valid precision");
        BigComplex { re, im, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        BigComplex::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        BigComplex::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }

    pub fn neg(&self) -> Self {
        BigComplex::new(self.re.neg(), self.im.neg(), self.prec)
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), self.im.neg(), self.prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        let g = p + 16;
        let re = self
            .re
            .mul(&o.re, g, RM)
            .sub(&self.im.mul(&o.im, g, RM), p, RM);
        let im = self
            .re
            .mul(&o.im, g, RM)
            .add(&self.im.mul(&o.re, g, RM), p, RM);
        BigComplex::new(re, im, p)
    }

    pub fn mul_real(&self, x: &BigFloat) -> Self {
        BigComplex::new(
            self.re.mul(x, self.prec, RM),
            self.im.mul(x, self.prec, RM),
            self.prec,
        )
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let g = self.prec + 16;
        self.re
            .mul(&self.re, g, RM)
            .add(&self.im.mul(&self.im, g, RM), self.prec, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    pub fn inv(&self) -> Self {
        let g = self.prec + 16;
        let n = self.norm_sqr();
        BigComplex::new(self.re.div(&n, g, RM), self.im.neg().div(&n, g, RM), g)
            .with_precision(self.prec)
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.prec.min(o.prec);
        self.mul(&o.inv()).with_precision(p)
    }

    pub fn powi(&self, n: u64) -> Self {
        let mut acc = BigComplex::one(self.prec);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Principal square root, cut along the negative real axis.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        let g = p + 16;
        if self.is_zero() {
            return self.clone();
        }
        let r = self.norm_sqr().sqrt(g, RM);
        let two = BigFloat::from_i32(2, g);
        if !self.re.is_negative() {
            let t = r.add(&self.re, g, RM).div(&two, g, RM).sqrt(g, RM);
            let im = self.im.div(&t.mul(&two, g, RM), g, RM);
            BigComplex::new(t, im, g).with_precision(p)
        } else {
            let t = r.sub(&self.re, g, RM).div(&two, g, RM).sqrt(g, RM);
            let re = self.im.abs().div(&t.mul(&two, g, RM), g, RM);
            let im = if self.im.is_negative() { t.neg() } else { t };
            BigComplex::new(re, im, g).with_precision(p)
        }
    }

    /// `e^z`.
    pub fn exp(&self) -> Self {
        let g = self.prec + 16;
        with_consts(|cc| {
            let m = self.re.exp(g, RM, cc);
            let c = self.im.cos(g, RM, cc);
            let s = self.im.sin(g, RM, cc);
            BigComplex::new(m.mul(&c, g, RM), m.mul(&s, g, RM), g).with_precision(self.prec)
        })
    }

    /// `|self − other|`.
    pub fn dist(&self, other: &Self) -> BigFloat {
        self.sub(other).abs()
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_decimal(&self, digits: usize) -> String {
        let fmt = |x: &BigFloat| {
            let s = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "nan".into());
            shorten(&s, digits)
        };
        format!(
            "{} {} {}i",
            fmt(&self.re),
            if self.im.is_negative() { "-" } else { "+" },
            fmt(&self.im.abs())
        )
    }

    /// Approximate value as doubles.
    pub fn to_f64(&self) -> (f64, f64) {
        let f = |x: &BigFloat| {
            if x.is_zero() {
                return 0.0;
            }
            let v = 10f64.powf(log10_abs(x));
            if x.is_negative() {
                -v
            } else {
                v
            }
        };
        (f(&self.re), f(&self.im))
    }
}

fn shorten(s: &str, digits: usize) -> String {
    let (mant, exp) = s.split_once('e').unwrap_or((s, "0"));
    let keep = mant
        .char_indices()
        .filter(|(_, c)| c.is_ascii_digit())
        .nth(digits)
        .map_or(mant.len(), |(i, _)| i);
    format!("{}e{}", &mant[..keep], exp)
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.prec * 3 / 10))
    }
}
