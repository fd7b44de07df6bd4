//! Substitution of one series into another, and series reversion.

use num_traits::{One, Zero};

use super::{QSeries, Rational, SeriesError, DENOM, EXACT};

impl QSeries {
    /// `outer(inner)`: substitutes `inner` for `q` in `outer`.
    ///
    /// `outer` must have nonnegative integer exponents and `inner` positive
    /// valuation. The result is known below
    /// `min(order(inner), N · val(inner))`, where `q^N` is the first unknown
    /// power of `outer`.
    pub fn compose(&self, inner: &QSeries) -> Result<QSeries, SeriesError> {
        if !self.is_integral() || self.val_bound() < 0 {
            return Err(SeriesError::NonIntegralOuter);
        }
        let val_i = inner.val_bound();
        if val_i <= 0 {
            return Err(SeriesError::ConstantTermInner);
        }
        let outer_terms = if self.order >= EXACT {
            EXACT
        } else {
            (self.order + DENOM - 1).div_euclid(DENOM)
        };
        let mut order = inner.order;
        if outer_terms < EXACT {
            order = order.min(outer_terms.saturating_mul(val_i));
        }
        let has_nonconstant = self.terms().any(|(e, _)| e > 0);
        if !has_nonconstant && outer_terms < EXACT {
            order = outer_terms.saturating_mul(val_i);
        } else if !has_nonconstant {
            order = EXACT;
        }
        let order = order.min(EXACT);
        let top = self.terms().map(|(e, _)| e / DENOM).max();
        let Some(top) = top else {
            return Ok(QSeries::zero_with_order(order));
        };
        // Horner: ((c_top · inner + c_{top-1}) · inner + …) + c_0.
        let mut acc = QSeries::zero_with_order(EXACT);
        for n in (0..=top).rev() {
            acc = acc.mul(inner).truncate24(order);
            let c = self.coeff24(n * DENOM).unwrap_or_else(Rational::zero);
            if !c.is_zero() {
                acc = acc.add_constant(&c);
            }
        }
        Ok(acc.truncate24(order))
    }

    /// Compositional inverse of `q + O(q^2)`: the series `b` with
    /// `self(b) = q = b(self)` to the order of `self`.
    ///
    /// Newton iteration `b <- b - (a(b) - q) / a'(b)` doubles the number of
    /// correct coefficients per step.
    pub fn revert(&self) -> Result<QSeries, SeriesError> {
        if !self.is_integral()
            || self.valuation24() != Some(DENOM)
            || !self.leading_coefficient().is_some_and(One::is_one)
        {
            return Err(SeriesError::NotNormalized);
        }
        if self.order >= EXACT {
            return Err(SeriesError::Unbounded);
        }
        let target = self.order;
        let q = QSeries::q();
        let da = self.derivative();
        let mut b = QSeries::q().truncate24(2 * DENOM);
        let mut known = 2 * DENOM;
        while known < target {
            let next = (2 * known).min(target);
            let b_ext = b.with_order24(next);
            let a_b = self.truncate24(next).compose(&b_ext)?;
            let da_b = da.truncate24(next).compose(&b_ext)?;
            let residual = a_b.sub(&q);
            let correction = residual.div(&da_b)?;
            b = b_ext.sub(&correction).truncate24(next);
            known = next;
        }
        Ok(b.truncate24(target))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(start: i64, c: Vec<i64>, order: i64) -> QSeries {
        QSeries::from_integer_coeffs(start, c, order)
    }

    #[test]
    fn polynomial_in_q() {
        let outer = s(0, vec![1, 1, 1], EXACT / DENOM);
        let inner = QSeries::q().truncate(10);
        assert_eq!(outer.compose(&inner).unwrap(), s(0, vec![1, 1, 1], 10));
    }

    #[test]
    fn geometric_series_of_q_plus_q2() {
        // 1/(1-X) at X = q + q^2 is Σ F_{n+1} q^n (Fibonacci).
        let geo = s(0, vec![1; 12], 12);
        let inner = s(1, vec![1, 1], 12);
        let got = geo.compose(&inner).unwrap();
        assert_eq!(
            got,
            s(0, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144], 12)
        );
    }

    #[test]
    fn substituting_zero_leaves_constant_term() {
        let outer = s(0, vec![7, 3, 2], 5);
        let got = outer.compose(&QSeries::zero(9)).unwrap();
        assert_eq!(got.coeff(0), Rational::from_integer(7.into()));
        assert!(got.terms().all(|(e, _)| e == 0));
    }

    #[test]
    fn constant_inner_is_rejected() {
        let outer = s(0, vec![1, 1], 5);
        let inner = s(0, vec![1, 1], 5);
        assert_eq!(outer.compose(&inner), Err(SeriesError::ConstantTermInner));
    }

    #[test]
    fn revert_identity_and_quadratic() {
        let q = QSeries::q().truncate(15);
        assert_eq!(q.revert().unwrap(), q);
        // Catalan numbers with alternating sign.
        let a = s(1, vec![1, 1], 8);
        assert_eq!(
            a.revert().unwrap(),
            s(1, vec![1, -1, 2, -5, 14, -42, 132], 8)
        );
    }

    #[test]
    fn revert_rejects_wrong_normalization() {
        assert_eq!(
            s(1, vec![2, 1], 8).revert(),
            Err(SeriesError::NotNormalized)
        );
        assert_eq!(
            s(0, vec![1, 1], 8).revert(),
            Err(SeriesError::NotNormalized)
        );
    }
}
