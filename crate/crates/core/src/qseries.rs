//! Truncated `q`-expansions with exact rational coefficients.
//!
//! A [`QSeries`] stores `sum_{n=0}^{order} coeffs[n] * q^(offset + n)` with
//! `offset` in `[0, 1)`. Coefficients past `order` are unknown, so every
//! binary operation truncates to the smaller of its operands' orders.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{serde_rational, serde_rational_vec, CommonDenominator, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries", into = "RawSeries")]
pub struct QSeries {
    offset: Rational,
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from its coefficients; `coeffs[n]` multiplies
    /// `q^(offset + n)` and the order is `coeffs.len() - 1`.
    pub fn new(offset: Rational, coeffs: Vec<Rational>) -> Result<Self> {
        if offset < Rational::zero() || offset >= Rational::one() {
            return Err(Error::OffsetOutOfRange(offset));
        }
        if coeffs.is_empty() {
            return Err(Error::Domain("a series needs at least one coefficient".into()));
        }
        Ok(Self { offset, coeffs })
    }

    /// Offset-zero series, for integral-weight scalar forms.
    pub fn integral(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { offset: Rational::zero(), coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::integral(coeffs.into_iter().map(crate::rational::int).collect())
    }

    pub fn zero(offset: Rational, order: usize) -> Result<Self> {
        Self::new(offset, vec![Rational::zero(); order + 1])
    }

    /// The constant `c` as an offset-zero series of the given order.
    pub fn constant(c: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = c;
        Self::integral(coeffs)
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^(offset + n)`; `None` past the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        Self { offset: self.offset.clone(), coeffs: self.coeffs[..keep].to_vec() }
    }

    /// Same coefficient data, or an error naming the first differing index.
    pub fn agrees_with(&self, other: &Self) -> std::result::Result<(), usize> {
        if self.offset != other.offset {
            return Err(0);
        }
        let n = self.order().min(other.order());
        match (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i]) {
            Some(i) => Err(i),
            None => Ok(()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_offset(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] + &other.coeffs[n]).collect();
        Ok(Self { offset: self.offset.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_offset(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| &self.coeffs[n] - &other.coeffs[n]).collect();
        Ok(Self { offset: self.offset.clone(), coeffs })
    }

    pub fn neg(&self) -> Self {
        Self { offset: self.offset.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Cauchy product. At most one factor may carry a nonzero offset.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.offset.is_zero() && !other.offset.is_zero() {
            return Err(Error::OffsetMismatch {
                left: Box::new(self.offset.clone()),
                right: Box::new(other.offset.clone()),
            });
        }
        let order = self.order().min(other.order());
        // Integer convolution over common denominators: one reduction per
        // output coefficient instead of one per term.
        let x = CommonDenominator::new(&self.coeffs[..=order]);
        let y = CommonDenominator::new(&other.coeffs[..=order]);
        let den = &x.den * &y.den;
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = BigInt::zero();
                for j in 0..=n {
                    let (u, v) = (&x.nums[j], &y.nums[n - j]);
                    if !u.is_zero() && !v.is_zero() {
                        acc += u * v;
                    }
                }
                Rational::new(acc, den.clone())
            })
            .collect();
        Ok(Self { offset: &self.offset + &other.offset, coeffs })
    }

    pub fn scalar_mul(&self, c: &Rational) -> Self {
        Self { offset: self.offset.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `q d/dq`: the coefficient of `q^(offset + n)` picks up `offset + n`.
    pub fn q_d_dq(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, x)| x * (&self.offset + Rational::from_integer(n.into())))
            .collect();
        Self { offset: self.offset.clone(), coeffs }
    }

    fn check_same_offset(&self, other: &Self) -> Result<()> {
        if self.offset != other.offset {
            return Err(Error::OffsetMismatch {
                left: Box::new(self.offset.clone()),
                right: Box::new(other.offset.clone()),
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawSeries {
    #[serde(with = "serde_rational")]
    offset: Rational,
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl From<QSeries> for RawSeries {
    fn from(s: QSeries) -> Self {
        RawSeries { offset: s.offset, coeffs: s.coeffs }
    }
}

impl TryFrom<RawSeries> for QSeries {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        QSeries::new(raw.offset, raw.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn series(offset: Rational, coeffs: &[(i64, i64)]) -> QSeries {
        QSeries::new(offset, coeffs.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    #[test]
    fn add_componentwise() {
        let x = QSeries::from_integers([1, 2]);
        let y = QSeries::from_integers([3, 4]);
        assert_eq!(x.add(&y).unwrap(), QSeries::from_integers([4, 6]));
    }

    #[test]
    fn add_zero_is_identity() {
        let x = QSeries::from_integers([1, -5, 7]);
        let z = QSeries::zero(int(0), 2).unwrap();
        assert_eq!(x.add(&z).unwrap(), x);
    }

    #[test]
    fn add_inverse_at_fractional_offset() {
        let x = series(ratio(4, 7), &[(1, 1), (-153, 14)]);
        let y = series(ratio(4, 7), &[(-1, 1), (153, 14)]);
        let sum = x.add(&y).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.offset(), &ratio(4, 7));
    }

    #[test]
    fn add_rejects_offset_mismatch() {
        let x = series(ratio(4, 7), &[(1, 1)]);
        let y = series(ratio(3, 7), &[(1, 1)]);
        assert!(matches!(x.add(&y), Err(Error::OffsetMismatch { .. })));
    }

    #[test]
    fn mixed_orders_truncate_to_shorter() {
        let x = QSeries::from_integers([1, 1, 1, 1]);
        let y = QSeries::from_integers([1, 1]);
        assert_eq!(x.add(&y).unwrap().order(), 1);
        assert_eq!(x.mul(&y).unwrap().order(), 1);
    }

    #[test]
    fn difference_of_squares() {
        let x = QSeries::from_integers([1, 1, 0, 0]);
        let y = QSeries::from_integers([1, -1, 0, 0]);
        assert_eq!(x.mul(&y).unwrap(), QSeries::from_integers([1, 0, -1, 0]));
    }

    #[test]
    fn mul_by_one() {
        let x = series(ratio(4, 7), &[(1, 1), (-153, 14), (3, 5)]);
        let one = QSeries::constant(int(1), 2);
        assert_eq!(x.mul(&one).unwrap(), x);
        assert_eq!(one.mul(&x).unwrap(), x);
    }

    #[test]
    fn mul_rejects_two_offsets() {
        let x = series(ratio(4, 7), &[(1, 1)]);
        assert!(matches!(x.mul(&x), Err(Error::OffsetMismatch { .. })));
    }

    #[test]
    fn e2_squared_constant_term() {
        let e2 = QSeries::integral(vec![ratio(-1, 12), int(2), int(6)]);
        assert_eq!(e2.mul(&e2).unwrap().coeffs()[0], ratio(1, 144));
    }

    #[test]
    fn derivative_examples() {
        assert!(QSeries::constant(int(1), 3).q_d_dq().is_zero());
        let x = series(ratio(4, 7), &[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(x.q_d_dq(), series(ratio(4, 7), &[(4, 7), (0, 1), (0, 1)]));
        let y = QSeries::from_integers([0, 1, 0, 3]);
        assert_eq!(y.q_d_dq(), QSeries::from_integers([0, 1, 0, 9]));
    }

    #[test]
    fn scalar_examples() {
        let x = QSeries::from_integers([3, -2, 5]);
        assert!(x.scalar_mul(&int(0)).is_zero());
        assert_eq!(x.scalar_mul(&int(1)), x);
        let one = QSeries::from_integers([1]);
        assert_eq!(one.scalar_mul(&ratio(-1, 12)), QSeries::integral(vec![ratio(-1, 12)]));
    }

    #[test]
    fn offset_range_enforced() {
        assert!(matches!(QSeries::new(int(1), vec![int(1)]), Err(Error::OffsetOutOfRange(_))));
        assert!(QSeries::new(ratio(-1, 2), vec![int(1)]).is_err());
    }

    #[test]
    fn json_shape() {
        let x = series(ratio(4, 7), &[(1, 1), (-153, 14)]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"offset":"4/7","coeffs":["1/1","-153/14"]}"#);
        let back: QSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<QSeries>(r#"{"offset":"3/2","coeffs":["1"]}"#).is_err());
    }

    fn small_series(order: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-20i64..20, 1i64..8), order + 1)
            .prop_map(|cs| QSeries::integral(cs.into_iter().map(|(n, d)| ratio(n, d)).collect()))
    }

    fn fractional_series(order: usize) -> impl Strategy<Value = QSeries> {
        (0i64..11, small_series(order))
            .prop_map(|(k, s)| QSeries::new(ratio(k, 11), s.coeffs().to_vec()).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(x in small_series(6), y in small_series(6), z in small_series(6)) {
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(
                x.mul(&y).unwrap().mul(&z).unwrap(),
                x.mul(&y.mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.mul(&y.add(&z).unwrap()).unwrap(),
                x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        }

        #[test]
        fn mul_matches_termwise_convolution(x in fractional_series(8), y in small_series(6)) {
            let p = x.mul(&y).unwrap();
            prop_assert_eq!(p.order(), 6);
            for n in 0..=6 {
                let direct: Rational = (0..=n).map(|j| &x.coeffs()[j] * &y.coeffs()[n - j]).sum();
                prop_assert_eq!(&p.coeffs()[n], &direct);
            }
        }

        #[test]
        fn leibniz_rule(x in fractional_series(7), y in small_series(7)) {
            let lhs = x.mul(&y).unwrap().q_d_dq();
            let rhs = x.q_d_dq().mul(&y).unwrap().add(&x.mul(&y.q_d_dq()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn coefficients_stay_canonical(x in fractional_series(5), y in small_series(5)) {
            let p = x.mul(&y).unwrap().q_d_dq().scalar_mul(&ratio(-3, 4));
            for c in p.coeffs() {
                let reduced = Rational::new(c.numer().clone(), c.denom().clone());
                prop_assert_eq!(c.numer(), reduced.numer());
                prop_assert!(c.denom() > &0.into());
            }
        }

        #[test]
        fn json_round_trip(x in fractional_series(4)) {
            let back: QSeries = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
