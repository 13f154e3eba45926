//! Exact ordered field used for planar coordinates.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Exact scalar for the curve engine. Floating point types are deliberately
/// excluded: every predicate in the engine is an exact sign test.
pub trait Scalar: Clone + Ord + Hash + Debug + Display + Num + Signed + 'static {
    fn int(v: i64) -> Self;
    fn ratio(n: i64, d: i64) -> Self;
    fn floor(&self) -> Self;
    fn is_integer(&self) -> bool;
    /// Denominator in lowest terms, as a scalar.
    fn den(&self) -> Self;
    fn to_i64(&self) -> Option<i64>;

    fn floor_i64(&self) -> i64 {
        self.floor().to_i64().expect("coordinate out of i64 range")
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + Debug + Display + FromPrimitive + ToPrimitive + 'static,
{
    fn int(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer out of range"))
    }

    fn ratio(n: i64, d: i64) -> Self {
        Ratio::new(
            T::from_i64(n).expect("integer out of range"),
            T::from_i64(d).expect("integer out of range"),
        )
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }

    fn den(&self) -> Self {
        Ratio::from_integer(self.denom().clone())
    }

    fn to_i64(&self) -> Option<i64> {
        if Ratio::is_integer(self) {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn floor_of_negative_fraction() {
        let x = Rat::ratio(-3, 2);
        assert_eq!(x.floor_i64(), -2);
        assert!(!x.is_integer());
        assert_eq!(x.den(), Rat::int(2));
    }

    #[test]
    fn small_ratio_agrees_with_big() {
        let a = Ratio::<i128>::ratio(7, 8);
        let b = Rat::ratio(7, 8);
        assert_eq!(a.to_string(), b.to_string());
    }
}
