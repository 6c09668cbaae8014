//! Scalar abstraction for per-RB data rates.
//!
//! Rates are compared exactly (no epsilon) when deciding whether a run of RBs
//! "just achieves" a rate requirement, so every rate type must be able to
//! expose its value as an exact rational for the approximation-bound checks.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

/// A non-negative data rate (rate units per RB).
///
/// Implemented for `f32`, `f64`, `u32`, `u64`, `i32`, `i64` and `Rational64`.
pub trait Rate:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Exact rational value, `None` for non-finite floats.
    fn to_rational(&self) -> Option<BigRational>;

    /// Finite and non-negative.
    fn is_valid_rate(&self) -> bool;

    /// `self * n` for an RB count.
    #[inline]
    fn times(self, n: usize) -> Self {
        // RB counts are bounded by the subchannel count, so the cast is lossless
        // for every implementor.
        self * Self::from_usize(n).expect("RB count representable in rate type")
    }

    fn min_rate(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_rate(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

macro_rules! float_rate {
    ($($t:ty),*) => {$(
        impl Rate for $t {
            fn to_rational(&self) -> Option<BigRational> {
                BigRational::from_float(*self)
            }
            fn is_valid_rate(&self) -> bool {
                self.is_finite() && *self >= 0.0
            }
        }
    )*};
}

macro_rules! int_rate {
    ($($t:ty),*) => {$(
        impl Rate for $t {
            fn to_rational(&self) -> Option<BigRational> {
                Some(BigRational::from_integer(BigInt::from(*self)))
            }
            #[allow(unused_comparisons)]
            fn is_valid_rate(&self) -> bool {
                *self >= 0
            }
        }
    )*};
}

float_rate!(f32, f64);
int_rate!(u32, u64, i32, i64);

impl Rate for Rational64 {
    fn to_rational(&self) -> Option<BigRational> {
        Some(Ratio::new(
            BigInt::from(*self.numer()),
            BigInt::from(*self.denom()),
        ))
    }

    fn is_valid_rate(&self) -> bool {
        *self >= Rational64::zero()
    }
}

/// Convert a rate vector between scalar types through `f64`.
pub fn cast_rates<A: Rate, B: Rate>(rates: &[A]) -> Option<Vec<B>> {
    rates
        .iter()
        .map(|r| r.to_f64().and_then(B::from_f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn times_is_exact_for_small_counts() {
        assert_eq!(4.0f64.times(3), 12.0);
        assert_eq!(4u32.times(3), 12);
        assert_eq!(Rational64::new(1, 3).times(3), Rational64::from_integer(1));
    }

    #[test]
    fn rationals_are_exact() {
        let half = 0.5f64.to_rational().unwrap();
        assert_eq!(half, BigRational::new(1.into(), 2.into()));
        assert!(f64::NAN.to_rational().is_none());
        assert!(!f64::NAN.is_valid_rate());
        assert!(!(-1.0f64).is_valid_rate());
        assert!(7u32.is_valid_rate());
    }
}
