//! Scalar traits used by the probability-carrying types.
//!
//! Counting and packing code only needs ordered-field arithmetic, so it is
//! written against [`Probability`] and runs unchanged on `f32`, `f64` and
//! exact rationals. Anything that takes a logarithm needs [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field element that can stand in for a probability.
pub trait Probability:
    Num + PartialOrd + Clone + Debug + Send + Sync + FromPrimitive + ToPrimitive + 'static
{
    /// Slack allowed when checking that masses sum to one.
    fn sum_tolerance() -> Self;

    /// `floor(self)` as a count, `None` when negative or not finite.
    fn floor_count(&self) -> Option<u64>;

    fn lossy_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_negative_value(&self) -> bool {
        *self < Self::zero()
    }
}

/// A floating-point [`Probability`].
pub trait Real: Probability + Float {}

impl<F: Probability + Float> Real for F {}

// Sums of many decimal probabilities land a few ulps below an integer; a
// relative snap keeps `floor` from losing a whole unit to rounding noise.
fn snapped_floor(x: f64, rel: f64) -> Option<u64> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let nearest = x.round();
    let snapped = if (x - nearest).abs() <= rel * nearest.max(1.0) {
        nearest
    } else {
        x.floor()
    };
    snapped.to_u64()
}

impl Probability for f64 {
    fn sum_tolerance() -> Self {
        1e-12
    }

    fn floor_count(&self) -> Option<u64> {
        snapped_floor(*self, 1e-9)
    }
}

impl Probability for f32 {
    fn sum_tolerance() -> Self {
        1e-5
    }

    fn floor_count(&self) -> Option<u64> {
        snapped_floor(f64::from(*self), 1e-5)
    }
}

impl Probability for Ratio<i64> {
    fn sum_tolerance() -> Self {
        Ratio::from_integer(0)
    }

    fn floor_count(&self) -> Option<u64> {
        if self.is_negative() {
            return None;
        }
        self.floor().to_integer().to_u64()
    }
}

impl Probability for BigRational {
    fn sum_tolerance() -> Self {
        Ratio::from_integer(BigInt::from(0))
    }

    fn floor_count(&self) -> Option<u64> {
        if self.is_negative() {
            return None;
        }
        self.floor().to_integer().to_u64()
    }
}

/// Converts an `f64` constant into `T`. Panics only for non-finite input.
pub(crate) fn constant<T: Probability>(value: f64) -> T {
    T::from_f64(value).expect("finite constant")
}
