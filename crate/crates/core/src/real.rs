//! Scalar abstraction shared by every estimator, sampler and oracle.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar the crate is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Lossy conversion from an `f64` literal or sample.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    /// Conversion from a count.
    fn from_count(n: u64) -> Self {
        <Self as FromPrimitive>::from_u64(n).expect("count is representable")
    }

    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).expect("finite scalar")
    }
}

impl Real for f32 {
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

impl Real for f64 {
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

/// Standard normal CDF, `Φ(x) = erfc(-x/√2)/2`.
pub fn normal_cdf<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    half * (-x / T::lit(std::f64::consts::SQRT_2)).erfc()
}

/// Standard normal quantile by bisection on [`normal_cdf`].
///
/// Accurate to the scalar's resolution; only used for confidence levels, so
/// speed is irrelevant.
pub fn normal_quantile<T: Real>(p: T) -> T {
    assert!(p > T::zero() && p < T::one(), "probability must lie in (0, 1)");
    let mut lo = T::lit(-40.0);
    let mut hi = T::lit(40.0);
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid == lo || mid == hi {
            break;
        }
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::lit(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_points() {
        assert!((normal_cdf(0.0f64) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959963984540054f64) - 0.975).abs() < 1e-12);
        assert!((normal_cdf(-1.0f64) - 0.15865525393145707).abs() < 1e-14);
        assert!((normal_cdf(1.0f32) - 0.841_344_7).abs() < 1e-6);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let z = normal_quantile(0.975f64);
        assert!((z - 1.959963984540054).abs() < 1e-9);
        for p in [0.01, 0.2, 0.5, 0.8, 0.999] {
            assert!((normal_cdf(normal_quantile(p)) - p).abs() < 1e-12);
        }
    }
}
