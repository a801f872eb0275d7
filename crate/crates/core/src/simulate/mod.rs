//! Exact samplers with unit-Fréchet margins: max-autoregressive, moving
//! maximum and Brown–Resnick processes.

mod brown_resnick;
mod gaussian;
mod mar;
mod moving_max;

pub use brown_resnick::{simulate_brown_resnick, simulate_brown_resnick_path, BrownResnick, MAX_BLOCK_LEN};
pub use gaussian::{GaussianField, GaussianIncrementModel};
pub use mar::{simulate_mar, simulate_mar_with_noise};
pub use moving_max::{simulate_moving_max, simulate_moving_max_with_noise};

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{normal_cdf, Real};

/// Semi-variogram `γ(h) = C |h|^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerVariogram<T> {
    pub scale: T,
    pub exponent: T,
}

impl<T: Real> PowerVariogram<T> {
    pub fn new(scale: T, exponent: T) -> Result<Self> {
        let v = Self { scale, exponent };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > T::zero()) || !self.scale.is_finite() {
            return Err(Error::invalid(format!("variogram scale {} must be > 0", self.scale)));
        }
        if !(self.exponent > T::zero() && self.exponent <= T::lit(2.0)) {
            return Err(Error::invalid(format!("variogram exponent {} outside (0, 2]", self.exponent)));
        }
        Ok(())
    }

    pub fn gamma(&self, h: i64) -> T {
        if h == 0 {
            return T::zero();
        }
        self.scale * T::lit(h.unsigned_abs() as f64).powf(self.exponent)
    }

    /// Extremal coefficient of the Brown–Resnick process, `θ(h) = 2Φ(√(γ(h)/2))`.
    pub fn extremal_coefficient(&self, h: i64) -> T {
        T::lit(2.0) * normal_cdf((self.gamma(h) / T::lit(2.0)).sqrt())
    }

    /// `2 - θ(h) = 2Φ(-√(γ(h)/2))`, accurate where `θ(h)` is close to 2.
    pub fn extremal_dependence(&self, h: i64) -> T {
        T::lit(2.0) * normal_cdf(-(self.gamma(h) / T::lit(2.0)).sqrt())
    }
}

/// A simulatable model. All three have unit-Fréchet margins (`α = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec<T> {
    /// `X_t = max(a X_{t-1}, (1 - a) Z_t)`.
    Mar { a: T },
    /// `X_t = max(Z_t, Z_{t-2}) / 2`.
    MovingMax,
    BrownResnick { variogram: PowerVariogram<T> },
}

impl<T: Real> ModelSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Mar { a } => {
                if !(*a >= T::zero() && *a < T::one()) {
                    return Err(Error::invalid(format!("MAR coefficient {a} outside [0, 1)")));
                }
                Ok(())
            }
            ModelSpec::MovingMax => Ok(()),
            ModelSpec::BrownResnick { variogram } => variogram.validate(),
        }
    }

    /// Tail index; fixed to 1 for every supported model.
    pub fn alpha(&self) -> T {
        T::one()
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Mar { .. } => "mar",
            ModelSpec::MovingMax => "moving_max",
            ModelSpec::BrownResnick { .. } => "brown_resnick",
        }
    }
}

/// ChaCha8 generator for `(seed, stream)`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Unit-Fréchet draw by inversion, `-1 / ln U`.
pub(crate) fn frechet<T: Real, R: Rng>(rng: &mut R) -> T {
    let u: f64 = rng.sample(Open01);
    T::lit(-1.0 / u.ln())
}

/// Standard Pareto draw, `1 / U`.
pub(crate) fn pareto<T: Real, R: Rng>(rng: &mut R) -> T {
    let u: f64 = rng.sample(Open01);
    T::lit(1.0 / u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variogram_and_extremal_coefficient() {
        let v = PowerVariogram::new(0.1f64, 1.75).unwrap();
        assert_eq!(v.gamma(0), 0.0);
        assert_eq!(v.gamma(-1), 0.1);
        assert_eq!(v.extremal_coefficient(0), 1.0);
        assert!((v.extremal_coefficient(1) - 1.177).abs() < 1e-3);
        assert!(PowerVariogram::new(0.0, 1.0).is_err());
        assert!(PowerVariogram::new(1.0, 2.5).is_err());
        assert!(PowerVariogram::new(1.0, 0.0).is_err());
        assert!(PowerVariogram::new(1.0, 2.0).is_ok());
    }

    #[test]
    fn model_validation() {
        assert!(ModelSpec::Mar { a: 1.0 }.validate().is_err());
        assert!(ModelSpec::Mar { a: -0.1 }.validate().is_err());
        assert!(ModelSpec::Mar { a: 0.0 }.validate().is_ok());
        let json = serde_json::to_string(&ModelSpec::Mar { a: 0.5 }).unwrap();
        assert_eq!(json, r#"{"kind":"mar","a":0.5}"#);
    }
}
