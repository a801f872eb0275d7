use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::real::Real;

use super::PowerVariogram;

/// Centered Gaussian process with stationary increments, `G_0 = 0` and
/// `Var(G_t - G_s) = 2γ(t - s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianIncrementModel<T> {
    pub variogram: PowerVariogram<T>,
}

impl<T: Real> GaussianIncrementModel<T> {
    pub fn new(variogram: PowerVariogram<T>) -> Self {
        Self { variogram }
    }

    /// `Cov(G_s, G_t) = γ(s) + γ(t) - γ(s - t)`.
    pub fn covariance(&self, s: i64, t: i64) -> T {
        let v = &self.variogram;
        v.gamma(s) + v.gamma(t) - v.gamma(s - t)
    }

    /// Factorizes the covariance over `locations` once for repeated sampling.
    pub fn field(&self, locations: &[i64]) -> Result<GaussianField<T>> {
        let mut sorted = locations.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("Gaussian field locations must be distinct"));
        }
        let nonzero: Vec<usize> = (0..locations.len()).filter(|&i| locations[i] != 0).collect();
        let cov = Matrix::from_fn(nonzero.len(), nonzero.len(), |i, j| {
            self.covariance(locations[nonzero[i]], locations[nonzero[j]])
        });
        let chol = Cholesky::factor(&cov)?;
        Ok(GaussianField { locations: locations.to_vec(), nonzero, chol })
    }
}

/// Factorized Gaussian vector at fixed locations.
#[derive(Debug, Clone)]
pub struct GaussianField<T> {
    locations: Vec<i64>,
    nonzero: Vec<usize>,
    chol: Cholesky<T>,
}

impl<T: Real> GaussianField<T> {
    pub fn locations(&self) -> &[i64] {
        &self.locations
    }

    pub fn jitter(&self) -> T {
        self.chol.jitter()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<T> {
        self.sample_prefix(rng, self.locations.len())
    }

    /// Samples the process at the first `m` locations only.
    pub fn sample_prefix<R: Rng>(&self, rng: &mut R, m: usize) -> Vec<T> {
        assert!(m <= self.locations.len());
        let k = self.nonzero.partition_point(|&i| i < m);
        let z: Vec<T> = (0..k).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect();
        let g = self.chol.correlate(&z);
        let mut out = vec![T::zero(); m];
        for (&i, v) in self.nonzero[..k].iter().zip(g) {
            out[i] = v;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::stream_rng;

    #[test]
    fn increments_have_variogram_variance() {
        let model = GaussianIncrementModel::new(PowerVariogram::new(0.5f64, 1.5).unwrap());
        let field = model.field(&[-1, 0, 1, 2, 3]).unwrap();
        let mut rng = stream_rng(5, 0);
        let n = 40_000;
        let (mut s0, mut s13) = (0.0, 0.0);
        for _ in 0..n {
            let g = field.sample(&mut rng);
            assert_eq!(g[1], 0.0);
            s0 += g[0] * g[0];
            s13 += (g[4] - g[2]).powi(2);
        }
        let v0 = s0 / n as f64;
        let v13 = s13 / n as f64;
        // Var(G_-1) = 2γ(1) = 1; Var(G_3 - G_1) = 2γ(2).
        let t13 = 2.0 * 0.5 * 2f64.powf(1.5);
        assert!((v0 - 1.0).abs() < 4.0 * (2.0f64 / n as f64).sqrt(), "{v0}");
        assert!((v13 - t13).abs() < 4.0 * t13 * (2.0f64 / n as f64).sqrt(), "{v13}");
    }

    #[test]
    fn prefix_uses_leading_locations() {
        let model = GaussianIncrementModel::new(PowerVariogram::new(1.0f64, 1.0).unwrap());
        let field = model.field(&[0, 1, 2, 3]).unwrap();
        let a = field.sample_prefix(&mut stream_rng(1, 0), 2);
        let b = field.sample(&mut stream_rng(1, 0));
        assert_eq!(a.len(), 2);
        assert_eq!(a[..], b[..2]);
        assert!(model.field(&[0, 1, 1]).is_err());
    }
}
