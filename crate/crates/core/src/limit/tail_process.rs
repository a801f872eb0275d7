use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::simulate::{pareto, stream_rng, GaussianField, GaussianIncrementModel, ModelSpec};

/// Exact sampler for the tail process `(Y_{-1}, ..., Y_{end})` of a model
/// with unit-Fréchet margins, conditioned on `X_0 > x` as `x -> ∞`.
#[derive(Debug, Clone)]
pub struct TailProcessSampler<T> {
    model: ModelSpec<T>,
    end: usize,
    kind: Kind<T>,
}

#[derive(Debug, Clone)]
enum Kind<T> {
    Mar { a: T },
    BrownResnick { field: GaussianField<T>, gammas: Vec<T> },
}

impl<T: Real> TailProcessSampler<T> {
    /// Window covers offsets `-1..=end`.
    pub fn new(model: ModelSpec<T>, end: usize) -> Result<Self> {
        model.validate()?;
        let kind = match model {
            ModelSpec::Mar { a } => Kind::Mar { a },
            ModelSpec::BrownResnick { variogram } => {
                let locations: Vec<i64> = (-1..=end as i64).collect();
                let field = GaussianIncrementModel::new(variogram).field(&locations)?;
                let gammas = locations.iter().map(|&h| variogram.gamma(h)).collect();
                Kind::BrownResnick { field, gammas }
            }
            ModelSpec::MovingMax => {
                return Err(Error::invalid("tail-process sampling supports mar and brown_resnick models"))
            }
        };
        Ok(Self { model, end, kind })
    }

    /// The same model on the window `-1..=end`.
    pub fn with_end(&self, end: usize) -> Result<Self> {
        if end == self.end {
            return Ok(self.clone());
        }
        Self::new(self.model, end)
    }

    pub fn model(&self) -> &ModelSpec<T> {
        &self.model
    }

    pub fn end(&self) -> usize {
        self.end
    }

    /// Number of coordinates in a draw, `end + 2`.
    pub fn window_len(&self) -> usize {
        self.end + 2
    }

    /// One draw; index `i` holds `Y_{i-1}`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<T> {
        let mut y = vec![T::zero(); self.window_len()];
        self.sample_into(rng, &mut y);
        y
    }

    pub fn sample_into<R: Rng>(&self, rng: &mut R, y: &mut [T]) {
        debug_assert_eq!(y.len(), self.window_len());
        let p: T = pareto(rng);
        match &self.kind {
            Kind::Mar { a } => {
                let a = *a;
                y[1] = p;
                for k in 2..y.len() {
                    y[k] = y[k - 1] * a;
                }
                // Lag -1 survives with probability a; further left the
                // Markov chain would continue, but the window stops here.
                let u: f64 = rng.sample(Open01);
                y[0] = if T::lit(u) < a { p / a } else { T::zero() };
            }
            Kind::BrownResnick { field, gammas } => {
                let g = field.sample(rng);
                for (i, v) in y.iter_mut().enumerate() {
                    *v = if i == 1 { p } else { p * (g[i] - gammas[i]).exp() };
                }
            }
        }
    }
}

/// `n_draws` independent draws; draw `i` uses RNG stream `i`.
pub fn tail_process_sample<T: Real>(sampler: &TailProcessSampler<T>, n_draws: usize, seed: u64) -> Vec<Vec<T>> {
    (0..n_draws).map(|i| sampler.sample(&mut stream_rng(seed, i as u64))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::PowerVariogram;

    #[test]
    fn mar_structure() {
        let s = TailProcessSampler::new(ModelSpec::Mar { a: 0.5f64 }, 3).unwrap();
        let draws = tail_process_sample(&s, 100_000, 1);
        let mut zeros = 0usize;
        for y in &draws {
            assert!(y[1] > 1.0);
            assert_eq!(y[2], 0.5 * y[1]);
            if y[0] == 0.0 {
                zeros += 1;
            } else {
                assert_eq!(y[0], y[1] / 0.5);
            }
        }
        let p = zeros as f64 / draws.len() as f64;
        assert!((p - 0.5).abs() < 3.0 * (0.25f64 / draws.len() as f64).sqrt());
    }

    #[test]
    fn pareto_marginal_of_y0() {
        let v = PowerVariogram::new(0.1f64, 1.75).unwrap();
        let s = TailProcessSampler::new(ModelSpec::BrownResnick { variogram: v }, 2).unwrap();
        let mut rng = stream_rng(8, 0);
        let n = 50_000;
        let y0: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)[1]).collect();
        for y in [1.5f64, 2.0, 4.0] {
            let p = y0.iter().filter(|&&v| v > y).count() as f64 / n as f64;
            let t = 1.0 / y;
            assert!((p - t).abs() < 3.0 * (t * (1.0 - t) / n as f64).sqrt(), "y={y}: {p}");
        }
    }

    #[test]
    fn unsupported_model() {
        assert!(matches!(
            TailProcessSampler::<f64>::new(ModelSpec::MovingMax, 2),
            Err(Error::InvalidArgument(_))
        ));
    }
}
