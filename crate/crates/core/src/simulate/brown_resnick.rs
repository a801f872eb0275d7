use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::SegmentedSeries;

use super::gaussian::{GaussianField, GaussianIncrementModel};
use super::{stream_rng, ModelSpec, PowerVariogram};

/// Largest block length accepted by [`simulate_brown_resnick_path`].
pub const MAX_BLOCK_LEN: usize = 2000;

/// Exact sampler for the Brown–Resnick process on `0..d` using extremal
/// functions. The Gaussian factor is computed once and shared by all draws.
#[derive(Debug, Clone)]
pub struct BrownResnick<T> {
    variogram: PowerVariogram<T>,
    field: GaussianField<T>,
}

impl<T: Real> BrownResnick<T> {
    pub fn new(variogram: PowerVariogram<T>, d: usize) -> Result<Self> {
        variogram.validate()?;
        if d == 0 {
            return Err(Error::invalid("Brown-Resnick dimension must be >= 1"));
        }
        let locations: Vec<i64> = (0..d as i64).collect();
        let field = GaussianIncrementModel::new(variogram).field(&locations)?;
        Ok(Self { variogram, field })
    }

    pub fn dim(&self) -> usize {
        self.field.locations().len()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<T> {
        self.sample_prefix(rng, self.dim())
    }

    /// Draws the process on `0..d` for any `d` up to [`Self::dim`].
    pub fn sample_prefix<R: Rng>(&self, rng: &mut R, d: usize) -> Vec<T> {
        assert!(d >= 1 && d <= self.dim());
        let gammas: Vec<T> = (0..d as i64).map(|h| self.variogram.gamma(h)).collect();
        let mut z = vec![T::zero(); d];
        let mut y = vec![T::zero(); d];
        for k in 0..d {
            let mut arrival: f64 = rng.sample(Exp1);
            let mut zeta = T::lit(1.0 / arrival);
            while zeta > z[k] {
                let g = self.field.sample_prefix(rng, d);
                let gk = g[k];
                for j in 0..d {
                    y[j] = (g[j] - gk - gammas[j.abs_diff(k)]).exp();
                }
                if (0..k).all(|j| zeta * y[j] < z[j]) {
                    for j in 0..d {
                        z[j] = z[j].max(zeta * y[j]);
                    }
                }
                arrival += rng.sample::<f64, _>(Exp1);
                zeta = T::lit(1.0 / arrival);
            }
        }
        z
    }
}

/// One Brown–Resnick vector of dimension `d`.
pub fn simulate_brown_resnick<T: Real>(model: &ModelSpec<T>, d: usize, seed: u64) -> Result<Vec<T>> {
    let variogram = brown_resnick_variogram(model)?;
    let sampler = BrownResnick::new(variogram, d)?;
    Ok(sampler.sample(&mut stream_rng(seed, 0)))
}

/// A length-`n` path made of independent Brown–Resnick blocks of length
/// `block_len` (the last block may be shorter). Each block is its own
/// segment, so no cluster straddles a block boundary. Block `i` uses RNG
/// stream `i`, making the output independent of the thread count.
pub fn simulate_brown_resnick_path<T: Real>(
    model: &ModelSpec<T>,
    n: usize,
    block_len: usize,
    seed: u64,
) -> Result<SegmentedSeries<T>> {
    let variogram = brown_resnick_variogram(model)?;
    if n == 0 {
        return Err(Error::invalid("path length must be >= 1"));
    }
    if block_len == 0 || block_len > MAX_BLOCK_LEN {
        return Err(Error::invalid(format!(
            "block length {block_len} outside 1..={MAX_BLOCK_LEN}"
        )));
    }
    let d = block_len.min(n);
    let sampler = BrownResnick::new(variogram, d)?;
    let n_blocks = n.div_ceil(d);
    let segments: Vec<Vec<T>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let len = d.min(n - b * d);
            sampler.sample_prefix(&mut stream_rng(seed, b as u64), len)
        })
        .collect();
    SegmentedSeries::new(segments)
}

fn brown_resnick_variogram<T: Real>(model: &ModelSpec<T>) -> Result<PowerVariogram<T>> {
    match model {
        ModelSpec::BrownResnick { variogram } => {
            variogram.validate()?;
            Ok(*variogram)
        }
        other => Err(Error::invalid(format!(
            "expected a brown_resnick model, got {}",
            other.name()
        ))),
    }
}
