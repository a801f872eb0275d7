use crate::error::{Error, Result};
use crate::real::Real;

use super::{frechet, stream_rng};

/// Moving maximum `X_t = max(Z_t, Z_{t-2}) / 2` of length `n`.
pub fn simulate_moving_max<T: Real>(n: usize, seed: u64) -> Result<Vec<T>> {
    simulate_moving_max_with_noise(n, seed).map(|(x, _)| x)
}

/// Also returns the noise `z`, where `z[t + 2]` is `Z_t`.
pub fn simulate_moving_max_with_noise<T: Real>(n: usize, seed: u64) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 {
        return Err(Error::invalid("path length must be >= 1"));
    }
    let mut rng = stream_rng(seed, 0);
    let z: Vec<T> = (0..n + 2).map(|_| frechet(&mut rng)).collect();
    let half = T::lit(0.5);
    let x = (0..n).map(|t| half * z[t + 2].max(z[t])).collect();
    Ok((x, z))
}
