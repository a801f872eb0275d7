use crate::error::{Error, Result};
use crate::real::Real;

use super::{frechet, stream_rng};

/// Max-autoregressive path `X_t = max(a X_{t-1}, (1 - a) Z_t)` of length `n`,
/// started from the stationary unit-Fréchet law.
pub fn simulate_mar<T: Real>(a: T, n: usize, seed: u64) -> Result<Vec<T>> {
    simulate_mar_with_noise(a, n, seed).map(|(x, _)| x)
}

/// As [`simulate_mar`], also returning the noise: `z[0]` is the initial
/// draw `X_0`, `z[t]` for `t >= 1` is `Z_t`.
pub fn simulate_mar_with_noise<T: Real>(a: T, n: usize, seed: u64) -> Result<(Vec<T>, Vec<T>)> {
    if !(a >= T::zero() && a < T::one()) {
        return Err(Error::invalid(format!("MAR coefficient {a} outside [0, 1)")));
    }
    if n == 0 {
        return Err(Error::invalid("path length must be >= 1"));
    }
    let mut rng = stream_rng(seed, 0);
    let z: Vec<T> = (0..n).map(|_| frechet(&mut rng)).collect();
    let mut x = Vec::with_capacity(n);
    x.push(z[0]);
    let b = T::one() - a;
    for t in 1..n {
        x.push((a * x[t - 1]).max(b * z[t]));
    }
    Ok((x, z))
}
