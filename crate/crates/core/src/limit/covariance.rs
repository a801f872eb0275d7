use serde::Serialize;

use crate::error::{Error, Result};
use crate::event::WindowEvent;
use crate::linalg::Matrix;
use crate::real::{normal_quantile, Real};

use super::mc::{tally, MIN_MC_DRAWS};
use super::TailProcessSampler;

/// Upper limit for the automatically chosen lag truncation.
pub const DEFAULT_H_CAP: usize = 200;
/// Lagged terms below this estimated size end the automatic truncation.
pub const H_TOLERANCE: f64 = 1e-4;

/// Monte Carlo estimate of the asymptotic covariance of the ratio
/// estimators `μ(A_i) / μ(A_0)`, `i = 1..=N`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Real")]
pub struct CovarianceResult<T> {
    /// `(N+1) × (N+1)` covariance of the normalized window counts.
    pub sigma: Matrix<T>,
    /// `N × N` covariance of the ratios, `μ(A_0)^{-4} F Σ Fᵀ`.
    pub transformed: Matrix<T>,
    pub mu_values: Vec<T>,
    pub truncation_h: usize,
    /// Standard errors of the entries of `sigma`.
    pub mc_se: Matrix<T>,
    /// Largest entry of the last included lag term.
    pub remainder: T,
    pub n_mc: usize,
}

impl<T: Real> CovarianceResult<T> {
    pub fn min_eigenvalue(&self) -> T {
        self.sigma
            .symmetric_eigenvalues()
            .into_iter()
            .fold(T::infinity(), |a, b| a.min(b))
    }

    pub fn max_mc_se(&self) -> T {
        self.mc_se.max_abs()
    }
}

/// Indicators `ind[j * (h_max + 1) + h]` of `A_j` at lag `h` on a draw.
fn lag_indicators<T: Real>(events: &[WindowEvent], y: &[T], h_max: usize, ind: &mut [bool]) {
    let span = events[0].span();
    for (j, e) in events.iter().enumerate() {
        for h in 0..=h_max {
            ind[j * (h_max + 1) + h] = e.matches(&y[h..h + span], T::one());
        }
    }
}

/// `σ_jl = μ(A_j ∩ A_l) + Σ_{h=1}^{H} [P(A_j at 0, A_l at h) + P(A_l at 0, A_j at h)]`
/// on the tail process. With `h_trunc = None` a pilot run picks the
/// smallest `H` beyond which every lagged term is below [`H_TOLERANCE`],
/// capped at [`DEFAULT_H_CAP`]. Events are padded to a common window.
pub fn asymptotic_covariance<T: Real>(
    sampler: &TailProcessSampler<T>,
    events: &[WindowEvent],
    h_trunc: Option<usize>,
    n_mc: usize,
    seed: u64,
) -> Result<CovarianceResult<T>> {
    if events.is_empty() {
        return Err(Error::invalid("asymptotic covariance needs at least the event A_0"));
    }
    if n_mc < MIN_MC_DRAWS {
        return Err(Error::invalid(format!("n_mc = {n_mc} below the minimum {MIN_MC_DRAWS}")));
    }
    if h_trunc == Some(0) {
        return Err(Error::invalid("h_trunc must be >= 1"));
    }
    let t = events.iter().map(|e| e.t()).max().unwrap_or(0);
    let events: Vec<WindowEvent> = events.iter().map(|e| e.padded(t)).collect();
    let k = events.len();
    let h = match h_trunc {
        Some(h) => h,
        None => pilot_truncation(sampler, &events, n_mc, seed)?,
    };

    let sampler = sampler.with_end(t + h)?;
    let kk = k * k;
    // Layout: [sum f | sum f² | last-lag term | μ counts].
    let acc = tally(&sampler, n_mc, seed, 3 * kk + k, |y, acc| {
        let mut ind = vec![false; k * (h + 1)];
        lag_indicators(&events, y, h, &mut ind);
        let at = |j: usize, lag: usize| ind[j * (h + 1) + lag] as u64;
        for j in 0..k {
            acc[3 * kk + j] += at(j, 0);
            for l in 0..k {
                let mut f = at(j, 0) * at(l, 0);
                for lag in 1..=h {
                    f += at(j, 0) * at(l, lag) + at(l, 0) * at(j, lag);
                }
                acc[j * k + l] += f;
                acc[kk + j * k + l] += f * f;
                acc[2 * kk + j * k + l] += at(j, 0) * at(l, h) + at(l, 0) * at(j, h);
            }
        }
    });

    let n = T::from_count(n_mc as u64);
    let sigma = Matrix::from_fn(k, k, |j, l| T::from_count(acc[j * k + l]) / n);
    let mc_se = Matrix::from_fn(k, k, |j, l| {
        let m = sigma[(j, l)];
        let m2 = T::from_count(acc[kk + j * k + l]) / n;
        ((m2 - m * m).max(T::zero()) / n).sqrt()
    });
    let remainder = (0..kk)
        .map(|i| T::from_count(acc[2 * kk + i]) / n)
        .fold(T::zero(), |a, b| a.max(b));
    let mu_values: Vec<T> = (0..k).map(|j| T::from_count(acc[3 * kk + j]) / n).collect();
    let mu0 = mu_values[0];
    if !(mu0 > T::zero()) {
        return Err(Error::no_data("no tail-process draws fall in A_0"));
    }
    let f = Matrix::from_fn(k - 1, k, |i, c| {
        if c == 0 {
            -mu_values[i + 1]
        } else if c == i + 1 {
            mu0
        } else {
            T::zero()
        }
    });
    let transformed = f.congruence(&sigma).scale(mu0.powi(-4));
    Ok(CovarianceResult { sigma, transformed, mu_values, truncation_h: h, mc_se, remainder, n_mc })
}

fn pilot_truncation<T: Real>(
    sampler: &TailProcessSampler<T>,
    events: &[WindowEvent],
    n_mc: usize,
    seed: u64,
) -> Result<usize> {
    let t = events[0].t();
    let cap = DEFAULT_H_CAP;
    let pilot = sampler.with_end(t + cap)?;
    let k = events.len();
    let kk = k * k;
    // Slot (lag - 1) * kk + j * k + l counts A_j at 0 and A_l at lag.
    let acc = tally(&pilot, n_mc, seed ^ 0x9e37_79b9_7f4a_7c15, cap * kk, |y, acc| {
        let mut ind = vec![false; k * (cap + 1)];
        lag_indicators(events, y, cap, &mut ind);
        for j in 0..k {
            if !ind[j * (cap + 1)] {
                continue;
            }
            for l in 0..k {
                for lag in 1..=cap {
                    if ind[l * (cap + 1) + lag] {
                        acc[(lag - 1) * kk + j * k + l] += 1;
                    }
                }
            }
        }
    });
    let n = n_mc as f64;
    let term = |lag: usize, j: usize, l: usize| {
        (acc[(lag - 1) * kk + j * k + l] + acc[(lag - 1) * kk + l * k + j]) as f64 / n
    };
    let last_big = (1..=cap)
        .rev()
        .find(|&lag| (0..k).any(|j| (0..k).any(|l| term(lag, j, l) >= H_TOLERANCE)));
    Ok(match last_big {
        None => 1,
        Some(lag) => (lag + 1).min(cap),
    })
}

/// Half-widths `z · sqrt(V_ii / n_exc)` of normal intervals for the ratios,
/// using the observed number of exceedances in place of `n P(X_0 > u)`.
pub fn asymptotic_half_widths<T: Real>(cov: &CovarianceResult<T>, n_exceedances: u64, ci_level: f64) -> Result<Vec<T>> {
    if n_exceedances == 0 {
        return Err(Error::no_data("no exceedances for asymptotic intervals"));
    }
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(Error::invalid(format!("ci_level {ci_level} outside (0, 1)")));
    }
    let z = normal_quantile(T::lit(0.5 + ci_level / 2.0));
    let n = T::from_count(n_exceedances);
    Ok((0..cov.transformed.rows())
        .map(|i| z * (cov.transformed[(i, i)].max(T::zero()) / n).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{ModelSpec, PowerVariogram};

    #[test]
    fn independent_tail_has_no_lag_terms() {
        let s = TailProcessSampler::new(ModelSpec::Mar { a: 0.0f64 }, 1).unwrap();
        let events = [WindowEvent::cluster_start()];
        let cov = asymptotic_covariance(&s, &events, Some(3), 5000, 1).unwrap();
        assert_eq!(cov.sigma[(0, 0)], cov.mu_values[0]);
        assert_eq!(cov.mu_values[0], 1.0);
        assert_eq!(cov.transformed.rows(), 0);
    }

    #[test]
    fn mar_cluster_start_variance() {
        // For MAR, A_0 = {Y_-1 <= 1}: μ(A_0) = 1 - a and lagged terms vanish
        // because Y_h <= 1 at the lags where A_0 could recur.
        let a = 0.5f64;
        let s = TailProcessSampler::new(ModelSpec::Mar { a }, 1).unwrap();
        let events = [WindowEvent::cluster_start(), WindowEvent::cluster_of_size(1).unwrap()];
        let cov = asymptotic_covariance(&s, &events, None, 50_000, 2).unwrap();
        assert!((cov.mu_values[0] - 0.5).abs() < 3.0 * (0.25f64 / 50_000.0).sqrt());
        assert!(cov.sigma.is_symmetric());
        assert!(cov.transformed.is_symmetric());
        assert!(cov.truncation_h >= 1 && cov.truncation_h <= DEFAULT_H_CAP);
        assert!(cov.min_eigenvalue() >= -3.0 * cov.max_mc_se());
        let hw = asymptotic_half_widths(&cov, 1000, 0.95).unwrap();
        assert_eq!(hw.len(), 1);
        assert!(hw[0] > 0.0);
    }

    #[test]
    fn br_truncation_is_adaptive() {
        let v = PowerVariogram::new(0.1f64, 1.75).unwrap();
        let s = TailProcessSampler::new(ModelSpec::BrownResnick { variogram: v }, 1).unwrap();
        let events = [WindowEvent::cluster_start(), WindowEvent::cluster_of_size(1).unwrap()];
        let cov = asymptotic_covariance(&s, &events, None, 5000, 3).unwrap();
        assert!(cov.truncation_h > 1 && cov.truncation_h < 60, "{}", cov.truncation_h);
        assert!(cov.remainder < 1e-2);
    }

    #[test]
    fn rejects_bad_input() {
        let s = TailProcessSampler::new(ModelSpec::Mar { a: 0.5f64 }, 1).unwrap();
        assert!(asymptotic_covariance(&s, &[], Some(1), 5000, 0).is_err());
        assert!(asymptotic_covariance(&s, &[WindowEvent::exceedance()], Some(0), 5000, 0).is_err());
    }
}
