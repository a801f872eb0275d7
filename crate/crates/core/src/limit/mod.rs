//! Oracles for limiting quantities: closed forms, tail-process Monte Carlo,
//! the asymptotic covariance of ratio estimators and mixing diagnostics.

mod covariance;
mod mc;
mod mixing;
mod tail_process;

pub use covariance::{asymptotic_covariance, asymptotic_half_widths, CovarianceResult, DEFAULT_H_CAP, H_TOLERANCE};
pub use mc::{limit_cluster_size_mc, limit_extremogram_mc, limit_pattern_mc, MIN_MC_DRAWS};
pub use mixing::{
    mixing_diagnostics, mixing_diagnostics_with, AlphaBoundRow, AnticlusteringRow, MixingReport, MixingRow, RateRow, RateSchedule, TrendCheck,
};
pub use tail_process::{tail_process_sample, TailProcessSampler};

use crate::error::{Error, Result};
use crate::estimate::{Atom, DistributionEstimate, Method};
use crate::real::Real;
use crate::simulate::PowerVariogram;

/// Limit cluster-size law of the MAR(1) process, `a^{l-1} (1 - a)`.
pub fn mar_limit_cluster_size<T: Real>(a: T, l: usize) -> Result<T> {
    if !(a >= T::zero() && a < T::one()) {
        return Err(Error::invalid(format!("MAR coefficient {a} outside [0, 1)")));
    }
    if l == 0 {
        return Err(Error::invalid("cluster size must be >= 1"));
    }
    Ok(a.powi(l as i32 - 1) * (T::one() - a))
}

/// The geometric law on `1..=l_max` plus the overflow atom `a^{l_max}`.
pub fn mar_limit_cluster_size_distribution<T: Real>(a: T, l_max: usize) -> Result<DistributionEstimate<T>> {
    if l_max == 0 {
        return Err(Error::invalid("l_max must be >= 1"));
    }
    let mut support: Vec<Atom> = (1..=l_max).map(Atom::Size).collect();
    support.push(Atom::Overflow(l_max));
    let mut probs = (1..=l_max).map(|l| mar_limit_cluster_size(a, l)).collect::<Result<Vec<T>>>()?;
    probs.push(a.powi(l_max as i32));
    let n = probs.len();
    Ok(DistributionEstimate {
        support,
        ci_lo: probs.clone(),
        ci_hi: probs.clone(),
        probs,
        counts: vec![0; n],
        denominator_count: 0,
        threshold: T::one(),
        method: Method::Analytic,
        se: Some(vec![T::zero(); n]),
        bootstrap: None,
    })
}

/// Brown–Resnick extremal coefficient `θ(h) = 2Φ(√(γ(h)/2))`.
pub fn extremal_coefficient<T: Real>(variogram: &PowerVariogram<T>, h: i64) -> Result<T> {
    variogram.validate()?;
    Ok(variogram.extremal_coefficient(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_values() {
        assert_eq!(mar_limit_cluster_size(0.5f64, 1).unwrap(), 0.5);
        assert_eq!(mar_limit_cluster_size(0.0f64, 1).unwrap(), 1.0);
        assert_eq!(mar_limit_cluster_size(0.0f64, 2).unwrap(), 0.0);
        let partial: f64 = (1..=50).map(|l| mar_limit_cluster_size(0.7f64, l).unwrap()).sum();
        assert!((partial - (1.0 - 0.7f64.powi(50))).abs() < 1e-7);
        assert!(mar_limit_cluster_size(1.0f64, 1).is_err());
    }

    #[test]
    fn analytic_distribution_sums_to_one() {
        let d = mar_limit_cluster_size_distribution(0.7f64, 5).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
        assert_eq!(d.method, Method::Analytic);
    }

    #[test]
    fn extremal_coefficient_limits() {
        let v = PowerVariogram::new(0.1f64, 1.75).unwrap();
        // Independent evaluation of 2Φ(√0.05) through erf.
        let direct = 1.0 + libm::erf(0.05f64.sqrt() / 2f64.sqrt());
        assert!((extremal_coefficient(&v, 1).unwrap() - direct).abs() < 1e-14);
        assert!((direct - 1.177).abs() < 1e-3);
        let vals: Vec<f64> = (0..60).map(|h| extremal_coefficient(&v, h).unwrap()).collect();
        assert_eq!(vals[0], 1.0);
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        assert!(2.0 - vals[59] < 1e-12);
    }
}
