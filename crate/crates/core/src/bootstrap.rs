//! Multiplier block bootstrap for ratio estimators.
//!
//! Windows are grouped into blocks and reduced to per-block indicator sums
//! `(S1_b, S0_b)`. Replicate `r` draws `ξ_b ~ N(0, 1)` and forms
//! `R^(r) = Σ_b (1 + ξ_b) S1_b / Σ_b (1 + ξ_b) S0_b`; replicates with a
//! non-positive denominator are discarded. Intervals are percentile intervals
//! taken from symmetric order statistics of the kept replicates.
//!
//! Replicate `r` draws its multipliers from ChaCha8 stream `r` of `seed`, so
//! results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockLayout, BlockSpec};
use crate::error::{Error, Result};
use crate::estimate::{Atom, BootstrapMeta, DistributionEstimate, Method};
use crate::event::WindowEvent;
use crate::ordinal::all_patterns;
use crate::real::Real;
use crate::series::SegmentedSeries;
use crate::tail::{cluster_size_counts, pattern_counts, ratio_block_counts, size_support, RatioCounts};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub n_replicates: usize,
    pub block: BlockSpec,
    pub seed: u64,
    pub ci_level: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { n_replicates: 1000, block: BlockSpec::Segments, seed: 0, ci_level: 0.95 }
    }
}

impl BootstrapConfig {
    fn validate(&self) -> Result<()> {
        if self.n_replicates == 0 {
            return Err(Error::invalid("n_replicates must be positive"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::invalid(format!("ci_level {} outside (0, 1)", self.ci_level)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult<T> {
    pub intervals: Vec<(T, T)>,
    /// Kept replicate ratios, `[target][replicate]`.
    pub replicates: Vec<Vec<T>>,
    pub n_discarded: Vec<usize>,
    pub n_blocks: usize,
}

/// One-based order statistics `(k, R + 1 - k)` with `k = ⌈R (1 - level) / 2⌉`.
pub fn percentile_ranks(n: usize, ci_level: f64) -> (usize, usize) {
    let lo = crate::series::order_statistic_index(n, (1.0 - ci_level) / 2.0);
    (lo, n + 1 - lo)
}

fn multipliers(seed: u64, replicate: usize, n_blocks: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    (0..n_blocks).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Runs the multiplier bootstrap on precomputed block sums.
pub fn multiplier_bootstrap<T: Real>(counts: &RatioCounts, cfg: &BootstrapConfig) -> Result<BootstrapResult<T>> {
    cfg.validate()?;
    let nb = counts.n_blocks();
    if nb < 2 {
        return Err(Error::invalid(format!("multiplier bootstrap needs >= 2 blocks, got {nb}")));
    }
    let nt = counts.n_targets();
    // [replicate][target], None when discarded.
    let raw: Vec<Vec<Option<T>>> = (0..cfg.n_replicates)
        .into_par_iter()
        .map(|r| {
            let xi = multipliers(cfg.seed, r, nb);
            (0..nt)
                .map(|j| {
                    let mut num = T::zero();
                    let mut den = T::zero();
                    for (b, &x) in xi.iter().enumerate() {
                        let w = T::one() + T::lit(x);
                        num += w * T::from_count(counts.numerators[j][b]);
                        den += w * T::from_count(counts.denominators[j][b]);
                    }
                    (den > T::zero()).then(|| num / den)
                })
                .collect()
        })
        .collect();

    let mut intervals = Vec::with_capacity(nt);
    let mut replicates = Vec::with_capacity(nt);
    let mut n_discarded = Vec::with_capacity(nt);
    for j in 0..nt {
        let mut kept: Vec<T> = raw.iter().filter_map(|row| row[j]).collect();
        let discarded = cfg.n_replicates - kept.len();
        if 2 * discarded > cfg.n_replicates {
            return Err(Error::DegenerateBootstrap { discarded, total: cfg.n_replicates });
        }
        let mut sorted = kept.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (lo, hi) = percentile_ranks(sorted.len(), cfg.ci_level);
        intervals.push((sorted[lo - 1], sorted[hi - 1]));
        n_discarded.push(discarded);
        kept.shrink_to_fit();
        replicates.push(kept);
    }
    Ok(BootstrapResult { intervals, replicates, n_discarded, n_blocks: nb })
}

/// Bootstrap intervals for the ratio estimators `R̂(A1, A0)` of each target.
pub fn bootstrap_ci<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    targets: &[(WindowEvent, WindowEvent)],
    cfg: &BootstrapConfig,
) -> Result<BootstrapResult<T>> {
    cfg.validate()?;
    if let BlockSpec::Fixed(l) = cfg.block {
        let span = targets.iter().map(|(a, b)| a.span().max(b.span())).max().unwrap_or(2);
        if l < span {
            return Err(Error::invalid(format!("block length {l} shorter than window span {span}")));
        }
    }
    let layout = BlockLayout::new(series, cfg.block)?;
    let counts = ratio_block_counts(series, u, targets, &layout)?;
    multiplier_bootstrap(&counts, cfg)
}

fn common_denominator(atoms: Vec<Vec<u64>>, den: Vec<u64>) -> RatioCounts {
    let denominators = vec![den; atoms.len()];
    RatioCounts { numerators: atoms, denominators }
}

fn attach<T: Real>(
    mut est: DistributionEstimate<T>,
    counts: &RatioCounts,
    cfg: &BootstrapConfig,
) -> Result<DistributionEstimate<T>> {
    let res = multiplier_bootstrap::<T>(counts, cfg)?;
    est.set_intervals(&res.intervals);
    est.method = Method::Bootstrap;
    est.bootstrap = Some(BootstrapMeta {
        n_replicates: cfg.n_replicates,
        seed: cfg.seed,
        block_spec: cfg.block.to_string(),
        n_blocks: res.n_blocks,
        n_discarded: res.n_discarded.iter().copied().max().unwrap_or(0),
        ci_level: cfg.ci_level,
        interval: "percentile".into(),
        weights: "uncentered block sums, weights 1 + N(0,1)".into(),
    });
    Ok(est)
}

/// [`crate::cluster_size_distribution`] with multiplier-bootstrap intervals per atom.
pub fn cluster_size_distribution_bootstrap<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    l_max: usize,
    cfg: &BootstrapConfig,
) -> Result<DistributionEstimate<T>> {
    cfg.validate()?;
    let layout = BlockLayout::new(series, cfg.block)?;
    let (atoms, den) = cluster_size_counts(series, u, l_max, &layout)?;
    let total: u64 = den.iter().sum();
    if total == 0 {
        return Err(Error::no_data(format!("no complete exceedance clusters above {u}")));
    }
    let counts: Vec<u64> = atoms.iter().map(|a| a.iter().sum()).collect();
    let est = DistributionEstimate::from_counts(size_support(l_max), counts, total, u, Method::Empirical);
    attach(est, &common_denominator(atoms, den), cfg)
}

/// [`crate::pattern_distribution`] with multiplier-bootstrap intervals per pattern.
pub fn pattern_distribution_bootstrap<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    len: usize,
    cfg: &BootstrapConfig,
) -> Result<DistributionEstimate<T>> {
    cfg.validate()?;
    let layout = BlockLayout::new(series, cfg.block)?;
    let (by_rank, den) = pattern_counts(series, u, len, &layout)?;
    let total: u64 = den.iter().sum();
    if total == 0 {
        return Err(Error::no_data(format!("no clusters of size {len} above {u}")));
    }
    let support = all_patterns(len)?.into_iter().map(Atom::Pattern).collect();
    let counts: Vec<u64> = by_rank.iter().map(|a| a.iter().sum()).collect();
    let est = DistributionEstimate::from_counts(support, counts, total, u, Method::Empirical);
    attach(est, &common_denominator(by_rank, den), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tail::cluster_size_distribution;

    #[test]
    fn symmetric_order_statistics() {
        assert_eq!(percentile_ranks(1000, 0.95), (25, 976));
        assert_eq!(percentile_ranks(1, 0.95), (1, 1));
        assert_eq!(percentile_ranks(200, 0.9), (10, 191));
    }

    #[test]
    fn identical_blocks_give_zero_width() {
        let seg = vec![0.0f64, 5.0, 6.0, 0.0, 7.0, 0.0];
        let s = SegmentedSeries::new(vec![seg; 6]).unwrap();
        let a0 = WindowEvent::cluster_start();
        let a1 = WindowEvent::cluster_of_size(1).unwrap();
        let cfg = BootstrapConfig { n_replicates: 200, ..Default::default() };
        let res = bootstrap_ci(&s, 4.0, &[(a1, a0)], &cfg).unwrap();
        for r in &res.replicates[0] {
            assert!((r - 0.5).abs() < 1e-12);
        }
        let (lo, hi) = res.intervals[0];
        assert!((hi - lo).abs() < 1e-12);
    }

    #[test]
    fn needs_two_blocks() {
        let s = SegmentedSeries::single(vec![0.0, 5.0, 0.0]).unwrap();
        let pair = (WindowEvent::cluster_of_size(1).unwrap(), WindowEvent::cluster_start());
        let err = bootstrap_ci(&s, 4.0, &[pair], &BootstrapConfig::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn fixed_block_must_cover_window() {
        let s = SegmentedSeries::single(vec![0.0; 50]).unwrap();
        let pair = (WindowEvent::cluster_of_size(3).unwrap(), WindowEvent::cluster_start());
        let cfg = BootstrapConfig { block: BlockSpec::Fixed(4), ..Default::default() };
        assert!(bootstrap_ci(&s, 4.0, &[pair], &cfg).is_err());
    }

    #[test]
    fn empty_denominators_are_degenerate() {
        let s = SegmentedSeries::new(vec![vec![0.0; 5]; 30]).unwrap();
        let pair = (WindowEvent::cluster_of_size(1).unwrap(), WindowEvent::cluster_start());
        let cfg = BootstrapConfig { n_replicates: 400, ..Default::default() };
        let err = bootstrap_ci(&s, 4.0, &[pair], &cfg).unwrap_err();
        assert!(matches!(err, Error::DegenerateBootstrap { discarded: 400, total: 400 }));
    }

    fn noisy_series(seed: u64) -> SegmentedSeries<f64> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let segs = (0..40)
            .map(|_| (0..200).map(|_| rng.random::<f64>()).collect())
            .collect();
        SegmentedSeries::new(segs).unwrap()
    }

    #[test]
    fn deterministic_under_seed() {
        let s = noisy_series(3);
        let cfg = BootstrapConfig { seed: 11, ..Default::default() };
        let a = cluster_size_distribution_bootstrap(&s, 0.9, 3, &cfg).unwrap();
        let b = cluster_size_distribution_bootstrap(&s, 0.9, 3, &cfg).unwrap();
        assert_eq!(a, b);
        let point = cluster_size_distribution(&s, 0.9, 3).unwrap();
        assert_eq!(a.probs, point.probs);
        assert_eq!(a.method, Method::Bootstrap);
        for i in 0..a.probs.len() {
            assert!(a.ci_lo[i] <= a.probs[i] && a.probs[i] <= a.ci_hi[i]);
            assert!(a.ci_lo[i] >= 0.0 && a.ci_hi[i] <= 1.0);
        }
    }

    #[test]
    fn seed_changes_stay_within_replicate_error() {
        let s = noisy_series(5);
        let pair = (WindowEvent::cluster_of_size(1).unwrap(), WindowEvent::cluster_start());
        let run = |seed| {
            let cfg = BootstrapConfig { seed, n_replicates: 2000, ..Default::default() };
            bootstrap_ci(&s, 0.9, std::slice::from_ref(&pair), &cfg).unwrap()
        };
        let a = run(1);
        let b = run(2);
        let reps = &a.replicates[0];
        let mean = reps.iter().sum::<f64>() / reps.len() as f64;
        let sd = (reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / reps.len() as f64).sqrt();
        // Standard error of an extreme order statistic is of order sd / sqrt(R) times a density factor.
        let tol = 5.0 * sd * (0.025f64 * 0.975).sqrt() / (reps.len() as f64).sqrt() / 0.058;
        assert!((a.intervals[0].0 - b.intervals[0].0).abs() < tol);
        assert!((a.intervals[0].1 - b.intervals[0].1).abs() < tol);
        assert_ne!(a.intervals, b.intervals);
    }

    #[test]
    fn pattern_bootstrap_runs() {
        let s = noisy_series(9);
        let d = pattern_distribution_bootstrap(&s, 0.8, 2, &BootstrapConfig::default()).unwrap();
        assert_eq!(d.probs.len(), 2);
        assert!((d.total() - 1.0).abs() < 1e-12);
        assert!(d.bootstrap.unwrap().n_blocks == 40);
    }
}
