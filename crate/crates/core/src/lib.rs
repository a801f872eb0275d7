//! Exceedance clusters of extremes in stationary time series.
//!
//! Detects u-exceedance clusters, estimates cluster-size and ordinal-pattern
//! distributions by window-count ratios, attaches multiplier block bootstrap
//! intervals, and provides oracles for the limiting quantities: closed
//! forms, tail-process Monte Carlo, the asymptotic covariance of the ratio
//! estimators and mixing diagnostics. Exact samplers for max-autoregressive,
//! moving-maximum and Brown–Resnick processes generate test data.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`.

// `!(x > 0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blocks;
pub mod bootstrap;
pub mod cluster;
pub mod error;
pub mod estimate;
pub mod event;
pub mod io;
pub mod limit;
pub mod linalg;
pub mod ordinal;
pub mod real;
pub mod series;
pub mod simulate;
pub mod tail;

pub use blocks::{BlockLayout, BlockSpec};
pub use bootstrap::{
    bootstrap_ci, cluster_size_distribution_bootstrap, multiplier_bootstrap, pattern_distribution_bootstrap,
    BootstrapConfig, BootstrapResult,
};
pub use cluster::{cluster_patterns, detect_clusters, Cluster, ClusterSet};
pub use error::{Error, Result};
pub use estimate::{Atom, BootstrapMeta, DistributionEstimate, Method};
pub use event::{Constraint, PatternConstraint, WindowEvent};
pub use ordinal::{all_patterns, pattern_of, OrdinalPattern, MAX_PATTERN_LEN};
pub use real::Real;
pub use series::{resolve_threshold, SegmentedSeries, ThresholdSpec};
pub use simulate::{ModelSpec, PowerVariogram};
pub use tail::{
    cluster_size_distribution, extremogram, p_hat, pattern_distribution, ratio_block_counts, ratio_estimate,
    RatioCounts, WindowCount,
};

pub type Series = SegmentedSeries<f64>;
pub type Series32 = SegmentedSeries<f32>;
pub type Clusters = ClusterSet<f64>;
pub type Estimate = DistributionEstimate<f64>;
pub type Model = ModelSpec<f64>;
pub type Variogram = PowerVariogram<f64>;
pub type Covariance = limit::CovarianceResult<f64>;
