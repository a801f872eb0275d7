//! Detection of u-exceedance clusters.
//!
//! A cluster of size `l` at offset `t` is a run `x_t, ..., x_{t+l-1} > u`
//! with `x_{t-1} <= u` and `x_{t+l} <= u`, both neighbours inside the same
//! segment. Runs touching a segment edge have no such neighbour and are only
//! counted in `n_boundary_truncated`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ordinal::{pattern_of, OrdinalPattern};
use crate::real::Real;
use crate::series::SegmentedSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster<T> {
    pub segment: usize,
    pub start: usize,
    pub size: usize,
    pub values: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet<T> {
    #[serde(rename = "threshold")]
    pub threshold_used: T,
    pub clusters: Vec<Cluster<T>>,
    pub n_exceedances_total: usize,
    pub n_boundary_truncated: usize,
}

impl<T: Real> ClusterSet<T> {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Number of clusters of each size `1..=max size`, index 0 unused.
    pub fn size_counts(&self) -> Vec<u64> {
        let max = self.clusters.iter().map(|c| c.size).max().unwrap_or(0);
        let mut counts = vec![0u64; max + 1];
        for c in &self.clusters {
            counts[c.size] += 1;
        }
        counts
    }
}

/// Finds every complete u-exceedance cluster in `series`.
pub fn detect_clusters<T: Real>(series: &SegmentedSeries<T>, u: T) -> ClusterSet<T> {
    let mut clusters = Vec::new();
    let mut n_exceedances_total = 0;
    let mut n_boundary_truncated = 0;
    for (seg_idx, seg) in series.segments().iter().enumerate() {
        let mut i = 0;
        while i < seg.len() {
            if seg[i] <= u {
                i += 1;
                continue;
            }
            let start = i;
            while i < seg.len() && seg[i] > u {
                i += 1;
            }
            n_exceedances_total += i - start;
            if start == 0 || i == seg.len() {
                n_boundary_truncated += 1;
            } else {
                clusters.push(Cluster {
                    segment: seg_idx,
                    start,
                    size: i - start,
                    values: seg[start..i].to_vec(),
                });
            }
        }
    }
    ClusterSet { threshold_used: u, clusters, n_exceedances_total, n_boundary_truncated }
}

/// Ordinal patterns of all clusters of size exactly `len`, in series order.
pub fn cluster_patterns<T: Real>(set: &ClusterSet<T>, len: usize) -> Result<Vec<OrdinalPattern>> {
    set.clusters
        .iter()
        .filter(|c| c.size == len)
        .map(|c| pattern_of(&c.values))
        .collect()
}
