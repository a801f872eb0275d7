//! Segmented observation series and threshold resolution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Observations split into independent stationary segments (e.g. winter seasons).
///
/// No window, cluster or lag pair ever spans two segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentedSeries<T> {
    segments: Vec<Vec<T>>,
    labels: Option<Vec<String>>,
}

impl<T: Real> SegmentedSeries<T> {
    /// Rejects empty segments and non-finite values.
    pub fn new(segments: Vec<Vec<T>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("series has no segments"));
        }
        for (s, seg) in segments.iter().enumerate() {
            if seg.is_empty() {
                return Err(Error::invalid(format!("segment {s} is empty")));
            }
            if let Some(i) = seg.iter().position(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("segment {s}: non-finite value at offset {i}")));
            }
        }
        Ok(Self { segments, labels: None })
    }

    pub fn single(values: Vec<T>) -> Result<Self> {
        Self::new(vec![values])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.segments.len() {
            return Err(Error::invalid(format!(
                "{} labels for {} segments",
                labels.len(),
                self.segments.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn segments(&self) -> &[Vec<T>] {
        &self.segments
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n_segments(&self) -> usize {
        self.segments.len()
    }

    /// Total number of observations over all segments.
    pub fn len(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        self.segments.iter().flatten().copied()
    }

    /// Applies `f` to every value, keeping segmentation and labels.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let segments = self
            .segments
            .iter()
            .map(|s| s.iter().map(|&v| f(v)).collect())
            .collect();
        let mut out = Self::new(segments)?;
        out.labels = self.labels.clone();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum ThresholdSpec<T> {
    Absolute(T),
    /// Probability level strictly inside (0, 1).
    Quantile(f64),
}

/// Resolves a threshold specification to a value on the data scale.
///
/// Quantile levels use the type-1 empirical quantile: the `⌈Nq⌉`-th order
/// statistic of all `N` pooled observations. `Nq` within `1e-9` of an integer
/// is snapped to it so that e.g. `q = 0.95`, `N = 100` picks the 95th value.
pub fn resolve_threshold<T: Real>(series: &SegmentedSeries<T>, spec: ThresholdSpec<T>) -> Result<T> {
    match spec {
        ThresholdSpec::Absolute(u) => {
            if !u.is_finite() {
                return Err(Error::invalid("threshold must be finite"));
            }
            Ok(u)
        }
        ThresholdSpec::Quantile(q) => {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::invalid(format!("quantile level {q} outside (0, 1)")));
            }
            let mut pooled: Vec<T> = series.values().collect();
            if pooled.is_empty() {
                return Err(Error::invalid("cannot take a quantile of an empty series"));
            }
            let k = order_statistic_index(pooled.len(), q);
            let (_, kth, _) = pooled.select_nth_unstable_by(k - 1, |a, b| a.partial_cmp(b).unwrap());
            Ok(*kth)
        }
    }
}

/// One-based index `⌈nq⌉`, clamped to `1..=n`.
pub(crate) fn order_statistic_index(n: usize, q: f64) -> usize {
    let x = n as f64 * q;
    let nearest = x.round();
    let k = if (x - nearest).abs() < 1e-9 { nearest } else { x.ceil() };
    (k as usize).clamp(1, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_examples() {
        let s = SegmentedSeries::new(vec![
            (1..=50).map(f64::from).collect(),
            (51..=100).rev().map(f64::from).collect(),
        ])
        .unwrap();
        assert_eq!(resolve_threshold(&s, ThresholdSpec::Quantile(0.95)).unwrap(), 95.0);
        assert_eq!(resolve_threshold(&s, ThresholdSpec::Quantile(0.951)).unwrap(), 96.0);
        assert_eq!(resolve_threshold(&s, ThresholdSpec::Absolute(4.2)).unwrap(), 4.2);
        let one = SegmentedSeries::single(vec![7.0f32]).unwrap();
        assert_eq!(resolve_threshold(&one, ThresholdSpec::Quantile(0.5)).unwrap(), 7.0);
    }

    #[test]
    fn quantile_level_must_be_interior() {
        let s = SegmentedSeries::single(vec![1.0, 2.0]).unwrap();
        for q in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(
                resolve_threshold(&s, ThresholdSpec::Quantile(q)),
                Err(Error::InvalidArgument(_))
            ));
        }
        assert!(resolve_threshold(&s, ThresholdSpec::Absolute(f64::NAN)).is_err());
    }

    #[test]
    fn construction_checks() {
        assert!(SegmentedSeries::<f64>::new(vec![]).is_err());
        assert!(SegmentedSeries::new(vec![vec![1.0], vec![]]).is_err());
        assert!(SegmentedSeries::new(vec![vec![1.0, f64::INFINITY]]).is_err());
        let s = SegmentedSeries::new(vec![vec![1.0], vec![2.0, 3.0]]).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.clone().with_labels(vec!["a".into()]).is_err());
        assert!(s.with_labels(vec!["a".into(), "b".into()]).is_ok());
    }

    #[test]
    fn order_statistic_index_snaps() {
        assert_eq!(order_statistic_index(1000, 0.025), 25);
        assert_eq!(order_statistic_index(1000, 0.975), 975);
        assert_eq!(order_statistic_index(10, 0.01), 1);
        assert_eq!(order_statistic_index(10, 0.999), 10);
    }
}
