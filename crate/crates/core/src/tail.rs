//! Indicator-sum and ratio estimators on sliding windows.
//!
//! A window at position `k` of a segment covers `x_{k-1}, ..., x_{k+t}`; only
//! windows lying entirely inside one segment are used. Ratios take numerator
//! and denominator over the same window range, so `R(A0, A0) = 1` exactly.

use crate::blocks::BlockLayout;
use crate::error::{Error, Result};
use crate::estimate::{Atom, DistributionEstimate, Method};
use crate::event::WindowEvent;
use crate::ordinal::{all_patterns, descending_order, OrdinalPattern, MAX_PATTERN_LEN};
use crate::real::Real;
use crate::series::SegmentedSeries;

/// Empirical window probability: `value = count / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowCount<T> {
    pub value: T,
    pub count: u64,
    pub n: u64,
}

/// Calls `f(segment, k, window)` for every complete window of `span`
/// observations, where `k` is the position of offset 0. Returns the number of windows.
fn for_each_window<T: Real>(
    series: &SegmentedSeries<T>,
    span: usize,
    mut f: impl FnMut(usize, usize, &[T]),
) -> u64 {
    let mut n = 0;
    for (s, seg) in series.segments().iter().enumerate() {
        if seg.len() < span {
            continue;
        }
        for (start, w) in seg.windows(span).enumerate() {
            f(s, start + 1, w);
        }
        n += (seg.len() - span + 1) as u64;
    }
    n
}

fn too_short(span: usize) -> Error {
    Error::invalid(format!("every segment is shorter than the window span {span}"))
}

/// `P̂(A) = (1/n) Σ_k 1{(x_{k-1}, ..., x_{k+t}) ∈ uA}` over all complete windows.
pub fn p_hat<T: Real>(series: &SegmentedSeries<T>, u: T, event: &WindowEvent) -> Result<WindowCount<T>> {
    let mut count = 0u64;
    let n = for_each_window(series, event.span(), |_, _, w| {
        if event.matches(w, u) {
            count += 1;
        }
    });
    if n == 0 {
        return Err(too_short(event.span()));
    }
    Ok(WindowCount { value: T::from_count(count) / T::from_count(n), count, n })
}

/// `R̂(A1, A0) = P̂(A1) / P̂(A0)`, both events padded to the longer window.
pub fn ratio_estimate<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    a1: &WindowEvent,
    a0: &WindowEvent,
) -> Result<T> {
    let t = a1.t().max(a0.t());
    let num = p_hat(series, u, &a1.padded(t))?;
    let den = p_hat(series, u, &a0.padded(t))?;
    if den.count == 0 {
        return Err(Error::no_data("denominator event never occurs"));
    }
    Ok(T::from_count(num.count) / T::from_count(den.count))
}

/// Per-block indicator sums for a family of ratio targets, indexed `[target][block]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCounts {
    pub numerators: Vec<Vec<u64>>,
    pub denominators: Vec<Vec<u64>>,
}

impl RatioCounts {
    pub fn n_targets(&self) -> usize {
        self.numerators.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.numerators.first().map_or(0, Vec::len)
    }

    pub fn totals(&self, target: usize) -> (u64, u64) {
        (self.numerators[target].iter().sum(), self.denominators[target].iter().sum())
    }
}

pub(crate) fn event_block_counts<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    event: &WindowEvent,
    layout: &BlockLayout,
) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; layout.n_blocks()];
    let n = for_each_window(series, event.span(), |s, k, w| {
        if event.matches(w, u) {
            counts[layout.block_of(s, k)] += 1;
        }
    });
    if n == 0 {
        return Err(too_short(event.span()));
    }
    Ok(counts)
}

/// Block counts for each `(A1, A0)` pair, padded pairwise to a common window.
pub fn ratio_block_counts<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    targets: &[(WindowEvent, WindowEvent)],
    layout: &BlockLayout,
) -> Result<RatioCounts> {
    let mut numerators = Vec::with_capacity(targets.len());
    let mut denominators = Vec::with_capacity(targets.len());
    for (a1, a0) in targets {
        let t = a1.t().max(a0.t());
        numerators.push(event_block_counts(series, u, &a1.padded(t), layout)?);
        denominators.push(event_block_counts(series, u, &a0.padded(t), layout)?);
    }
    Ok(RatioCounts { numerators, denominators })
}

/// Counts behind the cluster-size distribution.
///
/// Atom `l` (for `l <= l_max`) counts windows in `{x_{-1} <= u, x_0 > u, ..., x_{l-1} > u, x_l <= u}`.
/// The denominator counts cluster-start windows `{x_{-1} <= u, x_0 > u}` whose
/// run of exceedances ends inside the segment; the overflow atom takes the rest.
pub(crate) fn cluster_size_counts<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    l_max: usize,
    layout: &BlockLayout,
) -> Result<(Vec<Vec<u64>>, Vec<u64>)> {
    if l_max == 0 {
        return Err(Error::invalid("l_max must be >= 1"));
    }
    let nb = layout.n_blocks();
    let mut den = vec![0u64; nb];
    let n = for_each_window(series, 2, |s, k, w| {
        if w[0] <= u && w[1] > u {
            den[layout.block_of(s, k)] += 1;
        }
    });
    if n == 0 {
        return Err(too_short(2));
    }
    // A run reaching the right edge of its segment has no closing non-exceedance.
    for (s, seg) in series.segments().iter().enumerate() {
        let trailing = seg.iter().rev().take_while(|&&v| v > u).count();
        if trailing > 0 && trailing < seg.len() {
            den[layout.block_of(s, seg.len() - trailing)] -= 1;
        }
    }
    let mut atoms = Vec::with_capacity(l_max + 1);
    for l in 1..=l_max {
        let event = WindowEvent::cluster_of_size(l)?;
        let mut counts = vec![0u64; nb];
        for_each_window(series, event.span(), |s, k, w| {
            if event.matches(w, u) {
                counts[layout.block_of(s, k)] += 1;
            }
        });
        atoms.push(counts);
    }
    let overflow = (0..nb)
        .map(|b| den[b] - atoms.iter().map(|a| a[b]).sum::<u64>())
        .collect();
    atoms.push(overflow);
    Ok((atoms, den))
}

pub(crate) fn size_support(l_max: usize) -> Vec<Atom> {
    (1..=l_max).map(Atom::Size).chain(std::iter::once(Atom::Overflow(l_max))).collect()
}

/// Empirical distribution of the size of a randomly chosen u-exceedance cluster.
///
/// `prob[l]` equals (#clusters of size `l`) / (#clusters); sizes above `l_max`
/// are pooled into an overflow atom.
pub fn cluster_size_distribution<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    l_max: usize,
) -> Result<DistributionEstimate<T>> {
    let (atoms, den) = cluster_size_counts(series, u, l_max, &BlockLayout::whole(series))?;
    let den = den[0];
    if den == 0 {
        return Err(Error::no_data(format!("no complete exceedance clusters above {u}")));
    }
    let counts = atoms.iter().map(|a| a[0]).collect();
    Ok(DistributionEstimate::from_counts(size_support(l_max), counts, den, u, Method::Empirical))
}

/// Counts behind the pattern distribution, `[rank][block]` plus per-block denominators.
pub(crate) fn pattern_counts<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    len: usize,
    layout: &BlockLayout,
) -> Result<(Vec<Vec<u64>>, Vec<u64>)> {
    if len == 0 || len > MAX_PATTERN_LEN {
        return Err(Error::invalid(format!("pattern length {len} outside 1..={MAX_PATTERN_LEN}")));
    }
    let n_patterns = all_patterns(len)?.len();
    let event = WindowEvent::cluster_of_size(len)?;
    let nb = layout.n_blocks();
    let mut by_rank = vec![vec![0u64; nb]; n_patterns];
    let mut den = vec![0u64; nb];
    let n = for_each_window(series, event.span(), |s, k, w| {
        if event.matches(w, u) {
            let b = layout.block_of(s, k);
            let perm = descending_order(&w[1..=len]);
            let rank = OrdinalPattern::new(perm).expect("argsort is a permutation").rank();
            by_rank[rank as usize][b] += 1;
            den[b] += 1;
        }
    });
    if n == 0 {
        return Err(too_short(event.span()));
    }
    Ok((by_rank, den))
}

/// Empirical distribution of the ordinal pattern inside size-`len` clusters,
/// over all `len!` patterns (zero atoms included).
pub fn pattern_distribution<T: Real>(
    series: &SegmentedSeries<T>,
    u: T,
    len: usize,
) -> Result<DistributionEstimate<T>> {
    let (by_rank, den) = pattern_counts(series, u, len, &BlockLayout::whole(series))?;
    let den = den[0];
    if den == 0 {
        return Err(Error::no_data(format!("no clusters of size {len} above {u}")));
    }
    let support = all_patterns(len)?.into_iter().map(Atom::Pattern).collect();
    let counts = by_rank.iter().map(|c| c[0]).collect();
    Ok(DistributionEstimate::from_counts(support, counts, den, u, Method::Empirical))
}

/// Empirical extremogram `ρ̂(h) = Σ 1{x_k > u, x_{k+h} > u} / Σ 1{x_k > u}` for `h = 0..=h_max`.
pub fn extremogram<T: Real>(series: &SegmentedSeries<T>, u: T, h_max: usize) -> Result<Vec<T>> {
    if !series.segments().iter().any(|s| s.len() > h_max) {
        return Err(Error::invalid(format!("no segment is long enough for lag {h_max}")));
    }
    let exceed: u64 = series.values().filter(|&v| v > u).count() as u64;
    if exceed == 0 {
        return Err(Error::no_data(format!("no exceedances above {u}")));
    }
    let den = T::from_count(exceed);
    Ok((0..=h_max)
        .map(|h| {
            let joint: u64 = series
                .segments()
                .iter()
                .filter(|s| s.len() > h)
                .map(|s| s.iter().zip(&s[h..]).filter(|(&a, &b)| a > u && b > u).count() as u64)
                .sum();
            T::from_count(joint) / den
        })
        .collect())
}
