//! Ordinal patterns of real vectors.
//!
//! The pattern of `(x_0, ..., x_{l-1})` is the permutation `π` that lists the
//! indices in descending order of value, `x_{π(0)} ≥ x_{π(1)} ≥ ... ≥ x_{π(l-1)}`.
//! Equal values keep their index order, so `π` is exactly the index sequence of
//! a stable descending sort. `perm[k]` stores `π(k)`, so the pattern of a
//! cluster whose middle value is largest prints as `[1, 0, 2]` or `[1, 2, 0]`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Largest pattern length accepted by [`all_patterns`] and the pattern estimators.
pub const MAX_PATTERN_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct OrdinalPattern {
    perm: Vec<usize>,
}

impl OrdinalPattern {
    /// Builds a pattern from `perm`, checking that it is a permutation of `0..l`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        if perm.is_empty() {
            return Err(Error::invalid("ordinal pattern must have length >= 1"));
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::invalid(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(len: usize) -> Self {
        Self { perm: (0..len).collect() }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Lehmer-code rank in `0..l!`; the identity has rank 0.
    pub fn rank(&self) -> u64 {
        let n = self.perm.len();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller = self.perm[i + 1..]
                .iter()
                .filter(|&&p| p < self.perm[i])
                .count() as u64;
            rank = rank * (n - i) as u64 + smaller;
        }
        rank
    }

    /// Inverse of [`OrdinalPattern::rank`].
    pub fn from_rank(len: usize, rank: u64) -> Result<Self> {
        if len == 0 || len > 20 {
            return Err(Error::invalid(format!("pattern length {len} outside 1..=20")));
        }
        let total = factorial(len);
        if rank >= total {
            return Err(Error::invalid(format!("rank {rank} >= {len}! = {total}")));
        }
        let mut digits = vec![0usize; len];
        let mut r = rank;
        for i in (0..len).rev() {
            let base = (len - i) as u64;
            digits[i] = (r % base) as usize;
            r /= base;
        }
        let mut pool: Vec<usize> = (0..len).collect();
        let perm = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Self { perm })
    }
}

impl TryFrom<Vec<usize>> for OrdinalPattern {
    type Error = Error;

    fn try_from(perm: Vec<usize>) -> Result<Self> {
        Self::new(perm)
    }
}

impl From<OrdinalPattern> for Vec<usize> {
    fn from(p: OrdinalPattern) -> Self {
        p.perm
    }
}

impl fmt::Display for OrdinalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.perm.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Ordinal pattern of `values`.
///
/// Rejects empty input and non-finite values.
pub fn pattern_of<T: Real>(values: &[T]) -> Result<OrdinalPattern> {
    if values.is_empty() {
        return Err(Error::invalid("pattern_of needs at least one value"));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite value at index {i}")));
    }
    Ok(OrdinalPattern { perm: descending_order(values) })
}

// Caller guarantees finiteness.
pub(crate) fn descending_order<T: Real>(values: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    // `sort_by` is stable, so ties keep ascending index order.
    idx.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap_or(Ordering::Equal));
    idx
}

/// All `l!` patterns of length `l`, ordered by rank.
pub fn all_patterns(len: usize) -> Result<Vec<OrdinalPattern>> {
    if len == 0 || len > MAX_PATTERN_LEN {
        return Err(Error::invalid(format!(
            "pattern length {len} outside 1..={MAX_PATTERN_LEN}"
        )));
    }
    (0..factorial(len))
        .map(|r| OrdinalPattern::from_rank(len, r))
        .collect()
}
