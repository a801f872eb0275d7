//! Window events `{(x_{-1}, ..., x_t) ∈ uA}` built from per-coordinate
//! threshold constraints and optional ordinal-pattern constraints.
//!
//! The same event is evaluated on data windows with the threshold `u` and on
//! tail-process windows with threshold 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::{descending_order, OrdinalPattern};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Any,
    /// `x <= u`
    AtMost,
    /// `x > u`
    Above,
    /// Contradictory constraint; the event is empty.
    Never,
}

impl Constraint {
    fn and(self, other: Constraint) -> Constraint {
        use Constraint::*;
        match (self, other) {
            (Never, _) | (_, Never) => Never,
            (Any, c) | (c, Any) => c,
            (AtMost, AtMost) => AtMost,
            (Above, Above) => Above,
            _ => Never,
        }
    }

    #[inline]
    fn holds<T: Real>(self, x: T, u: T) -> bool {
        match self {
            Constraint::Any => true,
            Constraint::AtMost => x <= u,
            Constraint::Above => x > u,
            Constraint::Never => false,
        }
    }
}

/// Requires `pattern_of(x_{start}, ..., x_{start+l-1}) == pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternConstraint {
    /// Offset of the first coordinate, relative to offset 0.
    pub start: usize,
    pub pattern: OrdinalPattern,
}

/// An event on windows covering offsets `-1, 0, ..., t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowEvent {
    t: usize,
    /// `constraints[i]` applies to offset `i - 1`.
    constraints: Vec<Constraint>,
    patterns: Vec<PatternConstraint>,
}

impl WindowEvent {
    /// `constraints` covers offsets `-1..=t`, so `t = constraints.len() - 2`.
    /// Offset 0 must require a strict exceedance.
    pub fn new(constraints: Vec<Constraint>, patterns: Vec<PatternConstraint>) -> Result<Self> {
        if constraints.len() < 2 {
            return Err(Error::invalid("window event needs constraints for offsets -1 and 0"));
        }
        if !matches!(constraints[1], Constraint::Above | Constraint::Never) {
            return Err(Error::invalid("window event must require x_0 > u"));
        }
        let t = constraints.len() - 2;
        for p in &patterns {
            if p.start + p.pattern.len() > t + 1 {
                return Err(Error::invalid(format!(
                    "pattern constraint at offsets {}..{} exceeds window span t = {t}",
                    p.start,
                    p.start + p.pattern.len()
                )));
            }
        }
        Ok(Self { t, constraints, patterns })
    }

    /// `{x_0 > u}`, window `(-1, 0)` with offset -1 unconstrained.
    pub fn exceedance() -> Self {
        Self::new(vec![Constraint::Any, Constraint::Above], vec![]).unwrap()
    }

    /// `{x_{-1} <= u, x_0 > u}`: a cluster starts at offset 0.
    pub fn cluster_start() -> Self {
        Self::new(vec![Constraint::AtMost, Constraint::Above], vec![]).unwrap()
    }

    /// `{x_{-1} <= u, x_0 > u, ..., x_{l-1} > u, x_l <= u}`.
    pub fn cluster_of_size(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("cluster size must be >= 1"));
        }
        let mut c = vec![Constraint::AtMost];
        c.extend(std::iter::repeat_n(Constraint::Above, size));
        c.push(Constraint::AtMost);
        Self::new(c, vec![])
    }

    /// A size-`l` cluster at offset 0 whose values follow `pattern`.
    pub fn cluster_with_pattern(pattern: OrdinalPattern) -> Result<Self> {
        let mut e = Self::cluster_of_size(pattern.len())?;
        e.patterns.push(PatternConstraint { start: 0, pattern });
        Ok(e)
    }

    /// `{x_0 > u, x_h > u}`.
    pub fn joint_exceedance(lag: usize) -> Self {
        let mut c = vec![Constraint::Any; lag + 2];
        c[1] = Constraint::Above;
        c[lag + 1] = Constraint::Above;
        Self::new(c, vec![]).unwrap()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of observations a window covers, `t + 2`.
    pub fn span(&self) -> usize {
        self.t + 2
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn patterns(&self) -> &[PatternConstraint] {
        &self.patterns
    }

    /// The same set viewed on a longer window: extra coordinates are unconstrained.
    pub fn padded(&self, t: usize) -> Self {
        let mut e = self.clone();
        if t > e.t {
            e.constraints.resize(t + 2, Constraint::Any);
            e.t = t;
        }
        e
    }

    /// Intersection of two events, on the longer of the two windows.
    pub fn and(&self, other: &WindowEvent) -> WindowEvent {
        let t = self.t.max(other.t);
        let a = self.padded(t);
        let b = other.padded(t);
        let constraints = a.constraints.iter().zip(&b.constraints).map(|(x, y)| x.and(*y)).collect();
        let mut patterns = a.patterns;
        patterns.extend(b.patterns);
        WindowEvent { t, constraints, patterns }
    }

    /// Evaluates the event on `window = (x_{-1}, ..., x_t)` with threshold `u`.
    pub fn matches<T: Real>(&self, window: &[T], u: T) -> bool {
        debug_assert_eq!(window.len(), self.span());
        if !self.constraints.iter().zip(window).all(|(c, &x)| c.holds(x, u)) {
            return false;
        }
        self.patterns.iter().all(|p| {
            let block = &window[p.start + 1..p.start + 1 + p.pattern.len()];
            block.iter().all(|v| v.is_finite()) && descending_order(block) == p.pattern.perm()
        })
    }
}
