//! Probability mass estimates over cluster sizes or ordinal patterns.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ordinal::OrdinalPattern;
use crate::real::Real;

/// A support point of a [`DistributionEstimate`].
///
/// Serialized as an integer for sizes, `">l_max"` for the overflow atom and a
/// permutation array for patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Size(usize),
    /// All sizes strictly larger than the contained bound.
    Overflow(usize),
    Pattern(OrdinalPattern),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Size(l) => write!(f, "{l}"),
            Atom::Overflow(l) => write!(f, ">{l}"),
            Atom::Pattern(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AtomRepr {
    Size(usize),
    Label(String),
    Pattern(OrdinalPattern),
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Atom::Size(l) => AtomRepr::Size(*l),
            Atom::Overflow(l) => AtomRepr::Label(format!(">{l}")),
            Atom::Pattern(p) => AtomRepr::Pattern(p.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match AtomRepr::deserialize(d)? {
            AtomRepr::Size(l) => Ok(Atom::Size(l)),
            AtomRepr::Pattern(p) => Ok(Atom::Pattern(p)),
            AtomRepr::Label(s) => s
                .strip_prefix('>')
                .and_then(|n| n.parse().ok())
                .map(Atom::Overflow)
                .ok_or_else(|| serde::de::Error::custom(format!("bad atom label {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Empirical,
    Bootstrap,
    Asymptotic,
    Analytic,
    LimitMc,
}

/// Provenance of bootstrap intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapMeta {
    pub n_replicates: usize,
    pub seed: u64,
    pub block_spec: String,
    pub n_blocks: usize,
    pub n_discarded: usize,
    pub ci_level: f64,
    pub interval: String,
    pub weights: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEstimate<T> {
    pub support: Vec<Atom>,
    pub probs: Vec<T>,
    pub ci_lo: Vec<T>,
    pub ci_hi: Vec<T>,
    pub counts: Vec<u64>,
    pub denominator_count: u64,
    pub threshold: T,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<BootstrapMeta>,
}

impl<T: Real> DistributionEstimate<T> {
    /// Count-ratio estimate `counts[i] / denominator`; intervals start out degenerate.
    pub(crate) fn from_counts(
        support: Vec<Atom>,
        counts: Vec<u64>,
        denominator_count: u64,
        threshold: T,
        method: Method,
    ) -> Self {
        let den = T::from_count(denominator_count);
        let probs: Vec<T> = counts.iter().map(|&c| T::from_count(c) / den).collect();
        Self {
            support,
            ci_lo: probs.clone(),
            ci_hi: probs.clone(),
            probs,
            counts,
            denominator_count,
            threshold,
            method,
            se: None,
            bootstrap: None,
        }
    }

    pub fn prob_of(&self, atom: &Atom) -> Option<T> {
        self.support.iter().position(|a| a == atom).map(|i| self.probs[i])
    }

    pub fn total(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// Installs intervals clipped to `[0, 1]` and widened to contain the point estimate.
    pub fn set_intervals(&mut self, intervals: &[(T, T)]) {
        assert_eq!(intervals.len(), self.probs.len());
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            let p = self.probs[i];
            self.ci_lo[i] = lo.max(T::zero()).min(p);
            self.ci_hi[i] = hi.min(T::one()).max(p);
        }
    }

    /// Symmetric normal intervals `p ± z·se`, clipped.
    pub(crate) fn set_normal_intervals(&mut self, se: Vec<T>, z: T) {
        let iv: Vec<(T, T)> = self
            .probs
            .iter()
            .zip(&se)
            .map(|(&p, &s)| (p - z * s, p + z * s))
            .collect();
        self.set_intervals(&iv);
        self.se = Some(se);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_json() {
        let atoms = vec![
            Atom::Size(3),
            Atom::Overflow(10),
            Atom::Pattern(OrdinalPattern::new(vec![1, 0]).unwrap()),
        ];
        let s = serde_json::to_string(&atoms).unwrap();
        assert_eq!(s, r#"[3,">10",[1,0]]"#);
        let back: Vec<Atom> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, atoms);
        assert!(serde_json::from_str::<Atom>(r#""x""#).is_err());
    }

    #[test]
    fn intervals_are_clipped_and_contain_estimate() {
        let mut d = DistributionEstimate::<f64>::from_counts(
            vec![Atom::Size(1), Atom::Size(2)],
            vec![3, 1],
            4,
            1.0,
            Method::Empirical,
        );
        d.set_intervals(&[(0.8, 1.3), (-0.1, 0.2)]);
        assert_eq!(d.ci_lo, vec![0.75, 0.0]);
        assert_eq!(d.ci_hi, vec![1.0, 0.25]);
        assert_eq!(d.total(), 1.0);
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["method"], "empirical");
        assert!(json.get("se").is_none());
    }
}
