//! Assignment of window positions to bootstrap blocks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::series::SegmentedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSpec {
    /// One block per segment.
    Segments,
    /// Consecutive runs of `L` positions inside each segment; the last run
    /// of a segment may be shorter.
    Fixed(usize),
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockSpec::Segments => write!(f, "segments"),
            BlockSpec::Fixed(l) => write!(f, "fixed:{l}"),
        }
    }
}

impl FromStr for BlockSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "segments" {
            return Ok(BlockSpec::Segments);
        }
        let digits = s.strip_prefix("fixed:").unwrap_or(s);
        match digits.parse::<usize>() {
            Ok(l) if l > 0 => Ok(BlockSpec::Fixed(l)),
            _ => Err(Error::invalid(format!("block spec {s:?} is neither 'segments' nor a positive length"))),
        }
    }
}

/// Maps `(segment, position)` to a global block id.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    spec: BlockSpec,
    first_block: Vec<usize>,
    n_blocks: usize,
}

impl BlockLayout {
    pub fn new<T: Real>(series: &SegmentedSeries<T>, spec: BlockSpec) -> Result<Self> {
        let mut first_block = Vec::with_capacity(series.n_segments());
        let mut n_blocks = 0;
        for seg in series.segments() {
            first_block.push(n_blocks);
            n_blocks += match spec {
                BlockSpec::Segments => 1,
                BlockSpec::Fixed(0) => return Err(Error::invalid("block length must be positive")),
                BlockSpec::Fixed(l) => seg.len().div_ceil(l),
            };
        }
        Ok(Self { spec, first_block, n_blocks })
    }

    /// Layout with a single block, for point estimates that ignore blocking.
    pub fn whole<T: Real>(series: &SegmentedSeries<T>) -> Self {
        Self { spec: BlockSpec::Segments, first_block: vec![0; series.n_segments()], n_blocks: 1 }
    }

    pub fn spec(&self) -> BlockSpec {
        self.spec
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    #[inline]
    pub fn block_of(&self, segment: usize, position: usize) -> usize {
        match self.spec {
            BlockSpec::Segments => self.first_block[segment],
            BlockSpec::Fixed(l) => self.first_block[segment] + position / l,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts() {
        let s = SegmentedSeries::new(vec![vec![0.0; 5], vec![0.0; 2]]).unwrap();
        let seg = BlockLayout::new(&s, BlockSpec::Segments).unwrap();
        assert_eq!(seg.n_blocks(), 2);
        assert_eq!(seg.block_of(1, 1), 1);
        let fixed = BlockLayout::new(&s, BlockSpec::Fixed(2)).unwrap();
        assert_eq!(fixed.n_blocks(), 4);
        assert_eq!(fixed.block_of(0, 4), 2);
        assert_eq!(fixed.block_of(1, 0), 3);
        assert!(BlockLayout::new(&s, BlockSpec::Fixed(0)).is_err());
    }

    #[test]
    fn parse() {
        assert_eq!("segments".parse::<BlockSpec>().unwrap(), BlockSpec::Segments);
        assert_eq!("1000".parse::<BlockSpec>().unwrap(), BlockSpec::Fixed(1000));
        assert_eq!("fixed:7".parse::<BlockSpec>().unwrap(), BlockSpec::Fixed(7));
        assert!("0".parse::<BlockSpec>().is_err());
        assert!("weekly".parse::<BlockSpec>().is_err());
    }
}
