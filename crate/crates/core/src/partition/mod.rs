//! Set partitions of a small ground set, their exact weights, and the colour
//! plan that hands every adjacency class a set of colours.
//!
//! Everything here is exact: weights are `BigRational`s and nothing rounds
//! except the final apportionment of whole colours, which uses exact
//! remainders.

mod plan;
mod weight;

pub use plan::{build_color_plan, plan_size_bounds, ColorPlan, SizeBoundReport, SizeViolation};
pub use weight::{
    partition_weight, partition_weight_with, weight_identity_check, weight_identity_check_with, IdentityReport, IdentityRow,
    WeightForm,
};

use std::fmt;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Largest ground set accepted by [`enumerate_partitions`] (Bell(10) = 115975).
pub const MAX_GROUND_SET: usize = 10;

/// A partition of `{0, .., l-1}` with blocks stored as bitmasks, sorted by
/// their smallest element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    l: usize,
    blocks: Vec<u32>,
}

impl SetPartition {
    /// Builds the canonical form; fails unless `blocks` are disjoint,
    /// nonempty and cover `0..l`.
    pub fn new(l: usize, mut blocks: Vec<u32>) -> Result<Self> {
        let full = ground_mask(l);
        let mut seen = 0u32;
        for &b in &blocks {
            if b == 0 || b & !full != 0 || b & seen != 0 {
                return Err(Error::InvalidArgument(format!("{blocks:?} is not a partition of {l} elements")));
            }
            seen |= b;
        }
        if seen != full {
            return Err(Error::InvalidArgument(format!("{blocks:?} does not cover {l} elements")));
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Ok(SetPartition { l, blocks })
    }

    /// From a restricted growth string: element `i` goes to block `rgs[i]`.
    fn from_rgs(rgs: &[usize]) -> Self {
        let count = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![0u32; count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b] |= 1 << i;
        }
        SetPartition { l: rgs.len(), blocks }
    }

    pub fn ground_size(&self) -> usize {
        self.l
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn has_block(&self, mask: u32) -> bool {
        self.blocks.contains(&mask)
    }

    /// The one-block partition `{X}`.
    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|&b| (0..self.l).filter(|i| b >> i & 1 == 1).collect())
            .collect();
        write!(f, "{blocks:?}")
    }
}

pub(crate) fn ground_mask(l: usize) -> u32 {
    if l == 0 {
        0
    } else {
        u32::MAX >> (32 - l)
    }
}

/// All partitions of an `l`-set, each once, ordered lexicographically by
/// restricted growth string (block labels assigned in order of first
/// appearance).
pub fn enumerate_partitions(l: usize) -> Result<Vec<SetPartition>> {
    if !(1..=MAX_GROUND_SET).contains(&l) {
        return Err(Error::InvalidArgument(format!("ground set size {l} not in 1..={MAX_GROUND_SET}")));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; l];
    // prefix_max[i] = max(rgs[0..i]) + 1, the largest label position i may take
    fn rec(i: usize, limit: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if i == rgs.len() {
            out.push(SetPartition::from_rgs(rgs));
            return;
        }
        for b in 0..=limit {
            rgs[i] = b;
            rec(i + 1, limit.max(b + 1), rgs, out);
        }
    }
    rec(1, 1, &mut rgs, &mut out);
    Ok(out)
}
