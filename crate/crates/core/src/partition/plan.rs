use std::collections::BTreeMap;
use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{enumerate_partitions, ground_mask, partition_weight, Rational, SetPartition};
use crate::error::{Error, Result};
use crate::game::Colour;

/// One partition of the plan with its weight and its colour interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedPartition {
    pub partition: SetPartition,
    pub weight: Rational,
    /// Half-open, 1-based.
    pub colours: Range<Colour>,
}

/// The subset-to-colours map over a ground set of size `l`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColorPlan {
    l: usize,
    k: u32,
    num_colours: u32,
    partitions: Vec<PlannedPartition>,
    subset_colours: Vec<Vec<Colour>>,
}

impl ColorPlan {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn num_colours(&self) -> u32 {
        self.num_colours
    }

    pub fn partitions(&self) -> &[PlannedPartition] {
        &self.partitions
    }

    /// Colours assigned to the subset with bitmask `mask`, ascending.
    pub fn colours_for(&self, mask: u32) -> &[Colour] {
        &self.subset_colours[mask as usize]
    }

    /// Total length of all intervals.
    pub fn allocated(&self) -> u32 {
        self.partitions.iter().map(|p| p.colours.end - p.colours.start).sum()
    }

    /// Union of the colour sets of all subsets containing element `x`.
    pub fn seen_by(&self, x: usize) -> Vec<Colour> {
        let mut seen = vec![false; self.num_colours as usize + 1];
        for (mask, cols) in self.subset_colours.iter().enumerate() {
            if mask >> x & 1 == 1 {
                for &c in cols {
                    seen[c as usize] = true;
                }
            }
        }
        (1..=self.num_colours).filter(|&c| seen[c as usize]).collect()
    }

    /// Every element sees the whole palette.
    pub fn coverage_holds(&self) -> bool {
        (0..self.l).all(|x| self.seen_by(x).len() == self.num_colours as usize)
    }

    /// `{"l", "k", "num_colours", "subsets": {mask: [colours]}}`; empty
    /// subsets are omitted.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Export<'a> {
            l: usize,
            k: u32,
            num_colours: u32,
            subsets: BTreeMap<u32, &'a [Colour]>,
        }
        let subsets = self
            .subset_colours
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_empty())
            .map(|(m, c)| (m as u32, c.as_slice()))
            .collect();
        serde_json::to_value(Export { l: self.l, k: self.k, num_colours: self.num_colours, subsets })
            .expect("plan export is plain data")
    }
}

/// Distributes colours `1..=num_colours` over the non-trivial partitions of an
/// `l`-set in proportion to their weights (largest remainder, ties to the
/// earlier partition), then maps each subset to the union of the intervals
/// of the partitions that contain it as a block.
///
/// For `l = 1` the only partition is kept, since dropping it would leave
/// nothing to distribute.
pub fn build_color_plan(l: usize, k: u32, num_colours: u32) -> Result<ColorPlan> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let mut partitions = enumerate_partitions(l)?;
    if l >= 2 {
        partitions.retain(|t| !t.is_trivial());
    }
    let weights: Vec<Rational> = partitions.iter().map(|t| partition_weight(t, k, l)).collect();
    let total: Rational = weights.iter().sum();
    if total.is_zero() {
        return Err(Error::InvalidArgument(format!("no partition of {l} elements has positive weight at k={k}")));
    }
    let positive = weights.iter().filter(|w| !w.is_zero()).count();
    if (num_colours as usize) < positive {
        return Err(Error::InvalidArgument(format!(
            "{num_colours} colours cannot cover {positive} positive-weight partitions"
        )));
    }

    let quotas: Vec<Rational> = weights.iter().map(|w| w * BigInt::from(num_colours) / &total).collect();
    let mut sizes: Vec<u32> = quotas.iter().map(|q| q.floor().to_integer().to_u32().expect("quota fits")).collect();
    let leftover = num_colours - sizes.iter().sum::<u32>();
    let mut order: Vec<usize> = (0..partitions.len()).filter(|&i| !weights[i].is_zero()).collect();
    // stable sort keeps canonical order among equal remainders
    order.sort_by(|&a, &b| quotas[b].fract().cmp(&quotas[a].fract()));
    for &i in order.iter().take(leftover as usize) {
        sizes[i] += 1;
    }
    if let Some(i) = (0..partitions.len()).find(|&i| !weights[i].is_zero() && sizes[i] == 0) {
        return Err(Error::InvalidArgument(format!(
            "{num_colours} colours leave partition {:?} empty",
            partitions[i]
        )));
    }

    let mut next: Colour = 1;
    let mut planned = Vec::with_capacity(partitions.len());
    let mut subset_colours = vec![Vec::new(); 1usize << l];
    for ((partition, weight), size) in partitions.into_iter().zip(weights).zip(sizes) {
        let colours = next..next + size;
        next += size;
        for &b in partition.blocks() {
            subset_colours[b as usize].extend(colours.clone());
        }
        planned.push(PlannedPartition { partition, weight, colours });
    }
    for cols in &mut subset_colours {
        cols.sort_unstable();
    }
    Ok(ColorPlan { l, k, num_colours, partitions: planned, subset_colours })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeViolation {
    pub subset: u32,
    pub colours: usize,
    pub class_size: usize,
    /// `(1 - eta) * class_size / 2`.
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeBoundReport {
    pub checked: usize,
    pub violations: Vec<SizeViolation>,
}

impl SizeBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|f(I)| <= (1 - eta) |X_I| / 2` for every subset `I`.
/// `class_sizes[mask]` is `|X_I|`; missing entries count as empty classes.
pub fn plan_size_bounds(plan: &ColorPlan, class_sizes: &[usize], eta: &Rational) -> SizeBoundReport {
    let two = BigInt::from(2);
    let one_minus = Rational::from_integer(BigInt::from(1)) - eta;
    let mut violations = Vec::new();
    let masks = 0..=ground_mask(plan.l);
    let checked = masks.clone().count();
    for mask in masks {
        let colours = plan.colours_for(mask).len();
        let class_size = class_sizes.get(mask as usize).copied().unwrap_or(0);
        let bound = &one_minus * BigInt::from(class_size) / &two;
        if Rational::from_integer(BigInt::from(colours)) > bound {
            violations.push(SizeViolation { subset: mask, colours, class_size, bound });
        }
    }
    SizeBoundReport { checked, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_keeps_its_partition() {
        let plan = build_color_plan(1, 2, 10).unwrap();
        assert_eq!(plan.colours_for(0b1), (1..=10).collect::<Vec<_>>().as_slice());
        assert!(plan.coverage_holds());
    }

    #[test]
    fn two_elements_half_probability() {
        let plan = build_color_plan(2, 2, 10).unwrap();
        let all: Vec<Colour> = (1..=10).collect();
        assert_eq!(plan.colours_for(0b01), all.as_slice());
        assert_eq!(plan.colours_for(0b10), all.as_slice());
        assert!(plan.colours_for(0b11).is_empty());
        assert!(plan.colours_for(0b00).is_empty());
        assert!(plan.coverage_holds());
        assert_eq!(plan.allocated(), 10);
    }

    #[test]
    fn conservation_and_coverage_grid() {
        for k in 2..=4 {
            for l in 1..=3 {
                for num in [10, 40] {
                    let plan = build_color_plan(l, k, num).unwrap();
                    assert_eq!(plan.allocated(), num, "k={k} l={l}");
                    assert!(plan.coverage_holds(), "k={k} l={l}");
                    let mut end = 1;
                    for p in plan.partitions() {
                        assert_eq!(p.colours.start, end);
                        end = p.colours.end;
                        assert_eq!(p.weight.is_zero(), p.colours.is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn three_way_tie_goes_to_earlier_partitions() {
        // k=3, l=3: four partitions of weight 2/27 each, 10 colours -> 3,3,2,2
        let plan = build_color_plan(3, 3, 10).unwrap();
        let sizes: Vec<u32> = plan.partitions().iter().map(|p| p.colours.end - p.colours.start).collect();
        assert_eq!(sizes, [3, 3, 2, 2]);
    }

    #[test]
    fn rejects_too_few_colours() {
        assert!(build_color_plan(3, 3, 3).is_err());
        assert!(build_color_plan(2, 1, 10).is_err());
    }

    #[test]
    fn size_bounds() {
        let plan = build_color_plan(2, 2, 10).unwrap();
        let zero = Rational::zero();
        assert!(plan_size_bounds(&plan, &[100, 100, 100, 100], &zero).holds());
        let rep = plan_size_bounds(&plan, &[100, 0, 100, 100], &zero);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].subset, 0b01);
    }

    #[test]
    fn json_export_lists_nonempty_subsets() {
        let plan = build_color_plan(2, 2, 4).unwrap();
        let v = plan.to_json();
        assert_eq!(v["subsets"]["1"], serde_json::json!([1, 2, 3, 4]));
        assert!(v["subsets"].get("3").is_none());
    }
}
