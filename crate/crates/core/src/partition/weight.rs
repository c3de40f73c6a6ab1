use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{enumerate_partitions, ground_mask, Rational, SetPartition};
use crate::error::{Error, Result};

/// Which closed form of the partition weight to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightForm {
    /// `k^-l (k-1)! / (k-|T|)!` for `|T| <= k`, else 0. Counts the ordered
    /// placements of the blocks and satisfies the marginal identity.
    #[default]
    Counting,
    /// `k^-l (k-1)! / (|T|-1)!`. Kept for comparison; it breaks the identity
    /// as soon as `l >= 3`.
    Display,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Weight of `t` for `p = 1/k` under the counting form.
pub fn partition_weight(t: &SetPartition, k: u32, l: usize) -> Rational {
    partition_weight_with(WeightForm::Counting, t, k, l)
}

pub fn partition_weight_with(form: WeightForm, t: &SetPartition, k: u32, l: usize) -> Rational {
    assert!(k >= 1, "k must be positive");
    let k = k as u64;
    let parts = t.len() as u64;
    let denom_k = BigInt::from(k).pow(l as u32);
    let numer = factorial(k - 1);
    let lower = match form {
        WeightForm::Counting if parts > k => return Rational::zero(),
        WeightForm::Counting => factorial(k - parts),
        WeightForm::Display => factorial(parts - 1),
    };
    Rational::new(numer, lower * denom_k)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRow {
    /// Bitmask of the block `A`.
    pub subset: u32,
    /// Sum of weights over partitions containing `A` as a block.
    pub sum: Rational,
    /// `p^|A| (1-p)^(l-|A|)`.
    pub target: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub k: u32,
    pub l: usize,
    pub form: WeightForm,
    pub rows: Vec<IdentityRow>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityRow> {
        self.rows.iter().filter(|r| !r.holds)
    }
}

/// Checks, for every nonempty `A`, that the weights of the partitions having
/// `A` as a block sum to `p^|A| (1-p)^(l-|A|)` exactly.
pub fn weight_identity_check(k: u32, l: usize) -> Result<IdentityReport> {
    weight_identity_check_with(WeightForm::Counting, k, l)
}

pub fn weight_identity_check_with(form: WeightForm, k: u32, l: usize) -> Result<IdentityReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let partitions = enumerate_partitions(l)?;
    let size = 1usize << l;
    let mut sums = vec![Rational::zero(); size];
    for t in &partitions {
        let w = partition_weight_with(form, t, k, l);
        if w.is_zero() {
            continue;
        }
        for &b in t.blocks() {
            sums[b as usize] += &w;
        }
    }
    let p = Rational::new(BigInt::one(), BigInt::from(k));
    let q = Rational::one() - &p;
    let rows = (1..=ground_mask(l))
        .map(|mask| {
            let inside = mask.count_ones() as i32;
            let target = p.pow(inside) * q.pow(l as i32 - inside);
            let sum = sums[mask as usize].clone();
            IdentityRow { subset: mask, holds: sum == target, sum, target }
        })
        .collect();
    Ok(IdentityReport { k, l, form, rows })
}
