use serde::{Deserialize, Serialize};

use crate::rng::{below, GameRng};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Lowest vertex index, then smallest colour.
    #[default]
    Lowest,
    /// Uniform among tied candidates, drawn from the strategy's RNG stream.
    Random,
}

impl TieBreak {
    pub fn pick<T: Copy>(self, candidates: &[T], rng: &mut GameRng) -> Option<T> {
        match (self, candidates.len()) {
            (_, 0) => None,
            (TieBreak::Lowest, _) | (_, 1) => Some(candidates[0]),
            (TieBreak::Random, len) => Some(candidates[below(rng, len)]),
        }
    }
}

/// Integer thresholds behind the target-vertex and partition-plan strategies.
///
/// The asymptotic constants only make sense for large `n`, so every one of
/// them is an explicit knob. [`StrategyParams::derived`] fills them in from
/// `epsilon` with these rules (all rounded up, all at least 1):
///
/// | field                   | default                 |
/// |-------------------------|-------------------------|
/// | `danger_threshold`      | `ε·n/100`               |
/// | `nearly_full_threshold` | `β·n` with `β = ε/200`  |
/// | `small_colour_cutoff`   | `ε·n/200` (capped at k) |
/// | `block_distance`        | `δ·n` with `δ = ε/100`  |
/// | `block_budget` (K)      | 1                       |
/// | `reserve_missing`       | `10·K`                  |
/// | `multiplicity` (C_l)    | 4                       |
/// | `block_min_uncoloured`  | `ε·n/100`               |
/// | `block_size`            | 2                       |
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyParams {
    pub epsilon: f64,
    pub danger_threshold: usize,
    pub nearly_full_threshold: usize,
    /// `true`: "missing fewer than the threshold"; `false`: "at most".
    pub nearly_full_strict: bool,
    pub small_colour_cutoff: u32,
    pub block_distance: usize,
    pub block_budget: usize,
    pub reserve_missing: usize,
    pub multiplicity: usize,
    /// Blocking/killing moves are only made while the target still has at
    /// least this many uncoloured vertices.
    pub block_min_uncoloured: usize,
    /// Size of the vertex sets checked for near-blocks by the plan-based Bob.
    pub block_size: usize,
    pub tie_break: TieBreak,
}

fn ceil_at_least_one(x: f64) -> usize {
    (x.ceil() as usize).max(1)
}

impl StrategyParams {
    pub fn derived(n: usize, k: u32, epsilon: f64) -> Self {
        let nf = n as f64;
        let block_budget = 1;
        StrategyParams {
            epsilon,
            danger_threshold: ceil_at_least_one(epsilon * nf / 100.0),
            nearly_full_threshold: ceil_at_least_one(epsilon / 200.0 * nf),
            nearly_full_strict: true,
            small_colour_cutoff: (ceil_at_least_one(epsilon * nf / 200.0) as u32).min(k.max(1)),
            block_distance: ceil_at_least_one(epsilon / 100.0 * nf),
            block_budget,
            reserve_missing: 10 * block_budget,
            multiplicity: 4,
            block_min_uncoloured: ceil_at_least_one(epsilon * nf / 100.0),
            block_size: 2,
            tie_break: TieBreak::Lowest,
        }
    }

    pub fn with_overrides(mut self, o: &ParamOverrides) -> Self {
        if let Some(e) = o.epsilon {
            self.epsilon = e;
        }
        macro_rules! take {
            ($($f:ident),*) => {$( if let Some(v) = o.$f { self.$f = v; } )*};
        }
        take!(
            danger_threshold,
            nearly_full_threshold,
            nearly_full_strict,
            small_colour_cutoff,
            block_distance,
            block_budget,
            reserve_missing,
            multiplicity,
            block_min_uncoloured,
            block_size,
            tie_break
        );
        if o.block_budget.is_some() && o.reserve_missing.is_none() {
            self.reserve_missing = 10 * self.block_budget;
        }
        self
    }

    pub fn validate(&self, k: u32) -> Result<(), String> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(format!("epsilon {} not in (0,1)", self.epsilon));
        }
        let ones = [
            ("danger_threshold", self.danger_threshold),
            ("nearly_full_threshold", self.nearly_full_threshold),
            ("block_distance", self.block_distance),
            ("block_budget", self.block_budget),
            ("reserve_missing", self.reserve_missing),
            ("multiplicity", self.multiplicity),
            ("block_min_uncoloured", self.block_min_uncoloured),
            ("block_size", self.block_size),
        ];
        if let Some((name, _)) = ones.iter().find(|(_, v)| *v == 0) {
            return Err(format!("{name} must be at least 1"));
        }
        if self.small_colour_cutoff == 0 || self.small_colour_cutoff > k {
            return Err(format!("small_colour_cutoff {} not in 1..={k}", self.small_colour_cutoff));
        }
        Ok(())
    }

    /// Whether a vertex missing `missing` colours counts as nearly full.
    pub fn is_nearly_full(&self, missing: usize) -> bool {
        if self.nearly_full_strict {
            missing < self.nearly_full_threshold
        } else {
            missing <= self.nearly_full_threshold
        }
    }
}

/// Partial parameter block as written in experiment configs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub epsilon: Option<f64>,
    pub danger_threshold: Option<usize>,
    pub nearly_full_threshold: Option<usize>,
    pub nearly_full_strict: Option<bool>,
    pub small_colour_cutoff: Option<u32>,
    pub block_distance: Option<usize>,
    pub block_budget: Option<usize>,
    pub reserve_missing: Option<usize>,
    pub multiplicity: Option<usize>,
    pub block_min_uncoloured: Option<usize>,
    pub block_size: Option<usize>,
    pub tie_break: Option<TieBreak>,
}
