use serde::{Deserialize, Serialize};

use super::{first_fit, Strategy, TieBreak};
use crate::game::{Choice, GameState};
use crate::rng::{below, rng_from_seed, GameRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselinePolicy {
    RandomLegal,
    GreedyFirstFit,
}

/// Lowest unplayed vertex that has a legal colour, with its smallest colour.
#[derive(Clone, Debug, Default)]
pub struct GreedyFirstFit;

impl Strategy for GreedyFirstFit {
    fn name(&self) -> &str {
        "greedy-first-fit"
    }

    fn choose(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        first_fit(state, rng, TieBreak::Lowest)
    }
}

/// Uniform over all legal `(vertex, colour)` pairs.
#[derive(Clone, Debug, Default)]
pub struct RandomLegal;

impl Strategy for RandomLegal {
    fn name(&self) -> &str {
        "random-legal"
    }

    fn choose(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        let pairs: Vec<(usize, u32)> = state
            .unplayed()
            .flat_map(|v| state.legal_colors(v).unwrap_or_default().into_iter().map(move |c| (v, c)))
            .collect();
        if pairs.is_empty() {
            // every unplayed vertex is stuck; picking one concedes
            let v = state.unplayed().next().expect("a round in progress has an unplayed vertex");
            return Choice::new(v, None);
        }
        let (v, c) = pairs[below(rng, pairs.len())];
        Choice::new(v, Some(c))
    }
}

/// One-shot baseline decision, reproducible from `seed`.
pub fn baseline_move(state: &GameState, policy: BaselinePolicy, seed: u64) -> Choice {
    let mut rng = rng_from_seed(seed);
    match policy {
        BaselinePolicy::RandomLegal => RandomLegal.choose(state, &mut rng),
        BaselinePolicy::GreedyFirstFit => GreedyFirstFit.choose(state, &mut rng),
    }
}
