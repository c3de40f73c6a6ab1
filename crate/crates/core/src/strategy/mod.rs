//! Move-selection policies behind one object-safe trait, looked up by name
//! through [`StrategyRegistry`].

mod alice;
mod baseline;
mod bob_general;
mod bob_odd;
mod book;
mod params;
mod plan;
mod registry;
mod witness;

pub use alice::{mirror_of, PaperAlice};
pub use baseline::{baseline_move, BaselinePolicy, GreedyFirstFit, RandomLegal};
pub use bob_general::PaperBobGeneral;
pub use bob_odd::{double_block_distance, PaperBobOdd};
pub use book::{dangerous_vertices, RoundBook};
pub use params::{ParamOverrides, StrategyParams, TieBreak};
pub use plan::{bob_even_setup, TargetPlan};
pub use registry::{StrategyConfig, StrategyContext, StrategyFactory, StrategyRegistry};
pub use witness::SolverWitness;

use crate::game::{Choice, Colour, GameState, MoveRecord};
use crate::rng::GameRng;

/// A player's policy. One instance plays one game.
pub trait Strategy: Send {
    fn name(&self) -> &str;

    /// Called once with the initial position before any move.
    fn start(&mut self, _state: &GameState) {}

    /// Picks the next move for the player to move in `state`.
    ///
    /// Returning a stuck vertex (no legal colour) is allowed and loses the
    /// game for the mover; returning an illegal move is a fault.
    fn choose(&mut self, state: &GameState, rng: &mut GameRng) -> Choice;

    /// Sees every accepted move of either player; `after` already includes it.
    fn observe(&mut self, _after: &GameState, _record: &MoveRecord) {}

    /// Tag of the priority rule behind the most recent `choose`, if the
    /// strategy is rule-based.
    fn last_rule(&self) -> Option<&'static str> {
        None
    }
}

/// Whether the player to move may put `c` on `v` right now, including the
/// greedy restriction of the active variant.
pub(crate) fn can_play(state: &GameState, v: usize, c: Colour) -> bool {
    if state.is_played(v) {
        return false;
    }
    if state.variant().is_greedy_for(state.to_move()) {
        state.smallest_free_colour(v) == Some(c)
    } else {
        state.is_free(v, c)
    }
}

/// Unplayed vertices that still have a legal colour.
pub(crate) fn playable_vertices(state: &GameState) -> Vec<usize> {
    state.unplayed().filter(|&v| !state.is_stuck(v)).collect()
}

/// Lowest playable vertex with its smallest colour; a stuck vertex only if
/// nothing else is left.
pub(crate) fn first_fit(state: &GameState, rng: &mut GameRng, tie: TieBreak) -> Choice {
    let playable = playable_vertices(state);
    let v = tie
        .pick(&playable, rng)
        .or_else(|| state.unplayed().next())
        .expect("a round in progress has an unplayed vertex");
    Choice::smallest(state, v)
}

/// Some unplayed vertex without a legal colour, preferring those in `prefer`.
pub(crate) fn winning_pick(state: &GameState, prefer: &[usize]) -> Option<usize> {
    prefer
        .iter()
        .copied()
        .find(|&v| !state.is_played(v) && state.is_stuck(v))
        .or_else(|| state.unplayed().find(|&v| state.is_stuck(v)))
}
