use std::sync::Arc;

use super::{first_fit, Strategy, TieBreak};
use crate::game::{Choice, GameState};
use crate::rng::GameRng;
use crate::solver::SolvedGame;

/// Plays the solver's optimal move for whichever side it is seated on.
/// Positions outside the solved game fall back to first-fit.
#[derive(Clone, Debug)]
pub struct SolverWitness {
    solved: Arc<SolvedGame>,
    last_rule: Option<&'static str>,
    fallbacks: usize,
}

impl SolverWitness {
    pub fn new(solved: Arc<SolvedGame>) -> Self {
        SolverWitness { solved, last_rule: None, fallbacks: 0 }
    }

    pub fn solved(&self) -> &Arc<SolvedGame> {
        &self.solved
    }

    /// Moves made without solver guidance.
    pub fn fallbacks(&self) -> usize {
        self.fallbacks
    }
}

impl Strategy for SolverWitness {
    fn name(&self) -> &str {
        "solver-witness"
    }

    fn choose(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        match self.solved.best_move(state) {
            Some(ch) => {
                self.last_rule = Some("witness.table");
                ch
            }
            None => {
                self.fallbacks += 1;
                self.last_rule = Some("witness.fallback");
                first_fit(state, rng, TieBreak::Lowest)
            }
        }
    }

    fn last_rule(&self) -> Option<&'static str> {
        self.last_rule
    }
}
