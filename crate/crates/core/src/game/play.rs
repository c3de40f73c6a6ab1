use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::state::{Colour, GameState, Player, RuleVariant};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{derive_seed, rng_from_seed};
use crate::strategy::Strategy;

/// One accepted move. Serialized as `{round, idx, player, vertex, colour}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub round: u32,
    pub idx: usize,
    pub player: Player,
    pub vertex: usize,
    pub colour: Colour,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Termination {
    /// `mover` chose `vertex`, which had no legal colour.
    BobWins { round: u32, vertex: usize, mover: Player },
    AliceSurvives { rounds: u32 },
    /// A strategy proposed an illegal move. Not a win for either side.
    Fault { player: Player, round: u32, reason: String },
}

#[derive(Clone, Debug)]
pub struct GameOutcome {
    pub termination: Termination,
    pub transcript: Vec<MoveRecord>,
    pub final_state: GameState,
}

impl GameOutcome {
    pub fn winner(&self) -> Option<Player> {
        match self.termination {
            Termination::BobWins { .. } => Some(Player::Bob),
            Termination::AliceSurvives { .. } => Some(Player::Alice),
            Termination::Fault { .. } => None,
        }
    }

    pub fn bob_won_by(&self, round: u32) -> bool {
        matches!(self.termination, Termination::BobWins { round: r, .. } if r <= round)
    }

    pub fn is_fault(&self) -> bool {
        matches!(self.termination, Termination::Fault { .. })
    }

    /// The round in which the game stopped: Bob's winning round, the last
    /// completed round for Alice, or the round of the fault.
    pub fn termination_round(&self) -> u32 {
        match self.termination {
            Termination::BobWins { round, .. } => round,
            Termination::AliceSurvives { rounds } => rounds,
            Termination::Fault { round, .. } => round,
        }
    }
}

/// A strategy's proposal: a vertex and, unless the vertex is stuck, a colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Choice {
    pub vertex: usize,
    pub colour: Option<Colour>,
}

impl Choice {
    pub fn new(vertex: usize, colour: Option<Colour>) -> Self {
        Choice { vertex, colour }
    }

    /// Picks `vertex` with its smallest legal colour (`None` if stuck).
    pub fn smallest(state: &GameState, vertex: usize) -> Self {
        Choice { vertex, colour: state.smallest_free_colour(vertex) }
    }
}

/// Drives a game until a mover picks a stuck vertex (Bob wins), `max_rounds`
/// complete (Alice survives) or a strategy faults.
///
/// Each side gets its own RNG stream derived from `seed`.
pub fn play_game(
    graph: Arc<Graph>,
    k: u32,
    alice: &mut dyn Strategy,
    bob: &mut dyn Strategy,
    variant: RuleVariant,
    max_rounds: u32,
    seed: u64,
) -> Result<GameOutcome> {
    if max_rounds == 0 {
        return Err(Error::InvalidArgument("max_rounds must be at least 1".into()));
    }
    if graph.n() == 0 {
        return Err(Error::InvalidArgument("cannot play on the empty vertex set".into()));
    }
    let mut state = GameState::new(graph, k, variant);
    let mut rngs = [rng_from_seed(derive_seed(seed, &[0])), rng_from_seed(derive_seed(seed, &[1]))];
    let mut transcript = Vec::new();
    alice.start(&state);
    bob.start(&state);

    let termination = loop {
        if state.round() > max_rounds {
            break Termination::AliceSurvives { rounds: max_rounds };
        }
        let mover = state.to_move();
        let (choice, name) = match mover {
            Player::Alice => (alice.choose(&state, &mut rngs[0]), alice.name()),
            Player::Bob => (bob.choose(&state, &mut rngs[1]), bob.name()),
        };
        let fault = |reason: String| Termination::Fault { player: mover, round: state.round(), reason };
        let legal = match state.legal_colors(choice.vertex) {
            Ok(l) => l,
            Err(e) => break fault(format!("{name}: {e}")),
        };
        if legal.is_empty() {
            break Termination::BobWins { round: state.round(), vertex: choice.vertex, mover };
        }
        let colour = match choice.colour {
            Some(c) if legal.contains(&c) => c,
            other => {
                break fault(format!(
                    "{name}: colour {other:?} at vertex {} not in {legal:?}",
                    choice.vertex
                ))
            }
        };
        let record = MoveRecord {
            round: state.round(),
            idx: state.moves_in_round(),
            player: mover,
            vertex: choice.vertex,
            colour,
        };
        state.apply_move(choice.vertex, colour)?;
        transcript.push(record);
        alice.observe(&state, &record);
        bob.observe(&state, &record);
    };

    Ok(GameOutcome { termination, transcript, final_state: state })
}

/// Applies a transcript to the initial position, checking every recorded
/// round index, move index and player along the way.
pub fn replay(graph: Arc<Graph>, k: u32, variant: RuleVariant, transcript: &[MoveRecord]) -> Result<GameState> {
    let mut state = GameState::new(graph, k, variant);
    for (i, rec) in transcript.iter().enumerate() {
        if rec.round != state.round() || rec.idx != state.moves_in_round() || rec.player != state.to_move() {
            return Err(Error::InvalidArgument(format!(
                "transcript entry {i} ({rec:?}) does not match position (round {}, idx {}, {} to move)",
                state.round(),
                state.moves_in_round(),
                state.to_move()
            )));
        }
        state.apply_move(rec.vertex, rec.colour)?;
    }
    Ok(state)
}

/// One JSON object per line.
pub fn write_transcript<W: Write>(mut out: W, transcript: &[MoveRecord]) -> Result<()> {
    for rec in transcript {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_transcript<R: BufRead>(input: R) -> Result<Vec<MoveRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
