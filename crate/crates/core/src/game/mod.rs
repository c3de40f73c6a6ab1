//! The eternal vertex colouring game: positions, legality and the play loop.

mod play;
mod state;

pub use play::{play_game, read_transcript, replay, write_transcript, Choice, GameOutcome, MoveRecord, Termination};
pub use state::{Colour, GameState, MoveError, Player, RuleVariant};
