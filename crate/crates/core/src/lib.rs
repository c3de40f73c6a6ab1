//! The eternal vertex colouring game on graphs.
//!
//! Two players alternately (re)colour vertices in rounds; every vertex is
//! coloured exactly once per round, each new colour must differ from the old
//! one and keep the colouring proper, and Bob wins as soon as a chosen vertex
//! has no legal colour. The crate provides
//!
//! * [`graph`]: dense graphs, seeded `G(n, p)` sampling, named families;
//! * [`game`]: the rules engine and the play loop;
//! * [`strategy`]: rule-based and baseline players behind one trait;
//! * [`partition`]: set partitions, exact weights and colour plans;
//! * [`solver`]: exact winners for tiny graphs;
//! * [`audit`]: finite checks of the random-graph properties the strategies rely on;
//! * [`experiment`]: seeded Monte Carlo batches with CSV/JSON output.

pub mod audit;
pub mod error;
pub mod experiment;
pub mod game;
pub mod graph;
pub mod partition;
pub mod rng;
pub mod solver;
pub mod strategy;
pub mod vertex_set;

pub use error::{Error, Result};
pub use game::{play_game, Choice, Colour, GameOutcome, GameState, MoveRecord, Player, RuleVariant, Termination};
pub use graph::{gnp_generate, make_named, GnpSpec, Graph, GraphSpec, NamedGraph};
pub use vertex_set::VertexSet;
