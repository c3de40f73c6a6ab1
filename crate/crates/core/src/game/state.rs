use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Colours are `1..=k`; `0` is reserved for "uncoloured" in the packed representation.
pub type Colour = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

/// Which movers are forced to take the smallest legal colour.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleVariant {
    #[default]
    Standard,
    GreedyBob,
    GreedyBoth,
}

impl RuleVariant {
    pub fn is_greedy_for(self, player: Player) -> bool {
        match self {
            RuleVariant::Standard => false,
            RuleVariant::GreedyBob => player == Player::Bob,
            RuleVariant::GreedyBoth => true,
        }
    }
}

impl std::str::FromStr for RuleVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(RuleVariant::Standard),
            "greedy-bob" => Ok(RuleVariant::GreedyBob),
            "greedy-both" => Ok(RuleVariant::GreedyBoth),
            _ => Err(format!("unknown variant {s:?} (standard | greedy-bob | greedy-both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {vertex} was already played in round {round}")]
    AlreadyPlayed { vertex: usize, round: u32 },
    #[error("colour {colour} is not legal at vertex {vertex}; legal: {legal:?}")]
    IllegalColour { vertex: usize, colour: Colour, legal: Vec<Colour> },
}

/// A position of the eternal colouring game.
///
/// Moves alternate strictly across round boundaries, so with odd `n` the
/// player who opens a round alternates, while with even `n` Alice opens every
/// round.
#[derive(Clone, Debug)]
pub struct GameState {
    graph: Arc<Graph>,
    k: u32,
    colours: Vec<Colour>,
    round: u32,
    played: VertexSet,
    to_move: Player,
    variant: RuleVariant,
}

impl GameState {
    pub fn new(graph: Arc<Graph>, k: u32, variant: RuleVariant) -> Self {
        let n = graph.n();
        GameState {
            graph,
            k,
            colours: vec![0; n],
            round: 1,
            played: VertexSet::new(n),
            to_move: Player::Alice,
            variant,
        }
    }

    /// Builds an arbitrary position, e.g. a test fixture. The colouring must
    /// be proper, and in later rounds every vertex must be coloured.
    pub fn from_parts(
        graph: Arc<Graph>,
        k: u32,
        variant: RuleVariant,
        colours: Vec<Colour>,
        round: u32,
        played: VertexSet,
        to_move: Player,
    ) -> Result<Self, String> {
        let n = graph.n();
        if colours.len() != n || played.capacity() != n {
            return Err("size mismatch".into());
        }
        if round == 0 {
            return Err("rounds start at 1".into());
        }
        if colours.iter().any(|&c| c > k) {
            return Err("colour out of palette".into());
        }
        if round > 1 && colours.contains(&0) {
            return Err("every vertex is coloured after round 1".into());
        }
        if round == 1 && (0..n).any(|v| (colours[v] != 0) != played.contains(v)) {
            return Err("in round 1 exactly the played vertices are coloured".into());
        }
        if played.len() >= n.max(1) {
            return Err("a round in progress has an unplayed vertex".into());
        }
        let state = GameState { graph, k, colours, round, played, to_move, variant };
        if !state.is_proper() {
            return Err("colouring is not proper".into());
        }
        Ok(state)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn variant(&self) -> RuleVariant {
        self.variant
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn is_first_round(&self) -> bool {
        self.round == 1
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn played(&self) -> &VertexSet {
        &self.played
    }

    pub fn is_played(&self, v: usize) -> bool {
        self.played.contains(v)
    }

    /// Number of moves already made in the current round.
    pub fn moves_in_round(&self) -> usize {
        self.played.len()
    }

    pub fn colour(&self, v: usize) -> Option<Colour> {
        match self.colours[v] {
            0 => None,
            c => Some(c),
        }
    }

    /// Packed colours, `0` meaning uncoloured.
    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn unplayed(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&v| !self.played.contains(v))
    }

    /// Colours present on the closed neighbourhood of `v`, as a membership
    /// vector indexed by colour (entry 0 unused).
    pub fn colours_seen(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.k as usize + 1];
        for u in self.graph.closed_neighborhood(v) {
            seen[self.colours[u] as usize] = true;
        }
        seen[0] = false;
        seen
    }

    /// Number of palette colours absent from the closed neighbourhood of `v`.
    pub fn missing_colour_count(&self, v: usize) -> usize {
        self.colours_seen(v)[1..].iter().filter(|&&s| !s).count()
    }

    /// Colours `v` could take ignoring whose turn it is: no neighbour holds
    /// it and, after round 1, it differs from the current colour of `v`.
    /// Both conditions amount to "absent from the closed neighbourhood".
    pub fn free_colours(&self, v: usize) -> Vec<Colour> {
        let seen = self.colours_seen(v);
        (1..=self.k).filter(|&c| !seen[c as usize]).collect()
    }

    pub fn smallest_free_colour(&self, v: usize) -> Option<Colour> {
        let seen = self.colours_seen(v);
        (1..=self.k).find(|&c| !seen[c as usize])
    }

    /// Whether colour `c` could be placed on `v` under plain properness,
    /// ignoring the greedy restriction.
    pub fn is_free(&self, v: usize, c: Colour) -> bool {
        c >= 1 && c <= self.k && self.graph.closed_neighborhood(v).iter().all(|u| self.colours[u] != c)
    }

    /// The colours the player to move may put on `v`. Under a greedy rule for
    /// that player the set is cut down to its minimum.
    pub fn legal_colors(&self, v: usize) -> Result<Vec<Colour>, MoveError> {
        self.check_playable(v)?;
        let mut free = self.free_colours(v);
        if self.variant.is_greedy_for(self.to_move) {
            free.truncate(1);
        }
        Ok(free)
    }

    /// A vertex is stuck when choosing it loses: nothing is legal there.
    pub fn is_stuck(&self, v: usize) -> bool {
        self.smallest_free_colour(v).is_none()
    }

    fn check_playable(&self, v: usize) -> Result<(), MoveError> {
        if v >= self.n() {
            return Err(MoveError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        if self.played.contains(v) {
            return Err(MoveError::AlreadyPlayed { vertex: v, round: self.round });
        }
        Ok(())
    }

    pub fn apply_move(&mut self, v: usize, c: Colour) -> Result<(), MoveError> {
        let legal = self.legal_colors(v)?;
        if !legal.contains(&c) {
            return Err(MoveError::IllegalColour { vertex: v, colour: c, legal });
        }
        self.colours[v] = c;
        self.played.insert(v);
        self.to_move = self.to_move.other();
        if self.played.len() == self.n() {
            self.round += 1;
            self.played.clear();
        }
        Ok(())
    }

    /// Checks properness over every edge with both ends coloured.
    pub fn is_proper(&self) -> bool {
        self.graph
            .edges()
            .all(|(u, v)| self.colours[u] == 0 || self.colours[u] != self.colours[v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedGraph};

    fn arc(kind: NamedGraph) -> Arc<Graph> {
        Arc::new(make_named(kind).unwrap())
    }

    #[test]
    fn round_one_properness() {
        let g = arc(NamedGraph::Complete { n: 2 });
        let mut s = GameState::new(g, 2, RuleVariant::Standard);
        s.apply_move(0, 1).unwrap();
        assert_eq!(s.legal_colors(1).unwrap(), vec![2]);
    }

    #[test]
    fn recolour_must_differ() {
        let g = arc(NamedGraph::Complete { n: 1 });
        let mut s = GameState::new(g, 2, RuleVariant::Standard);
        s.apply_move(0, 1).unwrap();
        assert_eq!(s.round(), 2);
        assert_eq!(s.legal_colors(0).unwrap(), vec![2]);
    }

    #[test]
    fn star_centre_blocked() {
        let g = arc(NamedGraph::Star { leaves: 3 });
        let played = VertexSet::new(4);
        let s = GameState::from_parts(g, 3, RuleVariant::Standard, vec![1, 2, 3, 2], 2, played, Player::Bob)
            .unwrap();
        assert!(s.legal_colors(0).unwrap().is_empty());
        assert!(s.is_stuck(0));
    }

    #[test]
    fn round_parity_odd_and_even() {
        let mut s = GameState::new(arc(NamedGraph::Path { n: 3 }), 3, RuleVariant::Standard);
        for (v, c) in [(0, 1), (1, 2), (2, 1)] {
            s.apply_move(v, c).unwrap();
        }
        assert_eq!((s.round(), s.to_move()), (2, Player::Bob));

        let mut s = GameState::new(arc(NamedGraph::Path { n: 4 }), 3, RuleVariant::Standard);
        for (v, c) in [(0, 1), (1, 2), (2, 1), (3, 2)] {
            s.apply_move(v, c).unwrap();
        }
        assert_eq!((s.round(), s.to_move()), (2, Player::Alice));
        assert!(s.played().is_empty());
    }

    #[test]
    fn replayed_vertex_rejected() {
        let mut s = GameState::new(arc(NamedGraph::Empty { n: 3 }), 2, RuleVariant::Standard);
        s.apply_move(1, 1).unwrap();
        assert_eq!(s.apply_move(1, 2), Err(MoveError::AlreadyPlayed { vertex: 1, round: 1 }));
        assert!(matches!(s.apply_move(0, 3), Err(MoveError::IllegalColour { .. })));
        assert!(matches!(s.apply_move(9, 1), Err(MoveError::VertexOutOfRange { .. })));
    }

    #[test]
    fn greedy_truncation_by_mover() {
        let g = arc(NamedGraph::Empty { n: 2 });
        let s = GameState::new(g.clone(), 3, RuleVariant::GreedyBob);
        assert_eq!(s.legal_colors(0).unwrap(), vec![1, 2, 3]);
        let mut s = GameState::new(g.clone(), 3, RuleVariant::GreedyBob);
        s.apply_move(0, 3).unwrap();
        assert_eq!(s.legal_colors(1).unwrap(), vec![1]);
        let s = GameState::new(g, 3, RuleVariant::GreedyBoth);
        assert_eq!(s.legal_colors(0).unwrap(), vec![1]);
    }
}
