use crate::game::{MoveRecord, Player};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Per-round tallies of who played where.
///
/// For every vertex `v` the book tracks `|N[v] ∩ B| - |N[v] ∩ A|` for the
/// current round and the largest value that difference reached over every
/// prefix of the round. A vertex is dangerous once that peak reaches the
/// threshold, so danger never decreases within a round.
#[derive(Clone, Debug)]
pub struct RoundBook {
    round: u32,
    alice: VertexSet,
    bob: VertexSet,
    balance: Vec<i64>,
    peak: Vec<i64>,
    last_bob: Option<usize>,
    last_alice: Option<MoveRecord>,
}

impl RoundBook {
    pub fn new(n: usize) -> Self {
        RoundBook {
            round: 1,
            alice: VertexSet::new(n),
            bob: VertexSet::new(n),
            balance: vec![0; n],
            peak: vec![0; n],
            last_bob: None,
            last_alice: None,
        }
    }

    /// Clears the tallies if `round` differs from the round being tracked.
    pub fn sync(&mut self, round: u32) {
        if round != self.round {
            self.round = round;
            self.alice.clear();
            self.bob.clear();
            self.balance.iter_mut().for_each(|b| *b = 0);
            self.peak.iter_mut().for_each(|b| *b = 0);
            self.last_bob = None;
            self.last_alice = None;
        }
    }

    pub fn record(&mut self, graph: &Graph, rec: &MoveRecord) {
        self.sync(rec.round);
        let delta = match rec.player {
            Player::Alice => {
                self.alice.insert(rec.vertex);
                self.last_alice = Some(*rec);
                -1
            }
            Player::Bob => {
                self.bob.insert(rec.vertex);
                self.last_bob = Some(rec.vertex);
                1
            }
        };
        // v ∈ N[u] iff u ∈ N[v]
        for v in graph.closed_neighborhood(rec.vertex) {
            self.balance[v] += delta;
            self.peak[v] = self.peak[v].max(self.balance[v]);
        }
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn alice_moves(&self) -> &VertexSet {
        &self.alice
    }

    pub fn bob_moves(&self) -> &VertexSet {
        &self.bob
    }

    /// Bob's most recent move in the tracked round.
    pub fn last_bob(&self) -> Option<usize> {
        self.last_bob
    }

    pub fn last_alice(&self) -> Option<MoveRecord> {
        self.last_alice
    }

    pub fn balance(&self, v: usize) -> i64 {
        self.balance[v]
    }

    /// Vertices whose closed neighbourhood saw at least `threshold` more Bob
    /// moves than Alice moves at some point of the round.
    pub fn dangerous_vertices(&self, threshold: usize) -> VertexSet {
        let n = self.peak.len();
        VertexSet::from_iter(n, (0..n).filter(|&v| self.peak[v] >= threshold as i64))
    }
}

/// Free-function form of [`RoundBook::dangerous_vertices`].
pub fn dangerous_vertices(book: &RoundBook, threshold: usize) -> VertexSet {
    book.dangerous_vertices(threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedGraph};

    fn rec(round: u32, idx: usize, player: Player, vertex: usize) -> MoveRecord {
        MoveRecord { round, idx, player, vertex, colour: 1 }
    }

    #[test]
    fn empty_at_round_start() {
        let book = RoundBook::new(5);
        assert!(book.dangerous_vertices(1).is_empty());
    }

    #[test]
    fn star_two_bob_leaves() {
        let g = make_named(NamedGraph::Star { leaves: 9 }).unwrap();
        let mut book = RoundBook::new(10);
        book.record(&g, &rec(1, 0, Player::Bob, 1));
        book.record(&g, &rec(1, 1, Player::Bob, 2));
        assert_eq!(book.dangerous_vertices(2).to_vec(), vec![0]);
    }

    #[test]
    fn single_bob_move_marks_closed_neighbourhood() {
        let g = make_named(NamedGraph::Path { n: 5 }).unwrap();
        let mut book = RoundBook::new(5);
        book.record(&g, &rec(1, 0, Player::Bob, 2));
        assert_eq!(book.dangerous_vertices(1).to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn danger_persists_after_alice_compensates_and_resets_next_round() {
        let g = make_named(NamedGraph::Path { n: 3 }).unwrap();
        let mut book = RoundBook::new(3);
        book.record(&g, &rec(1, 0, Player::Bob, 0));
        book.record(&g, &rec(1, 1, Player::Alice, 1));
        assert_eq!(book.balance(0), 0);
        assert!(book.dangerous_vertices(1).contains(0));
        book.record(&g, &rec(2, 0, Player::Alice, 2));
        assert!(book.dangerous_vertices(1).is_empty());
    }
}
