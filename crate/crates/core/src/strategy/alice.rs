use super::{first_fit, playable_vertices, RoundBook, Strategy, StrategyParams};
use crate::game::{Choice, GameState, MoveRecord};
use crate::graph::Graph;
use crate::rng::GameRng;
use crate::vertex_set::VertexSet;

/// Some `v ∉ s ∪ excluded`, `v ≠ w`, adjacent to exactly the same members of
/// `s` as `w`. Lowest index wins.
pub fn mirror_of(graph: &Graph, w: usize, s: &VertexSet, excluded: &VertexSet) -> Option<usize> {
    mirrors(graph, w, s, excluded).next()
}

fn mirrors<'a>(
    graph: &'a Graph,
    w: usize,
    s: &'a VertexSet,
    excluded: &'a VertexSet,
) -> impl Iterator<Item = usize> + 'a {
    let trace = graph.neighbors(w).intersection(s);
    (0..graph.n()).filter(move |&v| {
        v != w && !s.contains(v) && !excluded.contains(v) && graph.neighbors(v).intersection(s) == trace
    })
}

/// Alice's balancing strategy. At each move she takes the first rule that
/// applies and colours the chosen vertex with its smallest legal colour:
///
/// 1. an unplayed vertex whose closed neighbourhood is nearly full of colours;
/// 2. if Bob's last move `w` (this round) is not dangerous, a playable vertex
///    mirroring `w` with respect to the current danger set;
/// 3. the lowest playable vertex.
#[derive(Clone, Debug)]
pub struct PaperAlice {
    params: StrategyParams,
    book: RoundBook,
    last_rule: Option<&'static str>,
    rule_counts: [usize; 3],
    large_colour_moves: usize,
}

impl PaperAlice {
    pub const RULES: [&'static str; 3] = ["alice.1-nearly-full", "alice.2-mirror", "alice.3-arbitrary"];

    pub fn new(n: usize, params: StrategyParams) -> Self {
        PaperAlice {
            params,
            book: RoundBook::new(n),
            last_rule: None,
            rule_counts: [0; 3],
            large_colour_moves: 0,
        }
    }

    pub fn params(&self) -> &StrategyParams {
        &self.params
    }

    pub fn book(&self) -> &RoundBook {
        &self.book
    }

    /// How often each rule fired so far.
    pub fn rule_counts(&self) -> [usize; 3] {
        self.rule_counts
    }

    /// Moves where Alice had to use a colour above the small-colour cutoff.
    pub fn large_colour_moves(&self) -> usize {
        self.large_colour_moves
    }

    fn nearly_full_candidates(&self, state: &GameState) -> Vec<usize> {
        state
            .unplayed()
            .filter(|&v| {
                let missing = state.missing_colour_count(v);
                missing > 0 && self.params.is_nearly_full(missing)
            })
            .collect()
    }

    fn mirror_candidates(&self, state: &GameState) -> Vec<usize> {
        let Some(w) = self.book.last_bob() else {
            return Vec::new();
        };
        let danger = self.book.dangerous_vertices(self.params.danger_threshold);
        if danger.contains(w) {
            return Vec::new();
        }
        let mut excluded = state.played().clone();
        for v in state.unplayed().filter(|&v| state.is_stuck(v)) {
            excluded.insert(v);
        }
        mirrors(state.graph(), w, &danger, &excluded).collect()
    }

    fn decide(&mut self, rule: usize, state: &GameState, v: usize) -> Choice {
        self.last_rule = Some(Self::RULES[rule]);
        self.rule_counts[rule] += 1;
        let choice = Choice::smallest(state, v);
        if matches!(choice.colour, Some(c) if c > self.params.small_colour_cutoff) {
            self.large_colour_moves += 1;
        }
        choice
    }
}

impl Strategy for PaperAlice {
    fn name(&self) -> &str {
        "paper-alice"
    }

    fn choose(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        self.book.sync(state.round());
        let tie = self.params.tie_break;
        if let Some(v) = tie.pick(&self.nearly_full_candidates(state), rng) {
            return self.decide(0, state, v);
        }
        if let Some(v) = tie.pick(&self.mirror_candidates(state), rng) {
            return self.decide(1, state, v);
        }
        let fallback = first_fit(state, rng, tie);
        debug_assert!(playable_vertices(state).is_empty() || fallback.colour.is_some());
        self.decide(2, state, fallback.vertex)
    }

    fn observe(&mut self, after: &GameState, record: &MoveRecord) {
        self.book.record(after.graph(), record);
    }

    fn last_rule(&self) -> Option<&'static str> {
        self.last_rule
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Player, RuleVariant};
    use crate::graph::{make_named, NamedGraph};
    use crate::rng::rng_from_seed;
    use std::sync::Arc;

    fn arc(kind: NamedGraph) -> Arc<Graph> {
        Arc::new(make_named(kind).unwrap())
    }

    #[test]
    fn mirror_examples() {
        let k3 = make_named(NamedGraph::Complete { n: 3 }).unwrap();
        let empty = VertexSet::new(3);
        assert_eq!(mirror_of(&k3, 0, &empty, &VertexSet::from_iter(3, [0])), Some(1));

        let star = make_named(NamedGraph::Star { leaves: 3 }).unwrap();
        let centre = VertexSet::from_iter(4, [0]);
        assert_eq!(mirror_of(&star, 1, &centre, &VertexSet::from_iter(4, [1])), Some(2));

        // path a-b-c with s = {b}: a and c are both adjacent to b
        let path = make_named(NamedGraph::Path { n: 3 }).unwrap();
        let b = VertexSet::from_iter(3, [1]);
        assert_eq!(mirror_of(&path, 0, &b, &VertexSet::from_iter(3, [0])), Some(2));
        assert_eq!(mirror_of(&path, 0, &b, &VertexSet::from_iter(3, [0, 2])), None);
    }

    #[test]
    fn opening_move_is_vertex_zero_colour_one() {
        let g = arc(NamedGraph::Cycle { n: 7 });
        let state = GameState::new(g, 4, RuleVariant::Standard);
        let mut alice = PaperAlice::new(7, StrategyParams::derived(7, 4, 0.1));
        let c = alice.choose(&state, &mut rng_from_seed(0));
        assert_eq!(c, Choice::new(0, Some(1)));
        assert_eq!(alice.last_rule(), Some("alice.3-arbitrary"));
    }

    #[test]
    fn nearly_full_leaf_takes_priority() {
        // K_{1,9}, k = 3: centre coloured 1, leaf 1 coloured 2. Leaf 2's closed
        // neighbourhood sees {1}, missing 2 colours; leaf 3 (coloured, played)
        // is irrelevant. With threshold 3 leaf 2 is nearly full; it is the
        // lowest unplayed candidate.
        let g = arc(NamedGraph::Star { leaves: 9 });
        let mut colours = vec![0; 10];
        colours[0] = 1;
        colours[1] = 2;
        let played = VertexSet::from_iter(10, [0, 1]);
        let state =
            GameState::from_parts(g, 3, RuleVariant::Standard, colours, 1, played, Player::Alice).unwrap();
        let mut params = StrategyParams::derived(10, 3, 0.1);
        params.nearly_full_threshold = 3;
        let mut alice = PaperAlice::new(10, params.clone());
        assert_eq!(alice.choose(&state, &mut rng_from_seed(0)), Choice::new(2, Some(2)));
        assert_eq!(alice.last_rule(), Some("alice.1-nearly-full"));

        // with threshold 2 nothing is nearly full (every leaf misses 2)
        params.nearly_full_threshold = 2;
        let mut alice = PaperAlice::new(10, params);
        alice.choose(&state, &mut rng_from_seed(0));
        assert_ne!(alice.last_rule(), Some("alice.1-nearly-full"));
    }

    #[test]
    fn mirrors_bob_leaf_on_star() {
        // K_{1,5}: Alice took the centre, Bob then took leaf 1 (not dangerous
        // at threshold 2). Danger set is empty, so every vertex mirrors leaf 1;
        // the lowest playable one is leaf 2.
        let g = arc(NamedGraph::Star { leaves: 5 });
        let mut state = GameState::new(g, 4, RuleVariant::Standard);
        let mut params = StrategyParams::derived(6, 4, 0.1);
        params.danger_threshold = 2;
        params.nearly_full_threshold = 1;
        let mut alice = PaperAlice::new(6, params);
        let mut rng = rng_from_seed(0);
        for (player, v, c) in [(Player::Alice, 0, 1), (Player::Bob, 1, 2)] {
            let rec = MoveRecord { round: 1, idx: state.moves_in_round(), player, vertex: v, colour: c };
            state.apply_move(v, c).unwrap();
            alice.observe(&state, &rec);
        }
        assert!(alice.book().dangerous_vertices(2).is_empty());
        assert_eq!(alice.choose(&state, &mut rng), Choice::new(2, Some(2)));
        assert_eq!(alice.last_rule(), Some("alice.2-mirror"));
    }
}
