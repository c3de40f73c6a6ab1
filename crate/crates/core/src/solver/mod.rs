//! Exact solutions for tiny graphs.
//!
//! The eternal game has finitely many positions once the round number is
//! reduced to "first round or not": a position is the colouring, the set of
//! vertices already played this round, the mover and that flag. Bob wins from
//! a position iff it lies in his attractor to the positions where the mover
//! must pick a stuck vertex; everywhere else Alice can keep the game going
//! forever.

mod chromatic;
mod one_round;
mod position;

pub use chromatic::{eternal_game_chromatic_number, ChromaticReport, KOutcome};
pub use one_round::solve_one_round;

use std::collections::VecDeque;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Choice, GameState, Player, RuleVariant};
use crate::graph::Graph;
use position::{Layout, Pos};

/// Default refusal threshold for the state-space estimate.
pub const DEFAULT_STATE_CAP: u128 = 100_000_000;

/// Largest graph the solver encodes.
pub const MAX_SOLVER_VERTICES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub state_cap: u128,
    /// Identify positions that differ by a renaming of colours. Only valid
    /// for the standard rules, where no colour is special.
    pub colour_symmetry: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { state_cap: DEFAULT_STATE_CAP, colour_symmetry: false }
    }
}

/// `(k+1)^n · 2^n · 2`: every colouring, every played set, either mover.
pub fn state_estimate(n: usize, k: u32) -> u128 {
    (k as u128 + 1).saturating_pow(n as u32).saturating_mul(1u128 << n.min(100)).saturating_mul(2)
}

pub(crate) fn check_size(graph: &Graph, k: u32, estimate: u128, cap: u128) -> Result<()> {
    if graph.n() == 0 || k == 0 {
        return Err(Error::InvalidArgument("solver needs at least one vertex and one colour".into()));
    }
    if graph.n() > MAX_SOLVER_VERTICES {
        return Err(Error::SolverLimit(format!("{} vertices, limit {MAX_SOLVER_VERTICES}", graph.n())));
    }
    if k > 62 {
        return Err(Error::SolverLimit(format!("k={k}, limit 62")));
    }
    if estimate > cap {
        return Err(Error::StateCapExceeded { estimate, cap });
    }
    Ok(())
}

/// Solved game graph: which positions Bob wins from, and how fast.
#[derive(Debug)]
pub struct SolvedGame {
    graph: Arc<Graph>,
    k: u32,
    variant: RuleVariant,
    layout: Layout,
    index: FxHashMap<u64, u32>,
    /// Order in which a position joined Bob's attractor; `u32::MAX` if never.
    rank: Vec<u32>,
    /// Successors of position `s` are `targets[offsets[s]..offsets[s + 1]]`.
    offsets: Vec<u32>,
    targets: Vec<u32>,
    terminal: Vec<bool>,
    bob_moves: Vec<bool>,
    root: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub winner: Player,
    #[serde(rename = "statesExplored")]
    pub states_explored: usize,
    #[serde(skip)]
    pub solved: Arc<SolvedGame>,
}

impl SolvedGame {
    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn variant(&self) -> RuleVariant {
        self.variant
    }

    pub fn states(&self) -> usize {
        self.rank.len()
    }

    pub fn winner(&self) -> Player {
        if self.rank[self.root as usize] == u32::MAX {
            Player::Alice
        } else {
            Player::Bob
        }
    }

    /// Whether `state` belongs to this solved game.
    pub fn matches(&self, state: &GameState) -> bool {
        state.k() == self.k && state.variant() == self.variant && *state.graph() == *self.graph
    }

    fn rank_of(&self, pos: &Pos) -> Option<u32> {
        self.index.get(&self.layout.key(pos)).map(|&id| self.rank[id as usize])
    }

    /// `Some(true)` if Bob wins from `state`, `None` for unknown positions.
    pub fn bob_wins_from(&self, state: &GameState) -> Option<bool> {
        if !self.matches(state) {
            return None;
        }
        self.rank_of(&Pos::from_state(state)).map(|r| r != u32::MAX)
    }

    /// Re-applies one attractor step to the stored solution and checks that
    /// nothing changes: every position outside the attractor stays outside,
    /// and every rank is justified by terminal status or by successors of
    /// lower rank.
    pub fn verify_fixed_point(&self) -> bool {
        (0..self.rank.len()).all(|s| {
            let succ = &self.targets[self.offsets[s] as usize..self.offsets[s + 1] as usize];
            let own = self.rank[s];
            let below = |t: &u32| self.rank[*t as usize] < own;
            let inside = |t: &u32| self.rank[*t as usize] != u32::MAX;
            if own == u32::MAX {
                let would_join = if self.bob_moves[s] { succ.iter().any(inside) } else { succ.iter().all(inside) };
                !self.terminal[s] && !would_join
            } else if self.terminal[s] {
                true
            } else if self.bob_moves[s] {
                succ.iter().any(below)
            } else {
                !succ.is_empty() && succ.iter().all(below)
            }
        })
    }

    /// Optimal move for the player to move: the winner heads for the goal
    /// (Bob strictly down in rank, Alice staying out of the attractor); the
    /// loser delays as long as possible. `None` for unknown positions.
    pub fn best_move(&self, state: &GameState) -> Option<Choice> {
        if !self.matches(state) {
            return None;
        }
        let pos = Pos::from_state(state);
        let own = self.rank_of(&pos)?;
        let moves = self.layout.moves(&pos, state.variant().is_greedy_for(state.to_move()));
        if let Some(v) = moves.stuck.first() {
            if state.to_move() == Player::Bob || moves.options.is_empty() {
                return Some(Choice::new(*v as usize, None));
            }
        }
        let ranked = moves.options.iter().map(|&(v, c)| {
            let next = self.layout.apply(&pos, v, c);
            let r = self.rank_of(&next).unwrap_or(u32::MAX);
            (r, v, c)
        });
        let pick = match (state.to_move(), own != u32::MAX) {
            // winning Bob: smallest rank below his own
            (Player::Bob, true) => ranked.filter(|&(r, ..)| r < own).min_by_key(|&(r, v, c)| (r, v, c)),
            // winning Alice: any move that stays outside
            (Player::Alice, false) => ranked.filter(|&(r, ..)| r == u32::MAX).min_by_key(|&(_, v, c)| (v, c)),
            // losing side: postpone, latest rank first (unknown counts as safe)
            _ => ranked.max_by_key(|&(r, v, c)| (r, std::cmp::Reverse((v, c)))),
        };
        pick.map(|(_, v, c)| Choice::new(v as usize, Some(c as u32)))
    }
}

/// Solves the eternal game on `graph` with `k` colours under `variant`.
pub fn solve_eternal(graph: &Arc<Graph>, k: u32, variant: RuleVariant, opts: &SolveOptions) -> Result<SolveResult> {
    check_size(graph, k, state_estimate(graph.n(), k), opts.state_cap)?;
    if opts.colour_symmetry && variant != RuleVariant::Standard {
        return Err(Error::InvalidArgument("colour symmetry is only sound for the standard rules".into()));
    }
    let layout = Layout::new(graph, k, opts.colour_symmetry);

    // forward exploration; ids follow discovery order
    let mut keys: Vec<u64> = Vec::new();
    let mut index: FxHashMap<u64, u32> = FxHashMap::default();
    let mut offsets: Vec<u32> = vec![0];
    let mut targets: Vec<u32> = Vec::new();
    let mut terminal: Vec<bool> = Vec::new();
    let mut bob_moves: Vec<bool> = Vec::new();

    let root = layout.canonical(&Pos::initial(graph.n()));
    keys.push(layout.key(&root));
    index.insert(keys[0], 0);
    let mut next = 0usize;
    while next < keys.len() {
        let pos = layout.decode(keys[next]);
        let greedy = variant.is_greedy_for(if pos.bob { Player::Bob } else { Player::Alice });
        let moves = layout.moves(&pos, greedy);
        let is_terminal = if pos.bob { !moves.stuck.is_empty() } else { moves.options.is_empty() };
        terminal.push(is_terminal);
        bob_moves.push(pos.bob);
        if !is_terminal {
            for &(v, c) in &moves.options {
                let succ = layout.key(&layout.apply(&pos, v, c));
                let id = *index.entry(succ).or_insert_with(|| {
                    keys.push(succ);
                    (keys.len() - 1) as u32
                });
                targets.push(id);
            }
        }
        offsets.push(targets.len() as u32);
        next += 1;
    }
    let states = keys.len();

    // reverse edges
    let mut rev_offsets = vec![0u32; states + 1];
    for &t in &targets {
        rev_offsets[t as usize + 1] += 1;
    }
    for i in 0..states {
        rev_offsets[i + 1] += rev_offsets[i];
    }
    let mut fill = rev_offsets.clone();
    let mut sources = vec![0u32; targets.len()];
    for s in 0..states {
        for &t in &targets[offsets[s] as usize..offsets[s + 1] as usize] {
            sources[fill[t as usize] as usize] = s as u32;
            fill[t as usize] += 1;
        }
    }
    drop(fill);
    drop(keys);

    // backward attractor
    let mut rank = vec![u32::MAX; states];
    let mut remaining: Vec<u32> = (0..states).map(|s| offsets[s + 1] - offsets[s]).collect();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let mut added = 0u32;
    for s in 0..states {
        if terminal[s] {
            rank[s] = added;
            added += 1;
            queue.push_back(s as u32);
        }
    }
    while let Some(t) = queue.pop_front() {
        for &s in &sources[rev_offsets[t as usize] as usize..rev_offsets[t as usize + 1] as usize] {
            let s = s as usize;
            if rank[s] != u32::MAX {
                continue;
            }
            let joins = if bob_moves[s] {
                true
            } else {
                remaining[s] -= 1;
                remaining[s] == 0
            };
            if joins {
                rank[s] = added;
                added += 1;
                queue.push_back(s as u32);
            }
        }
    }

    let solved = SolvedGame {
        graph: graph.clone(),
        k,
        variant,
        layout,
        index,
        rank,
        offsets,
        targets,
        terminal,
        bob_moves,
        root: 0,
    };
    Ok(SolveResult { winner: solved.winner(), states_explored: states, solved: Arc::new(solved) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedGraph};

    fn g(kind: NamedGraph) -> Arc<Graph> {
        Arc::new(make_named(kind).unwrap())
    }

    fn winner(graph: &Arc<Graph>, k: u32, variant: RuleVariant) -> Player {
        solve_eternal(graph, k, variant, &SolveOptions::default()).unwrap().winner
    }

    #[test]
    fn single_vertex() {
        let k1 = g(NamedGraph::Complete { n: 1 });
        assert_eq!(winner(&k1, 1, RuleVariant::Standard), Player::Bob);
        assert_eq!(winner(&k1, 2, RuleVariant::Standard), Player::Alice);
    }

    #[test]
    fn star_five_greedy_both() {
        let star = g(NamedGraph::Star { leaves: 5 });
        assert_eq!(winner(&star, 3, RuleVariant::GreedyBoth), Player::Alice);
        assert_eq!(winner(&star, 2, RuleVariant::GreedyBoth), Player::Bob);
    }

    #[test]
    fn attractor_is_a_fixed_point() {
        for (kind, k, variant) in [
            (NamedGraph::Star { leaves: 4 }, 3, RuleVariant::GreedyBob),
            (NamedGraph::Cycle { n: 5 }, 3, RuleVariant::Standard),
            (NamedGraph::Path { n: 4 }, 3, RuleVariant::GreedyBoth),
        ] {
            let res = solve_eternal(&g(kind), k, variant, &SolveOptions::default()).unwrap();
            assert!(res.solved.verify_fixed_point(), "{kind:?} k={k}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let big = g(NamedGraph::Complete { n: 8 });
        let opts = SolveOptions { state_cap: 1000, ..Default::default() };
        assert!(matches!(
            solve_eternal(&big, 3, RuleVariant::Standard, &opts),
            Err(Error::StateCapExceeded { .. })
        ));
    }

    #[test]
    fn symmetry_rejected_for_greedy() {
        let star = g(NamedGraph::Star { leaves: 2 });
        let opts = SolveOptions { colour_symmetry: true, ..Default::default() };
        assert!(solve_eternal(&star, 3, RuleVariant::GreedyBob, &opts).is_err());
    }

    #[test]
    fn symmetry_never_changes_the_winner() {
        let fixtures = [
            NamedGraph::Path { n: 3 },
            NamedGraph::Path { n: 4 },
            NamedGraph::Cycle { n: 4 },
            NamedGraph::Star { leaves: 3 },
            NamedGraph::Complete { n: 3 },
        ];
        for kind in fixtures {
            let graph = g(kind);
            for k in 1..=4 {
                let plain = solve_eternal(&graph, k, RuleVariant::Standard, &SolveOptions::default()).unwrap();
                let sym = solve_eternal(
                    &graph,
                    k,
                    RuleVariant::Standard,
                    &SolveOptions { colour_symmetry: true, ..Default::default() },
                )
                .unwrap();
                assert_eq!(plain.winner, sym.winner, "{kind:?} k={k}");
                assert!(sym.states_explored <= plain.states_explored);
            }
        }
    }

    #[test]
    fn best_move_is_known_for_every_reached_position() {
        let graph = g(NamedGraph::Path { n: 3 });
        let res = solve_eternal(&graph, 3, RuleVariant::Standard, &SolveOptions::default()).unwrap();
        let s = GameState::new(graph, 3, RuleVariant::Standard);
        assert!(res.solved.best_move(&s).is_some());
        assert_eq!(res.solved.bob_wins_from(&s), Some(res.winner == Player::Bob));
    }
}
