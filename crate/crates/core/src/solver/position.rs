use crate::game::{GameState, Player};
use crate::graph::Graph;

use super::MAX_SOLVER_VERTICES;

/// A position with the round number reduced to "first round or later".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub colours: [u8; MAX_SOLVER_VERTICES],
    pub played: u32,
    pub bob: bool,
    pub first: bool,
}

impl Pos {
    pub fn initial(_n: usize) -> Self {
        Pos { colours: [0; MAX_SOLVER_VERTICES], played: 0, bob: false, first: true }
    }

    pub fn from_state(state: &GameState) -> Self {
        let mut colours = [0u8; MAX_SOLVER_VERTICES];
        for (slot, &c) in colours.iter_mut().zip(state.colours()) {
            *slot = c as u8;
        }
        let played = state.played().iter().fold(0u32, |m, v| m | 1 << v);
        Pos { colours, played, bob: state.to_move() == Player::Bob, first: state.is_first_round() }
    }
}

/// Legal options for the mover plus the unplayed vertices without any.
#[derive(Default)]
pub(crate) struct Moves {
    pub options: Vec<(u8, u8)>,
    pub stuck: Vec<u8>,
}

/// Graph-specific encoding and move generation.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    n: usize,
    k: u32,
    closed: Vec<u32>,
    symmetry: bool,
}

impl Layout {
    pub fn new(graph: &Graph, k: u32, symmetry: bool) -> Self {
        let closed = (0..graph.n())
            .map(|v| graph.closed_neighborhood(v).iter().fold(0u32, |m, u| m | 1 << u))
            .collect();
        Layout { n: graph.n(), k, closed, symmetry }
    }

    fn full(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn key(&self, pos: &Pos) -> u64 {
        let base = self.k as u64 + 1;
        let value = pos.colours[..self.n].iter().rev().fold(0u64, |acc, &c| acc * base + c as u64);
        (((value << self.n) | pos.played as u64) << 2) | (pos.bob as u64) << 1 | pos.first as u64
    }

    pub fn decode(&self, key: u64) -> Pos {
        let first = key & 1 == 1;
        let bob = key >> 1 & 1 == 1;
        let rest = key >> 2;
        let played = (rest & ((1u64 << self.n) - 1)) as u32;
        let mut value = rest >> self.n;
        let base = self.k as u64 + 1;
        let mut colours = [0u8; MAX_SOLVER_VERTICES];
        for slot in colours.iter_mut().take(self.n) {
            *slot = (value % base) as u8;
            value /= base;
        }
        Pos { colours, played, bob, first }
    }

    /// Relabels colours in order of first appearance when symmetry is on.
    pub fn canonical(&self, pos: &Pos) -> Pos {
        if !self.symmetry {
            return *pos;
        }
        let mut map = [0u8; 256];
        let mut next = 1u8;
        let mut out = *pos;
        for c in out.colours[..self.n].iter_mut() {
            if *c == 0 {
                continue;
            }
            if map[*c as usize] == 0 {
                map[*c as usize] = next;
                next += 1;
            }
            *c = map[*c as usize];
        }
        out
    }

    /// Colours still free at `v`, as a bitmask over `1..=k`.
    fn free_mask(&self, pos: &Pos, v: usize) -> u64 {
        let palette = if self.k >= 63 { u64::MAX - 1 } else { ((1u64 << (self.k + 1)) - 1) & !1 };
        let mut seen = 0u64;
        let mut nb = self.closed[v];
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            seen |= 1 << pos.colours[u];
            nb &= nb - 1;
        }
        palette & !seen
    }

    pub fn moves(&self, pos: &Pos, greedy: bool) -> Moves {
        let mut out = Moves::default();
        let mut open = self.full() & !pos.played;
        while open != 0 {
            let v = open.trailing_zeros() as usize;
            open &= open - 1;
            let mut free = self.free_mask(pos, v);
            if free == 0 {
                out.stuck.push(v as u8);
                continue;
            }
            while free != 0 {
                let c = free.trailing_zeros() as u8;
                out.options.push((v as u8, c));
                if greedy {
                    break;
                }
                free &= free - 1;
            }
        }
        out
    }

    /// The position after `v` takes colour `c`, canonicalised.
    pub fn apply(&self, pos: &Pos, v: u8, c: u8) -> Pos {
        let mut next = *pos;
        next.colours[v as usize] = c;
        next.played |= 1 << v;
        next.bob = !pos.bob;
        if next.played == self.full() {
            next.played = 0;
            next.first = false;
        }
        self.canonical(&next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::RuleVariant;
    use crate::graph::{make_named, NamedGraph};
    use std::sync::Arc;

    #[test]
    fn key_roundtrip() {
        let g = make_named(NamedGraph::Path { n: 5 }).unwrap();
        let layout = Layout::new(&g, 3, false);
        let mut pos = Pos::initial(5);
        pos.colours[..5].copy_from_slice(&[1, 2, 3, 1, 0]);
        pos.played = 0b01011;
        pos.bob = true;
        assert_eq!(layout.decode(layout.key(&pos)), pos);
        pos.first = false;
        assert_eq!(layout.decode(layout.key(&pos)), pos);
    }

    #[test]
    fn moves_agree_with_engine() {
        let g = Arc::new(make_named(NamedGraph::Cycle { n: 5 }).unwrap());
        let layout = Layout::new(&g, 3, false);
        let mut state = GameState::new(g, 3, RuleVariant::Standard);
        for (v, c) in [(0, 1), (2, 2), (1, 3), (4, 3), (3, 1), (0, 2)] {
            let pos = Pos::from_state(&state);
            let moves = layout.moves(&pos, false);
            for v in state.unplayed() {
                let engine = state.legal_colors(v).unwrap();
                let ours: Vec<u32> =
                    moves.options.iter().filter(|o| o.0 as usize == v).map(|o| o.1 as u32).collect();
                assert_eq!(engine, ours);
                assert_eq!(engine.is_empty(), moves.stuck.contains(&(v as u8)));
            }
            let after = layout.apply(&pos, v as u8, c as u8);
            state.apply_move(v, c).unwrap();
            assert_eq!(after, Pos::from_state(&state));
        }
    }

    #[test]
    fn canonical_relabels_by_first_appearance() {
        let g = make_named(NamedGraph::Empty { n: 4 }).unwrap();
        let layout = Layout::new(&g, 4, true);
        let mut pos = Pos::initial(4);
        pos.colours[..4].copy_from_slice(&[3, 0, 1, 3]);
        assert_eq!(&layout.canonical(&pos).colours[..4], &[1, 0, 2, 1]);
    }
}
