use rustc_hash::FxHashMap;

use super::position::{Layout, Pos};
use super::{check_size, SolveOptions};
use crate::error::Result;
use crate::game::Player;
use crate::graph::Graph;

/// The classical colouring game: one round only, Alice wins iff every vertex
/// gets coloured. Minimax over colourings (the mover follows from how many
/// vertices are coloured).
pub fn solve_one_round(graph: &Graph, k: u32, opts: &SolveOptions) -> Result<Player> {
    let estimate = (k as u128 + 1).saturating_pow(graph.n() as u32).saturating_mul(2);
    check_size(graph, k, estimate, opts.state_cap)?;
    let layout = Layout::new(graph, k, false);
    let mut memo = FxHashMap::default();
    let bob = bob_wins(&layout, Pos::initial(graph.n()), &mut memo);
    Ok(if bob { Player::Bob } else { Player::Alice })
}

fn bob_wins(layout: &Layout, pos: Pos, memo: &mut FxHashMap<u64, bool>) -> bool {
    if !pos.first {
        return false;
    }
    let key = layout.key(&pos);
    if let Some(&r) = memo.get(&key) {
        return r;
    }
    debug_assert_eq!(pos.played.count_ones() % 2 == 1, pos.bob);
    let moves = layout.moves(&pos, false);
    let result = if pos.bob {
        !moves.stuck.is_empty() || moves.options.iter().any(|&(v, c)| bob_wins(layout, layout.apply(&pos, v, c), memo))
    } else {
        moves.options.iter().all(|&(v, c)| bob_wins(layout, layout.apply(&pos, v, c), memo))
    };
    memo.insert(key, result);
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, NamedGraph};

    fn one(kind: NamedGraph, k: u32) -> Player {
        solve_one_round(&make_named(kind).unwrap(), k, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(one(NamedGraph::Empty { n: 4 }, 1), Player::Alice);
        for n in 2..=5 {
            assert_eq!(one(NamedGraph::Complete { n }, n as u32), Player::Alice);
            assert_eq!(one(NamedGraph::Complete { n }, n as u32 - 1), Player::Bob);
        }
    }

    #[test]
    fn path_of_four_needs_three() {
        assert_eq!(one(NamedGraph::Path { n: 4 }, 2), Player::Bob);
        assert_eq!(one(NamedGraph::Path { n: 4 }, 3), Player::Alice);
    }
}
