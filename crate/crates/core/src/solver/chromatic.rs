use std::sync::Arc;

use serde::Serialize;

use super::{solve_eternal, SolveOptions};
use crate::error::Result;
use crate::game::{Player, RuleVariant};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KOutcome {
    pub k: u32,
    pub winner: Player,
    #[serde(rename = "statesExplored")]
    pub states_explored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChromaticReport {
    pub variant: RuleVariant,
    /// Smallest `k` at which Alice wins; `None` if none was found.
    #[serde(rename = "kStar")]
    pub k_star: Option<u32>,
    /// `Δ + 2`, where Alice always wins.
    #[serde(rename = "upperBound")]
    pub upper_bound: u32,
    pub scanned: Vec<KOutcome>,
    /// Alice's wins form a suffix of the scanned range.
    pub monotone: bool,
}

impl ChromaticReport {
    pub fn states_explored(&self) -> usize {
        self.scanned.iter().map(|o| o.states_explored).sum()
    }
}

/// Scans `k = 1, 2, ..` up to `Δ + 2` and reports the smallest `k` Alice wins
/// with. The scan stops there unless `full_scan` asks for every `k` up to
/// the bound, which is what it takes to see non-monotone behaviour.
pub fn eternal_game_chromatic_number(
    graph: &Arc<Graph>,
    variant: RuleVariant,
    opts: &SolveOptions,
    full_scan: bool,
) -> Result<ChromaticReport> {
    let upper_bound = graph.max_degree() as u32 + 2;
    let mut scanned = Vec::new();
    let mut k_star = None;
    for k in 1..=upper_bound {
        let res = solve_eternal(graph, k, variant, opts)?;
        scanned.push(KOutcome { k, winner: res.winner, states_explored: res.states_explored });
        if res.winner == Player::Alice && k_star.is_none() {
            k_star = Some(k);
            if !full_scan {
                break;
            }
        }
    }
    let monotone = scanned
        .windows(2)
        .all(|w| !(w[0].winner == Player::Alice && w[1].winner == Player::Bob));
    Ok(ChromaticReport { variant, k_star, upper_bound, scanned, monotone })
}
