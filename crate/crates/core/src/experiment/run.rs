use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::game::{play_game, Player, Termination};
use crate::graph::Graph;
use crate::rng::derive_seed;
use crate::strategy::{StrategyContext, StrategyRegistry};

/// Label mixed into graph seeds so they never collide with game seeds.
pub const GRAPH_TAG: u64 = 0x0067_7261_7068;

/// Seed of the game in cell `(trial, k)`.
pub fn game_seed(master: u64, trial: usize, k: u32) -> u64 {
    derive_seed(master, &[trial as u64, k as u64])
}

/// Seed of the graph used by `trial`; with a shared graph every trial uses
/// trial 0's draw.
pub fn graph_seed(master: u64, trial: usize, shared: bool) -> u64 {
    let t = if shared { 0 } else { trial as u64 };
    derive_seed(master, &[t, GRAPH_TAG])
}

/// One `(trial, k)` cell. `winner` is `None` when a strategy faulted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub k: u32,
    pub winner: Option<Player>,
    pub termination_round: u32,
    pub moves_played: usize,
    pub fault: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault_reason: Option<String>,
}

impl TrialRecord {
    pub fn bob_won_by(&self, round: u32) -> bool {
        self.winner == Some(Player::Bob) && self.termination_round <= round
    }

    fn faulted(trial_index: usize, seed: u64, k: u32, reason: String) -> Self {
        TrialRecord {
            trial_index,
            seed,
            k,
            winner: None,
            termination_round: 0,
            moves_played: 0,
            fault: true,
            fault_reason: Some(reason),
        }
    }
}

fn run_cell(
    cfg: &ExperimentConfig,
    registry: &StrategyRegistry,
    graph: &Arc<Graph>,
    trial: usize,
    k: u32,
) -> TrialRecord {
    let seed = game_seed(cfg.master_seed, trial, k);
    let ctx = StrategyContext { graph: graph.clone(), k, variant: cfg.variant };
    let play = || -> Result<TrialRecord> {
        let mut alice = registry.build(&cfg.alice, &ctx)?;
        let mut bob = registry.build(&cfg.bob, &ctx)?;
        let out = play_game(graph.clone(), k, alice.as_mut(), bob.as_mut(), cfg.variant, cfg.max_rounds, seed)?;
        let fault_reason = match &out.termination {
            Termination::Fault { reason, .. } => Some(reason.clone()),
            _ => None,
        };
        Ok(TrialRecord {
            trial_index: trial,
            seed,
            k,
            winner: out.winner(),
            termination_round: out.termination_round(),
            moves_played: out.transcript.len(),
            fault: fault_reason.is_some(),
            fault_reason,
        })
    };
    play().unwrap_or_else(|e| TrialRecord::faulted(trial, seed, k, e.to_string()))
}

/// Plays every `(k, trial)` cell, in parallel, and returns the records in
/// `(k, trial)` order. Results do not depend on the number of workers.
pub fn run_experiment(cfg: &ExperimentConfig, registry: &StrategyRegistry, jobs: Option<usize>) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let graph_count = if cfg.shared_graph || !cfg.graph.is_random() { 1 } else { cfg.trials };
    let build = |t: usize| cfg.graph.build(graph_seed(cfg.master_seed, t, cfg.shared_graph)).map(Arc::new);
    let work = || -> Result<Vec<TrialRecord>> {
        let graphs: Vec<Arc<Graph>> = (0..graph_count).into_par_iter().map(build).collect::<Result<_>>()?;
        let cells: Vec<(u32, usize)> = cfg.k_range.iter().flat_map(|k| (0..cfg.trials).map(move |t| (k, t))).collect();
        Ok(cells
            .into_par_iter()
            .map(|(k, t)| run_cell(cfg, registry, &graphs[t.min(graph_count - 1)], t, k))
            .collect())
    };
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Outcome counts at one `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KSummary {
    pub k: u32,
    pub trials: usize,
    pub alice_wins: usize,
    pub bob_wins: usize,
    pub faults: usize,
    pub alice_rate: f64,
    pub bob_rate: f64,
}

pub fn summarize(records: &[TrialRecord]) -> Vec<KSummary> {
    let mut ks: Vec<u32> = records.iter().map(|r| r.k).collect();
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter()
        .map(|k| {
            let cell: Vec<&TrialRecord> = records.iter().filter(|r| r.k == k).collect();
            let count = |p: Player| cell.iter().filter(|r| r.winner == Some(p)).count();
            let (alice_wins, bob_wins) = (count(Player::Alice), count(Player::Bob));
            let trials = cell.len();
            KSummary {
                k,
                trials,
                alice_wins,
                bob_wins,
                faults: cell.iter().filter(|r| r.fault).count(),
                alice_rate: alice_wins as f64 / trials as f64,
                bob_rate: bob_wins as f64 / trials as f64,
            }
        })
        .collect()
}

/// Empirical threshold: the smallest `k` at which Alice survives in at
/// least `quantile` of the trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThresholdEstimate {
    pub quantile: f64,
    pub k_hat: Option<u32>,
    /// No `k` in range reached the quantile.
    pub censored: bool,
    pub curve: Vec<KSummary>,
    /// `k` values where Bob's win rate rose by more than `tolerance` over
    /// the previous `k`.
    pub monotonicity_flags: Vec<u32>,
    pub tolerance: f64,
}

/// Sampling tolerance used when flagging non-monotone win-rate curves.
pub const CURVE_TOLERANCE: f64 = 0.07;

pub fn estimate_threshold(records: &[TrialRecord], quantile: f64) -> ThresholdEstimate {
    let curve = summarize(records);
    let k_hat = curve.iter().find(|s| s.alice_rate >= quantile).map(|s| s.k);
    let monotonicity_flags = curve
        .windows(2)
        .filter(|w| w[1].bob_rate > w[0].bob_rate + CURVE_TOLERANCE)
        .map(|w| w[1].k)
        .collect();
    ThresholdEstimate { quantile, k_hat, censored: k_hat.is_none(), curve, monotonicity_flags, tolerance: CURVE_TOLERANCE }
}
