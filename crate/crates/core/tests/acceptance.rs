//! Acceptance gates. Each test writes one `PASS`/`FAIL` line to stdout
//! (bypassing the harness capture) and then asserts the same condition.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use ecgame::audit::hoeffding_check;
use ecgame::experiment::{estimate_threshold, run_experiment, ExperimentConfig, TrialRecord};
use ecgame::partition::{build_color_plan, weight_identity_check, weight_identity_check_with, Rational, WeightForm};
use ecgame::rng::{derive_seed, rng_from_seed};
use ecgame::solver::{eternal_game_chromatic_number, solve_eternal, SolveOptions, SolvedGame};
use ecgame::strategy::{Strategy, StrategyConfig, StrategyContext, StrategyRegistry};
use ecgame::{gnp_generate, make_named, play_game, GnpSpec, Graph, MoveRecord, NamedGraph, Player, RuleVariant, Termination};
use ecgame::{GameState, VertexSet};
use rand::Rng;

fn report(criterion: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "acceptance {criterion}: {verdict} ({detail})").unwrap();
    out.flush().unwrap();
}

fn star(leaves: usize) -> Arc<Graph> {
    Arc::new(make_named(NamedGraph::Star { leaves }).unwrap())
}

fn k_star(graph: &Arc<Graph>, variant: RuleVariant) -> Option<u32> {
    eternal_game_chromatic_number(graph, variant, &SolveOptions::default(), false).unwrap().k_star
}

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn criterion_1_star_values() {
    let start = std::time::Instant::now();
    let k5 = k_star(&star(5), RuleVariant::GreedyBoth);
    let k7 = k_star(&star(7), RuleVariant::GreedyBoth);
    let opts = SolveOptions::default();
    let bob_k4 = solve_eternal(&star(4), 3, RuleVariant::GreedyBob, &opts).unwrap().winner;
    let both_k4 = solve_eternal(&star(4), 3, RuleVariant::GreedyBoth, &opts).unwrap().winner;
    let secs = start.elapsed().as_secs_f64();
    let pass = k5 == Some(3) && k7 == Some(3) && bob_k4 == Player::Bob && both_k4 == Player::Bob && secs < 60.0;
    report(
        "1",
        pass,
        &format!("K1,5 greedy-both {k5:?}, K1,7 greedy-both {k7:?}, K1,4 k=3 greedy-bob {bob_k4}, greedy-both {both_k4}, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_subgraph_monotonicity_fails() {
    let big = star(5);
    let small = star(4);
    let induced = big.induced(&VertexSet::from_iter(6, 0..5));
    let is_induced = induced.to_edge_list() == small.to_edge_list();
    let both_big = k_star(&big, RuleVariant::GreedyBoth);
    let bob_small = k_star(&small, RuleVariant::GreedyBob);
    let pass = is_induced && both_big == Some(3) && bob_small.is_some_and(|s| s > 3);
    report(
        "2",
        pass,
        &format!("greedy-both K1,5 = {both_big:?}, greedy-bob K1,4 = {bob_small:?}, K1,4 induced in K1,5: {is_induced}"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_weight_identity() {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    for k in 2..=6 {
        for l in 1..=7 {
            if !weight_identity_check(k, l).unwrap().all_hold() {
                failures.push((k, l));
            }
        }
    }
    let display_fails = !weight_identity_check_with(WeightForm::Display, 2, 3).unwrap().all_hold();
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && display_fails && secs < 10.0;
    report(
        "3",
        pass,
        &format!("counting-form failures {failures:?}, display form fails at (2,3): {display_fails}, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_colour_plan_coverage() {
    let mut bad = Vec::new();
    for k in [2u32, 3, 4] {
        for l in [1usize, 2, 3] {
            for num in [10u32, 40] {
                let plan = build_color_plan(l, k, num).unwrap();
                let covered = (0..l).all(|x| {
                    let mut seen = plan.seen_by(x);
                    seen.sort_unstable();
                    seen.dedup();
                    seen == (1..=num).collect::<Vec<_>>()
                });
                let conserved = plan.partitions().iter().map(|p| p.colours.len() as u32).sum::<u32>() == num
                    && plan.allocated() == num;
                if !(covered && conserved) {
                    bad.push((k, l, num));
                }
            }
        }
    }
    report("4", bad.is_empty(), &format!("18 plans, failing (k, l, colours): {bad:?}"));
    assert!(bad.is_empty());
}

#[test]
fn criterion_5_hoeffding_grid() {
    let ps: Vec<Rational> = (1..=9).map(|i| Rational::new(i.into(), 10.into())).collect();
    let eps: Vec<Rational> = (1..=9).map(|i| Rational::new((5 * i).into(), 100.into())).collect();
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for n in 1..=200u64 {
        for p in &ps {
            for e in &eps {
                let r = hoeffding_check(n, p, e).unwrap();
                checked += 1;
                if !r.holds() {
                    violations.push((n, p.to_string(), e.to_string()));
                }
            }
        }
    }
    report("5", violations.is_empty(), &format!("{checked} (n, p, epsilon) cells, violations {violations:?}"));
    assert!(violations.is_empty());
}

/// Colours `v` could take under the standard rules, computed from scratch.
fn free_colours(graph: &Graph, colours: &[u32], k: u32, v: usize) -> Vec<u32> {
    let mut seen = vec![false; k as usize + 1];
    seen[colours[v] as usize] = true;
    for u in graph.neighbors(v).iter() {
        seen[colours[u] as usize] = true;
    }
    (1..=k).filter(|&c| !seen[c as usize]).collect()
}

/// Replays a transcript against an independent model of the rules and
/// returns the first violation.
fn check_playout(
    graph: &Graph,
    k: u32,
    variant: RuleVariant,
    transcript: &[MoveRecord],
    termination: &Termination,
) -> Result<(), String> {
    let n = graph.n();
    let ample = k as usize >= graph.max_degree() + 2;
    let mut colours = vec![0u32; n];
    let mut played = vec![false; n];
    for (m, rec) in transcript.iter().enumerate() {
        let round = (m / n) as u32 + 1;
        let idx = m % n;
        if idx == 0 {
            played.iter_mut().for_each(|p| *p = false);
            let opener = rec.player;
            let expected = if n.is_multiple_of(2) || round % 2 == 1 { Player::Alice } else { Player::Bob };
            if opener != expected {
                return Err(format!("round {round} opener {opener} disagrees with parity rule"));
            }
        }
        let mover = if m % 2 == 0 { Player::Alice } else { Player::Bob };
        if rec.round != round || rec.idx != idx || rec.player != mover {
            return Err(format!("move {m}: bookkeeping {rec:?}"));
        }
        if ample && (0..n).any(|v| !played[v] && free_colours(graph, &colours, k, v).is_empty()) {
            return Err(format!("move {m}: empty legal set with k >= max degree + 2"));
        }
        if played[rec.vertex] {
            return Err(format!("move {m}: vertex {} played twice in round {round}", rec.vertex));
        }
        let free = free_colours(graph, &colours, k, rec.vertex);
        let allowed = if variant.is_greedy_for(mover) { &free[..free.len().min(1)] } else { &free[..] };
        if !allowed.contains(&rec.colour) {
            return Err(format!("move {m}: colour {} not allowed at {}", rec.colour, rec.vertex));
        }
        colours[rec.vertex] = rec.colour;
        played[rec.vertex] = true;
        if graph.edges().any(|(u, v)| colours[u] != 0 && colours[u] == colours[v]) {
            return Err(format!("move {m}: colouring not proper"));
        }
    }
    match termination {
        Termination::BobWins { vertex, .. } => {
            if ample {
                return Err("Bob won with k >= max degree + 2".into());
            }
            let round_over = !transcript.is_empty() && transcript.len().is_multiple_of(n);
            if (played[*vertex] && !round_over) || !free_colours(graph, &colours, k, *vertex).is_empty() {
                return Err(format!("winning vertex {vertex} was not stuck"));
            }
        }
        Termination::AliceSurvives { .. } => {}
        Termination::Fault { reason, .. } => return Err(format!("fault: {reason}")),
    }
    Ok(())
}

#[test]
fn criterion_6_engine_invariants() {
    const PLAYOUTS: u64 = 10_000;
    let registry = StrategyRegistry::with_defaults();
    let names = ["random-legal", "greedy-first-fit"];
    let variants = [RuleVariant::Standard, RuleVariant::GreedyBob, RuleVariant::GreedyBoth];
    let mut counts = [0usize; 2];
    let mut ample_games = 0usize;
    let mut violation = None;
    for i in 0..PLAYOUTS {
        let mut rng = rng_from_seed(derive_seed(6, &[i]));
        let graph = Arc::new(match rng.gen_range(0..4) {
            0 => make_named(NamedGraph::Star { leaves: rng.gen_range(1..8) }).unwrap(),
            1 => make_named(NamedGraph::Cycle { n: rng.gen_range(3..10) }).unwrap(),
            2 => make_named(NamedGraph::Path { n: rng.gen_range(1..10) }).unwrap(),
            _ => gnp_generate(GnpSpec { n: rng.gen_range(1..16), p: rng.gen_range(0.1..0.9), seed: rng.gen() }).unwrap(),
        });
        counts[graph.n() % 2] += 1;
        let variant = variants[rng.gen_range(0..3)];
        let k = rng.gen_range(1..=graph.max_degree() as u32 + 3);
        ample_games += (k as usize >= graph.max_degree() + 2) as usize;
        let ctx = StrategyContext { graph: graph.clone(), k, variant };
        let mut alice = registry.build(&StrategyConfig::named(names[rng.gen_range(0..2)]), &ctx).unwrap();
        let mut bob = registry.build(&StrategyConfig::named(names[rng.gen_range(0..2)]), &ctx).unwrap();
        let out = play_game(graph.clone(), k, alice.as_mut(), bob.as_mut(), variant, 4, rng.gen()).unwrap();
        if let Err(e) = check_playout(&graph, k, variant, &out.transcript, &out.termination) {
            violation = Some(format!("playout {i} ({} vertices, k={k}, {variant:?}): {e}", graph.n()));
            break;
        }
    }
    let pass = violation.is_none() && counts[0] > 0 && counts[1] > 0 && ample_games > 0;
    report(
        "6",
        pass,
        &format!(
            "{PLAYOUTS} playouts, {} even-n, {} odd-n, {ample_games} with k >= max degree + 2, first violation {violation:?}",
            counts[0], counts[1]
        ),
    );
    assert!(pass);
}

fn rate(records: &[TrialRecord], won: impl Fn(&TrialRecord) -> bool) -> f64 {
    records.iter().filter(|r| won(r)).count() as f64 / records.len() as f64
}

#[test]
fn criterion_7a_bob_wins_by_round_two() {
    let cfg = ExperimentConfig::load(&config_path("bob_round_two.toml")).unwrap();
    let records = run_experiment(&cfg, &StrategyRegistry::with_defaults(), None).unwrap();
    let bob_rate = rate(&records, |r| r.bob_won_by(2));
    let pass = records.len() == 200 && bob_rate >= 0.90;
    report("7a", pass, &format!("Bob win rate by round 2 at k={}: {bob_rate:.3} over {} trials (gate 0.90)", cfg.k_range.lo(), records.len()));
    assert!(pass);
}

#[test]
fn criterion_7b_alice_survives_ten_rounds() {
    let cfg = ExperimentConfig::load(&config_path("alice_survival.toml")).unwrap();
    let records = run_experiment(&cfg, &StrategyRegistry::with_defaults(), None).unwrap();
    let survival = rate(&records, |r| r.winner == Some(Player::Alice));
    let pass = records.len() == 200 && survival >= 0.90;
    report(
        "7b",
        pass,
        &format!(
            "Alice {}-round survival at k={}: {survival:.3} over {} trials (gate 0.90)",
            cfg.max_rounds,
            cfg.k_range.lo(),
            records.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_monotone_curve() {
    let cfg = ExperimentConfig::load(&config_path("winrate_curve.toml")).unwrap();
    let records = run_experiment(&cfg, &StrategyRegistry::with_defaults(), None).unwrap();
    let est = estimate_threshold(&records, cfg.threshold_quantile);
    let worst_rise = est
        .curve
        .windows(2)
        .map(|w| w[1].bob_rate - w[0].bob_rate)
        .fold(f64::NEG_INFINITY, f64::max);
    let pass = est.curve.len() == 21 && est.monotonicity_flags.is_empty() && worst_rise <= 0.07;
    report(
        "8",
        pass,
        &format!(
            "k in {}..={}, largest adjacent rise in Bob win rate {worst_rise:.3} (tolerance 0.07), k_hat {:?}",
            cfg.k_range.lo(),
            cfg.k_range.hi(),
            est.k_hat
        ),
    );
    assert!(pass);
}

fn opponents(registry: &StrategyRegistry, side: Player) -> Vec<StrategyConfig> {
    let names: &[&str] = match side {
        Player::Alice => &["greedy-first-fit", "random-legal", "paper-alice"],
        Player::Bob => &["greedy-first-fit", "random-legal", "paper-bob-odd", "paper-bob-general", "paper-bob-even"],
    };
    names.iter().filter(|n| registry.contains(n)).map(|n| StrategyConfig::named(n)).collect()
}

/// Plays the witness for `solved`'s winner against every opponent that can be
/// built for the instance; returns (games, witness wins, failures).
fn witness_playouts(solved: &Arc<SolvedGame>, registry: &StrategyRegistry) -> (usize, usize, Vec<String>) {
    const SEEDS: u64 = 20;
    const ROUNDS: u32 = 50;
    let winner = solved.winner();
    let graph = solved.graph().clone();
    let ctx = StrategyContext { graph: graph.clone(), k: solved.k(), variant: solved.variant() };
    let (mut games, mut wins, mut failures) = (0, 0, Vec::new());
    for opp in opponents(registry, winner.other()) {
        for seed in 0..SEEDS {
            let Ok(mut other) = registry.build(&opp, &ctx) else { break };
            let mut witness: Box<dyn Strategy> = Box::new(ecgame::strategy::SolverWitness::new(solved.clone()));
            let (alice, bob) = match winner {
                Player::Alice => (&mut witness, &mut other),
                Player::Bob => (&mut other, &mut witness),
            };
            let out = play_game(graph.clone(), ctx.k, alice.as_mut(), bob.as_mut(), ctx.variant, ROUNDS, seed).unwrap();
            games += 1;
            if out.winner() == Some(winner) {
                wins += 1;
            } else {
                failures.push(format!("{} vs {} seed {seed}: {:?}", winner, opp.name, out.termination));
            }
        }
    }
    (games, wins, failures)
}

#[test]
fn criterion_9_witness_cross_check() {
    let registry = StrategyRegistry::with_defaults();
    let opts = SolveOptions::default();
    let instances = [
        (5, RuleVariant::GreedyBoth, 3),
        (7, RuleVariant::GreedyBoth, 3),
        (4, RuleVariant::GreedyBob, 4),
        (4, RuleVariant::GreedyBoth, 4),
    ];
    let (mut solved_count, mut games, mut wins, mut failures) = (0, 0, 0, Vec::new());
    for (leaves, variant, upto) in instances {
        for k in 1..=upto {
            let solved = solve_eternal(&star(leaves), k, variant, &opts).unwrap().solved;
            assert!(solved.verify_fixed_point());
            solved_count += 1;
            let (g, w, f) = witness_playouts(&solved, &registry);
            games += g;
            wins += w;
            failures.extend(f.into_iter().map(|s| format!("K1,{leaves} k={k} {variant:?}: {s}")));
        }
    }
    let pass = failures.is_empty() && games > 0;
    report(
        "9",
        pass,
        &format!("{solved_count} solved instances, witness won {wins}/{games} playouts, first failures {:?}", &failures[..failures.len().min(3)]),
    );
    assert!(pass);
}

#[test]
fn criterion_6_checker_catches_a_bad_transcript() {
    let graph = make_named(NamedGraph::Path { n: 2 }).unwrap();
    let ok = [
        MoveRecord { round: 1, idx: 0, player: Player::Alice, vertex: 0, colour: 1 },
        MoveRecord { round: 1, idx: 1, player: Player::Bob, vertex: 1, colour: 2 },
    ];
    let done = Termination::AliceSurvives { rounds: 1 };
    assert!(check_playout(&graph, 3, RuleVariant::Standard, &ok, &done).is_ok());
    let mut clash = ok;
    clash[1].colour = 1;
    assert!(check_playout(&graph, 3, RuleVariant::Standard, &clash, &done).is_err());
    let mut twice = ok;
    twice[1].vertex = 0;
    twice[1].colour = 2;
    assert!(check_playout(&graph, 3, RuleVariant::Standard, &twice, &done).is_err());
    let state = GameState::new(Arc::new(graph), 3, RuleVariant::Standard);
    assert_eq!(state.legal_colors(0).unwrap(), vec![1, 2, 3]);
}
