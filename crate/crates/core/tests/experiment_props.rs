use std::fs;
use std::path::PathBuf;

use ecgame::experiment::{emit_outputs, read_csv, run_experiment, summarize, ExperimentConfig, KRange, Summary};
use ecgame::strategy::{StrategyConfig, StrategyRegistry};
use ecgame::{GraphSpec, NamedGraph, RuleVariant};
use proptest::prelude::*;

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn graph_spec() -> impl Strategy<Value = GraphSpec> {
    prop_oneof![
        (2usize..200, 0.0f64..=1.0).prop_map(|(n, p)| GraphSpec::Gnp { n, p }),
        (1usize..9).prop_map(|leaves| GraphSpec::Named { graph: NamedGraph::Star { leaves } }),
        (3usize..9).prop_map(|n| GraphSpec::Named { graph: NamedGraph::Cycle { n } }),
    ]
}

proptest! {
    #[test]
    fn configs_round_trip_through_toml(
        graph in graph_spec(),
        lo in 1u32..30,
        span in 0u32..10,
        trials in 1usize..500,
        max_rounds in 1u32..50,
        master_seed in any::<u64>(),
        shared_graph in any::<bool>(),
        quantile in 0.01f64..=1.0,
        v in prop_oneof![Just(RuleVariant::Standard), Just(RuleVariant::GreedyBob), Just(RuleVariant::GreedyBoth)],
        target in proptest::option::of(0usize..5),
    ) {
        let cfg = ExperimentConfig {
            graph,
            k_range: KRange::new(lo, lo + span).unwrap(),
            variant: v,
            trials,
            max_rounds,
            master_seed,
            output: None,
            shared_graph,
            threshold_quantile: quantile,
            alice: StrategyConfig::named("paper-alice"),
            bob: StrategyConfig { target, ..StrategyConfig::named("paper-bob-odd") },
        };
        let text = cfg.to_toml().unwrap();
        prop_assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }
}

#[test]
fn shipped_configs_load() {
    for name in ["bob_round_two.toml", "alice_survival.toml", "winrate_curve.toml"] {
        let cfg = ExperimentConfig::load(&shipped(name)).unwrap();
        assert_eq!(cfg.graph, GraphSpec::Gnp { n: 101, p: 0.5 }, "{name}");
        assert_eq!(cfg.trials, 200, "{name}");
    }
}

/// The same config file run twice writes byte-identical outputs, and the
/// summary's curve recomputes from the CSV alone.
#[test]
fn config_file_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.toml");
    fs::write(
        &path,
        r#"
graph = "gnp:25:0.5"
k_range = [4, 9]
trials = 12
max_rounds = 4
master_seed = 99

[alice]
name = "paper-alice"

[bob]
name = "paper-bob-odd"
"#,
    )
    .unwrap();
    let reg = StrategyRegistry::with_defaults();
    let mut written = Vec::new();
    for (run, jobs) in [(0, Some(1)), (1, None)] {
        let cfg = ExperimentConfig::load(&path).unwrap();
        let records = run_experiment(&cfg, &reg, jobs).unwrap();
        written.push(emit_outputs(&cfg, &records, &dir.path().join(format!("run{run}"))).unwrap());
    }
    assert_eq!(fs::read(&written[0].csv).unwrap(), fs::read(&written[1].csv).unwrap());
    assert_eq!(fs::read(&written[0].summary).unwrap(), fs::read(&written[1].summary).unwrap());

    let rows = read_csv(fs::File::open(&written[0].csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 6 * 12);
    let summary: Summary = serde_json::from_slice(&fs::read(&written[0].summary).unwrap()).unwrap();
    assert_eq!(summary.threshold.curve, summarize(&rows));
    for s in &summary.threshold.curve {
        assert_eq!(s.alice_wins + s.bob_wins + s.faults, s.trials);
    }
}

#[test]
fn star_threshold_with_solver_witnesses() {
    let cfg = ExperimentConfig::from_toml_str(
        r#"
graph = "star:5"
k_range = [2, 4]
variant = "greedy-both"
trials = 3
max_rounds = 20

[alice]
name = "solver-witness"

[bob]
name = "solver-witness"
"#,
    )
    .unwrap();
    let records = run_experiment(&cfg, &StrategyRegistry::with_defaults(), None).unwrap();
    let est = ecgame::experiment::estimate_threshold(&records, 0.5);
    assert_eq!(est.k_hat, Some(3));
}
