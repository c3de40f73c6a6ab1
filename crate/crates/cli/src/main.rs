//! `ecgame`: play, solve, audit and batch-run the eternal colouring game.
//!
//! Exit codes: 0 success, 1 other failure, 2 configuration error,
//! 3 instance the exact solver refuses.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ecgame::audit::{audit_graph, AuditParams};
use ecgame::experiment::{
    build_summary, emit_outputs, estimate_threshold, game_seed, graph_seed, read_csv, run_experiment, write_csv,
    ExperimentConfig,
};
use ecgame::game::write_transcript;
use ecgame::solver::{eternal_game_chromatic_number, solve_eternal, SolveOptions, DEFAULT_STATE_CAP};
use ecgame::strategy::{StrategyConfig, StrategyContext, StrategyRegistry};
use ecgame::{play_game, Error, GraphSpec, RuleVariant};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ecgame", version, about = "Eternal vertex colouring game toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and print its outcome; `--out` receives the transcript.
    Play(PlayArgs),
    /// Solve an instance exactly, for one `k` or by scanning for the smallest Alice win.
    Solve(SolveArgs),
    /// Audit a graph for the structural properties the strategies rely on.
    Audit(AuditArgs),
    /// Run a config-driven batch and write `trials.csv` and `summary.json`.
    Experiment(RunArgs),
    /// Estimate the survival threshold from a batch or an existing `trials.csv`.
    Threshold(ThresholdArgs),
}

#[derive(Args)]
struct PlayArgs {
    /// Experiment config; the game uses its lowest `k` and trial 0's graph.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "cycle:5")]
    graph: GraphSpec,
    #[arg(long, default_value_t = 3)]
    k: u32,
    #[arg(long, default_value = "standard")]
    variant: RuleVariant,
    #[arg(long, default_value = "greedy-first-fit")]
    alice: String,
    #[arg(long, default_value = "random-legal")]
    bob: String,
    #[arg(long, default_value_t = 10)]
    max_rounds: u32,
    /// Game seed (and graph seed for random graphs).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Transcript file, one JSON move per line.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: GraphSpec,
    #[arg(long, default_value = "standard")]
    variant: RuleVariant,
    /// Palette size; without it the smallest Alice-winning `k` is searched.
    #[arg(long)]
    k: Option<u32>,
    /// Scan every `k` up to the `Δ + 2` bound instead of stopping at the first Alice win.
    #[arg(long)]
    full_scan: bool,
    /// Identify colour renamings (standard rules only).
    #[arg(long)]
    symmetry: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: u128,
    /// Seed for random graph specs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    graph: GraphSpec,
    /// Audit parameters as TOML; defaults derive from `--epsilon` and the graph's `p`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Graph seed, also used for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    run: OptionalRun,
    /// Read trials from this CSV instead of running the config.
    #[arg(long, conflicts_with = "config")]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    quantile: f64,
}

#[derive(Args)]
struct OptionalRun {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> ecgame::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn play(args: PlayArgs) -> ecgame::Result<()> {
    let (graph, k, variant, alice, bob, max_rounds, seed) = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            let k = cfg.k_range.lo();
            let graph = cfg.graph.build(graph_seed(cfg.master_seed, 0, cfg.shared_graph))?;
            let seed = game_seed(cfg.master_seed, 0, k);
            (graph, k, cfg.variant, cfg.alice, cfg.bob, cfg.max_rounds, seed)
        }
        None => (
            args.graph.build(args.seed)?,
            args.k,
            args.variant,
            StrategyConfig::named(&args.alice),
            StrategyConfig::named(&args.bob),
            args.max_rounds,
            args.seed,
        ),
    };
    let graph = Arc::new(graph);
    let registry = StrategyRegistry::with_defaults();
    let ctx = StrategyContext { graph: graph.clone(), k, variant };
    let mut a = registry.build(&alice, &ctx)?;
    let mut b = registry.build(&bob, &ctx)?;
    let outcome = play_game(graph.clone(), k, a.as_mut(), b.as_mut(), variant, max_rounds, seed)?;
    if let Some(path) = &args.out {
        write_transcript(fs::File::create(path)?, &outcome.transcript)?;
    }
    emit(
        &json!({
            "n": graph.n(),
            "k": k,
            "variant": variant,
            "seed": seed,
            "winner": outcome.winner(),
            "termination": outcome.termination,
            "movesPlayed": outcome.transcript.len(),
        }),
        None,
    )
}

fn solve(args: SolveArgs) -> ecgame::Result<()> {
    let graph = Arc::new(args.graph.build(args.seed)?);
    let opts = SolveOptions { state_cap: args.state_cap, colour_symmetry: args.symmetry };
    let value = match args.k {
        Some(k) => {
            let res = solve_eternal(&graph, k, args.variant, &opts)?;
            json!({ "k": k, "variant": args.variant, "winner": res.winner, "statesExplored": res.states_explored })
        }
        None => {
            let report = eternal_game_chromatic_number(&graph, args.variant, &opts, args.full_scan)?;
            let mut v = serde_json::to_value(&report)?;
            v["statesExplored"] = json!(report.states_explored());
            v
        }
    };
    emit(&value, args.out.as_deref())
}

fn audit(args: AuditArgs) -> ecgame::Result<()> {
    let graph = args.graph.build(args.seed)?;
    let mut params = match &args.config {
        Some(path) => AuditParams::load(path)?,
        None => {
            let p = match args.graph {
                GraphSpec::Gnp { p, .. } => p,
                _ => 0.5,
            };
            let params = AuditParams { seed: args.seed, ..AuditParams::new(p, args.epsilon) };
            params.validate().map_err(|e| Error::Config(e.to_string()))?;
            params
        }
    };
    if args.config.is_some() && params.seed == 0 {
        params.seed = args.seed;
    }
    let report = audit_graph(&graph, &params)?;
    emit(&serde_json::to_value(&report)?, args.out.as_deref())
}

fn load_run(config: &Path, seed: Option<u64>, out: Option<PathBuf>) -> ecgame::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if out.is_some() {
        cfg.output = out;
    }
    Ok(cfg)
}

fn experiment(args: RunArgs) -> ecgame::Result<()> {
    let cfg = load_run(&args.config, args.seed, args.out)?;
    if let Some(dir) = &cfg.output {
        ecgame::experiment::preflight_output(dir)?;
    }
    let records = run_experiment(&cfg, &StrategyRegistry::with_defaults(), args.jobs)?;
    match &cfg.output {
        Some(dir) => {
            let files = emit_outputs(&cfg, &records, dir)?;
            let summary = build_summary(&cfg, &records);
            emit(
                &json!({
                    "csv": files.csv,
                    "summary": files.summary,
                    "kHat": summary.threshold.k_hat,
                    "censored": summary.threshold.censored,
                    "monotonicityFlags": summary.threshold.monotonicity_flags,
                }),
                None,
            )
        }
        None => write_csv(&records, std::io::stdout().lock()),
    }
}

fn threshold(args: ThresholdArgs) -> ecgame::Result<()> {
    if !(args.quantile > 0.0 && args.quantile <= 1.0) {
        return Err(Error::Config(format!("quantile {} not in (0, 1]", args.quantile)));
    }
    let records = match (&args.csv, &args.run.config) {
        (Some(path), _) => read_csv(fs::File::open(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?)?,
        (None, Some(config)) => {
            let cfg = load_run(config, args.run.seed, None)?;
            run_experiment(&cfg, &StrategyRegistry::with_defaults(), args.run.jobs)?
        }
        (None, None) => return Err(Error::Config("threshold needs --config or --csv".into())),
    };
    let estimate = estimate_threshold(&records, args.quantile);
    emit(&serde_json::to_value(&estimate)?, args.run.out.as_deref())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::UnknownStrategy(_) | Error::InvalidArgument(_) | Error::InvalidGraph(_) => 2,
        Error::SolverLimit(_) | Error::StateCapExceeded { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Play(a) => play(a),
        Command::Solve(a) => solve(a),
        Command::Audit(a) => audit(a),
        Command::Experiment(a) => experiment(a),
        Command::Threshold(a) => threshold(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ecgame: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
