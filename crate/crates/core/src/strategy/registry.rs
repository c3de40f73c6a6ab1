use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{
    bob_even_setup, GreedyFirstFit, PaperAlice, PaperBobGeneral, PaperBobOdd, ParamOverrides, RandomLegal,
    SolverWitness, Strategy, StrategyParams, TargetPlan,
};
use crate::error::{Error, Result};
use crate::game::RuleVariant;
use crate::graph::Graph;
use crate::solver::{solve_eternal, SolveOptions, SolvedGame};

/// Epsilon used when a config does not give one.
pub const DEFAULT_EPSILON: f64 = 0.1;

/// A strategy as named in a config, with its optional arguments.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub name: String,
    /// Target vertex for the single-target Bobs (default 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    /// Number of distinguished vertices for `paper-bob-even` (default 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    /// `1/p` for `paper-bob-even` (default 2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_prime: Option<u32>,
    /// Palette the even plan distributes (default: the game's `k`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_colours: Option<u32>,
    #[serde(default)]
    pub params: ParamOverrides,
}

impl StrategyConfig {
    pub fn named(name: &str) -> Self {
        StrategyConfig { name: name.to_string(), ..Default::default() }
    }

    /// Derived parameters for this game with the config's overrides applied.
    pub fn resolve_params(&self, n: usize, k: u32) -> Result<StrategyParams> {
        let eps = self.params.epsilon.unwrap_or(DEFAULT_EPSILON);
        let params = StrategyParams::derived(n, k, eps).with_overrides(&self.params);
        params.validate(k).map_err(|e| Error::Config(format!("strategy {}: {e}", self.name)))?;
        Ok(params)
    }
}

/// The game a strategy is built for.
#[derive(Clone, Debug)]
pub struct StrategyContext {
    pub graph: Arc<Graph>,
    pub k: u32,
    pub variant: RuleVariant,
}

pub type StrategyFactory = Arc<dyn Fn(&StrategyConfig, &StrategyContext) -> Result<Box<dyn Strategy>> + Send + Sync>;

type SolveKey = (String, u32, RuleVariant);

/// Name-to-constructor table. Solved games for `solver-witness` are cached
/// per (graph, k, variant).
#[derive(Clone)]
pub struct StrategyRegistry {
    factories: BTreeMap<String, StrategyFactory>,
    solved: Arc<Mutex<HashMap<SolveKey, Arc<SolvedGame>>>>,
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

fn target_of(cfg: &StrategyConfig, ctx: &StrategyContext) -> Result<usize> {
    let t = cfg.target.unwrap_or(0);
    if t >= ctx.graph.n() {
        return Err(Error::Config(format!("target {t} out of range for {} vertices", ctx.graph.n())));
    }
    Ok(t)
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry { factories: BTreeMap::new(), solved: Arc::default() }
    }

    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register("greedy-first-fit", |_, _| Ok(Box::new(GreedyFirstFit)));
        reg.register("random-legal", |_, _| Ok(Box::new(RandomLegal)));
        reg.register("paper-alice", |cfg, ctx| {
            let params = cfg.resolve_params(ctx.graph.n(), ctx.k)?;
            Ok(Box::new(PaperAlice::new(ctx.graph.n(), params)))
        });
        reg.register("paper-bob-odd", |cfg, ctx| {
            let params = cfg.resolve_params(ctx.graph.n(), ctx.k)?;
            Ok(Box::new(PaperBobOdd::new(target_of(cfg, ctx)?, ctx.k, params)))
        });
        reg.register("paper-bob-general", |cfg, ctx| {
            let params = cfg.resolve_params(ctx.graph.n(), ctx.k)?;
            let plan = TargetPlan::single_target(&ctx.graph, target_of(cfg, ctx)?, ctx.k)?;
            Ok(Box::new(PaperBobGeneral::new(plan, params)))
        });
        reg.register("paper-bob-even", |cfg, ctx| {
            let params = cfg.resolve_params(ctx.graph.n(), ctx.k)?;
            let num = cfg.num_colours.unwrap_or(ctx.k).min(ctx.k);
            let plan = bob_even_setup(&ctx.graph, cfg.l.unwrap_or(2), cfg.k_prime.unwrap_or(2), num)?;
            Ok(Box::new(PaperBobGeneral::new(plan, params)))
        });
        let cache = reg.solved.clone();
        reg.register("solver-witness", move |_, ctx| {
            let key = (ctx.graph.to_edge_list(), ctx.k, ctx.variant);
            let solved = {
                let mut guard = cache.lock().expect("solver cache poisoned");
                match guard.get(&key) {
                    Some(s) => s.clone(),
                    None => {
                        let s = solve_eternal(&ctx.graph, ctx.k, ctx.variant, &SolveOptions::default())?.solved;
                        guard.insert(key, s.clone());
                        s
                    }
                }
            };
            Ok(Box::new(SolverWitness::new(solved)))
        });
        reg
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&StrategyConfig, &StrategyContext) -> Result<Box<dyn Strategy>> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn build(&self, cfg: &StrategyConfig, ctx: &StrategyContext) -> Result<Box<dyn Strategy>> {
        let factory = self.factories.get(&cfg.name).ok_or_else(|| Error::UnknownStrategy(cfg.name.clone()))?;
        factory(cfg, ctx)
    }
}
