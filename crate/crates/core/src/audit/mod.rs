//! Finite-n checks of the random-graph properties the strategies rely on.
//!
//! Properties quantified over all vertex subsets are searched exhaustively
//! only under size caps; larger instances are sampled and tagged as such.
//! Colouring-quantified properties are checked against a fixed battery of
//! random and adversarial colourings, not all colourings.

mod checks;
mod hoeffding;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_degree_bounds, check_unbalanced_triple, count_nearly_full_vertices, favouring_vertices,
    find_covered_triple, find_m_block_sets, uncovered_count, BlockReport, DegreeReport, DegreeSide, Method,
    NearlyFullCount, UnbalancedReport, EXHAUSTIVE_BLOCK_LIMIT, EXHAUSTIVE_TRIPLE_LIMIT,
};
pub use hoeffding::{hoeffding_check, HoeffdingReport};

use crate::error::{Error, Result};
use crate::game::Colour;
use crate::graph::Graph;
use crate::rng::{below, derive_seed, rng_from_seed};
use crate::vertex_set::VertexSet;

/// Property thresholds. Fractions of `n` resolve to counts by ceiling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditParams {
    pub p: f64,
    pub epsilon: f64,
    /// Nearly-full vertices miss at most `2 beta n` colours.
    pub beta: f64,
    /// Nearly-full on small colours: miss at most `gamma n` of them.
    pub gamma: f64,
    /// Uncovered allowance for triples and blocks.
    pub delta: f64,
    /// `|A| = |B|` for unbalanced sets (default `ε/200`).
    pub unbalanced_size: f64,
    /// Required excess of `B`-neighbours over `A`-neighbours (default `ε/200`).
    pub unbalanced_margin: f64,
    /// Size of the sets `S` probed for disjoint blocks (default `ε/100`).
    pub block_set_size: f64,
    /// Limit on favouring vertices and on disjoint blocks.
    pub k_limit: usize,
    /// Block size.
    pub m: usize,
    /// Nearly-full counts may reach `C ln n`.
    pub c_log: f64,
    /// Small-colour nearly-full counts may reach `D ln n`.
    pub d_log: f64,
    /// Random `A, B` pairs drawn for the unbalanced search.
    pub samples: u64,
    /// Random colourings and saturated vertices in the colouring battery.
    pub colourings: usize,
    /// Random sets `S` probed for disjoint blocks.
    pub block_sets: usize,
    pub seed: u64,
}

impl Default for AuditParams {
    fn default() -> Self {
        Self::new(0.5, 0.1)
    }
}

impl AuditParams {
    pub fn new(p: f64, epsilon: f64) -> Self {
        AuditParams {
            p,
            epsilon,
            beta: epsilon / 400.0,
            gamma: epsilon / 400.0,
            delta: epsilon / 100.0,
            unbalanced_size: epsilon / 200.0,
            unbalanced_margin: epsilon / 200.0,
            block_set_size: epsilon / 100.0,
            k_limit: 10,
            m: 2,
            c_log: 4.0,
            d_log: 4.0,
            samples: 10_000,
            colourings: 8,
            block_sets: 4,
            seed: 0,
        }
    }

    /// Parses a TOML table of parameters; missing keys take the defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let params: AuditParams = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        params.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(params)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let fractions = [
            ("p", self.p),
            ("epsilon", self.epsilon),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("unbalanced_size", self.unbalanced_size),
            ("unbalanced_margin", self.unbalanced_margin),
            ("block_set_size", self.block_set_size),
        ];
        for (name, f) in fractions {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::InvalidArgument(format!("{name}={f} not in [0, 1]")));
            }
        }
        if self.c_log < 0.0 || self.d_log < 0.0 || self.m == 0 {
            return Err(Error::InvalidArgument("c_log, d_log must be >= 0 and m >= 1".into()));
        }
        Ok(())
    }

    /// Every threshold at `n`, as fraction and resolved count.
    pub fn resolve(&self, n: usize) -> Vec<Threshold> {
        let log_n = (n.max(1) as f64).ln();
        let frac = |name: &str, f: f64| Threshold::of(name, f, n);
        vec![
            frac("palette", self.p / 2.0 + self.epsilon),
            frac("nearly-full-missing", 2.0 * self.beta),
            frac("small-colours", self.epsilon / 200.0),
            frac("small-missing", self.gamma),
            frac("delta", self.delta),
            frac("unbalanced-size", self.unbalanced_size),
            frac("unbalanced-margin", self.unbalanced_margin),
            frac("block-set-size", self.block_set_size),
            Threshold { name: "nearly-full-limit".into(), fraction: self.c_log * log_n / n.max(1) as f64, count: ceil_count(self.c_log * log_n) },
            Threshold { name: "small-limit".into(), fraction: self.d_log * log_n / n.max(1) as f64, count: ceil_count(self.d_log * log_n) },
            Threshold { name: "k-limit".into(), fraction: self.k_limit as f64 / n.max(1) as f64, count: self.k_limit },
        ]
    }
}

fn ceil_count(x: f64) -> usize {
    // guard against 0.1 * 300 landing just above 30
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub name: String,
    pub fraction: f64,
    pub count: usize,
}

impl Threshold {
    fn of(name: &str, fraction: f64, n: usize) -> Self {
        Threshold { name: name.to_string(), fraction, count: ceil_count(fraction * n as f64) }
    }
}

/// Structure that breaks a property.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Degrees above (`upper`) or below the real bound.
    Degree { vertices: Vec<usize>, bound: f64, upper: bool },
    Unbalanced { a: Vec<usize>, b: Vec<usize>, favouring: Vec<usize>, margin: usize },
    NearlyFull { colouring: Vec<Colour>, palette: u32, missing: usize, vertices: Vec<usize> },
    CoveredTriple { u: usize, v: usize, w: usize, uncovered: usize, delta: usize },
    Blocks { s: Vec<usize>, sets: Vec<Vec<usize>>, delta: usize },
}

impl Witness {
    /// Recomputes the witness claim from the raw graph.
    pub fn revalidate(&self, graph: &Graph) -> bool {
        let n = graph.n();
        let in_range = |vs: &[usize]| vs.iter().all(|&v| v < n);
        match self {
            Witness::Degree { vertices, bound, upper } => {
                in_range(vertices)
                    && !vertices.is_empty()
                    && vertices.iter().all(|&v| {
                        let d = graph.degree(v) as f64;
                        if *upper {
                            d > *bound
                        } else {
                            d < *bound
                        }
                    })
            }
            Witness::Unbalanced { a, b, favouring, margin } => {
                if !in_range(a) || !in_range(b) || !in_range(favouring) || a.len() != b.len() {
                    return false;
                }
                let sa = VertexSet::from_iter(n, a.iter().copied());
                let sb = VertexSet::from_iter(n, b.iter().copied());
                sa.len() == a.len()
                    && sa.is_disjoint(&sb)
                    && favouring.iter().all(|&v| {
                        let nb = graph.neighbors(v);
                        nb.intersection_len(&sb) >= nb.intersection_len(&sa) + margin
                    })
            }
            Witness::NearlyFull { colouring, palette, missing, vertices } => {
                colouring.len() == n && count_nearly_full_vertices(graph, colouring, *palette, *missing).vertices == *vertices
            }
            Witness::CoveredTriple { u, v, w, uncovered, delta } => {
                in_range(&[*u, *v, *w])
                    && u != v
                    && u != w
                    && uncovered <= delta
                    && graph.closed_neighborhood(*u).uncovered_len(graph.closed_neighborhood(*v), graph.closed_neighborhood(*w))
                        == *uncovered
            }
            Witness::Blocks { s, sets, delta } => {
                if !in_range(s) || sets.iter().any(|set| !in_range(set)) {
                    return false;
                }
                let s_set = VertexSet::from_iter(n, s.iter().copied());
                let mut used = VertexSet::new(n);
                sets.iter().all(|set| {
                    uncovered_count(graph, &s_set, set) <= *delta && set.iter().all(|&v| used.insert(v))
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub property: String,
    pub holds: bool,
    pub method: Method,
    /// The measured quantity (e.g. the maximum count found) and its limit.
    pub observed: f64,
    pub limit: f64,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub n: usize,
    pub params: AuditParams,
    pub thresholds: Vec<Threshold>,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn check(&self, property: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }

    /// Every witness present revalidates against `graph`.
    pub fn witnesses_revalidate(&self, graph: &Graph) -> bool {
        self.checks.iter().filter_map(|c| c.witness.as_ref()).all(|w| w.revalidate(graph))
    }
}

fn threshold(ts: &[Threshold], name: &str) -> usize {
    ts.iter().find(|t| t.name == name).map(|t| t.count).expect("known threshold")
}

/// Colourings by `palette` colours: uniformly random ones, ones that give a
/// high-degree vertex every colour in its closed neighbourhood, and a
/// cyclic one.
fn colouring_battery(graph: &Graph, palette: u32, count: usize, seed: u64) -> Vec<Vec<Colour>> {
    let n = graph.n();
    let palette = palette.max(1);
    let mut out = Vec::new();
    for i in 0..count {
        let mut rng = rng_from_seed(derive_seed(seed, &[i as u64]));
        out.push((0..n).map(|_| below(&mut rng, palette as usize) as Colour + 1).collect());
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    for (i, &target) in by_degree.iter().take(count).enumerate() {
        let mut rng = rng_from_seed(derive_seed(seed, &[count as u64 + i as u64]));
        let mut col: Vec<Colour> = (0..n).map(|_| below(&mut rng, palette as usize) as Colour + 1).collect();
        for (j, u) in graph.closed_neighborhood(target).iter().enumerate() {
            col[u] = (j as u32 % palette) + 1;
        }
        out.push(col);
    }
    out.push((0..n).map(|v| (v as u32 % palette) + 1).collect());
    out
}

fn nearly_full_check(
    graph: &Graph,
    property: &str,
    battery: &[Vec<Colour>],
    palette: u32,
    missing: usize,
    limit: usize,
) -> PropertyCheck {
    let mut worst: Option<(usize, NearlyFullCount)> = None;
    for (i, col) in battery.iter().enumerate() {
        let got = count_nearly_full_vertices(graph, col, palette, missing);
        if worst.as_ref().is_none_or(|(_, w)| got.count > w.count) {
            worst = Some((i, got));
        }
    }
    let (idx, worst) = worst.unwrap_or((0, NearlyFullCount { count: 0, vertices: Vec::new() }));
    let holds = worst.count <= limit;
    PropertyCheck {
        property: property.into(),
        holds,
        method: Method::Sampled,
        observed: worst.count as f64,
        limit: limit as f64,
        witness: (!holds).then(|| Witness::NearlyFull {
            colouring: battery[idx].clone(),
            palette,
            missing,
            vertices: worst.vertices,
        }),
    }
}

/// Runs every property check on `graph`.
pub fn audit_graph(graph: &Graph, params: &AuditParams) -> Result<PropertyReport> {
    params.validate()?;
    let n = graph.n();
    let ts = params.resolve(n);
    let mut checks = Vec::new();

    let deg = check_degree_bounds(graph, params.p, params.epsilon);
    for (name, side, upper) in [("max-degree", &deg.max, true), ("min-degree", &deg.min, false)] {
        checks.push(PropertyCheck {
            property: name.into(),
            holds: side.holds,
            method: Method::Exhaustive,
            observed: side.extreme as f64,
            limit: side.bound,
            witness: (!side.holds).then(|| Witness::Degree { vertices: side.offenders.clone(), bound: side.bound, upper }),
        });
    }

    let margin = threshold(&ts, "unbalanced-margin");
    let unb = check_unbalanced_triple(
        graph,
        threshold(&ts, "unbalanced-size"),
        margin,
        params.k_limit,
        params.samples,
        derive_seed(params.seed, &[1]),
    );
    checks.push(PropertyCheck {
        property: "unbalanced-sets".into(),
        holds: unb.holds(),
        method: unb.method,
        observed: unb.max_favouring as f64,
        limit: params.k_limit as f64,
        witness: (!unb.holds()).then(|| Witness::Unbalanced {
            a: unb.a.clone(),
            b: unb.b.clone(),
            favouring: unb.favouring.clone(),
            margin,
        }),
    });

    let palette = threshold(&ts, "palette") as u32;
    let battery = colouring_battery(graph, palette, params.colourings, derive_seed(params.seed, &[2]));
    checks.push(nearly_full_check(
        graph,
        "nearly-full-vertices",
        &battery,
        palette,
        threshold(&ts, "nearly-full-missing"),
        threshold(&ts, "nearly-full-limit"),
    ));
    let small = threshold(&ts, "small-colours").max(1) as u32;
    let mut small_battery = battery;
    small_battery.extend(colouring_battery(graph, small, params.colourings, derive_seed(params.seed, &[3])));
    checks.push(nearly_full_check(
        graph,
        "nearly-full-small-colours",
        &small_battery,
        small,
        threshold(&ts, "small-missing"),
        threshold(&ts, "small-limit"),
    ));

    let delta = threshold(&ts, "delta");
    let triple = find_covered_triple(graph, delta);
    checks.push(PropertyCheck {
        property: "covered-triples".into(),
        holds: triple.is_none(),
        method: Method::Exhaustive,
        observed: triple.map_or(0.0, |_| 1.0),
        limit: 0.0,
        witness: triple.map(|(u, v, w, uncovered)| Witness::CoveredTriple { u, v, w, uncovered, delta }),
    });

    let set_size = threshold(&ts, "block-set-size").min(n);
    let mut worst: Option<(Vec<usize>, BlockReport)> = None;
    let mut method = Method::Sampled;
    for i in 0..params.block_sets {
        let mut rng = rng_from_seed(derive_seed(params.seed, &[4, i as u64]));
        let mut order: Vec<usize> = (0..n).collect();
        for j in 0..set_size {
            let r = j + below(&mut rng, n - j);
            order.swap(j, r);
        }
        let mut s: Vec<usize> = order[..set_size].to_vec();
        s.sort_unstable();
        let rep = find_m_block_sets(
            graph,
            &VertexSet::from_iter(n, s.iter().copied()),
            params.m,
            delta,
            params.samples,
            derive_seed(params.seed, &[5, i as u64]),
        );
        if rep.method == Method::Exhaustive && set_size == n {
            method = Method::Exhaustive;
        }
        if worst.as_ref().is_none_or(|(_, w)| rep.disjoint_family.len() > w.disjoint_family.len()) {
            worst = Some((s, rep));
        }
    }
    if let Some((s, rep)) = worst {
        let holds = rep.disjoint_family.len() <= params.k_limit;
        checks.push(PropertyCheck {
            property: "disjoint-blocks".into(),
            holds,
            method,
            observed: rep.disjoint_family.len() as f64,
            limit: params.k_limit as f64,
            witness: (!holds).then_some(Witness::Blocks { s, sets: rep.disjoint_family, delta }),
        });
    }

    Ok(PropertyReport { n, params: params.clone(), thresholds: ts, checks })
}
