use rayon::prelude::*;
use serde::Serialize;

use crate::game::Colour;
use crate::graph::Graph;
use crate::rng::{below, derive_seed, rng_from_seed, GameRng};
use crate::vertex_set::VertexSet;

/// Largest `n` searched exhaustively for unbalanced triples.
pub const EXHAUSTIVE_TRIPLE_LIMIT: usize = 12;
/// Largest number of candidate m-sets scanned exhaustively.
pub const EXHAUSTIVE_BLOCK_LIMIT: u128 = 10_000_000;

const CHUNK: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    Sampled,
}

/// Vertices breaking one side of the degree window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeSide {
    pub bound: f64,
    pub holds: bool,
    pub extreme: usize,
    pub offenders: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    /// Every degree at most `(p + ε/100) n`.
    pub max: DegreeSide,
    /// Every degree at least `(p - ε/100) n`.
    pub min: DegreeSide,
}

impl DegreeReport {
    pub fn holds(&self) -> bool {
        self.max.holds && self.min.holds
    }
}

pub fn check_degree_bounds(graph: &Graph, p: f64, epsilon: f64) -> DegreeReport {
    let n = graph.n() as f64;
    let slack = epsilon / 100.0;
    let upper = (p + slack) * n;
    let lower = (p - slack) * n;
    let high: Vec<usize> = (0..graph.n()).filter(|&v| graph.degree(v) as f64 > upper).collect();
    let low: Vec<usize> = (0..graph.n()).filter(|&v| (graph.degree(v) as f64) < lower).collect();
    DegreeReport {
        max: DegreeSide { bound: upper, holds: high.is_empty(), extreme: graph.max_degree(), offenders: high },
        min: DegreeSide { bound: lower, holds: low.is_empty(), extreme: graph.min_degree(), offenders: low },
    }
}

/// The worst pair of disjoint equal-size sets found, and the vertices
/// favouring `b` over `a` by at least the margin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnbalancedReport {
    pub set_size: usize,
    pub imbalance: usize,
    pub limit: usize,
    pub method: Method,
    pub pairs_examined: u64,
    /// Largest number of favouring vertices over all examined pairs.
    pub max_favouring: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub favouring: Vec<usize>,
}

impl UnbalancedReport {
    /// No examined pair has `limit` or more favouring vertices.
    pub fn holds(&self) -> bool {
        self.max_favouring < self.limit
    }
}

/// Vertices with at least `imbalance` more open neighbours in `b` than in `a`.
pub fn favouring_vertices(graph: &Graph, a: &VertexSet, b: &VertexSet, imbalance: usize) -> Vec<usize> {
    (0..graph.n())
        .filter(|&v| {
            let nb = graph.neighbors(v);
            nb.intersection_len(b) >= nb.intersection_len(a) + imbalance
        })
        .collect()
}

fn for_each_combination(items: &[usize], size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..=items.len().saturating_sub(need) {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, f);
            cur.pop();
        }
    }
    if size <= items.len() {
        rec(items, size, 0, &mut Vec::with_capacity(size), f);
    }
}

fn binomial(n: usize, m: usize) -> u128 {
    if m > n {
        return 0;
    }
    (0..m).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

#[derive(Clone)]
struct Best {
    count: usize,
    a: Vec<usize>,
    b: Vec<usize>,
    favouring: Vec<usize>,
}

impl Best {
    fn none() -> Self {
        Best { count: 0, a: Vec::new(), b: Vec::new(), favouring: Vec::new() }
    }

    fn offer(&mut self, graph: &Graph, a: &[usize], b: &[usize], imbalance: usize) {
        let n = graph.n();
        let sa = VertexSet::from_iter(n, a.iter().copied());
        let sb = VertexSet::from_iter(n, b.iter().copied());
        let fav = favouring_vertices(graph, &sa, &sb, imbalance);
        if fav.len() > self.count {
            *self = Best { count: fav.len(), a: a.to_vec(), b: b.to_vec(), favouring: fav };
        }
    }
}

/// Searches disjoint `A`, `B` of `set_size` vertices for at least `limit`
/// vertices each with `imbalance` more neighbours in `B` than in `A`.
/// Exhaustive for `n <= 12`; otherwise `samples` uniformly random pairs,
/// split into chunks that each draw from their own derived seed.
pub fn check_unbalanced_triple(
    graph: &Graph,
    set_size: usize,
    imbalance: usize,
    limit: usize,
    samples: u64,
    seed: u64,
) -> UnbalancedReport {
    let n = graph.n();
    let mut report = UnbalancedReport {
        set_size,
        imbalance,
        limit,
        method: Method::Exhaustive,
        pairs_examined: 0,
        max_favouring: 0,
        a: Vec::new(),
        b: Vec::new(),
        favouring: Vec::new(),
    };
    if 2 * set_size > n || imbalance > n {
        return report;
    }
    let best = if n <= EXHAUSTIVE_TRIPLE_LIMIT {
        let all: Vec<usize> = (0..n).collect();
        let mut best = Best::none();
        let mut examined = 0u64;
        for_each_combination(&all, set_size, &mut |a| {
            let rest: Vec<usize> = all.iter().copied().filter(|v| !a.contains(v)).collect();
            for_each_combination(&rest, set_size, &mut |b| {
                examined += 1;
                best.offer(graph, a, b, imbalance);
            });
        });
        report.pairs_examined = examined;
        best
    } else {
        report.method = Method::Sampled;
        report.pairs_examined = samples;
        let chunks = samples.div_ceil(CHUNK as u64);
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut rng = rng_from_seed(derive_seed(seed, &[chunk]));
                let count = (samples - chunk * CHUNK as u64).min(CHUNK as u64);
                let mut best = Best::none();
                let mut order: Vec<usize> = (0..n).collect();
                for _ in 0..count {
                    partial_shuffle(&mut order, 2 * set_size, &mut rng);
                    let (a, b) = order[..2 * set_size].split_at(set_size);
                    best.offer(graph, a, b, imbalance);
                }
                best
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Best::none(), |acc, b| if b.count > acc.count { b } else { acc })
    };
    report.max_favouring = best.count;
    report.a = best.a;
    report.b = best.b;
    report.favouring = best.favouring;
    report
}

fn partial_shuffle(order: &mut [usize], prefix: usize, rng: &mut GameRng) {
    for i in 0..prefix.min(order.len()) {
        let j = i + below(rng, order.len() - i);
        order.swap(i, j);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearlyFullCount {
    pub count: usize,
    pub vertices: Vec<usize>,
}

/// Vertices whose closed neighbourhood misses at most `missing_threshold`
/// of the colours `1..=palette`. Colours outside the palette (and 0) are
/// ignored; the colouring need not be proper.
pub fn count_nearly_full_vertices(
    graph: &Graph,
    colouring: &[Colour],
    palette: u32,
    missing_threshold: usize,
) -> NearlyFullCount {
    let mut seen = vec![false; palette as usize + 1];
    let vertices: Vec<usize> = (0..graph.n())
        .filter(|&v| {
            seen.iter_mut().for_each(|s| *s = false);
            let mut distinct = 0usize;
            for u in graph.closed_neighborhood(v) {
                let c = colouring[u] as usize;
                if c >= 1 && c <= palette as usize && !seen[c] {
                    seen[c] = true;
                    distinct += 1;
                }
            }
            palette as usize - distinct <= missing_threshold
        })
        .collect();
    NearlyFullCount { count: vertices.len(), vertices }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub m: usize,
    pub delta: usize,
    pub method: Method,
    pub examined: u128,
    /// Qualifying m-sets in scan order, capped at [`BlockReport::KEEP`].
    pub sets: Vec<Vec<usize>>,
    pub total_found: u128,
    /// Greedy disjoint family over all qualifying sets in scan order.
    pub disjoint_family: Vec<Vec<usize>>,
}

impl BlockReport {
    pub const KEEP: usize = 10_000;
}

/// Number of vertices of `s` outside the closed neighbourhoods of `set`.
pub fn uncovered_count(graph: &Graph, s: &VertexSet, set: &[usize]) -> usize {
    let mut cover = VertexSet::new(graph.n());
    for &a in set {
        cover.union_with(graph.closed_neighborhood(a));
    }
    s.difference(&cover).len()
}

/// m-sets whose closed neighbourhoods cover all but at most `delta` vertices
/// of `s`. Exhaustive when `C(n, m) <= 10^7`, otherwise `samples` random
/// m-sets drawn from `seed`.
pub fn find_m_block_sets(graph: &Graph, s: &VertexSet, m: usize, delta: usize, samples: u64, seed: u64) -> BlockReport {
    let n = graph.n();
    let mut report = BlockReport {
        m,
        delta,
        method: Method::Exhaustive,
        examined: 0,
        sets: Vec::new(),
        total_found: 0,
        disjoint_family: Vec::new(),
    };
    if m == 0 || m > n {
        return report;
    }
    let mut used = VertexSet::new(n);
    let mut accept = |set: &[usize], report: &mut BlockReport| {
        report.examined += 1;
        if uncovered_count(graph, s, set) <= delta {
            report.total_found += 1;
            if report.sets.len() < BlockReport::KEEP {
                report.sets.push(set.to_vec());
            }
            if set.iter().all(|&v| !used.contains(v)) {
                set.iter().for_each(|&v| {
                    used.insert(v);
                });
                report.disjoint_family.push(set.to_vec());
            }
        }
    };
    if binomial(n, m) <= EXHAUSTIVE_BLOCK_LIMIT {
        let all: Vec<usize> = (0..n).collect();
        for_each_combination(&all, m, &mut |set| accept(set, &mut report));
    } else {
        report.method = Method::Sampled;
        let mut rng = rng_from_seed(seed);
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..samples {
            partial_shuffle(&mut order, m, &mut rng);
            let mut set = order[..m].to_vec();
            set.sort_unstable();
            accept(&set, &mut report);
        }
    }
    report
}

/// First `(u, v, w)` with `u` outside `{v, w}` and at most `delta` vertices
/// of `N[u]` outside `N[v] ∪ N[w]`, scanning exhaustively.
pub fn find_covered_triple(graph: &Graph, delta: usize) -> Option<(usize, usize, usize, usize)> {
    let n = graph.n();
    (0..n).into_par_iter().find_map_first(|u| {
        let nu = graph.closed_neighborhood(u);
        for v in 0..n {
            if v == u {
                continue;
            }
            for w in v + 1..n {
                if w == u {
                    continue;
                }
                let left = nu.uncovered_len(graph.closed_neighborhood(v), graph.closed_neighborhood(w));
                if left <= delta {
                    return Some((u, v, w, left));
                }
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gnp_generate, make_named, GnpSpec, NamedGraph};

    #[test]
    fn degree_bounds_fixtures() {
        let k = make_named(NamedGraph::Complete { n: 10 }).unwrap();
        assert!(check_degree_bounds(&k, 1.0, 0.3).max.holds);
        let e = Graph::empty(6);
        let rep = check_degree_bounds(&e, 0.5, 0.1);
        assert!(!rep.min.holds);
        assert_eq!(rep.min.offenders, (0..6).collect::<Vec<_>>());
        let k200 = make_named(NamedGraph::Complete { n: 200 }).unwrap();
        assert!(!check_degree_bounds(&k200, 0.5, 0.1).max.holds);
    }

    #[test]
    fn degree_window_on_g500_is_narrower_than_the_spread() {
        // the window is (p ± ε/100) n = 250 ± 2.5 while degrees spread
        // with standard deviation about 11
        let g = gnp_generate(GnpSpec { n: 500, p: 0.5, seed: 1 }).unwrap();
        let rep = check_degree_bounds(&g, 0.5, 0.5);
        assert!(!rep.max.holds && !rep.min.holds);
        for &v in &rep.max.offenders {
            assert!(g.degree(v) as f64 > 252.5);
        }
        for &v in &rep.min.offenders {
            assert!((g.degree(v) as f64) < 247.5);
        }
    }

    #[test]
    fn complete_bipartite_is_unbalanced() {
        let g = make_named(NamedGraph::CompleteBipartite { a: 3, b: 3 }).unwrap();
        let rep = check_unbalanced_triple(&g, 3, 3, 3, 0, 0);
        assert_eq!(rep.method, Method::Exhaustive);
        assert!(!rep.holds());
        assert_eq!(rep.max_favouring, 3);
        let a = VertexSet::from_iter(6, rep.a.iter().copied());
        let b = VertexSet::from_iter(6, rep.b.iter().copied());
        assert_eq!(favouring_vertices(&g, &a, &b, 3), rep.favouring);
        // pairs examined: C(6,3) choices of A, then B is the rest
        assert_eq!(rep.pairs_examined, 20);
    }

    #[test]
    fn margin_above_n_is_vacuous() {
        let g = make_named(NamedGraph::Complete { n: 8 }).unwrap();
        assert!(check_unbalanced_triple(&g, 2, 9, 1, 0, 0).holds());
    }

    #[test]
    fn sampled_unbalanced_on_g300() {
        let g = gnp_generate(GnpSpec { n: 300, p: 0.5, seed: 2 }).unwrap();
        let rep = check_unbalanced_triple(&g, 30, 15, 40, 100_000, 5);
        assert_eq!(rep.method, Method::Sampled);
        assert!(rep.holds(), "max favouring {}", rep.max_favouring);
        let again = check_unbalanced_triple(&g, 30, 15, 40, 100_000, 5);
        assert_eq!(rep, again);
    }

    #[test]
    fn nearly_full_extremes() {
        let g = gnp_generate(GnpSpec { n: 30, p: 0.5, seed: 3 }).unwrap();
        let mono = vec![1; 30];
        assert_eq!(count_nearly_full_vertices(&g, &mono, 10, 8).count, 0);
        let k = make_named(NamedGraph::Complete { n: 7 }).unwrap();
        let rainbow: Vec<Colour> = (1..=7).collect();
        assert_eq!(count_nearly_full_vertices(&k, &rainbow, 7, 0).count, 7);
    }

    #[test]
    fn saturating_one_vertex() {
        let g = gnp_generate(GnpSpec { n: 200, p: 0.5, seed: 4 }).unwrap();
        let target = 17;
        let palette = 60u32;
        let mut colouring = vec![palette; 200];
        for (i, u) in g.closed_neighborhood(target).iter().enumerate() {
            colouring[u] = (i as u32 % palette) + 1;
        }
        let got = count_nearly_full_vertices(&g, &colouring, palette, 0);
        assert!(got.vertices.contains(&target));
        // recount by hand
        for v in 0..200 {
            let mut seen: Vec<Colour> = g.closed_neighborhood(v).iter().map(|u| colouring[u]).collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len() == palette as usize, got.vertices.contains(&v));
        }
    }

    #[test]
    fn block_fixtures() {
        let g = make_named(NamedGraph::Star { leaves: 5 }).unwrap();
        let s = VertexSet::from_iter(6, [1, 2, 3]);
        let rep = find_m_block_sets(&g, &s, 1, 0, 0, 0);
        assert_eq!(rep.sets, vec![vec![0]]);
        let e = Graph::empty(8);
        let s = VertexSet::from_iter(8, 0..6);
        let rep = find_m_block_sets(&e, &s, 2, 3, 0, 0);
        assert!(rep.sets.is_empty());
        assert_eq!(rep.examined, 28);
    }

    #[test]
    fn no_covering_pairs_in_g100() {
        let g = gnp_generate(GnpSpec { n: 100, p: 0.5, seed: 6 }).unwrap();
        let mut rng = rng_from_seed(7);
        let mut order: Vec<usize> = (0..100).collect();
        partial_shuffle(&mut order, 50, &mut rng);
        let s = VertexSet::from_iter(100, order[..50].iter().copied());
        let rep = find_m_block_sets(&g, &s, 2, 1, 0, 0);
        assert_eq!(rep.method, Method::Exhaustive);
        assert_eq!(rep.examined, 4950);
        assert_eq!(rep.total_found, 0);
    }

    #[test]
    fn disjoint_family_is_disjoint() {
        let g = gnp_generate(GnpSpec { n: 40, p: 0.5, seed: 8 }).unwrap();
        let s = VertexSet::from_iter(40, 0..10);
        let rep = find_m_block_sets(&g, &s, 2, 2, 0, 0);
        let mut used = VertexSet::new(40);
        for set in &rep.disjoint_family {
            assert!(uncovered_count(&g, &s, set) <= 2);
            for &v in set {
                assert!(used.insert(v));
            }
        }
        assert_eq!(rep.total_found as usize, rep.sets.len());
    }

    #[test]
    fn covered_triple_on_a_star() {
        // N[leaf] = {leaf, centre} is covered by N[centre]
        let g = make_named(NamedGraph::Star { leaves: 3 }).unwrap();
        let (u, v, w, left) = find_covered_triple(&g, 0).unwrap();
        assert_eq!(left, 0);
        assert!(u != v && u != w);
        // |N[u] minus N[v], N[w]| is about Bin(100, 1/4) on G(200, 1/2)
        let g = gnp_generate(GnpSpec { n: 200, p: 0.5, seed: 9 }).unwrap();
        assert!(find_covered_triple(&g, 2).is_none());
    }
}
