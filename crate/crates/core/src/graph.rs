//! Dense simple undirected graphs, `G(n, p)` sampling and named families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, unit_f64};
use crate::vertex_set::VertexSet;

/// Immutable simple undirected graph on `0..n` stored as a bit matrix.
///
/// Both open and closed neighbourhoods are kept; strategy code almost always
/// wants the closed one (a vertex together with its neighbours).
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    open: Vec<VertexSet>,
    closed: Vec<VertexSet>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let open = (0..n).map(|_| VertexSet::new(n)).collect();
        let closed = (0..n).map(|v| VertexSet::from_iter(n, [v])).collect();
        Graph { n, open, closed }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.open[u].insert(v);
        self.open[v].insert(u);
        self.closed[u].insert(v);
        self.closed[v].insert(u);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.open[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.open[v]
    }

    /// `{v} ∪ {u : uv ∈ E}`.
    #[inline]
    pub fn closed_neighborhood(&self, v: usize) -> &VertexSet {
        &self.closed[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.open[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.open[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Induced subgraph on `keep`, relabelled to `0..keep.len()` in increasing order.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let ids: Vec<usize> = keep.to_vec();
        let mut g = Graph::empty(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Plain-text edge list: `"n m"` then one sorted `"u v"` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidGraph("empty edge list".into()))?;
        let (n, m) = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::InvalidGraph(format!("header says {m} edges, found {}", edges.len())));
        }
        let g = Graph::from_edges(n, edges)?;
        if g.edge_count() != m {
            return Err(Error::InvalidGraph("duplicate edges in edge list".into()));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::InvalidGraph(format!("malformed line {line:?}"))),
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

/// Parameters of an Erdős–Rényi draw; the same spec always yields the same graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnpSpec {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

/// Samples `G(n, p)`: pairs `(i, j)`, `i < j`, are visited lexicographically and
/// each consumes exactly one uniform draw; the pair is an edge iff the draw is `< p`.
pub fn gnp_generate(spec: GnpSpec) -> Result<Graph> {
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(Error::InvalidArgument(format!("edge probability {} not in [0,1]", spec.p)));
    }
    let mut rng = rng_from_seed(spec.seed);
    let mut g = Graph::empty(spec.n);
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            if unit_f64(&mut rng) < spec.p {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    /// `K_{1,leaves}`; vertex 0 is the centre.
    Star { leaves: usize },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Empty { n: usize },
    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    CompleteBipartite { a: usize, b: usize },
}

pub fn make_named(kind: NamedGraph) -> Result<Graph> {
    use NamedGraph::*;
    let size = match kind {
        Star { leaves } => leaves,
        Path { n } | Cycle { n } | Complete { n } | Empty { n } => n,
        CompleteBipartite { a, b } => a.min(b),
    };
    if size == 0 {
        return Err(Error::InvalidGraph(format!("{kind:?}: size must be at least 1")));
    }
    match kind {
        Star { leaves } => Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))),
        Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        Cycle { n } if n < 3 => Err(Error::InvalidGraph(format!("cycle needs n >= 3, got {n}"))),
        Cycle { n } => Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))),
        Complete { n } => Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))),
        Empty { n } => Ok(Graph::empty(n)),
        CompleteBipartite { a, b } => {
            Graph::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))))
        }
    }
}

/// Where a graph comes from: a named family, a random draw, or an edge-list file.
///
/// The string form used on the command line is `star:5`, `path:4`, `cycle:5`,
/// `complete:4`, `empty:3`, `bipartite:3:3`, `gnp:101:0.5` or `file:PATH`;
/// configs serialize it the same way.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GraphSpec {
    Named { graph: NamedGraph },
    Gnp { n: usize, p: f64 },
    File { path: String },
}

impl GraphSpec {
    /// Builds the graph; `seed` is only consulted for random families.
    pub fn build(&self, seed: u64) -> Result<Graph> {
        match self {
            GraphSpec::Named { graph } => make_named(*graph),
            GraphSpec::Gnp { n, p } => gnp_generate(GnpSpec { n: *n, p: *p, seed }),
            GraphSpec::File { path } => Graph::from_edge_list(&std::fs::read_to_string(path)?),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, GraphSpec::Gnp { .. })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NamedGraph::*;
        match self {
            GraphSpec::Named { graph } => match graph {
                Star { leaves } => write!(f, "star:{leaves}"),
                Path { n } => write!(f, "path:{n}"),
                Cycle { n } => write!(f, "cycle:{n}"),
                Complete { n } => write!(f, "complete:{n}"),
                Empty { n } => write!(f, "empty:{n}"),
                CompleteBipartite { a, b } => write!(f, "bipartite:{a}:{b}"),
            },
            GraphSpec::Gnp { n, p } => write!(f, "gnp:{n}:{p}"),
            GraphSpec::File { path } => write!(f, "file:{path}"),
        }
    }
}

impl From<GraphSpec> for String {
    fn from(spec: GraphSpec) -> String {
        spec.to_string()
    }
}

impl TryFrom<String> for GraphSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unrecognised graph spec {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let named = |graph| Ok(GraphSpec::Named { graph });
        match parts[0] {
            "star" => named(NamedGraph::Star { leaves: num(1)? }),
            "path" => named(NamedGraph::Path { n: num(1)? }),
            "cycle" => named(NamedGraph::Cycle { n: num(1)? }),
            "complete" => named(NamedGraph::Complete { n: num(1)? }),
            "empty" => named(NamedGraph::Empty { n: num(1)? }),
            "bipartite" => named(NamedGraph::CompleteBipartite { a: num(1)?, b: num(2)? }),
            "gnp" => {
                let p = parts.get(2).ok_or_else(bad)?.parse().map_err(|_| bad())?;
                Ok(GraphSpec::Gnp { n: num(1)?, p })
            }
            "file" => Ok(GraphSpec::File { path: s["file:".len()..].to_string() }),
            _ => Err(bad()),
        }
    }
}
