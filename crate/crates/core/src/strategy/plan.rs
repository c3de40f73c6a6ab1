use crate::error::{Error, Result};
use crate::game::{Colour, GameState};
use crate::graph::Graph;
use crate::partition::build_color_plan;
use crate::vertex_set::VertexSet;

/// Disjoint target sets, each with the colours Bob wants to see in it by the
/// end of the first round, plus the end-stage bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetPlan {
    targets: Vec<VertexSet>,
    colour_sets: Vec<Vec<Colour>>,
    /// Label of each target (the adjacency mask for class-based plans).
    labels: Vec<u32>,
    /// Vertices Bob hopes to find stuck at the start of round 2.
    distinguished: Vec<usize>,
    /// Move count at which each target entered its end stage.
    end_stage: Vec<Option<usize>>,
}

impl TargetPlan {
    pub fn new(
        targets: Vec<VertexSet>,
        colour_sets: Vec<Vec<Colour>>,
        labels: Vec<u32>,
        distinguished: Vec<usize>,
    ) -> Result<Self> {
        if targets.len() != colour_sets.len() || targets.len() != labels.len() {
            return Err(Error::Setup("targets, colour sets and labels differ in length".into()));
        }
        for (i, a) in targets.iter().enumerate() {
            if targets[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
                return Err(Error::Setup(format!("target {i} overlaps a later target")));
            }
        }
        let colour_sets = colour_sets
            .into_iter()
            .map(|mut ys| {
                ys.sort_unstable();
                ys.dedup();
                ys
            })
            .collect();
        let end_stage = vec![None; targets.len()];
        Ok(TargetPlan { targets, colour_sets, labels, distinguished, end_stage })
    }

    /// The single-target scheme: all of `1..=k` into `N[target]`.
    pub fn single_target(graph: &Graph, target: usize, k: u32) -> Result<Self> {
        if target >= graph.n() {
            return Err(Error::Setup(format!("target {target} out of range")));
        }
        TargetPlan::new(
            vec![graph.closed_neighborhood(target).clone()],
            vec![(1..=k).collect()],
            vec![1],
            vec![target],
        )
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn target(&self, i: usize) -> &VertexSet {
        &self.targets[i]
    }

    pub fn colours(&self, i: usize) -> &[Colour] {
        &self.colour_sets[i]
    }

    pub fn label(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn distinguished(&self) -> &[usize] {
        &self.distinguished
    }

    /// Largest colour any target asks for.
    pub fn max_colour(&self) -> Colour {
        self.colour_sets.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Targets whose colour set contains `c`.
    pub fn designated(&self, c: Colour) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.colour_sets[i].binary_search(&c).is_ok())
    }

    /// Which target, if any, contains `v`.
    pub fn target_of(&self, v: usize) -> Option<usize> {
        self.targets.iter().position(|t| t.contains(v))
    }

    pub fn in_end_stage(&self, i: usize) -> bool {
        self.end_stage[i].is_some()
    }

    pub fn end_stage_move(&self, i: usize) -> Option<usize> {
        self.end_stage[i]
    }

    /// Colours of target `i`'s set not yet present in it, ascending.
    pub fn missing(&self, i: usize, state: &GameState) -> Vec<Colour> {
        let present = present_in(state, &self.targets[i]);
        self.colour_sets[i].iter().copied().filter(|&c| !present[c as usize]).collect()
    }

    /// Sets the end-stage flag of every target missing at most `reserve`
    /// of its colours. Flags never clear.
    pub fn update_end_stage(&mut self, state: &GameState, reserve: usize, move_count: usize) {
        for i in 0..self.len() {
            if self.end_stage[i].is_none() && self.missing(i, state).len() <= reserve {
                self.end_stage[i] = Some(move_count);
            }
        }
    }

    /// Whether every target contains all of its colours.
    pub fn fulfilled(&self, state: &GameState) -> bool {
        (0..self.len()).all(|i| self.missing(i, state).is_empty())
    }
}

/// `present[c]`: colour `c` is on some vertex of `set`.
pub(crate) fn present_in(state: &GameState, set: &VertexSet) -> Vec<bool> {
    let mut present = vec![false; state.k() as usize + 1];
    for v in set {
        present[state.colours()[v] as usize] = true;
    }
    present[0] = false;
    present
}

/// Plan for an even number of vertices: the `l` lowest vertices form `X`,
/// every other vertex is classed by which members of `X` it is adjacent to,
/// and class `I` receives the colours the colour plan gives to `I`
/// (computed for `p = 1/k_prime` with `num_colours` colours).
///
/// Only classes with a nonempty colour set become targets. An empty class
/// that should receive colours is a setup failure.
pub fn bob_even_setup(graph: &Graph, l: usize, k_prime: u32, num_colours: u32) -> Result<TargetPlan> {
    if l == 0 || l >= graph.n() {
        return Err(Error::Setup(format!("need 1 <= l < n, got l={l}, n={}", graph.n())));
    }
    let plan = build_color_plan(l, k_prime, num_colours).map_err(|e| Error::Setup(e.to_string()))?;
    let n = graph.n();
    let mut classes = vec![VertexSet::new(n); 1usize << l];
    for v in l..n {
        let mask = (0..l).filter(|&x| graph.has_edge(v, x)).fold(0u32, |m, x| m | 1 << x);
        classes[mask as usize].insert(v);
    }
    let mut targets = Vec::new();
    let mut colour_sets = Vec::new();
    let mut labels = Vec::new();
    for (mask, class) in classes.into_iter().enumerate() {
        let ys = plan.colours_for(mask as u32);
        if ys.is_empty() {
            continue;
        }
        if class.is_empty() {
            return Err(Error::Setup(format!(
                "class {mask:#b} is empty but should receive {} colours",
                ys.len()
            )));
        }
        targets.push(class);
        colour_sets.push(ys.to_vec());
        labels.push(mask as u32);
    }
    TargetPlan::new(targets, colour_sets, labels, (0..l).collect())
}
