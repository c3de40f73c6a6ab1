use std::collections::{HashSet, VecDeque};

use super::{can_play, first_fit, winning_pick, Strategy, StrategyParams};
use crate::game::{Choice, Colour, GameState, MoveRecord, Player};
use crate::rng::GameRng;
use crate::vertex_set::VertexSet;

/// How far `{a, b}` is from locking a colour out of `N[target]`: the number of
/// uncoloured vertices of `N[target]` outside `N[a] ∪ N[b]`.
///
/// `None` when `a` or `b` already carries a colour present in `N[target]`; such
/// a pair can never become a block.
pub fn double_block_distance(state: &GameState, a: usize, b: usize, target: usize) -> Option<usize> {
    let g = state.graph();
    let nbhd = g.closed_neighborhood(target);
    let present = colours_on(state, nbhd);
    for x in [a, b] {
        if let Some(c) = state.colour(x) {
            if present[c as usize] {
                return None;
            }
        }
    }
    let uncoloured = uncoloured_in(state, nbhd);
    Some(uncoloured.uncovered_len(g.closed_neighborhood(a), g.closed_neighborhood(b)))
}

fn colours_on(state: &GameState, set: &VertexSet) -> Vec<bool> {
    let mut present = vec![false; state.k() as usize + 1];
    for v in set {
        present[state.colours()[v] as usize] = true;
    }
    present[0] = false;
    present
}

fn uncoloured_in(state: &GameState, set: &VertexSet) -> VertexSet {
    VertexSet::from_iter(state.n(), set.iter().filter(|&v| state.colour(v).is_none()))
}

/// A pair that came within the blocking distance; Bob neutralises each end by
/// giving it a fresh colour and then copying that colour into the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct BlockTask {
    a: usize,
    b: usize,
}

enum Step {
    Colour(usize, Colour),
    Place(Colour),
}

/// Bob's single-target strategy for the first round: force every colour into
/// the closed neighbourhood of `target`, then pick `target` (or any other stuck
/// vertex) as soon as it has no legal colour.
///
/// Round-one priorities, first applicable wins:
///
/// 1. a colour used at least twice outside `N[target]` but absent inside it is
///    placed inside;
/// 2. queued blocking obligations, while enough colours are unused and the
///    target still has enough uncoloured vertices;
/// 3. colours used exactly once outside the target are copied inside, oldest
///    first;
/// 4. a globally unused colour is introduced inside the target;
/// 5. first-fit.
///
/// A stuck unplayed vertex is taken before any of these. From round 2 on, Bob
/// plays first-fit apart from taking stuck vertices.
#[derive(Clone, Debug)]
pub struct PaperBobOdd {
    target: usize,
    params: StrategyParams,
    pending: VecDeque<BlockTask>,
    called: HashSet<(usize, usize)>,
    intro_time: Vec<Option<usize>>,
    moves_seen: usize,
    last_alice: Option<MoveRecord>,
    dropped: Vec<String>,
    last_rule: Option<&'static str>,
}

impl PaperBobOdd {
    pub const RULES: [&'static str; 7] = [
        "bob.0-win",
        "bob.1-double-colour",
        "bob.2-blocking",
        "bob.3-single-colour",
        "bob.4-new-colour",
        "bob.5-anything",
        "bob.later-round",
    ];

    pub fn new(target: usize, k: u32, params: StrategyParams) -> Self {
        PaperBobOdd {
            target,
            params,
            pending: VecDeque::new(),
            called: HashSet::new(),
            intro_time: vec![None; k as usize + 1],
            moves_seen: 0,
            last_alice: None,
            dropped: Vec::new(),
            last_rule: None,
        }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Obligations abandoned because their next step was impossible.
    pub fn dropped_obligations(&self) -> &[String] {
        &self.dropped
    }

    fn tag(&mut self, rule: usize, choice: Choice) -> Choice {
        self.last_rule = Some(Self::RULES[rule]);
        choice
    }

    fn place(&self, state: &GameState, c: Colour, uncoloured: &VertexSet) -> Option<Choice> {
        uncoloured.iter().find(|&u| can_play(state, u, c)).map(|u| Choice::new(u, Some(c)))
    }

    fn next_step(&self, state: &GameState, task: BlockTask, present: &[bool]) -> Option<Step> {
        // Alice answering on `b` with a colour foreign to the target is served first.
        if let (Some(rec), Some(cb)) = (self.last_alice, state.colour(task.b)) {
            if rec.vertex == task.b && rec.round == 1 && !present[cb as usize] {
                return Some(Step::Place(cb));
            }
        }
        for x in [task.a, task.b] {
            match state.colour(x) {
                None => {
                    let fresh = unused_colours(state)
                        .into_iter()
                        .find(|&c| can_play(state, x, c))
                        .unwrap_or(0);
                    return Some(Step::Colour(x, fresh));
                }
                Some(c) if !present[c as usize] => return Some(Step::Place(c)),
                Some(_) => {}
            }
        }
        None
    }

    fn blocking_move(&mut self, state: &GameState, present: &[bool], uncoloured: &VertexSet) -> Option<Choice> {
        let g = state.graph();
        let unplayed: Vec<usize> = state.unplayed().collect();
        for (i, &a) in unplayed.iter().enumerate() {
            for &b in &unplayed[i + 1..] {
                if self.called.contains(&(a, b)) {
                    continue;
                }
                let dist = uncoloured.uncovered_len(g.closed_neighborhood(a), g.closed_neighborhood(b));
                if dist <= self.params.block_distance {
                    self.called.insert((a, b));
                    self.pending.push_back(BlockTask { a, b });
                }
            }
        }
        while let Some(&task) = self.pending.front() {
            let step = self.next_step(state, task, present);
            let choice = match step {
                None => {
                    self.pending.pop_front();
                    continue;
                }
                Some(Step::Colour(x, c)) if c != 0 && can_play(state, x, c) => Some(Choice::new(x, Some(c))),
                Some(Step::Colour(..)) => None,
                Some(Step::Place(c)) => self.place(state, c, uncoloured),
            };
            match choice {
                Some(ch) => return Some(ch),
                None => {
                    self.dropped.push(format!("pair {:?} abandoned at move {}", (task.a, task.b), self.moves_seen));
                    self.pending.pop_front();
                }
            }
        }
        None
    }

    fn first_round(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        let g = state.graph();
        let nbhd = g.closed_neighborhood(self.target).clone();
        let present = colours_on(state, &nbhd);
        let uncoloured = uncoloured_in(state, &nbhd);
        let k = state.k() as usize;
        let mut outside = vec![0usize; k + 1];
        for v in (0..state.n()).filter(|v| !nbhd.contains(*v)) {
            outside[state.colours()[v] as usize] += 1;
        }
        let absent_inside = |c: usize| !present[c];

        for c in (1..=k).filter(|&c| absent_inside(c) && outside[c] >= 2) {
            if let Some(ch) = self.place(state, c as Colour, &uncoloured) {
                return self.tag(1, ch);
            }
        }

        let unused = unused_colours(state).len();
        if unused >= self.params.reserve_missing && uncoloured.len() >= self.params.block_min_uncoloured {
            if let Some(ch) = self.blocking_move(state, &present, &uncoloured) {
                return self.tag(2, ch);
            }
        }

        let mut singles: Vec<usize> = (1..=k).filter(|&c| absent_inside(c) && outside[c] == 1).collect();
        singles.sort_by_key(|&c| self.intro_time[c]);
        for c in singles {
            if let Some(ch) = self.place(state, c as Colour, &uncoloured) {
                return self.tag(3, ch);
            }
        }

        for c in unused_colours(state) {
            if let Some(ch) = self.place(state, c, &uncoloured) {
                return self.tag(4, ch);
            }
        }

        let ch = first_fit(state, rng, self.params.tie_break);
        self.tag(5, ch)
    }
}

/// Colours not used anywhere in the graph, ascending.
fn unused_colours(state: &GameState) -> Vec<Colour> {
    let mut used = vec![false; state.k() as usize + 1];
    for &c in state.colours() {
        used[c as usize] = true;
    }
    (1..=state.k()).filter(|&c| !used[c as usize]).collect()
}

impl Strategy for PaperBobOdd {
    fn name(&self) -> &str {
        "paper-bob-odd"
    }

    fn choose(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        if let Some(v) = winning_pick(state, &[self.target]) {
            return self.tag(0, Choice::new(v, None));
        }
        if state.is_first_round() {
            self.first_round(state, rng)
        } else {
            let ch = first_fit(state, rng, self.params.tie_break);
            self.tag(6, ch)
        }
    }

    fn observe(&mut self, _after: &GameState, record: &MoveRecord) {
        self.moves_seen += 1;
        let slot = &mut self.intro_time[record.colour as usize];
        if slot.is_none() {
            *slot = Some(self.moves_seen);
        }
        if record.player == Player::Alice {
            self.last_alice = Some(*record);
        }
    }

    fn last_rule(&self) -> Option<&'static str> {
        self.last_rule
    }
}
