use std::collections::{HashSet, VecDeque};

use super::plan::present_in;
use super::{can_play, first_fit, winning_pick, Strategy, StrategyParams, TargetPlan};
use crate::game::{Choice, Colour, GameState, MoveRecord, Player};
use crate::rng::GameRng;
use crate::vertex_set::VertexSet;

/// A near-block of target `target`: colour every member so that its colour
/// reaches the target, which removes it from any future block.
#[derive(Clone, Debug, PartialEq, Eq)]
struct KillTask {
    target: usize,
    members: Vec<usize>,
}

enum Step {
    Colour(usize, Colour),
    Place(Colour, usize),
    Stuck,
}

/// Per-move snapshot of where colours sit relative to the plan.
struct Tally {
    /// `present[i][c]`: colour `c` occurs in target `i`.
    present: Vec<Vec<bool>>,
    /// How often each colour occurs anywhere.
    uses: Vec<usize>,
}

impl Tally {
    fn new(state: &GameState, plan: &TargetPlan) -> Self {
        let present = (0..plan.len()).map(|i| present_in(state, plan.target(i))).collect();
        let mut uses = vec![0; state.k() as usize + 1];
        for &c in state.colours() {
            uses[c as usize] += 1;
        }
        uses[0] = 0;
        Tally { present, uses }
    }

    fn is_present(&self, i: usize, c: Colour) -> bool {
        self.present[i].get(c as usize).copied().unwrap_or(false)
    }

    /// (designated targets, designated targets still missing `c`).
    fn designation(&self, plan: &TargetPlan, c: Colour) -> (usize, Vec<usize>) {
        let designated: Vec<usize> = plan.designated(c).collect();
        let missing = designated.iter().copied().filter(|&i| !self.is_present(i, c)).collect();
        (designated.len(), missing)
    }
}

/// Bob's plan-driven strategy for the first round: every colour of `Y_i`
/// should end up in `X_i`.
///
/// With `C` the multiplicity parameter, a colour used `r` times that already
/// sits in `placed` of its designated targets and is missing from at least
/// one of them is *overdue* when `r >= C·(placed + 1)` and *due* when
/// `r >= C·max(placed, 1)`. Round-one priorities, first applicable wins:
///
/// 1. place an overdue colour into a designated target missing it;
/// 2. serve targets in their end stage: Alice's last colour if that target
///    misses it, otherwise its smallest missing colour;
/// 3. kill near-blocks (queued, one step per move);
/// 4. place a due colour into a designated target missing it;
/// 5. place a missing `Y_i` colour into `X_i`, preferring the target Alice
///    just played in;
/// 6. first-fit.
///
/// A stuck unplayed vertex (a distinguished one first) is always taken; from
/// round 2 on Bob otherwise plays first-fit.
#[derive(Clone, Debug)]
pub struct PaperBobGeneral {
    plan: TargetPlan,
    params: StrategyParams,
    pending: VecDeque<KillTask>,
    called: HashSet<(usize, Vec<usize>)>,
    moves_seen: usize,
    last_alice: Option<MoveRecord>,
    dropped: Vec<String>,
    last_rule: Option<&'static str>,
}

impl PaperBobGeneral {
    pub const RULES: [&'static str; 8] = [
        "bob.0-win",
        "bob.1-overdue-colour",
        "bob.2-end-stage",
        "bob.3-kill",
        "bob.4-due-colour",
        "bob.5-plan-colour",
        "bob.6-anything",
        "bob.later-round",
    ];

    pub fn new(plan: TargetPlan, params: StrategyParams) -> Self {
        PaperBobGeneral {
            plan,
            params,
            pending: VecDeque::new(),
            called: HashSet::new(),
            moves_seen: 0,
            last_alice: None,
            dropped: Vec::new(),
            last_rule: None,
        }
    }

    pub fn plan(&self) -> &TargetPlan {
        &self.plan
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    pub fn dropped_obligations(&self) -> &[String] {
        &self.dropped
    }

    fn tag(&mut self, rule: usize, choice: Choice) -> Choice {
        self.last_rule = Some(Self::RULES[rule]);
        choice
    }

    /// Lowest uncoloured vertex of target `i` that may take `c` now.
    fn place(&self, state: &GameState, c: Colour, i: usize) -> Option<Choice> {
        self.plan
            .target(i)
            .iter()
            .find(|&u| state.colour(u).is_none() && can_play(state, u, c))
            .map(|u| Choice::new(u, Some(c)))
    }

    /// Colours whose use count reached `C·(placed + extra)`, with the targets
    /// still missing them.
    fn owed(&self, state: &GameState, tally: &Tally, overdue: bool) -> Option<Choice> {
        let mult = self.params.multiplicity;
        for c in 1..=state.k() {
            let r = tally.uses[c as usize];
            if r == 0 {
                continue;
            }
            let (designated, missing) = tally.designation(&self.plan, c);
            if missing.is_empty() {
                continue;
            }
            let placed = designated - missing.len();
            let needed = if overdue { mult * (placed + 1) } else { mult * placed.max(1) };
            if r < needed {
                continue;
            }
            if let Some(ch) = missing.iter().find_map(|&i| self.place(state, c, i)) {
                return Some(ch);
            }
        }
        None
    }

    fn end_stage_move(&self, state: &GameState) -> Option<Choice> {
        let copied = self.last_alice.filter(|r| r.round == 1).map(|r| r.colour);
        for i in (0..self.plan.len()).filter(|&i| self.plan.in_end_stage(i)) {
            let missing = self.plan.missing(i, state);
            if let Some(c) = copied.filter(|c| missing.contains(c)) {
                if let Some(ch) = self.place(state, c, i) {
                    return Some(ch);
                }
            }
            if let Some(ch) = missing.iter().find_map(|&c| self.place(state, c, i)) {
                return Some(ch);
            }
        }
        None
    }

    /// Queues every not-yet-called set of `block_size` vertices that carries
    /// no colour of a live target and covers all but `block_distance` of its
    /// uncoloured vertices.
    fn scan_blocks(&mut self, state: &GameState, tally: &Tally) {
        let g = state.graph();
        let m = self.params.block_size.max(1);
        for i in 0..self.plan.len() {
            if self.plan.in_end_stage(i) {
                continue;
            }
            let target = self.plan.target(i);
            let uncoloured =
                VertexSet::from_iter(state.n(), target.iter().filter(|&v| state.colour(v).is_none()));
            if uncoloured.len() < self.params.block_min_uncoloured {
                continue;
            }
            let eligible: Vec<usize> = (0..state.n())
                .filter(|&v| state.colour(v).is_none_or(|c| !tally.is_present(i, c)))
                .collect();
            let mut found = Vec::new();
            for_each_subset(&eligible, m, &mut |members| {
                let mut covered = VertexSet::new(state.n());
                for &a in members {
                    covered.union_with(g.closed_neighborhood(a));
                }
                if uncoloured.difference(&covered).len() <= self.params.block_distance {
                    found.push(members.to_vec());
                }
            });
            for members in found {
                if self.called.insert((i, members.clone())) {
                    self.pending.push_back(KillTask { target: i, members });
                }
            }
        }
    }

    fn next_step(&self, state: &GameState, tally: &Tally, task: &KillTask) -> Option<Step> {
        for &a in &task.members {
            match state.colour(a) {
                None if state.is_played(a) => return Some(Step::Stuck),
                None => {
                    return Some(match self.kill_colour(state, tally, task.target, a) {
                        Some(c) => Step::Colour(a, c),
                        None => Step::Stuck,
                    })
                }
                Some(c) => {
                    if !tally.is_present(task.target, c) {
                        return Some(Step::Place(c, task.target));
                    }
                    let (_, missing) = tally.designation(&self.plan, c);
                    if let Some(&j) = missing.first() {
                        return Some(Step::Place(c, j));
                    }
                }
            }
        }
        None
    }

    /// Colour for a block member: a colour of the target's set that is legal
    /// on `a`, fewest outstanding designations first; failing that a colour
    /// already in the target.
    fn kill_colour(&self, state: &GameState, tally: &Tally, target: usize, a: usize) -> Option<Colour> {
        let best = self
            .plan
            .colours(target)
            .iter()
            .copied()
            .filter(|&c| can_play(state, a, c))
            .min_by_key(|&c| (tally.designation(&self.plan, c).1.len(), tally.uses[c as usize], c));
        best.or_else(|| (1..=state.k()).find(|&c| tally.is_present(target, c) && can_play(state, a, c)))
    }

    fn kill_move(&mut self, state: &GameState, tally: &Tally) -> Option<Choice> {
        self.scan_blocks(state, tally);
        while let Some(task) = self.pending.front().cloned() {
            let choice = match self.next_step(state, tally, &task) {
                None => {
                    self.pending.pop_front();
                    continue;
                }
                Some(Step::Colour(a, c)) => Some(Choice::new(a, Some(c))),
                Some(Step::Place(c, j)) => self.place(state, c, j),
                Some(Step::Stuck) => None,
            };
            match choice {
                Some(ch) => return Some(ch),
                None => {
                    self.dropped.push(format!(
                        "set {:?} of target {} abandoned at move {}",
                        task.members, task.target, self.moves_seen
                    ));
                    self.pending.pop_front();
                }
            }
        }
        None
    }

    fn plan_colour(&self, state: &GameState) -> Option<Choice> {
        let preferred = self
            .last_alice
            .filter(|r| r.round == 1)
            .and_then(|r| self.plan.target_of(r.vertex));
        let order = preferred.into_iter().chain((0..self.plan.len()).filter(|&i| Some(i) != preferred));
        for i in order {
            if let Some(ch) = self.plan.missing(i, state).into_iter().find_map(|c| self.place(state, c, i)) {
                return Some(ch);
            }
        }
        None
    }

    fn first_round(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        self.plan.update_end_stage(state, self.params.reserve_missing, self.moves_seen);
        let tally = Tally::new(state, &self.plan);
        if let Some(ch) = self.owed(state, &tally, true) {
            return self.tag(1, ch);
        }
        if let Some(ch) = self.end_stage_move(state) {
            return self.tag(2, ch);
        }
        if let Some(ch) = self.kill_move(state, &tally) {
            return self.tag(3, ch);
        }
        if let Some(ch) = self.owed(state, &tally, false) {
            return self.tag(4, ch);
        }
        if let Some(ch) = self.plan_colour(state) {
            return self.tag(5, ch);
        }
        let ch = first_fit(state, rng, self.params.tie_break);
        self.tag(6, ch)
    }
}

/// Calls `f` on every `m`-subset of `items` in lexicographic order.
fn for_each_subset(items: &[usize], m: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], start: usize, m: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == m {
            f(cur);
            return;
        }
        let need = m - cur.len();
        for i in start..=items.len().saturating_sub(need) {
            if i >= items.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, i + 1, m, cur, f);
            cur.pop();
        }
    }
    if m <= items.len() {
        rec(items, 0, m, &mut Vec::with_capacity(m), f);
    }
}

impl Strategy for PaperBobGeneral {
    fn name(&self) -> &str {
        "paper-bob-general"
    }

    fn choose(&mut self, state: &GameState, rng: &mut GameRng) -> Choice {
        if let Some(v) = winning_pick(state, self.plan.distinguished()) {
            return self.tag(0, Choice::new(v, None));
        }
        if state.is_first_round() {
            self.first_round(state, rng)
        } else {
            let ch = first_fit(state, rng, self.params.tie_break);
            self.tag(7, ch)
        }
    }

    fn observe(&mut self, _after: &GameState, record: &MoveRecord) {
        self.moves_seen += 1;
        if record.player == Player::Alice {
            self.last_alice = Some(*record);
        }
    }

    fn last_rule(&self) -> Option<&'static str> {
        self.last_rule
    }
}
