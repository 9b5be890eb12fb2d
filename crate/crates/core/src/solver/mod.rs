//! Guess-and-check policy synthesis.
//!
//! The search assigns actions to non-goal states in the order they become
//! reachable, backtracking chronologically. A policy is only checked once every
//! reachable non-goal state has an action; partial policies are never verified,
//! since fairness is not monotone in the policy edges. Instead partial policies
//! are discarded when [`prune_hopeless`] proves that no completion can work.

pub mod asp;

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::model::{ActionId, FondPlusProblem, Policy, PolicyGraph, StateId};
use crate::termination::{fixpoint_on_graph, verify_fondplus};

pub use asp::{emit_asp, emit_asp_clingo, extract_policy, AspError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionOrder {
    /// Declaration (id) order.
    Declaration,
    /// Fewest successors first, ties by id.
    #[default]
    Degree,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub max_states: usize,
    pub action_order: ActionOrder,
    /// Run limited-discrepancy passes with a growing limit instead of a single
    /// depth-first pass. Still complete.
    pub restart_on_conflict: bool,
    pub time_budget: Option<Duration>,
    /// Discard partial policies that provably cannot be completed.
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_states: crate::frontend::DEFAULT_MAX_STATES,
            action_order: ActionOrder::default(),
            restart_on_conflict: false,
            time_budget: None,
            prune: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    Unsolvable,
    ResourceLimit,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes_expanded: u64,
    pub verifier_calls: u64,
    pub backtracks: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub policy: Option<Policy>,
    pub stats: SolveStats,
}

pub fn solve(problem: &FondPlusProblem, opts: &SolveOptions) -> SolveResult {
    let start = Instant::now();
    let finish = |status, policy, mut stats: SolveStats| {
        stats.elapsed = start.elapsed();
        SolveResult {
            status,
            policy,
            stats,
        }
    };
    if problem.model().num_states() > opts.max_states.max(1) {
        return finish(SolveStatus::ResourceLimit, None, SolveStats::default());
    }
    let mut search = Search::new(problem, opts, start);
    let mut limit = if opts.restart_on_conflict {
        Some(0)
    } else {
        None
    };
    loop {
        search.hit_limit = false;
        match search.run(limit) {
            Outcome::Found(pi) => return finish(SolveStatus::Solved, Some(pi), search.stats),
            Outcome::Timeout => return finish(SolveStatus::ResourceLimit, None, search.stats),
            Outcome::Exhausted if search.hit_limit => {
                limit = limit.map(|k| k + 1);
            }
            Outcome::Exhausted => return finish(SolveStatus::Unsolvable, None, search.stats),
        }
    }
}

/// True when no completion of `partial` can solve the problem: either some
/// state reachable under `partial` cannot terminate whatever the unassigned
/// states do, or some state whose forward closure is fully assigned already
/// fails to terminate. The first test over-approximates termination by
/// letting every action that belongs to some `A_i` count as fair (one
/// terminating successor suffices) and requiring all successors for the others.
pub fn prune_hopeless(problem: &FondPlusProblem, partial: &Policy) -> bool {
    let model = problem.model();
    let assign: Vec<Option<ActionId>> = model.states().map(|s| partial.get(s)).collect();
    let reach = reach_partial(problem, &assign);
    hopeless(problem, &may_fair(problem), &assign, &reach) || settled_failure(problem, &assign)
}

/// True when some reachable state that can no longer reach an unassigned
/// state does not terminate. Everything such a state's label depends on lies in
/// its forward closure, which is already fixed, so no completion can help.
fn settled_failure(problem: &FondPlusProblem, assign: &[Option<ActionId>]) -> bool {
    let model = problem.model();
    let g = PolicyGraph::build_with(model, |s| assign[s.index()]);
    let n = g.len();
    let mut preds = vec![Vec::new(); n];
    for s in 0..n {
        for &t in g.successors(s) {
            preds[t].push(s);
        }
    }
    let mut unsettled = FixedBitSet::with_capacity(n);
    let mut stack: Vec<usize> = (0..n)
        .filter(|&i| !g.is_goal(i) && assign[g.state(i).index()].is_none())
        .collect();
    for &i in &stack {
        unsettled.insert(i);
    }
    while let Some(t) = stack.pop() {
        for &s in &preds[t] {
            if !unsettled.put(s) {
                stack.push(s);
            }
        }
    }
    if (0..n).all(|i| unsettled.contains(i) || g.is_goal(i)) {
        return false;
    }
    let labels = fixpoint_on_graph(problem, &g);
    (0..n).any(|i| !unsettled.contains(i) && !labels.terminate.contains(i))
}

fn may_fair(problem: &FondPlusProblem) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(problem.model().num_actions());
    for c in problem.constraints() {
        for a in &c.a_set {
            set.insert(a.index());
        }
    }
    set
}

fn hopeless(
    problem: &FondPlusProblem,
    may_fair: &FixedBitSet,
    assign: &[Option<ActionId>],
    reach: &Reach,
) -> bool {
    let model = problem.model();
    let n = model.num_states();
    let mut term = FixedBitSet::with_capacity(n);
    for g in model.goals() {
        term.insert(g.index());
    }
    let ok = |term: &FixedBitSet, a: ActionId, succ: &[StateId]| {
        if may_fair.contains(a.index()) {
            succ.iter().any(|t| term.contains(t.index()))
        } else {
            succ.iter().all(|t| term.contains(t.index()))
        }
    };
    let mut changed = true;
    while changed {
        changed = false;
        for s in model.states() {
            if term.contains(s.index()) {
                continue;
            }
            let can = match assign[s.index()] {
                Some(a) => ok(&term, a, model.transition(s, a).unwrap_or(&[])),
                None => model
                    .applicable(s)
                    .iter()
                    .any(|(a, succ)| ok(&term, *a, succ)),
            };
            if can {
                term.insert(s.index());
                changed = true;
            }
        }
    }
    reach.order.iter().any(|s| !term.contains(s.index()))
}

/// States reachable under a partial assignment, in BFS order. Unassigned
/// states are reached but not expanded.
struct Reach {
    order: Vec<StateId>,
}

fn reach_partial(problem: &FondPlusProblem, assign: &[Option<ActionId>]) -> Reach {
    let model = problem.model();
    let mut seen = FixedBitSet::with_capacity(model.num_states());
    let mut order = vec![model.initial()];
    seen.insert(model.initial().index());
    let mut queue = VecDeque::from([model.initial()]);
    while let Some(s) = queue.pop_front() {
        if model.is_goal(s) {
            continue;
        }
        let Some(a) = assign[s.index()] else { continue };
        for &t in model.transition(s, a).unwrap_or(&[]) {
            if !seen.put(t.index()) {
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    Reach { order }
}

enum Outcome {
    Found(Policy),
    Exhausted,
    Timeout,
}

struct Frame {
    state: StateId,
    next: usize,
    /// Discrepancies spent by the frames below this one.
    base: usize,
}

struct Search<'a> {
    problem: &'a FondPlusProblem,
    opts: &'a SolveOptions,
    start: Instant,
    options: Vec<Vec<ActionId>>,
    may_fair: FixedBitSet,
    assign: Vec<Option<ActionId>>,
    stats: SolveStats,
    hit_limit: bool,
}

enum Examined {
    Dead,
    Complete(Policy),
    Open(StateId),
}

impl<'a> Search<'a> {
    fn new(problem: &'a FondPlusProblem, opts: &'a SolveOptions, start: Instant) -> Self {
        let model = problem.model();
        let options = model
            .states()
            .map(|s| {
                let mut acts: Vec<(ActionId, usize)> = model
                    .applicable(s)
                    .iter()
                    .map(|(a, succ)| (*a, succ.len()))
                    .collect();
                if opts.action_order == ActionOrder::Degree {
                    acts.sort_by_key(|&(a, k)| (k, a));
                }
                acts.into_iter().map(|(a, _)| a).collect()
            })
            .collect();
        Search {
            problem,
            opts,
            start,
            options,
            may_fair: may_fair(problem),
            assign: vec![None; model.num_states()],
            stats: SolveStats::default(),
            hit_limit: false,
        }
    }

    fn out_of_time(&self) -> bool {
        self.opts
            .time_budget
            .is_some_and(|b| self.start.elapsed() >= b)
    }

    fn examine(&mut self) -> Examined {
        let model = self.problem.model();
        let reach = reach_partial(self.problem, &self.assign);
        let open = reach
            .order
            .iter()
            .copied()
            .find(|&s| !model.is_goal(s) && self.assign[s.index()].is_none());
        if let Some(s) = open {
            if self.options[s.index()].is_empty() {
                return Examined::Dead;
            }
        }
        if self.opts.prune
            && (hopeless(self.problem, &self.may_fair, &self.assign, &reach)
                || (open.is_some() && settled_failure(self.problem, &self.assign)))
        {
            return Examined::Dead;
        }
        match open {
            Some(s) => Examined::Open(s),
            None => Examined::Complete(
                reach
                    .order
                    .iter()
                    .filter_map(|&s| self.assign[s.index()].map(|a| (s, a)))
                    .collect(),
            ),
        }
    }

    /// Assigns the frame's next action if the discrepancy limit allows it.
    fn advance(&mut self, frame: &mut Frame, limit: Option<usize>) -> bool {
        let opts = &self.options[frame.state.index()];
        if frame.next >= opts.len() {
            return false;
        }
        let cost = frame.base + usize::from(frame.next > 0);
        if limit.is_some_and(|k| cost > k) {
            self.hit_limit = true;
            return false;
        }
        self.assign[frame.state.index()] = Some(opts[frame.next]);
        frame.next += 1;
        true
    }

    fn run(&mut self, limit: Option<usize>) -> Outcome {
        self.assign.iter_mut().for_each(|a| *a = None);
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            if self.stats.nodes_expanded.is_multiple_of(64) && self.out_of_time() {
                return Outcome::Timeout;
            }
            self.stats.nodes_expanded += 1;
            let descended = match self.examine() {
                Examined::Dead => false,
                Examined::Complete(pi) => {
                    self.stats.verifier_calls += 1;
                    let g = PolicyGraph::build(self.problem.model(), &pi);
                    if crate::termination::verify_graph(self.problem, &g).solves {
                        debug_assert!(verify_fondplus(self.problem, &pi).solves);
                        return Outcome::Found(pi);
                    }
                    false
                }
                Examined::Open(state) => {
                    let base = stack.last().map_or(0, |f| f.base + usize::from(f.next > 1));
                    let mut frame = Frame {
                        state,
                        next: 0,
                        base,
                    };
                    let ok = self.advance(&mut frame, limit);
                    stack.push(frame);
                    ok
                }
            };
            if descended {
                continue;
            }
            self.stats.backtracks += 1;
            loop {
                let Some(mut frame) = stack.pop() else {
                    return Outcome::Exhausted;
                };
                if self.advance(&mut frame, limit) {
                    stack.push(frame);
                    break;
                }
                self.assign[frame.state.index()] = None;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{figure1, figure1_expected, gen_f01, Base};

    fn expected_policy() -> Policy {
        [
            (StateId(0), ActionId(0)),
            (StateId(1), ActionId(1)),
            (StateId(2), ActionId(1)),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn figure1_matrix() {
        for v in 1..=8 {
            let p = figure1(v).unwrap();
            let r = solve(&p, &SolveOptions::default());
            if figure1_expected(v).unwrap() {
                assert_eq!(r.status, SolveStatus::Solved, "C{v}");
                assert_eq!(r.policy, Some(expected_policy()));
            } else {
                assert_eq!(r.status, SolveStatus::Unsolvable, "C{v}");
                assert!(r.policy.is_none());
            }
        }
    }

    #[test]
    fn restarts_and_pruning_do_not_change_status() {
        for v in 1..=8 {
            let p = figure1(v).unwrap();
            let base = solve(&p, &SolveOptions::default()).status;
            for (restart, prune) in [(true, true), (false, false), (true, false)] {
                let opts = SolveOptions {
                    restart_on_conflict: restart,
                    prune,
                    ..Default::default()
                };
                assert_eq!(solve(&p, &opts).status, base);
            }
        }
    }

    #[test]
    fn f01_small_unsolvable() {
        let p = gen_f01(Base::Qnp1, 2).unwrap();
        assert_eq!(
            solve(&p, &SolveOptions::default()).status,
            SolveStatus::Unsolvable
        );
    }

    #[test]
    fn prune_detects_dead_end() {
        let p = figure1(2).unwrap();
        // s0 -> a; s1 would need b, which is fine; nothing hopeless yet
        let partial: Policy = [(StateId(0), ActionId(0))].into_iter().collect();
        assert!(!prune_hopeless(&p, &partial));
        // under C1 nothing is fair and s0 <-> s1 can never be left for sure
        let p1 = figure1(1).unwrap();
        assert!(prune_hopeless(&p1, &expected_policy()));
    }

    #[test]
    fn state_cap_is_resource_limit() {
        let opts = SolveOptions {
            max_states: 2,
            ..Default::default()
        };
        assert_eq!(
            solve(&figure1(2).unwrap(), &opts).status,
            SolveStatus::ResourceLimit
        );
    }

    #[test]
    fn deterministic_stats() {
        let p = figure1(7).unwrap();
        let a = solve(&p, &SolveOptions::default());
        let b = solve(&p, &SolveOptions::default());
        assert_eq!(a.policy, b.policy);
        assert_eq!(
            (
                a.stats.nodes_expanded,
                a.stats.verifier_calls,
                a.stats.backtracks
            ),
            (
                b.stats.nodes_expanded,
                b.stats.verifier_calls,
                b.stats.backtracks
            )
        );
    }
}
