//! Termination analysis for policies.
//!
//! * [`terminate_fixpoint`] / [`verify_fondplus`]: the backward-from-goal
//!   labeling for FOND+ problems, evaluated as a two-level fixpoint (outer over
//!   the terminating set, inner over `blocked` given that set).
//! * [`qnp`]: edge-removal Sieve and the inductive termination labeling for QNPs.
//! * [`dual`]: termination for Dual FOND problems.
//! * [`classic`]: direct strong and strong-cyclic checks.

pub mod classic;
pub mod dual;
pub mod qnp;
mod relations;

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::model::{FondPlusProblem, Policy, PolicyGraph, StateId, Verdict, Witness};

pub use classic::{verify_strong, verify_strong_cyclic};
pub use dual::dual_terminates;
pub use qnp::{qnp_terminates, sieve_qnp, sieve_qnp_shuffled, SieveOutcome};
pub use relations::{compute_blocked, compute_connected, BlockedRelation, ConnectivityRelation};

/// Result of the terminating-state fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminationLabels {
    pub terminate: BTreeSet<StateId>,
    /// States whose assigned action occurrence is fair at the fixpoint.
    pub fair: BTreeSet<StateId>,
    /// Disjoint increments `S_0, S_1, ..., S_k`; `S_0` holds the reachable goals.
    pub rounds: Vec<Vec<StateId>>,
}

/// Node-level labels over a [`PolicyGraph`].
#[derive(Clone, Debug)]
pub(crate) struct NodeLabels {
    pub terminate: FixedBitSet,
    pub fair: FixedBitSet,
    pub rounds: Vec<Vec<usize>>,
}

/// Whether the occurrence of `pi(s)` at `node` is fair given `blocked`: some
/// `A_i` contains the action and every `B_i`-node `x` with an unblocked path
/// from `node` has every path back to `node` blocked.
pub fn state_fair(
    problem: &FondPlusProblem,
    g: &PolicyGraph,
    blocked: &BlockedRelation,
    node: usize,
) -> bool {
    let Some(action) = g.action(node) else {
        return false;
    };
    problem
        .constraints()
        .iter()
        .filter(|c| c.a_set.contains(&action))
        .any(|c| {
            (0..g.len()).all(|x| match g.action(x) {
                Some(b) if c.b_set.contains(&b) => {
                    blocked.blocked(node, x) || blocked.blocked(x, node)
                }
                _ => true,
            })
        })
}

fn fair_nodes(
    problem: &FondPlusProblem,
    g: &PolicyGraph,
    blocked: &BlockedRelation,
) -> FixedBitSet {
    let mut fair = FixedBitSet::with_capacity(g.len());
    for node in 0..g.len() {
        if state_fair(problem, g, blocked, node) {
            fair.insert(node);
        }
    }
    fair
}

/// Whether a non-terminating node can be added given the current terminating
/// set and its fairness.
fn can_terminate(g: &PolicyGraph, terminate: &FixedBitSet, node: usize, fair: bool) -> bool {
    if g.is_goal(node) {
        return true;
    }
    let succ = g.successors(node);
    if fair {
        succ.iter().any(|&t| terminate.contains(t))
    } else {
        !succ.is_empty() && succ.iter().all(|&t| terminate.contains(t))
    }
}

pub(crate) fn fixpoint_on_graph(problem: &FondPlusProblem, g: &PolicyGraph) -> NodeLabels {
    let n = g.len();
    let conn = compute_connected(g);
    let mut terminate = FixedBitSet::with_capacity(n);
    let goals: Vec<usize> = (0..n).filter(|&i| g.is_goal(i)).collect();
    for &i in &goals {
        terminate.insert(i);
    }
    let mut rounds = vec![goals];
    loop {
        let blocked = compute_blocked(g, &conn, &terminate);
        let fair = fair_nodes(problem, g, &blocked);
        let added: Vec<usize> = (0..n)
            .filter(|&i| {
                !terminate.contains(i) && can_terminate(g, &terminate, i, fair.contains(i))
            })
            .collect();
        if added.is_empty() {
            return NodeLabels {
                terminate,
                fair,
                rounds,
            };
        }
        for &i in &added {
            terminate.insert(i);
        }
        rounds.push(added);
    }
}

/// Computes which policy-reachable states terminate.
pub fn terminate_fixpoint(problem: &FondPlusProblem, pi: &Policy) -> TerminationLabels {
    let g = PolicyGraph::build(problem.model(), pi);
    let labels = fixpoint_on_graph(problem, &g);
    to_state_labels(&g, &labels)
}

fn to_state_labels(g: &PolicyGraph, labels: &NodeLabels) -> TerminationLabels {
    TerminationLabels {
        terminate: labels.terminate.ones().map(|i| g.state(i)).collect(),
        fair: labels.fair.ones().map(|i| g.state(i)).collect(),
        rounds: labels
            .rounds
            .iter()
            .map(|r| r.iter().map(|&i| g.state(i)).collect())
            .collect(),
    }
}

/// The same fixpoint evaluated chaotically: nodes are visited in the given
/// order and added as soon as they qualify, with `blocked` and fairness
/// recomputed after every addition. Used to check that the terminating set does
/// not depend on evaluation order.
pub fn terminate_fixpoint_ordered(
    problem: &FondPlusProblem,
    pi: &Policy,
    order: &[StateId],
) -> BTreeSet<StateId> {
    let g = PolicyGraph::build(problem.model(), pi);
    let conn = compute_connected(&g);
    let n = g.len();
    let order: Vec<usize> = order.iter().filter_map(|&s| g.node_of(s)).collect();
    let mut terminate = FixedBitSet::with_capacity(n);
    let mut changed = true;
    while changed {
        changed = false;
        for &i in &order {
            if terminate.contains(i) {
                continue;
            }
            let blocked = compute_blocked(&g, &conn, &terminate);
            let fair = state_fair(problem, &g, &blocked, i);
            if can_terminate(&g, &terminate, i, fair) {
                terminate.insert(i);
                changed = true;
            }
        }
    }
    terminate.ones().map(|i| g.state(i)).collect()
}

/// A policy solves a FOND+ problem iff every reachable state terminates and no
/// reachable non-goal state is left without an applicable action.
pub fn verify_fondplus(problem: &FondPlusProblem, pi: &Policy) -> Verdict {
    let g = PolicyGraph::build(problem.model(), pi);
    verify_graph(problem, &g)
}

pub(crate) fn verify_graph(problem: &FondPlusProblem, g: &PolicyGraph) -> Verdict {
    if let Some(d) = g.dead_ends().next() {
        return Verdict::reject(Witness::DeadEnd(g.state(d)));
    }
    let labels = fixpoint_on_graph(problem, g);
    match (0..g.len()).find(|&i| !labels.terminate.contains(i)) {
        None => Verdict::accept(),
        Some(i) => {
            let state_labels = to_state_labels(g, &labels);
            Verdict::reject(Witness::NonTerminating {
                state: g.state(i),
                fair: state_labels.fair.into_iter().collect(),
                rounds: state_labels.rounds,
            })
        }
    }
}
