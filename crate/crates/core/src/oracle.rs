//! Brute-force trajectory-fairness check, used as ground truth on small instances.
//!
//! An infinite trajectory is summarised by its set `R` of recurrent states and
//! the edges `E'` it traverses infinitely often. A policy fails iff some
//! reachable non-goal state is a dead end, or there is a goal-free `(R, E')`
//! that is strongly connected, where every state whose action occurrence is fair
//! in `R` has all of its successors inside `R` and all its edges in `E'`.
//!
//! For a fixed `R` it is enough to try `E'` = every policy edge inside `R`:
//! unfair states place no demand on `E'`, and adding edges never breaks strong
//! connectivity. So the search is over subsets `R` only.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::model::{FondPlusProblem, Policy, PolicyGraph, Verdict, Witness};

/// Largest number of reachable non-goal nodes the oracle will enumerate.
pub const ORACLE_MAX_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("policy graph has {nodes} non-goal nodes; oracle bound is {bound}")]
pub struct OracleSizeError {
    pub nodes: usize,
    pub bound: usize,
}

pub fn fair_lasso_oracle(
    problem: &FondPlusProblem,
    pi: &Policy,
) -> Result<Verdict, OracleSizeError> {
    let model = problem.model();
    let graph = PolicyGraph::build(model, pi);
    if let Some(d) = graph.dead_ends().next() {
        return Ok(Verdict::reject(Witness::DeadEnd(graph.state(d))));
    }
    let candidates: Vec<usize> = (0..graph.len()).filter(|&i| !graph.is_goal(i)).collect();
    if candidates.len() > ORACLE_MAX_NODES {
        return Err(OracleSizeError {
            nodes: candidates.len(),
            bound: ORACLE_MAX_NODES,
        });
    }
    let k = candidates.len();
    for mask in 1u32..(1u32 << k) {
        let mut in_r = FixedBitSet::with_capacity(graph.len());
        for (bit, &node) in candidates.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                in_r.insert(node);
            }
        }
        if is_fair_recurrent_set(problem, &graph, &in_r) {
            let states = in_r.ones().map(|i| graph.state(i)).collect();
            return Ok(Verdict::reject(Witness::Recurrent(states)));
        }
    }
    Ok(Verdict::accept())
}

fn is_fair_recurrent_set(
    problem: &FondPlusProblem,
    graph: &PolicyGraph,
    in_r: &FixedBitSet,
) -> bool {
    // actions that occur infinitely often
    let recurring: Vec<_> = in_r.ones().filter_map(|i| graph.action(i)).collect();
    for s in in_r.ones() {
        let Some(action) = graph.action(s) else {
            return false;
        };
        let fair_occurrence = problem
            .constraints()
            .iter()
            .any(|c| c.a_set.contains(&action) && !recurring.iter().any(|b| c.b_set.contains(b)));
        let succ = graph.successors(s);
        if fair_occurrence && !succ.iter().all(|&t| in_r.contains(t)) {
            return false;
        }
        if !succ.iter().any(|&t| in_r.contains(t)) {
            return false;
        }
    }
    strongly_connected(graph, in_r)
}

fn strongly_connected(graph: &PolicyGraph, in_r: &FixedBitSet) -> bool {
    let Some(root) = in_r.ones().next() else {
        return false;
    };
    let forward = closure(in_r, root, |i| graph.successors(i).to_vec());
    if forward != *in_r {
        return false;
    }
    let mut preds = vec![Vec::new(); graph.len()];
    for i in in_r.ones() {
        for &j in graph.successors(i) {
            preds[j].push(i);
        }
    }
    closure(in_r, root, |i| preds[i].clone()) == *in_r
}

fn closure(within: &FixedBitSet, root: usize, next: impl Fn(usize) -> Vec<usize>) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(within.len());
    seen.insert(root);
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        for j in next(i) {
            if within.contains(j) && !seen.put(j) {
                stack.push(j);
            }
        }
    }
    seen
}
