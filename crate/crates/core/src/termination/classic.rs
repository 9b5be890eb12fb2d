//! Direct strong and strong-cyclic policy checks.

use crate::model::{FondModel, Policy, PolicyGraph};

/// Strong: no dead ends and an acyclic policy graph, so every maximal
/// trajectory is finite and ends in a goal.
pub fn verify_strong(model: &FondModel, pi: &Policy) -> bool {
    let g = PolicyGraph::build(model, pi);
    if g.dead_ends().next().is_some() {
        return false;
    }
    // Kahn's algorithm
    let mut indeg = vec![0usize; g.len()];
    for s in 0..g.len() {
        for &t in g.successors(s) {
            indeg[t] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..g.len()).filter(|&i| indeg[i] == 0).collect();
    let mut visited = 0;
    while let Some(s) = stack.pop() {
        visited += 1;
        for &t in g.successors(s) {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    visited == g.len()
}

/// Strong-cyclic: no dead ends and a goal is reachable from every reachable state.
pub fn verify_strong_cyclic(model: &FondModel, pi: &Policy) -> bool {
    let g = PolicyGraph::build(model, pi);
    if g.dead_ends().next().is_some() {
        return false;
    }
    let mut preds = vec![Vec::new(); g.len()];
    for s in 0..g.len() {
        for &t in g.successors(s) {
            preds[t].push(s);
        }
    }
    let mut reaches_goal = vec![false; g.len()];
    let mut stack: Vec<usize> = (0..g.len()).filter(|&i| g.is_goal(i)).collect();
    for &i in &stack {
        reaches_goal[i] = true;
    }
    while let Some(t) = stack.pop() {
        for &s in &preds[t] {
            if !reaches_goal[s] {
                reaches_goal[s] = true;
                stack.push(s);
            }
        }
    }
    reaches_goal.into_iter().all(|r| r)
}
