//! Termination for Dual FOND problems, where each non-deterministic action is
//! statically labeled fair or adversarial.

use fixedbitset::FixedBitSet;

use crate::model::{Policy, PolicyGraph, StateId};
use crate::translate::DualFond;

/// Terminating reachable states: goals, states with a fair action and some
/// terminating successor, and states with an adversarial (or deterministic)
/// action whose non-empty successor set terminates entirely.
pub fn dual_termination_set(dual: &DualFond, pi: &Policy) -> Vec<StateId> {
    let g = PolicyGraph::build(&dual.model, pi);
    let term = fixpoint(dual, &g);
    term.ones().map(|i| g.state(i)).collect()
}

/// True iff every policy-reachable state terminates. A reachable non-goal state
/// without an applicable assigned action has no successors and never
/// terminates, so this is also the Dual FOND solution test.
pub fn dual_terminates(dual: &DualFond, pi: &Policy) -> bool {
    let g = PolicyGraph::build(&dual.model, pi);
    fixpoint(dual, &g).count_ones(..) == g.len()
}

fn fixpoint(dual: &DualFond, g: &PolicyGraph) -> FixedBitSet {
    let n = g.len();
    let mut term = FixedBitSet::with_capacity(n);
    for i in (0..n).filter(|&i| g.is_goal(i)) {
        term.insert(i);
    }
    loop {
        let added: Vec<usize> = (0..n)
            .filter(|&i| !term.contains(i))
            .filter(|&i| {
                let succ = g.successors(i);
                let fair = g.action(i).is_some_and(|a| dual.is_fair(a));
                if fair {
                    succ.iter().any(|&t| term.contains(t))
                } else {
                    !succ.is_empty() && succ.iter().all(|&t| term.contains(t))
                }
            })
            .collect();
        if added.is_empty() {
            return term;
        }
        for i in added {
            term.insert(i);
        }
    }
}
