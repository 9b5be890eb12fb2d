//! QNP termination: the edge-removal Sieve and the inductive labeling.

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{ActionId, FondModel, Policy, PolicyGraph, StateId};
use crate::translate::QnpAnnotation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveOutcome {
    pub accepted: bool,
    /// Edges in removal order.
    pub removed: Vec<(StateId, StateId)>,
}

/// Variables decremented and incremented by every action, indexed by action id.
struct Effects {
    dec: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl Effects {
    fn new(model: &FondModel, ann: &QnpAnnotation) -> Self {
        let mut dec = vec![Vec::new(); model.num_actions()];
        let mut inc = vec![Vec::new(); model.num_actions()];
        for (v, (_, actions)) in ann.dec_actions.iter().enumerate() {
            for a in actions {
                if let Some(slot) = dec.get_mut(a.index()) {
                    slot.push(v);
                }
            }
        }
        let var_index = |name: &str| ann.dec_actions.keys().position(|k| k == name);
        for (name, actions) in &ann.inc_actions {
            // variables that are never decremented cannot drive a removal
            let Some(v) = var_index(name) else { continue };
            for a in actions {
                if let Some(slot) = inc.get_mut(a.index()) {
                    slot.push(v);
                }
            }
        }
        Effects { dec, inc }
    }

    fn decs(&self, a: Option<ActionId>) -> &[usize] {
        a.map(|a| self.dec[a.index()].as_slice()).unwrap_or(&[])
    }

    fn increments(&self, a: Option<ActionId>, v: usize) -> bool {
        a.is_some_and(|a| self.inc[a.index()].contains(&v))
    }
}

/// Sieve with edges considered in increasing `(source, target)` order.
pub fn sieve_qnp(model: &FondModel, ann: &QnpAnnotation, pi: &Policy) -> SieveOutcome {
    let g = PolicyGraph::build(model, pi);
    let mut edges = edge_list(&g);
    edges.sort_by_key(|&(s, t)| (g.state(s), g.state(t)));
    run_sieve(model, ann, &g, edges)
}

/// Sieve with a random edge order.
pub fn sieve_qnp_shuffled<R: Rng + ?Sized>(
    model: &FondModel,
    ann: &QnpAnnotation,
    pi: &Policy,
    rng: &mut R,
) -> SieveOutcome {
    let g = PolicyGraph::build(model, pi);
    let mut edges = edge_list(&g);
    edges.shuffle(rng);
    run_sieve(model, ann, &g, edges)
}

fn edge_list(g: &PolicyGraph) -> Vec<(usize, usize)> {
    (0..g.len())
        .flat_map(|s| g.successors(s).iter().map(move |&t| (s, t)))
        .collect()
}

/// Repeatedly removes the first removable edge (in `order`) until the graph is
/// acyclic or nothing can be removed. Edge `(s, s')` is removable when `pi(s)`
/// decrements a variable `x` that no node on any remaining path `s' ~> s`
/// increments.
fn run_sieve(
    model: &FondModel,
    ann: &QnpAnnotation,
    g: &PolicyGraph,
    order: Vec<(usize, usize)>,
) -> SieveOutcome {
    let effects = Effects::new(model, ann);
    let n = g.len();
    let mut alive = vec![true; order.len()];
    let mut removed = Vec::new();
    loop {
        let adj = adjacency(n, &order, &alive);
        if is_acyclic(&adj) {
            return SieveOutcome {
                accepted: true,
                removed,
            };
        }
        let mut radj = vec![Vec::new(); n];
        for (s, out) in adj.iter().enumerate() {
            for &t in out {
                radj[t].push(s);
            }
        }
        let pick = order.iter().enumerate().position(|(k, &(s, t))| {
            alive[k] && {
                let decs = effects.decs(g.action(s));
                !decs.is_empty() && {
                    let from_target = reach(&adj, t);
                    let to_source = reach(&radj, s);
                    decs.iter().any(|&v| {
                        !from_target
                            .intersection(&to_source)
                            .any(|y| effects.increments(g.action(y), v))
                    })
                }
            }
        });
        match pick {
            Some(k) => {
                alive[k] = false;
                let (s, t) = order[k];
                removed.push((g.state(s), g.state(t)));
            }
            None => {
                return SieveOutcome {
                    accepted: false,
                    removed,
                }
            }
        }
    }
}

fn adjacency(n: usize, order: &[(usize, usize)], alive: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (k, &(s, t)) in order.iter().enumerate() {
        if alive[k] {
            adj[s].push(t);
        }
    }
    adj
}

fn reach(adj: &[Vec<usize>], from: usize) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(adj.len());
    seen.insert(from);
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen.put(y) {
                stack.push(y);
            }
        }
    }
    seen
}

fn is_acyclic(adj: &[Vec<usize>]) -> bool {
    let mut indeg = vec![0usize; adj.len()];
    for out in adj {
        for &t in out {
            indeg[t] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..adj.len()).filter(|&i| indeg[i] == 0).collect();
    let mut visited = 0;
    while let Some(x) = stack.pop() {
        visited += 1;
        for &t in &adj[x] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    visited == adj.len()
}

/// Inductive QNP termination: a state terminates if it lies on no cycle through
/// non-terminating states, or its action decrements some `x` and no such cycle
/// through it visits a state whose action increments `x`. Returns true iff every
/// policy-reachable state terminates.
pub fn qnp_terminates(model: &FondModel, ann: &QnpAnnotation, pi: &Policy) -> bool {
    let g = PolicyGraph::build(model, pi);
    let effects = Effects::new(model, ann);
    let n = g.len();
    let mut terminate = FixedBitSet::with_capacity(n);
    loop {
        let (component, cyclic) = components_outside(&g, &terminate);
        let added: Vec<usize> = (0..n)
            .filter(|&s| !terminate.contains(s))
            .filter(|&s| {
                !cyclic[s]
                    || effects.decs(g.action(s)).iter().any(|&v| {
                        !(0..n).any(|y| {
                            !terminate.contains(y)
                                && component[y] == component[s]
                                && effects.increments(g.action(y), v)
                        })
                    })
            })
            .collect();
        if added.is_empty() {
            return terminate.count_ones(..) == n;
        }
        for s in added {
            terminate.insert(s);
        }
    }
}

/// SCC index of every node in the subgraph induced by non-terminating nodes,
/// and whether the node lies on a cycle there.
fn components_outside(g: &PolicyGraph, terminate: &FixedBitSet) -> (Vec<usize>, Vec<bool>) {
    let n = g.len();
    let mut dg = DiGraph::<(), ()>::with_capacity(n, n);
    let ids: Vec<_> = (0..n).map(|_| dg.add_node(())).collect();
    let mut self_loop = vec![false; n];
    for s in (0..n).filter(|&s| !terminate.contains(s)) {
        for &t in g.successors(s) {
            if terminate.contains(t) {
                continue;
            }
            if s == t {
                self_loop[s] = true;
            }
            dg.add_edge(ids[s], ids[t], ());
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut cyclic = vec![false; n];
    for (c, scc) in tarjan_scc(&dg).into_iter().enumerate() {
        let big = scc.len() > 1;
        for node in scc {
            let i = node.index();
            component[i] = c;
            cyclic[i] = big || self_loop[i];
        }
    }
    (component, cyclic)
}
