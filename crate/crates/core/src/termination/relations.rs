//! The `connected` and `blocked` relations over policy-graph nodes.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::model::PolicyGraph;

/// `connected(s, t)` iff there is a non-empty path from `s` to `t` on which `s`
/// does not occur as an intermediate node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityRelation {
    rows: Vec<FixedBitSet>,
}

impl ConnectivityRelation {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn connected(&self, s: usize, t: usize) -> bool {
        self.rows[s].contains(t)
    }

    pub fn row(&self, s: usize) -> &FixedBitSet {
        &self.rows[s]
    }
}

pub fn compute_connected(g: &PolicyGraph) -> ConnectivityRelation {
    let n = g.len();
    let mut rows = Vec::with_capacity(n);
    let mut stack = Vec::new();
    for s in 0..n {
        let mut seen = FixedBitSet::with_capacity(n);
        stack.clear();
        for &x in g.successors(s) {
            if !seen.put(x) {
                stack.push(x);
            }
        }
        while let Some(x) = stack.pop() {
            // the source may close a path but is never passed through
            if x == s {
                continue;
            }
            for &y in g.successors(x) {
                if !seen.put(y) {
                    stack.push(y);
                }
            }
        }
        rows.push(seen);
    }
    ConnectivityRelation { rows }
}

/// `blocked(s, t)` holds iff every path witnessing `connected(s, t)` contains
/// a terminating node (endpoints included); in particular whenever `s` and `t`
/// are not connected. This is the path reading of the rules
///
/// ```text
/// blocked(S,T) :- not connected(S,T).
/// blocked(S,T) :- connected(S,T), terminate(S).
/// blocked(S,T) :- connected(S,T), terminate(T).
/// blocked(S,T) :- connected(S,T), blocked(X,T) : edge(S,X), connected(X,T).
/// ```
///
/// Cycles that never reach `t` do not keep `(s, t)` unblocked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedRelation {
    rows: Vec<FixedBitSet>,
}

impl BlockedRelation {
    pub fn blocked(&self, s: usize, t: usize) -> bool {
        self.rows[s].contains(t)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.rows.iter().all(|r| r.count_ones(..) == r.len())
    }
}

/// For each non-terminating `t`, a backward search through non-terminating
/// nodes finds every `s` with a terminating-free path to `t`; exactly those
/// pairs are unblocked.
pub fn compute_blocked(
    g: &PolicyGraph,
    _conn: &ConnectivityRelation,
    terminate: &FixedBitSet,
) -> BlockedRelation {
    let n = g.len();
    let mut preds = vec![Vec::new(); n];
    for s in 0..n {
        for &x in g.successors(s) {
            preds[x].push(s);
        }
    }
    let mut rows = vec![FixedBitSet::with_capacity(n); n];
    for row in rows.iter_mut() {
        row.insert_range(..);
    }
    let mut seen = FixedBitSet::with_capacity(n);
    let mut queue = VecDeque::new();
    for t in 0..n {
        if terminate.contains(t) {
            continue;
        }
        seen.clear();
        queue.clear();
        queue.push_back(t);
        while let Some(x) = queue.pop_front() {
            for &p in &preds[x] {
                if !terminate.contains(p) && !seen.put(p) {
                    rows[p].set(t, false);
                    queue.push_back(p);
                }
            }
        }
    }
    BlockedRelation { rows }
}
