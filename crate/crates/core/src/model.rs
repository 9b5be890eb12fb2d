//! Explicit-state FOND / FOND+ data model.
//!
//! States and actions are dense integer ids with a side table of labels. A
//! [`FondModel`] stores, for every state, the applicable actions together with
//! their (non-empty, sorted) successor sets. A [`FondPlusProblem`] pairs a model
//! with a list of conditional fairness assumptions `A_i / B_i`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct StateId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no states")]
    NoStates,
    #[error("goals empty")]
    GoalsEmpty,
    #[error("initial state {0} does not exist")]
    UnknownInitial(StateId),
    #[error("goal state {0} does not exist")]
    UnknownGoal(StateId),
    #[error("transition ({state}, {action}) references unknown state {target}")]
    UnknownTarget {
        state: StateId,
        action: ActionId,
        target: StateId,
    },
    #[error("transition references unknown state {0}")]
    UnknownSource(StateId),
    #[error("transition references unknown action {0}")]
    UnknownAction(ActionId),
    #[error("transition ({state}, {action}) has no successors")]
    EmptyTransition { state: StateId, action: ActionId },
    #[error("duplicate state label `{0}`")]
    DuplicateStateLabel(String),
    #[error("duplicate action name `{0}`")]
    DuplicateActionName(String),
    #[error("action {0} is not applicable in state {1}")]
    NotApplicable(ActionId, StateId),
    #[error("fairness assumption {index}: A set is empty")]
    EmptyASet { index: usize },
    #[error("fairness assumption {index}: A/B not disjoint (action `{action}`)")]
    NotDisjoint { index: usize, action: String },
    #[error("fairness assumption {index}: action `{action}` in A is deterministic")]
    DeterministicInA { index: usize, action: String },
    #[error("fairness assumption {index}: unknown action {action}")]
    UnknownConstraintAction { index: usize, action: ActionId },
}

/// Raw, unvalidated pieces of a [`FondModel`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelParts {
    pub state_labels: Vec<String>,
    pub action_names: Vec<String>,
    pub initial: StateId,
    pub goals: Vec<StateId>,
    /// `(s, a, F(a, s))`; repeated `(s, a)` pairs are merged.
    pub transitions: Vec<(StateId, ActionId, Vec<StateId>)>,
}

/// Checks every structural invariant of a FOND model.
pub fn validate_model(parts: &ModelParts) -> Result<(), ModelError> {
    let n = parts.state_labels.len();
    if n == 0 {
        return Err(ModelError::NoStates);
    }
    if parts.initial.index() >= n {
        return Err(ModelError::UnknownInitial(parts.initial));
    }
    if parts.goals.is_empty() {
        return Err(ModelError::GoalsEmpty);
    }
    if let Some(&g) = parts.goals.iter().find(|g| g.index() >= n) {
        return Err(ModelError::UnknownGoal(g));
    }
    let mut seen = HashSet::new();
    for label in &parts.state_labels {
        if !seen.insert(label.as_str()) {
            return Err(ModelError::DuplicateStateLabel(label.clone()));
        }
    }
    let mut seen = HashSet::new();
    for name in &parts.action_names {
        if !seen.insert(name.as_str()) {
            return Err(ModelError::DuplicateActionName(name.clone()));
        }
    }
    for (s, a, targets) in &parts.transitions {
        if s.index() >= n {
            return Err(ModelError::UnknownSource(*s));
        }
        if a.index() >= parts.action_names.len() {
            return Err(ModelError::UnknownAction(*a));
        }
        if targets.is_empty() {
            return Err(ModelError::EmptyTransition {
                state: *s,
                action: *a,
            });
        }
        if let Some(&t) = targets.iter().find(|t| t.index() >= n) {
            return Err(ModelError::UnknownTarget {
                state: *s,
                action: *a,
                target: t,
            });
        }
    }
    Ok(())
}

/// Explicit FOND model `<S, s0, SG, Act, A, F>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FondModel {
    state_labels: Vec<String>,
    action_names: Vec<String>,
    initial: StateId,
    goals: FixedBitSet,
    /// Per state, applicable actions sorted by id with sorted, deduplicated successors.
    transitions: Vec<Vec<(ActionId, Vec<StateId>)>>,
    nondeterministic: FixedBitSet,
}

impl FondModel {
    pub fn new(parts: ModelParts) -> Result<Self, ModelError> {
        validate_model(&parts)?;
        let n = parts.state_labels.len();
        let mut goals = FixedBitSet::with_capacity(n);
        for g in &parts.goals {
            goals.insert(g.index());
        }
        let mut table: Vec<BTreeMap<ActionId, BTreeSet<StateId>>> = vec![BTreeMap::new(); n];
        for (s, a, targets) in parts.transitions {
            table[s.index()].entry(a).or_default().extend(targets);
        }
        let mut nondeterministic = FixedBitSet::with_capacity(parts.action_names.len());
        let transitions = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(a, succ)| {
                        if succ.len() >= 2 {
                            nondeterministic.insert(a.index());
                        }
                        (a, succ.into_iter().collect())
                    })
                    .collect()
            })
            .collect();
        Ok(FondModel {
            state_labels: parts.state_labels,
            action_names: parts.action_names,
            initial: parts.initial,
            goals,
            transitions,
            nondeterministic,
        })
    }

    pub fn to_parts(&self) -> ModelParts {
        let mut transitions = Vec::new();
        for (s, row) in self.transitions.iter().enumerate() {
            for (a, succ) in row {
                transitions.push((StateId(s as u32), *a, succ.clone()));
            }
        }
        ModelParts {
            state_labels: self.state_labels.clone(),
            action_names: self.action_names.clone(),
            initial: self.initial,
            goals: self.goals().collect(),
            transitions,
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_labels.len()
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states() as u32).map(StateId)
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> + '_ {
        (0..self.num_actions() as u32).map(ActionId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_goal(&self, s: StateId) -> bool {
        self.goals.contains(s.index())
    }

    pub fn goals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.goals.ones().map(|i| StateId(i as u32))
    }

    pub fn state_label(&self, s: StateId) -> &str {
        &self.state_labels[s.index()]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a.index()]
    }

    pub fn state_labels(&self) -> &[String] {
        &self.state_labels
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn state_by_label(&self, label: &str) -> Option<StateId> {
        self.state_labels
            .iter()
            .position(|l| l == label)
            .map(|i| StateId(i as u32))
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.action_names
            .iter()
            .position(|l| l == name)
            .map(|i| ActionId(i as u32))
    }

    /// Applicable actions `A(s)` with their successor sets, sorted by action id.
    pub fn applicable(&self, s: StateId) -> &[(ActionId, Vec<StateId>)] {
        &self.transitions[s.index()]
    }

    pub fn is_applicable(&self, s: StateId, a: ActionId) -> bool {
        self.transition(s, a).is_some()
    }

    /// `F(a, s)`, or `None` when `a` is not applicable in `s`.
    pub fn transition(&self, s: StateId, a: ActionId) -> Option<&[StateId]> {
        let row = self.transitions.get(s.index())?;
        row.binary_search_by_key(&a, |(b, _)| *b)
            .ok()
            .map(|i| row[i].1.as_slice())
    }

    /// `F(a, s)` for an applicable action.
    pub fn successors(&self, s: StateId, a: ActionId) -> Result<&[StateId], ModelError> {
        self.transition(s, a).ok_or(ModelError::NotApplicable(a, s))
    }

    /// An action is non-deterministic if `|F(a, s)| >= 2` for some state.
    pub fn is_nondeterministic(&self, a: ActionId) -> bool {
        self.nondeterministic.contains(a.index())
    }

    pub fn nondeterministic_actions(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.nondeterministic.ones().map(|i| ActionId(i as u32))
    }

    /// States reachable from the initial state using any applicable action.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = FixedBitSet::with_capacity(self.num_states());
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen.insert(self.initial.index());
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for (_, succ) in self.applicable(s) {
                for &t in succ {
                    if !seen.put(t.index()) {
                        queue.push_back(t);
                    }
                }
            }
        }
        order
    }
}

/// A conditional fairness assumption `A / B`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FairnessAssumption {
    pub a_set: BTreeSet<ActionId>,
    pub b_set: BTreeSet<ActionId>,
}

impl FairnessAssumption {
    pub fn new(
        a_set: impl IntoIterator<Item = ActionId>,
        b_set: impl IntoIterator<Item = ActionId>,
    ) -> Self {
        FairnessAssumption {
            a_set: a_set.into_iter().collect(),
            b_set: b_set.into_iter().collect(),
        }
    }
}

/// A FOND problem extended with a list of fairness assumptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FondPlusProblem {
    model: FondModel,
    constraints: Vec<FairnessAssumption>,
}

impl FondPlusProblem {
    pub fn new(model: FondModel, constraints: Vec<FairnessAssumption>) -> Result<Self, ModelError> {
        for (index, c) in constraints.iter().enumerate() {
            if c.a_set.is_empty() {
                return Err(ModelError::EmptyASet { index });
            }
            for &action in c.a_set.iter().chain(&c.b_set) {
                if action.index() >= model.num_actions() {
                    return Err(ModelError::UnknownConstraintAction { index, action });
                }
            }
            if let Some(&a) = c.a_set.intersection(&c.b_set).next() {
                return Err(ModelError::NotDisjoint {
                    index,
                    action: model.action_name(a).to_string(),
                });
            }
            if let Some(&a) = c.a_set.iter().find(|&&a| !model.is_nondeterministic(a)) {
                return Err(ModelError::DeterministicInA {
                    index,
                    action: model.action_name(a).to_string(),
                });
            }
        }
        Ok(FondPlusProblem { model, constraints })
    }

    pub fn model(&self) -> &FondModel {
        &self.model
    }

    pub fn constraints(&self) -> &[FairnessAssumption] {
        &self.constraints
    }

    pub fn into_parts(self) -> (FondModel, Vec<FairnessAssumption>) {
        (self.model, self.constraints)
    }

    /// Actions that belong to no `A_i`; their occurrences are never fair.
    pub fn never_fair(&self, a: ActionId) -> bool {
        !self.constraints.iter().any(|c| c.a_set.contains(&a))
    }
}

/// Partial map from non-goal states to actions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Policy {
    assignment: BTreeMap<StateId, ActionId>,
}

impl Policy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, s: StateId, a: ActionId) -> Option<ActionId> {
        self.assignment.insert(s, a)
    }

    pub fn get(&self, s: StateId) -> Option<ActionId> {
        self.assignment.get(&s).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateId, ActionId)> + '_ {
        self.assignment.iter().map(|(s, a)| (*s, *a))
    }

    /// Drops assignments on goal states.
    pub fn normalized(mut self, model: &FondModel) -> Self {
        self.assignment.retain(|s, _| !model.is_goal(*s));
        self
    }

    /// Non-fatal issues: assignments on goal states, and inapplicable actions in
    /// states the policy never reaches.
    pub fn lint(&self, model: &FondModel) -> Vec<String> {
        let graph = PolicyGraph::build(model, self);
        let mut warnings = Vec::new();
        for (s, a) in self.iter() {
            if s.index() >= model.num_states() || a.index() >= model.num_actions() {
                warnings.push(format!("assignment {s} -> {a} is out of range"));
                continue;
            }
            if model.is_goal(s) {
                warnings.push(format!(
                    "assignment on goal state `{}` is ignored",
                    model.state_label(s)
                ));
            } else if !model.is_applicable(s, a) && !graph.contains(s) {
                warnings.push(format!(
                    "action `{}` is not applicable in unreached state `{}`",
                    model.action_name(a),
                    model.state_label(s)
                ));
            }
        }
        warnings
    }
}

impl FromIterator<(StateId, ActionId)> for Policy {
    fn from_iter<T: IntoIterator<Item = (StateId, ActionId)>>(iter: T) -> Self {
        Policy {
            assignment: iter.into_iter().collect(),
        }
    }
}

/// The graph `G(P, pi)`: states reachable under the policy and the transitions
/// the policy makes possible. Node 0 is the initial state; nodes are in BFS
/// order with successors visited in increasing state id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicyGraph {
    nodes: Vec<StateId>,
    index: Vec<Option<u32>>,
    succ: Vec<Vec<usize>>,
    action: Vec<Option<ActionId>>,
    goal: Vec<bool>,
}

impl PolicyGraph {
    pub fn build(model: &FondModel, pi: &Policy) -> Self {
        Self::build_with(model, |s| pi.get(s))
    }

    /// Same as [`PolicyGraph::build`] with the policy given as a lookup function.
    pub fn build_with(model: &FondModel, pi: impl Fn(StateId) -> Option<ActionId>) -> Self {
        let mut graph = PolicyGraph {
            nodes: Vec::new(),
            index: vec![None; model.num_states()],
            succ: Vec::new(),
            action: Vec::new(),
            goal: Vec::new(),
        };
        let s0 = model.initial();
        graph.index[s0.index()] = Some(0);
        graph.nodes.push(s0);
        let mut head = 0;
        while head < graph.nodes.len() {
            let s = graph.nodes[head];
            head += 1;
            let is_goal = model.is_goal(s);
            graph.goal.push(is_goal);
            let assigned = if is_goal {
                None
            } else {
                pi(s).filter(|&a| model.is_applicable(s, a))
            };
            graph.action.push(assigned);
            let mut out = Vec::new();
            if let Some(a) = assigned {
                for &t in model.transition(s, a).unwrap_or(&[]) {
                    let idx = match graph.index[t.index()] {
                        Some(i) => i as usize,
                        None => {
                            let i = graph.nodes.len();
                            graph.index[t.index()] = Some(i as u32);
                            graph.nodes.push(t);
                            i
                        }
                    };
                    out.push(idx);
                }
            }
            graph.succ.push(out);
        }
        graph
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[StateId] {
        &self.nodes
    }

    pub fn state(&self, node: usize) -> StateId {
        self.nodes[node]
    }

    pub fn node_of(&self, s: StateId) -> Option<usize> {
        self.index
            .get(s.index())
            .copied()
            .flatten()
            .map(|i| i as usize)
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.node_of(s).is_some()
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succ[node]
    }

    /// The assigned action of a node if it is a non-goal node with an applicable action.
    pub fn action(&self, node: usize) -> Option<ActionId> {
        self.action[node]
    }

    pub fn is_goal(&self, node: usize) -> bool {
        self.goal[node]
    }

    /// Reachable non-goal nodes whose action is undefined or inapplicable.
    pub fn dead_ends(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.goal[i] && self.action[i].is_none())
    }

    pub fn edges(&self) -> BTreeSet<(StateId, StateId)> {
        let mut edges = BTreeSet::new();
        for (i, out) in self.succ.iter().enumerate() {
            for &j in out {
                edges.insert((self.nodes[i], self.nodes[j]));
            }
        }
        edges
    }

    pub fn node_set(&self) -> BTreeSet<StateId> {
        self.nodes.iter().copied().collect()
    }

    /// Graphviz rendering, for debugging.
    pub fn to_dot(&self, model: &FondModel) -> String {
        let mut out = String::from("digraph policy {\n");
        for (i, &s) in self.nodes.iter().enumerate() {
            let shape = if self.goal[i] {
                "doublecircle"
            } else {
                "circle"
            };
            let action = self.action[i].map(|a| model.action_name(a)).unwrap_or("");
            out.push_str(&format!(
                "  n{i} [shape={shape}, label=\"{}\\n{}\"];\n",
                model.state_label(s).replace('"', "\\\""),
                action
            ));
        }
        for (i, out_edges) in self.succ.iter().enumerate() {
            for j in out_edges {
                out.push_str(&format!("  n{i} -> n{j};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Why a policy fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A reachable non-goal state with no assigned applicable action.
    DeadEnd(StateId),
    /// Recurrent states of a fair, goal-free infinite trajectory.
    Recurrent(Vec<StateId>),
    /// A reachable state that never terminates, with the fair states and the
    /// terminating rounds at the fixpoint.
    NonTerminating {
        state: StateId,
        fair: Vec<StateId>,
        rounds: Vec<Vec<StateId>>,
    },
}

impl Witness {
    pub fn describe(&self, model: &FondModel) -> String {
        let names = |v: &[StateId]| {
            v.iter()
                .map(|s| model.state_label(*s).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Witness::DeadEnd(s) => format!("dead end at `{}`", model.state_label(*s)),
            Witness::Recurrent(r) => format!("fair non-goal recurrent set {{{}}}", names(r)),
            Witness::NonTerminating { state, fair, .. } => format!(
                "state `{}` does not terminate (fair states: {{{}}})",
                model.state_label(*state),
                names(fair)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub solves: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn accept() -> Self {
        Verdict {
            solves: true,
            witness: None,
        }
    }

    pub fn reject(witness: Witness) -> Self {
        Verdict {
            solves: false,
            witness: Some(witness),
        }
    }
}
