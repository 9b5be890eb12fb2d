//! Forward-reachability grounding of compact descriptions into explicit models.

use std::collections::{BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use super::compact::{CompactFond, ConstraintSpec, Literal};
use crate::model::{
    ActionId, FairnessAssumption, FondModel, FondPlusProblem, ModelError, ModelParts, StateId,
};

pub const DEFAULT_MAX_STATES: usize = 200_000;

#[derive(Debug, Error)]
pub enum GroundError {
    #[error("more than {cap} reachable states")]
    TooManyStates { cap: usize },
    /// No reachable state satisfies the goal; such a problem has no solution.
    #[error("no reachable state satisfies the goal")]
    NoGoal,
    #[error("constraint names unknown action `{0}`")]
    UnknownAction(String),
    #[error("invalid compact problem: {0}")]
    Invalid(#[from] super::compact::CompactError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug)]
pub struct GroundingResult {
    pub problem: FondPlusProblem,
    /// True atoms of every state, indexed by state id.
    pub state_atoms: Vec<BTreeSet<usize>>,
    /// Compact action index behind every ground action (the identity, since
    /// every compact action yields exactly one ground action).
    pub action_origin: Vec<usize>,
}

pub fn ground(
    compact: &CompactFond,
    constraints: &[ConstraintSpec],
) -> Result<GroundingResult, GroundError> {
    ground_with_cap(compact, constraints, DEFAULT_MAX_STATES)
}

fn holds(state: &FixedBitSet, lits: &[Literal]) -> bool {
    lits.iter().all(|l| state.contains(l.atom) == l.positive)
}

fn apply(state: &FixedBitSet, effect: &[Literal]) -> FixedBitSet {
    let mut next = state.clone();
    for l in effect {
        next.set(l.atom, l.positive);
    }
    next
}

/// Renders a state as `{p;q}` over its true atoms, in atom order.
pub(crate) fn state_label(compact: &CompactFond, state: &FixedBitSet) -> String {
    let names: Vec<&str> = state.ones().map(|a| compact.atoms[a].as_str()).collect();
    format!("{{{}}}", names.join(";"))
}

/// Grounds every state reachable from the initial state under all applicable
/// actions. States are numbered in first-visit BFS order with actions tried in
/// declaration order and alternatives in listed order. Goal states are
/// expanded like any other state.
pub fn ground_with_cap(
    compact: &CompactFond,
    constraints: &[ConstraintSpec],
    cap: usize,
) -> Result<GroundingResult, GroundError> {
    compact.validate()?;
    let n_atoms = compact.atoms.len();
    let mut init = FixedBitSet::with_capacity(n_atoms);
    for &a in &compact.init {
        init.insert(a);
    }
    let mut index: HashMap<FixedBitSet, StateId> = HashMap::new();
    let mut states = vec![init.clone()];
    index.insert(init, StateId(0));
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([StateId(0)]);
    while let Some(s) = queue.pop_front() {
        let current = states[s.index()].clone();
        for (ai, action) in compact.actions.iter().enumerate() {
            if !holds(&current, &action.pre) {
                continue;
            }
            let mut succ = Vec::with_capacity(action.effects.len());
            for effect in &action.effects {
                let next = apply(&current, effect);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            return Err(GroundError::TooManyStates { cap });
                        }
                        let id = StateId(states.len() as u32);
                        index.insert(next.clone(), id);
                        states.push(next);
                        queue.push_back(id);
                        id
                    }
                };
                succ.push(id);
            }
            transitions.push((s, ActionId(ai as u32), succ));
        }
    }
    let goals: Vec<StateId> = states
        .iter()
        .enumerate()
        .filter(|(_, st)| holds(st, &compact.goal))
        .map(|(i, _)| StateId(i as u32))
        .collect();
    if goals.is_empty() {
        return Err(GroundError::NoGoal);
    }
    let model = FondModel::new(ModelParts {
        state_labels: states.iter().map(|st| state_label(compact, st)).collect(),
        action_names: compact.actions.iter().map(|a| a.name.clone()).collect(),
        initial: StateId(0),
        goals,
        transitions,
    })?;
    let resolve = |names: &[String]| {
        names
            .iter()
            .map(|n| {
                compact
                    .action_index(n)
                    .map(|i| ActionId(i as u32))
                    .ok_or_else(|| GroundError::UnknownAction(n.clone()))
            })
            .collect::<Result<BTreeSet<_>, _>>()
    };
    // actions never applicable in a reachable state never occur, so listing
    // them in an A set is vacuous
    let occurring: BTreeSet<ActionId> = model
        .states()
        .flat_map(|s| model.applicable(s).iter().map(|(a, _)| *a))
        .collect();
    let mut resolved = Vec::new();
    for spec in constraints {
        let mut a_set = resolve(&spec.a)?;
        a_set.retain(|a| occurring.contains(a));
        if a_set.is_empty() {
            continue;
        }
        resolved.push(FairnessAssumption {
            a_set,
            b_set: resolve(&spec.b)?,
        });
    }
    let problem = FondPlusProblem::new(model, resolved)?;
    Ok(GroundingResult {
        problem,
        state_atoms: states.iter().map(|st| st.ones().collect()).collect(),
        action_origin: (0..compact.actions.len()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_compact, CompactAction};

    #[test]
    fn init_satisfying_goal_is_single_state() {
        let c = CompactFond {
            atoms: vec!["p".into()],
            init: BTreeSet::from([0]),
            goal: vec![Literal::pos(0)],
            actions: vec![],
            ..Default::default()
        };
        let g = ground(&c, &[]).unwrap();
        let m = g.problem.model();
        assert_eq!(m.num_states(), 1);
        assert!(m.is_goal(m.initial()));
        assert_eq!(m.state_label(StateId(0)), "{p}");
    }

    #[test]
    fn cap_is_enforced() {
        let c = CompactFond {
            atoms: vec!["p".into(), "q".into()],
            init: BTreeSet::new(),
            goal: vec![Literal::pos(0), Literal::pos(1)],
            actions: vec![CompactAction {
                name: "x".into(),
                pre: vec![],
                effects: vec![
                    vec![Literal::pos(0)],
                    vec![Literal::pos(1)],
                    vec![Literal::pos(0), Literal::pos(1)],
                ],
            }],
            ..Default::default()
        };
        assert!(matches!(
            ground_with_cap(&c, &[], 2),
            Err(GroundError::TooManyStates { cap: 2 })
        ));
        assert_eq!(
            ground_with_cap(&c, &[], 4)
                .unwrap()
                .problem
                .model()
                .num_states(),
            4
        );
    }

    #[test]
    fn unreachable_goal_reported() {
        let c = CompactFond {
            atoms: vec!["p".into()],
            goal: vec![Literal::pos(0)],
            ..Default::default()
        };
        assert!(matches!(ground(&c, &[]), Err(GroundError::NoGoal)));
    }

    #[test]
    fn transitions_respect_preconditions_and_effects() {
        let c = parse_compact(
            "format: fondplus-v1\nkind: compact\natoms: p q\ninit:\ngoal: p, q\n\
             action a: pre {!p} eff oneof({p} | {q})\naction b: pre {q} eff {p}\n",
        )
        .unwrap();
        let g = ground(&c, &[ConstraintSpec::new(["a"], ["b"])]).unwrap();
        let m = g.problem.model();
        for s in m.states() {
            for (a, succ) in m.applicable(s) {
                let action = &c.actions[g.action_origin[a.index()]];
                let label = &g.state_atoms[s.index()];
                assert!(action
                    .pre
                    .iter()
                    .all(|l| label.contains(&l.atom) == l.positive));
                for t in succ {
                    let next = &g.state_atoms[t.index()];
                    assert!(action.effects.iter().any(|e| {
                        let mut expect = label.clone();
                        for l in e {
                            if l.positive {
                                expect.insert(l.atom);
                            } else {
                                expect.remove(&l.atom);
                            }
                        }
                        &expect == next
                    }));
                }
            }
        }
        assert_eq!(g.problem.constraints().len(), 1);
    }
}
