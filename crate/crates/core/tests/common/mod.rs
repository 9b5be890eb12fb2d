//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use fondplus::frontend::{Literal, Qnp, QnpAction, QnpCondition, QnpEffect};
use fondplus::{
    ActionId, FairnessAssumption, FondModel, FondPlusProblem, ModelParts, Policy, StateId,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random model with `n` states and `k` actions. Each action is applicable
/// in a state with probability `density` and has one to `max_branch` targets.
pub fn random_model<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    density: f64,
    max_branch: usize,
) -> FondModel {
    let goals_n = rng.gen_range(1..=n.div_ceil(3));
    let mut all: Vec<u32> = (0..n as u32).collect();
    all.shuffle(rng);
    let goals: Vec<StateId> = all[..goals_n].iter().map(|&i| StateId(i)).collect();
    let mut transitions = Vec::new();
    for s in 0..n as u32 {
        for a in 0..k as u32 {
            if rng.gen_bool(density) {
                let b = rng.gen_range(1..=max_branch);
                let mut t: Vec<StateId> = (0..b)
                    .map(|_| StateId(rng.gen_range(0..n as u32)))
                    .collect();
                t.sort();
                t.dedup();
                transitions.push((StateId(s), ActionId(a), t));
            }
        }
    }
    FondModel::new(ModelParts {
        state_labels: (0..n).map(|i| format!("s{i}")).collect(),
        action_names: (0..k).map(|i| format!("a{i}")).collect(),
        initial: StateId(rng.gen_range(0..n as u32)),
        goals,
        transitions,
    })
    .expect("generated model is valid")
}

/// Up to `max_constraints` random A/B constraints over non-deterministic
/// actions (A) and arbitrary other actions (B).
pub fn random_constraints<R: Rng>(
    rng: &mut R,
    model: &FondModel,
    max_constraints: usize,
) -> Vec<FairnessAssumption> {
    let nondet: Vec<ActionId> = model.nondeterministic_actions().collect();
    if nondet.is_empty() {
        return Vec::new();
    }
    let count = rng.gen_range(0..=max_constraints);
    (0..count)
        .map(|_| {
            let a_set: Vec<ActionId> = nondet
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let a_set = if a_set.is_empty() {
                vec![*nondet.choose(rng).unwrap()]
            } else {
                a_set
            };
            let b_set: Vec<ActionId> = model
                .actions()
                .filter(|a| !a_set.contains(a) && rng.gen_bool(0.4))
                .collect();
            FairnessAssumption::new(a_set, b_set)
        })
        .collect()
}

pub fn random_problem<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    max_constraints: usize,
) -> FondPlusProblem {
    let model = random_model(rng, n, k, 0.6, 3);
    let constraints = random_constraints(rng, &model, max_constraints);
    FondPlusProblem::new(model, constraints).expect("generated problem is valid")
}

/// Every total assignment of applicable actions to non-goal states that have
/// one, normalized to the reachable part and deduplicated.
pub fn all_policies(model: &FondModel) -> Vec<Policy> {
    let states: Vec<StateId> = model
        .states()
        .filter(|&s| !model.is_goal(s) && !model.applicable(s).is_empty())
        .collect();
    let choices: Vec<Vec<ActionId>> = states
        .iter()
        .map(|&s| model.applicable(s).iter().map(|(a, _)| *a).collect())
        .collect();
    let total: usize = choices.iter().map(Vec::len).product();
    let mut out: Vec<Policy> = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut pi = Policy::new();
        for (s, c) in states.iter().zip(&choices) {
            pi.assign(*s, c[k % c.len()]);
            k /= c.len();
        }
        out.push(pi.normalized(model));
    }
    out.sort_by(|a, b| a.iter().cmp(b.iter()));
    out.dedup();
    out
}

/// A random QNP with up to two atoms, two variables and three actions. It may
/// fail validation; callers filter.
pub fn random_qnp<R: Rng>(r: &mut R) -> Qnp {
    let n_atoms = r.gen_range(0..=2);
    let n_vars = r.gen_range(1..=2);
    let n_actions = r.gen_range(1..=3);
    let lit = |r: &mut R, atom: usize| {
        QnpCondition::Atom(Literal {
            atom,
            positive: r.gen_bool(0.5),
        })
    };
    let mut actions = Vec::new();
    for i in 0..n_actions {
        let mut pre = Vec::new();
        let mut effects = Vec::new();
        for a in 0..n_atoms {
            if r.gen_bool(0.4) {
                pre.push(lit(r, a));
            }
            match r.gen_range(0..4) {
                0 => effects.push(QnpEffect::Set(a)),
                1 => effects.push(QnpEffect::Clear(a)),
                _ => {}
            }
        }
        for v in 0..n_vars {
            match r.gen_range(0..5) {
                0 => {
                    pre.push(QnpCondition::Positive(v));
                    effects.push(QnpEffect::Dec(v));
                }
                1 => effects.push(QnpEffect::Inc(v)),
                2 => pre.push(QnpCondition::Zero(v)),
                _ => {}
            }
        }
        actions.push(QnpAction {
            name: format!("o{i}"),
            pre,
            effects,
        });
    }
    let mut init: Vec<QnpCondition> = (0..n_atoms)
        .filter(|_| r.gen_bool(0.5))
        .map(|a| {
            QnpCondition::Atom(Literal {
                atom: a,
                positive: true,
            })
        })
        .collect();
    for v in 0..n_vars {
        init.push(if r.gen_bool(0.8) {
            QnpCondition::Positive(v)
        } else {
            QnpCondition::Zero(v)
        });
    }
    let mut goal = vec![QnpCondition::Zero(r.gen_range(0..n_vars))];
    if n_atoms > 0 && r.gen_bool(0.3) {
        goal.push(lit(r, 0));
    }
    Qnp {
        atoms: (0..n_atoms).map(|i| format!("q{i}")).collect(),
        vars: (0..n_vars).map(|i| format!("x{i}")).collect(),
        init,
        goal,
        actions,
    }
}
