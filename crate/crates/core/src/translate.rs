//! Reductions into FOND+: strong, strong-cyclic, Dual FOND and QNP planning,
//! plus the direct QNP to FOND translation `T_D`.

use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::{
    ground_with_cap, CompactAction, CompactFond, ConstraintSpec, GroundError, GroundingResult,
    Literal, Qnp, QnpCondition, QnpEffect, DEFAULT_MAX_STATES,
};
use crate::model::{ActionId, FairnessAssumption, FondModel, FondPlusProblem};

/// Which actions decrement and increment each numeric variable. Every
/// variable of the source QNP has an entry in both maps, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QnpAnnotation {
    pub dec_actions: BTreeMap<String, BTreeSet<ActionId>>,
    pub inc_actions: BTreeMap<String, BTreeSet<ActionId>>,
}

impl QnpAnnotation {
    pub fn from_qnp(q: &Qnp) -> Self {
        let mut ann = QnpAnnotation::default();
        for (v, name) in q.vars.iter().enumerate() {
            let collect = |pred: &dyn Fn(usize) -> bool| {
                (0..q.actions.len())
                    .filter(|&i| pred(i))
                    .map(|i| ActionId(i as u32))
                    .collect::<BTreeSet<_>>()
            };
            ann.dec_actions
                .insert(name.clone(), collect(&|i| q.actions[i].decrements(v)));
            ann.inc_actions
                .insert(name.clone(), collect(&|i| q.actions[i].increments(v)));
        }
        ann
    }

    /// Per variable `A = {decrementers} / B = {incrementers}`, skipping
    /// variables that nothing decrements.
    pub fn constraint_specs(&self, action_names: &[String]) -> Vec<ConstraintSpec> {
        let names = |set: &BTreeSet<ActionId>| -> Vec<String> {
            set.iter()
                .map(|a| action_names[a.index()].clone())
                .collect()
        };
        self.dec_actions
            .iter()
            .filter(|(_, dec)| !dec.is_empty())
            .map(|(var, dec)| ConstraintSpec {
                a: names(dec),
                b: names(&self.inc_actions[var]),
            })
            .collect()
    }
}

/// Fair / adversarial label of a non-deterministic action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DualLabel {
    Fair,
    Adversarial,
}

/// A FOND model whose non-deterministic actions are labeled fair or adversarial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFond {
    pub model: FondModel,
    pub labels: BTreeMap<ActionId, DualLabel>,
}

impl DualFond {
    /// Labels every non-deterministic action in `fair` as fair and every other
    /// one as adversarial. Deterministic actions stay unlabeled.
    pub fn from_fair_set(model: FondModel, fair: &BTreeSet<ActionId>) -> Self {
        let labels = model
            .nondeterministic_actions()
            .map(|a| {
                let l = if fair.contains(&a) {
                    DualLabel::Fair
                } else {
                    DualLabel::Adversarial
                };
                (a, l)
            })
            .collect();
        DualFond { model, labels }
    }

    pub fn is_fair(&self, a: ActionId) -> bool {
        self.labels.get(&a) == Some(&DualLabel::Fair)
    }

    pub fn fair_actions(&self) -> BTreeSet<ActionId> {
        self.labels
            .iter()
            .filter(|(_, l)| **l == DualLabel::Fair)
            .map(|(a, _)| *a)
            .collect()
    }
}

/// Name of the boolean standing for `X = 0`; primes are appended on clashes.
fn zero_atom(var: &str, taken: &BTreeSet<String>) -> String {
    let mut name = format!("p_{var}");
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// `T_D`: each variable `X` becomes an atom `p_X` meaning `X = 0`. `X=0` maps
/// to `p_X`, `X>0` to `!p_X`, `Inc(X)` to `!p_X` and `Dec(X)` to
/// `oneof(p_X, !p_X)`. Actions with several decrements get one alternative per
/// combination of outcomes. Action indices are preserved.
pub fn t_direct(q: &Qnp) -> (CompactFond, QnpAnnotation) {
    let mut atoms = q.atoms.clone();
    let mut taken: BTreeSet<String> = q.atoms.iter().chain(&q.vars).cloned().collect();
    let mut var_atom = Vec::with_capacity(q.vars.len());
    for v in &q.vars {
        let name = zero_atom(v, &taken);
        taken.insert(name.clone());
        var_atom.push(atoms.len());
        atoms.push(name);
    }
    let lit = |c: &QnpCondition| match *c {
        QnpCondition::Atom(l) => l,
        QnpCondition::Zero(v) => Literal::pos(var_atom[v]),
        QnpCondition::Positive(v) => Literal::neg(var_atom[v]),
    };
    let init = q
        .init
        .iter()
        .map(lit)
        .filter(|l| l.positive)
        .map(|l| l.atom)
        .collect();
    let goal = q.goal.iter().map(lit).collect();
    let actions = q
        .actions
        .iter()
        .map(|a| {
            let mut base = Vec::new();
            let mut decs = Vec::new();
            for e in &a.effects {
                match *e {
                    QnpEffect::Set(p) => base.push(Literal::pos(p)),
                    QnpEffect::Clear(p) => base.push(Literal::neg(p)),
                    QnpEffect::Inc(v) => base.push(Literal::neg(var_atom[v])),
                    QnpEffect::Dec(v) => decs.push(var_atom[v]),
                }
            }
            let mut effects = vec![base];
            for atom in decs {
                effects = effects
                    .into_iter()
                    .flat_map(|e| {
                        [true, false].map(|positive| {
                            let mut e = e.clone();
                            e.push(Literal { atom, positive });
                            e
                        })
                    })
                    .collect();
            }
            CompactAction {
                name: a.name.clone(),
                pre: a.pre.iter().map(lit).collect(),
                effects,
            }
        })
        .collect();
    let ann = QnpAnnotation::from_qnp(q);
    let compact = CompactFond {
        atoms,
        init,
        goal,
        actions,
        constraints: Vec::new(),
        fair: None,
    };
    (compact, ann)
}

/// `T_D(Q)` with the per-variable fairness assumptions attached by action name.
pub fn qnp_to_compact(q: &Qnp) -> (CompactFond, QnpAnnotation) {
    let (mut compact, ann) = t_direct(q);
    let names: Vec<String> = compact.actions.iter().map(|a| a.name.clone()).collect();
    compact.constraints = ann.constraint_specs(&names);
    (compact, ann)
}

/// The grounded FOND+ problem for a QNP together with its annotation.
#[derive(Clone, Debug)]
pub struct QnpGrounding {
    pub grounding: GroundingResult,
    pub annotation: QnpAnnotation,
}

impl QnpGrounding {
    pub fn problem(&self) -> &FondPlusProblem {
        &self.grounding.problem
    }
}

/// Grounds `T_D(Q)` and adds, per variable `X`, the assumption `A/B` with `A`
/// the actions decrementing `X` and `B` those incrementing it.
pub fn qnp_to_fondplus(q: &Qnp) -> Result<QnpGrounding, GroundError> {
    qnp_to_fondplus_with_cap(q, DEFAULT_MAX_STATES)
}

pub fn qnp_to_fondplus_with_cap(q: &Qnp, cap: usize) -> Result<QnpGrounding, GroundError> {
    let (compact, annotation) = qnp_to_compact(q);
    let grounding = ground_with_cap(&compact, &compact.constraints, cap)?;
    Ok(QnpGrounding {
        grounding,
        annotation,
    })
}

/// Strong planning: no fairness at all.
pub fn strong_to_fondplus(model: &FondModel) -> FondPlusProblem {
    FondPlusProblem::new(model.clone(), Vec::new()).expect("no constraints to violate")
}

/// Strong-cyclic planning: every non-deterministic action is fair, as a
/// single assumption `A/{}`.
pub fn strong_cyclic_to_fondplus(model: &FondModel) -> FondPlusProblem {
    let a_set: BTreeSet<ActionId> = model.nondeterministic_actions().collect();
    let constraints = if a_set.is_empty() {
        Vec::new()
    } else {
        vec![FairnessAssumption {
            a_set,
            b_set: BTreeSet::new(),
        }]
    };
    FondPlusProblem::new(model.clone(), constraints)
        .expect("A holds non-deterministic actions only")
}

/// Dual FOND: the fair actions form a single assumption `A/{}`.
pub fn dual_to_fondplus(d: &DualFond) -> FondPlusProblem {
    let a_set = d.fair_actions();
    let constraints = if a_set.is_empty() {
        Vec::new()
    } else {
        vec![FairnessAssumption {
            a_set,
            b_set: BTreeSet::new(),
        }]
    };
    FondPlusProblem::new(d.model.clone(), constraints)
        .expect("fair labels are on non-deterministic actions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{clear_qnp, figure1, gen_qnp1, gen_qnp2};
    use crate::model::tests::figure1_model;

    #[test]
    fn clear_translation() {
        let (c, ann) = t_direct(&clear_qnp());
        assert_eq!(c.atoms, vec!["p", "p_n"]);
        let a = &c.actions[0];
        assert_eq!(a.pre, vec![Literal::pos(0), Literal::neg(1)]);
        assert_eq!(
            a.effects,
            vec![
                vec![Literal::neg(0), Literal::pos(1)],
                vec![Literal::neg(0), Literal::neg(1)]
            ]
        );
        assert_eq!(ann.dec_actions["n"], BTreeSet::from([ActionId(0)]));
        assert!(ann.inc_actions["n"].is_empty());
        let g = qnp_to_fondplus(&clear_qnp()).unwrap();
        assert_eq!(
            g.problem().constraints(),
            &[FairnessAssumption::new([ActionId(0)], [])]
        );
    }

    #[test]
    fn no_variables_is_identity_on_actions() {
        let mut q = clear_qnp();
        q.vars.clear();
        q.init.retain(|c| matches!(c, QnpCondition::Atom(_)));
        q.goal = vec![QnpCondition::Atom(Literal::pos(0))];
        q.actions[0].pre.truncate(1);
        q.actions[0].effects.truncate(1);
        let (c, ann) = t_direct(&q);
        assert_eq!(c.atoms, q.atoms);
        assert!(c.actions.iter().all(|a| a.effects.len() == 1));
        assert!(ann.dec_actions.is_empty());
    }

    #[test]
    fn inc_only_variable_has_no_oneof() {
        let mut q = clear_qnp();
        q.actions[0].effects = vec![QnpEffect::Clear(0), QnpEffect::Inc(0)];
        let (c, _) = t_direct(&q);
        assert!(c.actions.iter().all(|a| a.effects.len() == 1));
        assert_eq!(
            c.actions[0].effects[0],
            vec![Literal::neg(0), Literal::neg(1)]
        );
    }

    #[test]
    fn qnp1_constraints_have_empty_b() {
        for n in 2..=5 {
            let g = qnp_to_fondplus(&gen_qnp1(n)).unwrap();
            let cs = g.problem().constraints();
            assert_eq!(cs.len(), n);
            for (i, c) in cs.iter().enumerate() {
                assert!(c.b_set.is_empty());
                assert_eq!(
                    g.problem().model().action_name(*c.a_set.first().unwrap()),
                    format!("a{}", i + 1)
                );
            }
        }
    }

    #[test]
    fn qnp2_constraints_chain() {
        let n = 4;
        let g = qnp_to_fondplus(&gen_qnp2(n)).unwrap();
        let m = g.problem().model();
        let rendered: Vec<(Vec<&str>, Vec<&str>)> = g
            .problem()
            .constraints()
            .iter()
            .map(|c| {
                (
                    c.a_set.iter().map(|a| m.action_name(*a)).collect(),
                    c.b_set.iter().map(|a| m.action_name(*a)).collect(),
                )
            })
            .collect();
        assert_eq!(
            rendered,
            vec![
                (vec!["a1"], vec!["a2"]),
                (vec!["a2"], vec!["a3"]),
                (vec!["a3"], vec!["a4"]),
                (vec!["a4"], vec![]),
            ]
        );
    }

    #[test]
    fn strong_and_strong_cyclic_match_figure1_variants() {
        let m = figure1_model();
        assert_eq!(
            strong_to_fondplus(&m).constraints(),
            figure1(1).unwrap().constraints()
        );
        let sc = strong_cyclic_to_fondplus(&m);
        assert_eq!(
            sc.constraints(),
            &[FairnessAssumption::new([ActionId(0), ActionId(1)], [])]
        );
        assert_eq!(strong_to_fondplus(&m).model(), &m);
    }

    #[test]
    fn dual_labelings() {
        let m = figure1_model();
        let d = DualFond::from_fair_set(m.clone(), &BTreeSet::from([ActionId(0)]));
        assert_eq!(dual_to_fondplus(&d), figure1(3).unwrap());
        let all = DualFond::from_fair_set(m.clone(), &BTreeSet::from([ActionId(0), ActionId(1)]));
        assert_eq!(dual_to_fondplus(&all), strong_cyclic_to_fondplus(&m));
        let none = DualFond::from_fair_set(m.clone(), &BTreeSet::new());
        assert_eq!(dual_to_fondplus(&none), strong_to_fondplus(&m));
    }
}
