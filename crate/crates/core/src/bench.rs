//! Generators for the benchmark families: the Figure 1 problem with its eight
//! constraint sets, the clear(x) QNP, qnp1/qnp2 and their f01/f11 variants.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::frontend::{
    ground, serialize_compact, serialize_explicit, serialize_qnp, CompactAction, CompactFond,
    ConstraintSpec, GroundError, Literal, Qnp, QnpAction, QnpCondition, QnpEffect,
};
use crate::model::{ActionId, FairnessAssumption, FondModel, FondPlusProblem, ModelParts, StateId};
use crate::translate::qnp_to_compact;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("figure1 variant must be in 1..=8, got {0}")]
    BadVariant(u8),
    #[error("family `{family}` needs n >= 2, got {n}")]
    BadSize { family: Family, n: usize },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Qnp1,
    Qnp2,
    F01Qnp1,
    F01Qnp2,
    F11Qnp1,
    F11Qnp2,
    Figure1,
    Clear,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Qnp1,
        Family::Qnp2,
        Family::F01Qnp1,
        Family::F01Qnp2,
        Family::F11Qnp1,
        Family::F11Qnp2,
        Family::Figure1,
        Family::Clear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Qnp1 => "qnp1",
            Family::Qnp2 => "qnp2",
            Family::F01Qnp1 => "f01_qnp1",
            Family::F01Qnp2 => "f01_qnp2",
            Family::F11Qnp1 => "f11_qnp1",
            Family::F11Qnp2 => "f11_qnp2",
            Family::Figure1 => "figure1",
            Family::Clear => "clear",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| BenchError::UnknownFamily(s.to_string()))
    }
}

/// The QNP a family is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Qnp1,
    Qnp2,
}

/// A family member; `n` is the variant number (1..=8) for `figure1` and is
/// ignored for `clear`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
}

/// A generated instance in the format it is most naturally written in.
#[derive(Clone, Debug)]
pub enum Instance {
    Explicit(FondPlusProblem),
    Compact(CompactFond),
    Qnp(Qnp),
}

impl Instance {
    pub fn to_text(&self) -> String {
        match self {
            Instance::Explicit(p) => serialize_explicit(p),
            Instance::Compact(c) => serialize_compact(c),
            Instance::Qnp(q) => serialize_qnp(q),
        }
    }

    /// The FOND+ problem the instance denotes: QNPs go through `T_D` with
    /// their per-variable assumptions.
    pub fn to_problem(&self) -> Result<FondPlusProblem, GroundError> {
        match self {
            Instance::Explicit(p) => Ok(p.clone()),
            Instance::Compact(c) => Ok(ground(c, &c.constraints)?.problem),
            Instance::Qnp(q) => {
                let (c, _) = qnp_to_compact(q);
                Ok(ground(&c, &c.constraints)?.problem)
            }
        }
    }
}

pub fn generate(spec: FamilySpec) -> Result<Instance, BenchError> {
    let FamilySpec { family, n } = spec;
    let parametric = !matches!(family, Family::Figure1 | Family::Clear);
    if parametric && n < 2 {
        return Err(BenchError::BadSize { family, n });
    }
    Ok(match family {
        Family::Qnp1 => Instance::Qnp(gen_qnp1(n)),
        Family::Qnp2 => Instance::Qnp(gen_qnp2(n)),
        Family::F01Qnp1 => Instance::Compact(f01_compact(Base::Qnp1, n)),
        Family::F01Qnp2 => Instance::Compact(f01_compact(Base::Qnp2, n)),
        Family::F11Qnp1 => Instance::Compact(f11_compact(Base::Qnp1, n)),
        Family::F11Qnp2 => Instance::Compact(f11_compact(Base::Qnp2, n)),
        Family::Figure1 => {
            let variant = u8::try_from(n).map_err(|_| BenchError::BadVariant(u8::MAX))?;
            Instance::Explicit(figure1(variant)?)
        }
        Family::Clear => Instance::Qnp(clear_qnp()),
    })
}

/// clear(x): `p` is "holding a block", `n` the number of blocks above x.
/// `a = <p, n>0; !p, Dec(n)>` puts the held block away, `b = <!p; p>` picks the top one.
pub fn clear_qnp() -> Qnp {
    Qnp {
        atoms: vec!["p".into()],
        vars: vec!["n".into()],
        init: vec![
            QnpCondition::Atom(Literal::neg(0)),
            QnpCondition::Positive(0),
        ],
        goal: vec![QnpCondition::Zero(0)],
        actions: vec![
            QnpAction {
                name: "a".into(),
                pre: vec![
                    QnpCondition::Atom(Literal::pos(0)),
                    QnpCondition::Positive(0),
                ],
                effects: vec![QnpEffect::Clear(0), QnpEffect::Dec(0)],
            },
            QnpAction {
                name: "b".into(),
                pre: vec![QnpCondition::Atom(Literal::neg(0))],
                effects: vec![QnpEffect::Set(0)],
            },
        ],
    }
}

fn gen_qnp(n: usize, nested: bool) -> Qnp {
    assert!(n >= 2, "qnp families need n >= 2");
    let p = QnpCondition::Atom(Literal::pos(0));
    let mut actions = vec![QnpAction {
        name: "b".into(),
        pre: vec![QnpCondition::Atom(Literal::neg(0))],
        effects: vec![QnpEffect::Set(0)],
    }];
    for i in 0..n {
        // every decrement carries `x_i > 0` as a precondition
        let mut pre = vec![p];
        let mut effects = vec![QnpEffect::Clear(0)];
        if i > 0 {
            pre.push(QnpCondition::Zero(i - 1));
            if nested {
                effects.push(QnpEffect::Inc(i - 1));
            }
        }
        pre.push(QnpCondition::Positive(i));
        effects.push(QnpEffect::Dec(i));
        actions.push(QnpAction {
            name: format!("a{}", i + 1),
            pre,
            effects,
        });
    }
    let mut init = vec![QnpCondition::Atom(Literal::neg(0))];
    init.extend((0..n).map(QnpCondition::Positive));
    Qnp {
        atoms: vec!["p".into()],
        vars: (1..=n).map(|i| format!("x{i}")).collect(),
        init,
        goal: vec![QnpCondition::Zero(n - 1)],
        actions,
    }
}

/// `n` sequential loops: `b = <!p; p>`, `a_1 = <p; !p, Dec(x_1)>`,
/// `a_i = <p, x_{i-1}=0; !p, Dec(x_i)>`.
pub fn gen_qnp1(n: usize) -> Qnp {
    gen_qnp(n, false)
}

/// `n` nested loops: as qnp1 but `a_i` also increments `x_{i-1}`.
pub fn gen_qnp2(n: usize) -> Qnp {
    gen_qnp(n, true)
}

fn base_qnp(base: Base, n: usize) -> Qnp {
    match base {
        Base::Qnp1 => gen_qnp1(n),
        Base::Qnp2 => gen_qnp2(n),
    }
}

/// `T_D` of the base QNP with `b` replaced by `b' = <!p; oneof(p, !p)>`. The
/// per-variable assumptions are kept and `b'` appears in none of them.
pub fn f01_compact(base: Base, n: usize) -> CompactFond {
    let (mut c, _) = qnp_to_compact(&base_qnp(base, n));
    let b = c.action_index("b").expect("base family has action b");
    c.actions[b] = CompactAction {
        name: "b'".into(),
        pre: vec![Literal::neg(0)],
        effects: vec![vec![Literal::pos(0)], vec![Literal::neg(0)]],
    };
    c
}

/// f01 plus atoms `q`, `r` (initially false), actions
/// `c = <!q; r, oneof(q, !q)>` and `d = <r; q, !r>`, every `a_i` requiring `q`
/// and deleting it, and the assumption `{b'}/{}`. Only the `a_i` change;
/// `b'`, `c` and `d` are left as stated.
pub fn f11_compact(base: Base, n: usize) -> CompactFond {
    let mut c = f01_compact(base, n);
    let q = c.atoms.len();
    let r = q + 1;
    c.atoms.push("q".into());
    c.atoms.push("r".into());
    for action in c.actions.iter_mut().filter(|a| a.name.starts_with('a')) {
        action.pre.push(Literal::pos(q));
        for e in &mut action.effects {
            e.push(Literal::neg(q));
        }
    }
    c.actions.push(CompactAction {
        name: "c".into(),
        pre: vec![Literal::neg(q)],
        effects: vec![
            vec![Literal::pos(r), Literal::pos(q)],
            vec![Literal::pos(r), Literal::neg(q)],
        ],
    });
    c.actions.push(CompactAction {
        name: "d".into(),
        pre: vec![Literal::pos(r)],
        effects: vec![vec![Literal::pos(q), Literal::neg(r)]],
    });
    c.constraints.push(ConstraintSpec::new(["b'"], []));
    c
}

pub fn gen_f01(base: Base, n: usize) -> Result<FondPlusProblem, GroundError> {
    let c = f01_compact(base, n);
    Ok(ground(&c, &c.constraints)?.problem)
}

pub fn gen_f11(base: Base, n: usize) -> Result<FondPlusProblem, GroundError> {
    let c = f11_compact(base, n);
    Ok(ground(&c, &c.constraints)?.problem)
}

/// The four-state model: `a` in `s0` leads to `s1` or `s2`; `b` in `s1`/`s2`
/// leads to `s0` or `g`.
pub fn figure1_model() -> FondModel {
    FondModel::new(ModelParts {
        state_labels: ["s0", "s1", "s2", "g"].map(String::from).to_vec(),
        action_names: vec!["a".into(), "b".into()],
        initial: StateId(0),
        goals: vec![StateId(3)],
        transitions: vec![
            (StateId(0), ActionId(0), vec![StateId(1), StateId(2)]),
            (StateId(1), ActionId(1), vec![StateId(0), StateId(3)]),
            (StateId(2), ActionId(1), vec![StateId(0), StateId(3)]),
        ],
    })
    .expect("figure 1 model is valid")
}

/// Figure 1 with constraint set `C_variant`. Constraints are in singleton-A
/// form, so `C2 = {a, b}` becomes `{a}/{}, {b}/{}`.
pub fn figure1(variant: u8) -> Result<FondPlusProblem, BenchError> {
    const A: u32 = 0;
    const B: u32 = 1;
    let pairs: &[(u32, Option<u32>)] = match variant {
        1 => &[],
        2 => &[(A, None), (B, None)],
        3 => &[(A, None)],
        4 => &[(B, None)],
        5 => &[(A, Some(B))],
        6 => &[(A, None), (B, Some(A))],
        7 => &[(B, None), (A, Some(B))],
        8 => &[(A, Some(B)), (B, Some(A))],
        _ => return Err(BenchError::BadVariant(variant)),
    };
    let constraints = pairs
        .iter()
        .map(|&(a, b)| FairnessAssumption {
            a_set: BTreeSet::from([ActionId(a)]),
            b_set: b.map(ActionId).into_iter().collect(),
        })
        .collect();
    Ok(FondPlusProblem::new(figure1_model(), constraints).expect("figure 1 constraints are valid"))
}

/// Whether the fixed policy `s0 -> a, s1 -> b, s2 -> b` solves `C_variant`.
pub fn figure1_expected(variant: u8) -> Option<bool> {
    [false, true, false, true, false, false, true, false]
        .get(usize::from(variant).checked_sub(1)?)
        .copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_compact, parse_explicit, parse_qnp};

    #[test]
    fn qnp1_shape() {
        let q = gen_qnp1(2);
        assert_eq!(q.actions.len(), 3);
        q.validate().unwrap();
        assert!(gen_qnp2(2).actions[2].increments(0));
    }

    #[test]
    fn qnp1_ground_sizes() {
        for n in 2..=10 {
            let c = qnp_to_compact(&gen_qnp1(n)).0;
            assert_eq!(
                ground(&c, &[]).unwrap().problem.model().num_states(),
                2 * n + 2
            );
        }
    }

    #[test]
    fn f01_and_f11_structure() {
        let c = f01_compact(Base::Qnp1, 3);
        let b = &c.actions[c.action_index("b'").unwrap()];
        assert_eq!(b.effects.len(), 2);
        let base = qnp_to_compact(&gen_qnp1(3)).0;
        assert_eq!(c.constraints, base.constraints);

        let c = f11_compact(Base::Qnp2, 3);
        assert!(c
            .constraints
            .iter()
            .any(|s| s.a == ["b'"] && s.b.is_empty()));
        assert!(!c
            .constraints
            .iter()
            .any(|s| s.a.contains(&"c".to_string()) || s.b.contains(&"c".to_string())));
        assert_eq!(c.actions[c.action_index("d").unwrap()].effects.len(), 1);
        gen_f11(Base::Qnp2, 3).unwrap();
    }

    #[test]
    fn figure1_variants() {
        assert!(figure1(1).unwrap().constraints().is_empty());
        assert_eq!(figure1(2).unwrap().constraints().len(), 2);
        assert_eq!(
            figure1(8).unwrap().constraints(),
            &[
                FairnessAssumption::new([ActionId(0)], [ActionId(1)]),
                FairnessAssumption::new([ActionId(1)], [ActionId(0)])
            ]
        );
        assert_eq!(figure1(0), Err(BenchError::BadVariant(0)));
        assert_eq!(figure1(9), Err(BenchError::BadVariant(9)));
    }

    #[test]
    fn generated_files_round_trip() {
        for family in Family::ALL {
            let spec = FamilySpec { family, n: 3 };
            let inst = generate(spec).unwrap();
            let text = inst.to_text();
            match &inst {
                Instance::Explicit(p) => assert_eq!(&parse_explicit(&text).unwrap(), p),
                Instance::Compact(c) => assert_eq!(&parse_compact(&text).unwrap(), c),
                Instance::Qnp(q) => assert_eq!(&parse_qnp(&text).unwrap(), q),
            }
            assert_eq!(generate(spec).unwrap().to_text(), text);
        }
    }

    #[test]
    fn bad_sizes_rejected() {
        assert!(generate(FamilySpec {
            family: Family::Qnp1,
            n: 1
        })
        .is_err());
        assert!("nope".parse::<Family>().is_err());
        assert_eq!("f11_qnp2".parse::<Family>().unwrap(), Family::F11Qnp2);
    }
}
