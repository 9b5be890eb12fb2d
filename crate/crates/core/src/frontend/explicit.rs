//! Explicit FOND+ format: enumerated states, actions, transitions and constraints.

use std::collections::{BTreeSet, HashMap};

use super::syntax::{
    constraint_line, entries, expect_header, identifier, render_constraint, section, section_items,
    FORMAT_HEADER,
};
use super::ParseError;
use crate::model::{ActionId, FairnessAssumption, FondModel, FondPlusProblem, ModelParts, StateId};
use crate::translate::DualFond;

const SECTIONS: &[&str] = &[
    "states",
    "initial",
    "goals",
    "actions",
    "transitions",
    "constraints",
    "fair",
];

/// An explicit document: the problem plus the optional `fair:` action list
/// used by Dual FOND inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitDocument {
    pub problem: FondPlusProblem,
    pub fair: Option<BTreeSet<ActionId>>,
}

pub fn parse_explicit(text: &str) -> Result<FondPlusProblem, ParseError> {
    parse_explicit_document(text).map(|d| d.problem)
}

/// Parses an explicit document whose `fair:` section labels actions for Dual
/// FOND semantics; unlisted actions are adversarial.
pub fn parse_explicit_dual(text: &str) -> Result<DualFond, ParseError> {
    let doc = parse_explicit_document(text)?;
    let fair = doc.fair.unwrap_or_default();
    let (model, _) = doc.problem.into_parts();
    Ok(DualFond::from_fair_set(model, &fair))
}

pub fn parse_explicit_document(text: &str) -> Result<ExplicitDocument, ParseError> {
    let lines = expect_header(text, "explicit")?;
    let entries = entries(lines, SECTIONS)?;
    if entries
        .iter()
        .any(|e| matches!(e, super::syntax::Entry::Action(_)))
    {
        let super::syntax::Entry::Action(l) = entries
            .iter()
            .find(|e| matches!(e, super::syntax::Entry::Action(_)))
            .unwrap()
        else {
            unreachable!()
        };
        return Err(ParseError::syntax(
            l.number,
            "`action` lines are not allowed in explicit files",
        ));
    }
    let required = |name: &str| {
        section(&entries, name)
            .ok_or_else(|| ParseError::semantic(format!("missing `{name}:` section")))
    };

    let (_, states_body) = required("states")?;
    let mut state_labels = Vec::new();
    let mut state_index = HashMap::new();
    for (line, label) in section_items(states_body) {
        if state_index
            .insert(label.to_string(), StateId(state_labels.len() as u32))
            .is_some()
        {
            return Err(ParseError::syntax(
                line,
                format!("duplicate state `{label}`"),
            ));
        }
        state_labels.push(label.to_string());
    }
    let state = |line: usize, label: &str| {
        state_index
            .get(label)
            .copied()
            .ok_or_else(|| ParseError::syntax(line, format!("unknown state `{label}`")))
    };

    let (_, actions_body) = required("actions")?;
    let mut action_names = Vec::new();
    let mut action_index = HashMap::new();
    for (line, name) in section_items(actions_body) {
        let name = identifier(line, name)?;
        if action_index
            .insert(name.clone(), ActionId(action_names.len() as u32))
            .is_some()
        {
            return Err(ParseError::syntax(
                line,
                format!("duplicate action `{name}`"),
            ));
        }
        action_names.push(name);
    }
    let action = |line: usize, name: &str| {
        action_index
            .get(name)
            .copied()
            .ok_or_else(|| ParseError::syntax(line, format!("unknown action `{name}`")))
    };

    let (initial_line, initial_body) = required("initial")?;
    let initial_items = section_items(initial_body);
    let initial = match initial_items.as_slice() {
        [(line, label)] => state(*line, label)?,
        _ => {
            return Err(ParseError::syntax(
                initial_line,
                "expected exactly one initial state",
            ))
        }
    };

    let (_, goals_body) = required("goals")?;
    let goals = section_items(goals_body)
        .into_iter()
        .map(|(line, label)| state(line, label))
        .collect::<Result<Vec<_>, _>>()?;

    let mut transitions = Vec::new();
    if let Some((_, body)) = section(&entries, "transitions") {
        for l in body {
            let parts: Vec<&str> = l.text.split_whitespace().collect();
            let [s, a, t] = parts.as_slice() else {
                return Err(ParseError::syntax(
                    l.number,
                    "expected `state action successor`",
                ));
            };
            transitions.push((
                state(l.number, s)?,
                action(l.number, a)?,
                vec![state(l.number, t)?],
            ));
        }
    }

    let model = FondModel::new(ModelParts {
        state_labels,
        action_names,
        initial,
        goals,
        transitions,
    })?;

    let mut constraints = Vec::new();
    if let Some((_, body)) = section(&entries, "constraints") {
        for l in body {
            let (a, b) = constraint_line(l.number, l.text)?;
            let resolve = |names: Vec<String>| {
                names
                    .iter()
                    .map(|n| action(l.number, n))
                    .collect::<Result<BTreeSet<_>, _>>()
            };
            constraints.push(FairnessAssumption {
                a_set: resolve(a)?,
                b_set: resolve(b)?,
            });
        }
    }
    let fair = match section(&entries, "fair") {
        Some((_, body)) => Some(
            section_items(body)
                .into_iter()
                .map(|(line, n)| action(line, n))
                .collect::<Result<BTreeSet<_>, _>>()?,
        ),
        None => None,
    };
    let problem = FondPlusProblem::new(model, constraints)?;
    Ok(ExplicitDocument { problem, fair })
}

pub fn serialize_explicit(problem: &FondPlusProblem) -> String {
    serialize_explicit_with_fair(problem, None)
}

/// Canonical rendering; `parse_explicit_document` inverts it exactly.
pub fn serialize_explicit_with_fair(
    problem: &FondPlusProblem,
    fair: Option<&BTreeSet<ActionId>>,
) -> String {
    let m = problem.model();
    let mut out = format!("format: {FORMAT_HEADER}\nkind: explicit\n");
    out.push_str("states:");
    for label in m.state_labels() {
        out.push(' ');
        out.push_str(label);
    }
    out.push('\n');
    out.push_str(&format!("initial: {}\n", m.state_label(m.initial())));
    out.push_str("goals:");
    for g in m.goals() {
        out.push(' ');
        out.push_str(m.state_label(g));
    }
    out.push('\n');
    out.push_str("actions:");
    for name in m.action_names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    out.push_str("transitions:\n");
    for s in m.states() {
        for (a, succ) in m.applicable(s) {
            for &t in succ {
                out.push_str(&format!(
                    "{} {} {}\n",
                    m.state_label(s),
                    m.action_name(*a),
                    m.state_label(t)
                ));
            }
        }
    }
    out.push_str("constraints:\n");
    for c in problem.constraints() {
        out.push_str(&render_constraint(
            c.a_set.iter().map(|a| m.action_name(*a)),
            c.b_set.iter().map(|a| m.action_name(*a)),
        ));
        out.push('\n');
    }
    if let Some(fair) = fair {
        out.push_str("fair:");
        for a in fair {
            out.push(' ');
            out.push_str(m.action_name(*a));
        }
        out.push('\n');
    }
    out
}
