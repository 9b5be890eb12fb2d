//! The ASP encoding of the planner: problem facts plus the active rules of the
//! reference encoding, and parsing of `pi/2` atoms back into a policy.
//!
//! States are rendered as `s<id>` and actions as `a<id>`; a comment block maps
//! the tokens back to labels.

use thiserror::Error;

use crate::model::{ActionId, FondPlusProblem, Policy, StateId};

const RULES: &str = "\
{ pi(S,A) : ACTION(A) } = 1 :- STATE(S), not GOAL(S).
edge(S,T) :- pi(S,A), TRANSITION(S,A,T).
connected(S,T) :- edge(S,T).
connected(S,T) :- connected(S,X), edge(X,T), S != X.
blocked(S,T) :- STATE(S), STATE(T), not connected(S,T).
blocked(S,T) :- connected(S,T), terminate(S).
blocked(S,T) :- connected(S,T), terminate(T).
blocked(S,T) :- connected(S,T), blocked(X,T) : edge(S,X), connected(X,T).
fair(S) :- pi(S,A), ASET(I,A), blocked(X,S) : pi(X,B), BSET(I,B), not blocked(S,X).
terminate(S) :- GOAL(S).
terminate(S) :- fair(S), edge(S,T), terminate(T).
terminate(S) :- not fair(S), edge(S,_), terminate(T) : edge(S,T).
:- reachable(S), not terminate(S).
reachable(S) :- INITIAL(S).
reachable(S) :- reachable(X), not GOAL(X), edge(X,S).
";

const INPUT_PREDICATES: [&str; 7] = [
    "STATE",
    "ACTION",
    "INITIAL",
    "GOAL",
    "TRANSITION",
    "ASET",
    "BSET",
];

/// Facts and rules with the input predicates in upper case, as in the
/// reference listing. Byte-stable for a given problem.
pub fn emit_asp(problem: &FondPlusProblem) -> String {
    let mut out = legend(problem);
    out.push_str(&facts(problem));
    out.push('\n');
    out.push_str(RULES);
    out
}

/// The same program with lower-case input predicates and `#show pi/2.`, so
/// that clingo accepts it.
pub fn emit_asp_clingo(problem: &FondPlusProblem) -> String {
    let mut text = emit_asp(problem);
    for p in INPUT_PREDICATES {
        text = text.replace(&format!("{p}("), &format!("{}(", p.to_lowercase()));
    }
    text.push_str("#show pi/2.\n");
    text
}

fn legend(problem: &FondPlusProblem) -> String {
    let m = problem.model();
    let mut out = String::new();
    for s in m.states() {
        out.push_str(&format!("% s{} = {}\n", s.0, m.state_label(s)));
    }
    for a in m.actions() {
        out.push_str(&format!("% a{} = {}\n", a.0, m.action_name(a)));
    }
    out
}

fn facts(problem: &FondPlusProblem) -> String {
    let m = problem.model();
    let mut out = String::new();
    for s in m.states() {
        out.push_str(&format!("STATE(s{}).\n", s.0));
    }
    for a in m.actions() {
        out.push_str(&format!("ACTION(a{}).\n", a.0));
    }
    out.push_str(&format!("INITIAL(s{}).\n", m.initial().0));
    for g in m.goals() {
        out.push_str(&format!("GOAL(s{}).\n", g.0));
    }
    for s in m.states() {
        for (a, succ) in m.applicable(s) {
            for t in succ {
                out.push_str(&format!("TRANSITION(s{},a{},s{}).\n", s.0, a.0, t.0));
            }
        }
    }
    for (i, c) in problem.constraints().iter().enumerate() {
        for a in &c.a_set {
            out.push_str(&format!("ASET({},a{}).\n", i + 1, a.0));
        }
        for b in &c.b_set {
            out.push_str(&format!("BSET({},a{}).\n", i + 1, b.0));
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AspError {
    #[error("malformed atom `{0}`")]
    Malformed(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("state `{0}` is assigned twice")]
    Conflict(String),
}

fn resolve_state(problem: &FondPlusProblem, tok: &str) -> Option<StateId> {
    let m = problem.model();
    tok.strip_prefix('s')
        .and_then(|d| d.parse::<u32>().ok())
        .map(StateId)
        .filter(|s| s.index() < m.num_states())
        .or_else(|| m.state_by_label(tok))
}

fn resolve_action(problem: &FondPlusProblem, tok: &str) -> Option<ActionId> {
    let m = problem.model();
    tok.strip_prefix('a')
        .and_then(|d| d.parse::<u32>().ok())
        .map(ActionId)
        .filter(|a| a.index() < m.num_actions())
        .or_else(|| m.action_by_name(tok))
}

/// Reads every `pi(S,A)` atom in an answer set. Tokens are the `s<id>` /
/// `a<id>` forms produced by [`emit_asp`]; plain state labels and action names
/// are accepted as a fallback. Other atoms are ignored.
pub fn extract_policy(problem: &FondPlusProblem, answer: &str) -> Result<Policy, AspError> {
    let mut pi = Policy::new();
    let mut rest = answer;
    while let Some(pos) = rest.find("pi(") {
        let preceded_by_ident = rest[..pos]
            .chars()
            .next_back()
            .is_some_and(|c| c.is_alphanumeric() || c == '_');
        let after = &rest[pos + 3..];
        let close = after
            .find(')')
            .ok_or_else(|| AspError::Malformed(rest[pos..].trim().to_string()))?;
        rest = &after[close + 1..];
        if preceded_by_ident {
            continue;
        }
        let inner = &after[..close];
        let atom = format!("pi({inner})");
        let (s, a) = inner
            .split_once(',')
            .ok_or_else(|| AspError::Malformed(atom.clone()))?;
        let (s, a) = (s.trim(), a.trim());
        if s.is_empty() || a.is_empty() || a.contains(',') {
            return Err(AspError::Malformed(atom));
        }
        let state =
            resolve_state(problem, s).ok_or_else(|| AspError::UnknownState(s.to_string()))?;
        let action =
            resolve_action(problem, a).ok_or_else(|| AspError::UnknownAction(a.to_string()))?;
        if pi.assign(state, action).is_some_and(|prev| prev != action) {
            return Err(AspError::Conflict(s.to_string()));
        }
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::figure1;

    #[test]
    fn figure1_c2_fact_counts() {
        let text = emit_asp(&figure1(2).unwrap());
        assert_eq!(
            text.lines()
                .filter(|l| l.starts_with("TRANSITION("))
                .count(),
            6
        );
        assert_eq!(text.lines().filter(|l| l.starts_with("ASET(")).count(), 2);
        assert_eq!(text.lines().filter(|l| l.starts_with("BSET(")).count(), 0);
    }

    #[test]
    fn no_constraints_no_aset_facts() {
        let text = emit_asp(&figure1(1).unwrap());
        assert!(!text
            .lines()
            .any(|l| l.starts_with("ASET(") || l.starts_with("BSET(")));
    }

    #[test]
    fn clingo_dialect_lowercases_inputs() {
        let text = emit_asp_clingo(&figure1(7).unwrap());
        assert!(!INPUT_PREDICATES
            .iter()
            .any(|p| text.contains(&format!("{p}("))));
        assert!(text.contains("transition(s0,a0,s1)."));
        assert!(text.ends_with("#show pi/2.\n"));
    }

    #[test]
    fn extract_forms() {
        let p = figure1(7).unwrap();
        let pi = extract_policy(&p, "pi(s0,a) pi(s1,b)").unwrap();
        assert_eq!(pi.len(), 2);
        assert_eq!(pi.get(StateId(1)), Some(ActionId(1)));
        assert!(extract_policy(&p, "").unwrap().is_empty());
        let pi = extract_policy(&p, "reachable(s0) pi(s0,a0) pi(s2,a1) api(s1,a1)").unwrap();
        assert_eq!(pi.len(), 2);
        assert!(matches!(
            extract_policy(&p, "pi(s0)"),
            Err(AspError::Malformed(_))
        ));
        assert!(matches!(
            extract_policy(&p, "pi(s0,zz)"),
            Err(AspError::UnknownAction(_))
        ));
    }
}
