//! Compact (grounded STRIPS with `oneof`) FOND descriptions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::syntax::{
    braced, constraint_line, entries, expect_header, identifier, key_line, render_constraint,
    section, section_items, Entry, FORMAT_HEADER,
};
use super::ParseError;

/// A possibly negated atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: usize) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: usize) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            atom: self.atom,
            positive: !self.positive,
        }
    }
}

/// Fairness assumption by action name, resolved after grounding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSpec {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

impl ConstraintSpec {
    pub fn new<S: Into<String>>(
        a: impl IntoIterator<Item = S>,
        b: impl IntoIterator<Item = S>,
    ) -> Self {
        ConstraintSpec {
            a: a.into_iter().map(Into::into).collect(),
            b: b.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactAction {
    pub name: String,
    pub pre: Vec<Literal>,
    /// Effect alternatives; exactly one for deterministic actions.
    pub effects: Vec<Vec<Literal>>,
}

impl CompactAction {
    pub fn is_nondeterministic(&self) -> bool {
        self.effects.len() >= 2
    }
}

/// Compact FOND problem `<At, I, Act, G>`, optionally carrying fairness
/// assumptions (`constraints:`) and Dual FOND labels (`fair:`) by action name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompactFond {
    pub atoms: Vec<String>,
    /// Atoms true initially; all others are false.
    pub init: BTreeSet<usize>,
    pub goal: Vec<Literal>,
    pub actions: Vec<CompactAction>,
    pub constraints: Vec<ConstraintSpec>,
    pub fair: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompactError {
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("duplicate action `{0}`")]
    DuplicateAction(String),
    #[error("atom index {0} out of range")]
    UnknownAtom(usize),
    #[error("action `{0}` has no effect alternatives")]
    NoEffects(String),
    #[error("action `{action}`: effect alternative {index} is inconsistent")]
    InconsistentEffect { action: String, index: usize },
    #[error("action `{0}`: duplicate oneof alternatives")]
    DuplicateAlternatives(String),
    #[error("goal is inconsistent")]
    InconsistentGoal,
}

fn consistent(lits: &[Literal]) -> bool {
    lits.iter().all(|l| !lits.contains(&l.negated()))
}

fn normalized(lits: &[Literal]) -> BTreeSet<Literal> {
    lits.iter().copied().collect()
}

impl CompactFond {
    pub fn validate(&self) -> Result<(), CompactError> {
        let mut seen = BTreeSet::new();
        for a in &self.atoms {
            if !seen.insert(a) {
                return Err(CompactError::DuplicateAtom(a.clone()));
            }
        }
        let n = self.atoms.len();
        let check = |lits: &[Literal]| {
            lits.iter()
                .find(|l| l.atom >= n)
                .map_or(Ok(()), |l| Err(CompactError::UnknownAtom(l.atom)))
        };
        if let Some(&a) = self.init.iter().find(|&&a| a >= n) {
            return Err(CompactError::UnknownAtom(a));
        }
        check(&self.goal)?;
        if !consistent(&self.goal) {
            return Err(CompactError::InconsistentGoal);
        }
        let mut names = BTreeSet::new();
        for action in &self.actions {
            if !names.insert(&action.name) {
                return Err(CompactError::DuplicateAction(action.name.clone()));
            }
            check(&action.pre)?;
            if action.effects.is_empty() {
                return Err(CompactError::NoEffects(action.name.clone()));
            }
            let mut alts = BTreeSet::new();
            for (index, e) in action.effects.iter().enumerate() {
                check(e)?;
                if !consistent(e) {
                    return Err(CompactError::InconsistentEffect {
                        action: action.name.clone(),
                        index,
                    });
                }
                if !alts.insert(normalized(e)) {
                    return Err(CompactError::DuplicateAlternatives(action.name.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }

    pub fn render_literal(&self, l: Literal) -> String {
        if l.positive {
            self.atoms[l.atom].clone()
        } else {
            format!("!{}", self.atoms[l.atom])
        }
    }

    fn render_literals(&self, lits: &[Literal]) -> String {
        format!(
            "{{{}}}",
            lits.iter()
                .map(|l| self.render_literal(*l))
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Resolves `p` / `!p` against an atom table.
pub(crate) fn parse_literal(
    line: usize,
    token: &str,
    atoms: &HashMap<String, usize>,
) -> Result<Literal, ParseError> {
    let (positive, name) = match token.strip_prefix('!') {
        Some(rest) => (false, rest),
        None => (true, token),
    };
    let atom = atoms
        .get(name)
        .copied()
        .ok_or_else(|| ParseError::syntax(line, format!("unknown atom `{name}`")))?;
    Ok(Literal { atom, positive })
}

/// Splits `name: pre {..} eff <effect>` into its three parts.
pub(crate) fn split_action_line(
    line: usize,
    text: &str,
) -> Result<(String, &str, &str), ParseError> {
    let rest = text
        .strip_prefix("action ")
        .ok_or_else(|| ParseError::syntax(line, "expected `action`"))?;
    let (name, rest) = rest
        .split_once(':')
        .ok_or_else(|| ParseError::syntax(line, "expected `action <name>: pre {..} eff ..`"))?;
    let name = identifier(line, name)?;
    let rest = rest.trim();
    let rest = rest
        .strip_prefix("pre")
        .ok_or_else(|| ParseError::syntax(line, "expected `pre {..}`"))?
        .trim_start();
    let close = rest
        .find('}')
        .ok_or_else(|| ParseError::syntax(line, "unterminated precondition"))?;
    let (pre, rest) = rest.split_at(close + 1);
    let eff = rest
        .trim()
        .strip_prefix("eff")
        .ok_or_else(|| ParseError::syntax(line, "expected `eff`"))?
        .trim();
    Ok((name, pre, eff))
}

/// Splits an effect into alternatives: `{..}` or `oneof({..} | {..} ...)`.
pub(crate) fn split_effect(line: usize, eff: &str) -> Result<Vec<&str>, ParseError> {
    if let Some(inner) = eff.strip_prefix("oneof") {
        let inner = inner
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ParseError::syntax(line, "expected `oneof(... | ...)`"))?;
        let alts: Vec<&str> = inner.split('|').map(str::trim).collect();
        if alts.len() < 2 {
            return Err(ParseError::syntax(
                line,
                "oneof needs at least two alternatives",
            ));
        }
        Ok(alts)
    } else {
        Ok(vec![eff])
    }
}

pub(crate) fn parse_constraints(
    body: &[super::syntax::Line<'_>],
) -> Result<Vec<ConstraintSpec>, ParseError> {
    body.iter()
        .map(|l| constraint_line(l.number, l.text).map(|(a, b)| ConstraintSpec { a, b }))
        .collect()
}

pub(crate) fn atom_table(
    body: &[super::syntax::Line<'_>],
    names: &mut Vec<String>,
) -> Result<HashMap<String, usize>, ParseError> {
    let mut table = HashMap::new();
    for (line, name) in section_items(body) {
        let name = identifier(line, name)?;
        if table.insert(name.clone(), names.len()).is_some() {
            return Err(ParseError::syntax(line, format!("duplicate name `{name}`")));
        }
        names.push(name);
    }
    Ok(table)
}

const SECTIONS: &[&str] = &["atoms", "init", "goal", "constraints", "fair"];

pub fn parse_compact(text: &str) -> Result<CompactFond, ParseError> {
    let lines = expect_header(text, "compact")?;
    let entries = entries(lines, SECTIONS)?;
    let mut atoms = Vec::new();
    let table = match section(&entries, "atoms") {
        Some((_, body)) => atom_table(body, &mut atoms)?,
        None => return Err(ParseError::semantic("missing `atoms:` section")),
    };
    let mut init = BTreeSet::new();
    if let Some((_, body)) = section(&entries, "init") {
        for (line, tok) in section_items(body) {
            let lit = parse_literal(line, tok, &table)?;
            if !lit.positive {
                return Err(ParseError::syntax(
                    line,
                    "init lists the atoms that are true",
                ));
            }
            init.insert(lit.atom);
        }
    }
    let goal = match section(&entries, "goal") {
        Some((_, body)) => section_items(body)
            .into_iter()
            .map(|(line, tok)| parse_literal(line, tok, &table))
            .collect::<Result<Vec<_>, _>>()?,
        None => return Err(ParseError::semantic("missing `goal:` section")),
    };
    let mut actions = Vec::new();
    for e in &entries {
        let Entry::Action(l) = e else { continue };
        let (name, pre, eff) = split_action_line(l.number, l.text)?;
        let lits = |s: &str| -> Result<Vec<Literal>, ParseError> {
            braced(l.number, s)?
                .iter()
                .map(|t| parse_literal(l.number, t, &table))
                .collect()
        };
        let pre = lits(pre)?;
        let effects = split_effect(l.number, eff)?
            .into_iter()
            .map(lits)
            .collect::<Result<Vec<_>, _>>()?;
        actions.push(CompactAction { name, pre, effects });
    }
    let constraints = match section(&entries, "constraints") {
        Some((_, body)) => parse_constraints(body)?,
        None => Vec::new(),
    };
    let fair = section(&entries, "fair").map(|(_, body)| {
        section_items(body)
            .into_iter()
            .map(|(_, n)| n.to_string())
            .collect()
    });
    let compact = CompactFond {
        atoms,
        init,
        goal,
        actions,
        constraints,
        fair,
    };
    compact
        .validate()
        .map_err(|e| ParseError::semantic(e.to_string()))?;
    for c in &compact.constraints {
        for name in c.a.iter().chain(&c.b) {
            if compact.action_index(name).is_none() {
                return Err(ParseError::semantic(format!(
                    "constraint names unknown action `{name}`"
                )));
            }
        }
    }
    Ok(compact)
}

pub fn serialize_compact(c: &CompactFond) -> String {
    c.to_string()
}

impl fmt::Display for CompactFond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format: {FORMAT_HEADER}")?;
        writeln!(f, "kind: compact")?;
        writeln!(f, "{}", key_line("atoms", &self.atoms.join(" ")))?;
        let init: Vec<&str> = self.init.iter().map(|&a| self.atoms[a].as_str()).collect();
        writeln!(f, "{}", key_line("init", &init.join(", ")))?;
        let goal: Vec<String> = self.goal.iter().map(|l| self.render_literal(*l)).collect();
        writeln!(f, "{}", key_line("goal", &goal.join(", ")))?;
        for a in &self.actions {
            let eff = if a.effects.len() == 1 {
                self.render_literals(&a.effects[0])
            } else {
                let alts: Vec<String> = a.effects.iter().map(|e| self.render_literals(e)).collect();
                format!("oneof({})", alts.join(" | "))
            };
            writeln!(
                f,
                "action {}: pre {} eff {}",
                a.name,
                self.render_literals(&a.pre),
                eff
            )?;
        }
        if !self.constraints.is_empty() {
            writeln!(f, "constraints:")?;
            for c in &self.constraints {
                writeln!(
                    f,
                    "{}",
                    render_constraint(
                        c.a.iter().map(String::as_str),
                        c.b.iter().map(String::as_str)
                    )
                )?;
            }
        }
        if let Some(fair) = &self.fair {
            writeln!(f, "{}", key_line("fair", &fair.join(" ")))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
format: fondplus-v1
kind: compact
atoms: p q
init: q
goal: p, !q
action flip: pre {!p} eff oneof({p} | {!p, !q})
action reset: pre {} eff {q}
constraints:
A = {flip} / B = {reset}
";

    #[test]
    fn parses_sample() {
        let c = parse_compact(SAMPLE).unwrap();
        assert_eq!(c.atoms, vec!["p", "q"]);
        assert_eq!(c.init, BTreeSet::from([1]));
        assert_eq!(c.goal, vec![Literal::pos(0), Literal::neg(1)]);
        assert_eq!(c.actions.len(), 2);
        assert!(c.actions[0].is_nondeterministic());
        assert!(c.actions[1].pre.is_empty());
        assert_eq!(
            c.constraints,
            vec![ConstraintSpec::new(["flip"], ["reset"])]
        );
    }

    #[test]
    fn duplicate_alternatives_rejected() {
        let text = SAMPLE.replace("oneof({p} | {!p, !q})", "oneof({p} | {p})");
        let err = parse_compact(&text).unwrap_err();
        assert!(
            err.to_string().contains("duplicate oneof alternatives"),
            "{err}"
        );
    }

    #[test]
    fn inconsistent_alternative_rejected() {
        let text = SAMPLE.replace("{!p, !q})", "{!p, p})");
        assert!(parse_compact(&text).is_err());
    }

    #[test]
    fn round_trip() {
        let c = parse_compact(SAMPLE).unwrap();
        assert_eq!(parse_compact(&serialize_compact(&c)).unwrap(), c);
    }
}
