//! Qualitative numerical planning problems `<At, V, I, O, G>`.

use std::collections::BTreeSet;
use std::fmt;

use super::compact::{atom_table, split_action_line, Literal};
use super::syntax::{braced, entries, expect_header, key_line, section, Entry, FORMAT_HEADER};
use super::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QnpCondition {
    Atom(Literal),
    /// `X = 0`
    Zero(usize),
    /// `X > 0`
    Positive(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QnpEffect {
    Set(usize),
    Clear(usize),
    Inc(usize),
    Dec(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QnpAction {
    pub name: String,
    pub pre: Vec<QnpCondition>,
    pub effects: Vec<QnpEffect>,
}

impl QnpAction {
    pub fn decrements(&self, var: usize) -> bool {
        self.effects.contains(&QnpEffect::Dec(var))
    }

    pub fn increments(&self, var: usize) -> bool {
        self.effects.contains(&QnpEffect::Inc(var))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Qnp {
    pub atoms: Vec<String>,
    pub vars: Vec<String>,
    /// Initial literals; atoms not mentioned are false, every variable must
    /// appear as `X=0` or `X>0`.
    pub init: Vec<QnpCondition>,
    pub goal: Vec<QnpCondition>,
    pub actions: Vec<QnpAction>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QnpError {
    #[error("action `{action}` decrements `{var}` without the precondition `{var}>0`")]
    DecWithoutPositive { action: String, var: String },
    #[error("action `{action}` both increments and decrements `{var}`")]
    IncAndDec { action: String, var: String },
    #[error("initial state does not fix variable `{0}`")]
    UnsetVariable(String),
    #[error("inconsistent {0}")]
    Inconsistent(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("index out of range in {0}")]
    OutOfRange(String),
}

fn negation(c: QnpCondition) -> QnpCondition {
    match c {
        QnpCondition::Atom(l) => QnpCondition::Atom(l.negated()),
        QnpCondition::Zero(v) => QnpCondition::Positive(v),
        QnpCondition::Positive(v) => QnpCondition::Zero(v),
    }
}

fn consistent(cs: &[QnpCondition]) -> bool {
    cs.iter().all(|&c| !cs.contains(&negation(c)))
}

impl Qnp {
    pub fn validate(&self) -> Result<(), QnpError> {
        let mut names = BTreeSet::new();
        for n in self.atoms.iter().chain(&self.vars) {
            if !names.insert(n) {
                return Err(QnpError::Duplicate(n.clone()));
            }
        }
        let in_range = |c: &QnpCondition| match *c {
            QnpCondition::Atom(l) => l.atom < self.atoms.len(),
            QnpCondition::Zero(v) | QnpCondition::Positive(v) => v < self.vars.len(),
        };
        for (what, cs) in [("init", &self.init), ("goal", &self.goal)] {
            if !cs.iter().all(in_range) {
                return Err(QnpError::OutOfRange(what.into()));
            }
            if !consistent(cs) {
                return Err(QnpError::Inconsistent(what.into()));
            }
        }
        for (v, name) in self.vars.iter().enumerate() {
            if !self
                .init
                .iter()
                .any(|c| matches!(c, QnpCondition::Zero(x) | QnpCondition::Positive(x) if *x == v))
            {
                return Err(QnpError::UnsetVariable(name.clone()));
            }
        }
        let mut action_names = BTreeSet::new();
        for a in &self.actions {
            if !action_names.insert(&a.name) {
                return Err(QnpError::Duplicate(a.name.clone()));
            }
            if !a.pre.iter().all(in_range) {
                return Err(QnpError::OutOfRange(format!("action `{}`", a.name)));
            }
            if !consistent(&a.pre) {
                return Err(QnpError::Inconsistent(format!(
                    "precondition of `{}`",
                    a.name
                )));
            }
            for e in &a.effects {
                let ok = match *e {
                    QnpEffect::Set(p) | QnpEffect::Clear(p) => p < self.atoms.len(),
                    QnpEffect::Inc(v) | QnpEffect::Dec(v) => v < self.vars.len(),
                };
                if !ok {
                    return Err(QnpError::OutOfRange(format!("action `{}`", a.name)));
                }
            }
            for p in 0..self.atoms.len() {
                if a.effects.contains(&QnpEffect::Set(p))
                    && a.effects.contains(&QnpEffect::Clear(p))
                {
                    return Err(QnpError::Inconsistent(format!("effect of `{}`", a.name)));
                }
            }
            for (v, var) in self.vars.iter().enumerate() {
                if a.decrements(v) && a.increments(v) {
                    return Err(QnpError::IncAndDec {
                        action: a.name.clone(),
                        var: var.clone(),
                    });
                }
                if a.decrements(v) && !a.pre.contains(&QnpCondition::Positive(v)) {
                    return Err(QnpError::DecWithoutPositive {
                        action: a.name.clone(),
                        var: var.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn render_condition(&self, c: QnpCondition) -> String {
        match c {
            QnpCondition::Atom(l) if l.positive => self.atoms[l.atom].clone(),
            QnpCondition::Atom(l) => format!("!{}", self.atoms[l.atom]),
            QnpCondition::Zero(v) => format!("{}=0", self.vars[v]),
            QnpCondition::Positive(v) => format!("{}>0", self.vars[v]),
        }
    }

    pub fn render_effect(&self, e: QnpEffect) -> String {
        match e {
            QnpEffect::Set(p) => self.atoms[p].clone(),
            QnpEffect::Clear(p) => format!("!{}", self.atoms[p]),
            QnpEffect::Inc(v) => format!("inc({})", self.vars[v]),
            QnpEffect::Dec(v) => format!("dec({})", self.vars[v]),
        }
    }
}

struct Tables {
    atoms: std::collections::HashMap<String, usize>,
    vars: std::collections::HashMap<String, usize>,
}

impl Tables {
    fn condition(&self, line: usize, tok: &str) -> Result<QnpCondition, ParseError> {
        let var = |name: &str| {
            self.vars.get(name.trim()).copied().ok_or_else(|| {
                ParseError::syntax(line, format!("unknown variable `{}`", name.trim()))
            })
        };
        if let Some(name) = tok.strip_suffix("=0") {
            return Ok(QnpCondition::Zero(var(name)?));
        }
        if let Some(name) = tok.strip_suffix(">0") {
            return Ok(QnpCondition::Positive(var(name)?));
        }
        super::compact::parse_literal(line, tok, &self.atoms).map(QnpCondition::Atom)
    }

    fn effect(&self, line: usize, tok: &str) -> Result<QnpEffect, ParseError> {
        let call = |prefix: &str| {
            tok.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .map(|name| {
                    self.vars.get(name.trim()).copied().ok_or_else(|| {
                        ParseError::syntax(line, format!("unknown variable `{}`", name.trim()))
                    })
                })
        };
        if let Some(v) = call("inc(") {
            return Ok(QnpEffect::Inc(v?));
        }
        if let Some(v) = call("dec(") {
            return Ok(QnpEffect::Dec(v?));
        }
        let l = super::compact::parse_literal(line, tok, &self.atoms)?;
        Ok(if l.positive {
            QnpEffect::Set(l.atom)
        } else {
            QnpEffect::Clear(l.atom)
        })
    }
}

/// Removes whitespace around `=`/`>` so that `n = 0` and `n=0` read the same.
fn squeeze(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut it = s.split_whitespace().peekable();
    while let Some(tok) = it.next() {
        out.push_str(tok);
        if let Some(next) = it.peek() {
            let glue = tok.ends_with(['=', '>', '(']) || next.starts_with(['=', '>', ')']);
            if !glue {
                out.push(' ');
            }
        }
    }
    out
}

const SECTIONS: &[&str] = &["atoms", "vars", "init", "goal", "constraints"];

pub fn parse_qnp(text: &str) -> Result<Qnp, ParseError> {
    let lines = expect_header(text, "qnp")?;
    let entries = entries(lines, SECTIONS)?;
    let mut atoms = Vec::new();
    let atom_map = match section(&entries, "atoms") {
        Some((_, body)) => atom_table(body, &mut atoms)?,
        None => Default::default(),
    };
    let mut vars = Vec::new();
    let var_map = match section(&entries, "vars") {
        Some((_, body)) => atom_table(body, &mut vars)?,
        None => Default::default(),
    };
    if let Some(name) = vars.iter().find(|v| atom_map.contains_key(*v)) {
        return Err(ParseError::semantic(format!(
            "`{name}` is both an atom and a variable"
        )));
    }
    let tables = Tables {
        atoms: atom_map,
        vars: var_map,
    };
    let conditions = |name: &str| -> Result<Vec<QnpCondition>, ParseError> {
        let Some((_, body)) = section(&entries, name) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for l in body {
            for tok in squeeze(l.text)
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
            {
                out.push(tables.condition(l.number, tok)?);
            }
        }
        Ok(out)
    };
    let init = conditions("init")?;
    if section(&entries, "goal").is_none() {
        return Err(ParseError::semantic("missing `goal:` section"));
    }
    let goal = conditions("goal")?;
    let mut actions = Vec::new();
    for e in &entries {
        let Entry::Action(l) = e else { continue };
        let text = squeeze(l.text);
        let (name, pre, eff) = split_action_line(l.number, &text)?;
        let pre = braced(l.number, pre)?
            .iter()
            .map(|t| tables.condition(l.number, t))
            .collect::<Result<Vec<_>, _>>()?;
        let effects = braced(l.number, eff)?
            .iter()
            .map(|t| tables.effect(l.number, t))
            .collect::<Result<Vec<_>, _>>()?;
        actions.push(QnpAction { name, pre, effects });
    }
    if let Some((line, _)) = section(&entries, "constraints") {
        return Err(ParseError::syntax(
            line,
            "QNP files carry no constraints; they are derived from the variables",
        ));
    }
    let q = Qnp {
        atoms,
        vars,
        init,
        goal,
        actions,
    };
    q.validate()
        .map_err(|e| ParseError::semantic(e.to_string()))?;
    Ok(q)
}

pub fn serialize_qnp(q: &Qnp) -> String {
    q.to_string()
}

impl fmt::Display for Qnp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conds = |cs: &[QnpCondition]| {
            cs.iter()
                .map(|c| self.render_condition(*c))
                .collect::<Vec<_>>()
                .join(", ")
        };
        writeln!(f, "format: {FORMAT_HEADER}")?;
        writeln!(f, "kind: qnp")?;
        writeln!(f, "{}", key_line("atoms", &self.atoms.join(" ")))?;
        writeln!(f, "{}", key_line("vars", &self.vars.join(" ")))?;
        writeln!(f, "{}", key_line("init", &conds(&self.init)))?;
        writeln!(f, "{}", key_line("goal", &conds(&self.goal)))?;
        for a in &self.actions {
            let effs: Vec<String> = a.effects.iter().map(|e| self.render_effect(*e)).collect();
            writeln!(
                f,
                "action {}: pre {{{}}} eff {{{}}}",
                a.name,
                conds(&a.pre),
                effs.join(", ")
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLEAR: &str = "\
format: fondplus-v1
kind: qnp
atoms: p
vars: n
init: !p, n>0
goal: n=0
action a: pre {p, n>0} eff {!p, dec(n)}
action b: pre {!p} eff {p}
";

    #[test]
    fn parses_clear() {
        let q = parse_qnp(CLEAR).unwrap();
        assert_eq!(q.actions.len(), 2);
        assert_eq!(
            q.actions[0].effects,
            vec![QnpEffect::Clear(0), QnpEffect::Dec(0)]
        );
        assert_eq!(q.goal, vec![QnpCondition::Zero(0)]);
        assert_eq!(q, crate::bench::clear_qnp());
    }

    #[test]
    fn spaced_conditions() {
        let q = parse_qnp(&CLEAR.replace("n>0}", "n > 0}")).unwrap();
        assert_eq!(q, parse_qnp(CLEAR).unwrap());
    }

    #[test]
    fn dec_without_positive_precondition_rejected() {
        let err = parse_qnp(&CLEAR.replace("pre {p, n>0}", "pre {p}")).unwrap_err();
        assert!(
            err.to_string().contains("without the precondition"),
            "{err}"
        );
    }

    #[test]
    fn inc_and_dec_rejected() {
        let err = parse_qnp(&CLEAR.replace("dec(n)}", "dec(n), inc(n)}")).unwrap_err();
        assert!(
            err.to_string().contains("both increments and decrements"),
            "{err}"
        );
    }

    #[test]
    fn round_trip() {
        let q = parse_qnp(CLEAR).unwrap();
        assert_eq!(parse_qnp(&serialize_qnp(&q)).unwrap(), q);
        assert_eq!(serialize_qnp(&q), CLEAR);
    }
}
