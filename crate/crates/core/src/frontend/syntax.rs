//! Line-level plumbing shared by the three text formats.

use super::ParseError;

pub(crate) const FORMAT_HEADER: &str = "fondplus-v1";

/// A logical line with its 1-based source line number; comments stripped.
#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

pub(crate) fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let text = raw.split('#').next().unwrap_or("").trim();
            (!text.is_empty()).then_some(Line {
                number: i + 1,
                text,
            })
        })
        .collect()
}

/// Checks the `format:` and `kind:` header lines and returns the remaining lines.
pub(crate) fn expect_header<'a>(text: &'a str, kind: &str) -> Result<Vec<Line<'a>>, ParseError> {
    let all = lines(text);
    let mut it = all.into_iter();
    let first = it
        .next()
        .ok_or_else(|| ParseError::syntax(1, "missing `format: fondplus-v1` header"))?;
    match split_section(first.text) {
        Some(("format", v)) if v == FORMAT_HEADER => {}
        _ => {
            return Err(ParseError::syntax(
                first.number,
                format!("expected `format: {FORMAT_HEADER}`"),
            ))
        }
    }
    let second = it
        .next()
        .ok_or_else(|| ParseError::syntax(first.number, "missing `kind:` line"))?;
    match split_section(second.text) {
        Some(("kind", v)) if v == kind => Ok(it.collect()),
        Some(("kind", v)) => Err(ParseError::syntax(
            second.number,
            format!("expected `kind: {kind}`, found `{v}`"),
        )),
        _ => Err(ParseError::syntax(second.number, "expected `kind:` line")),
    }
}

/// Reads the `kind:` value of a document without parsing the rest.
pub fn document_kind(text: &str) -> Option<String> {
    let all = lines(text);
    match all.get(1).and_then(|l| split_section(l.text)) {
        Some(("kind", v)) => Some(v.to_string()),
        _ => None,
    }
}

/// Splits `name: rest` when `name` is a bare lowercase keyword.
pub(crate) fn split_section(text: &str) -> Option<(&str, &str)> {
    let (head, rest) = text.split_once(':')?;
    let head = head.trim();
    if !head.is_empty() && head.chars().all(|c| c.is_ascii_lowercase() || c == '_') {
        Some((head, rest.trim()))
    } else {
        None
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.' | '-'))
        && !s.starts_with('-')
}

pub(crate) fn identifier(line: usize, s: &str) -> Result<String, ParseError> {
    let s = s.trim();
    if is_identifier(s) {
        Ok(s.to_string())
    } else {
        Err(ParseError::syntax(line, format!("invalid name `{s}`")))
    }
}

/// Splits a list on commas and whitespace.
pub(crate) fn list_items(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

/// Parses `{x, y, z}` (the braces are required) into its items.
pub(crate) fn braced(line: usize, s: &str) -> Result<Vec<String>, ParseError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| ParseError::syntax(line, format!("expected `{{...}}`, found `{s}`")))?;
    if inner.contains(['{', '}']) {
        return Err(ParseError::syntax(line, format!("nested braces in `{s}`")));
    }
    Ok(list_items(inner).map(str::to_string).collect())
}

/// Parses `A = {a, b} / B = {c}`; the `/ B = {...}` part may be omitted.
pub(crate) fn constraint_line(
    line: usize,
    text: &str,
) -> Result<(Vec<String>, Vec<String>), ParseError> {
    let (a_part, b_part) = match text.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let side = |part: &str, key: &str| -> Result<Vec<String>, ParseError> {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| ParseError::syntax(line, format!("expected `{key} = {{...}}`")))?;
        if k.trim() != key {
            return Err(ParseError::syntax(
                line,
                format!("expected `{key} = {{...}}`"),
            ));
        }
        braced(line, v)?
            .into_iter()
            .map(|n| identifier(line, &n))
            .collect()
    };
    let a = side(a_part, "A")?;
    let b = match b_part {
        Some(p) => side(p, "B")?,
        None => Vec::new(),
    };
    Ok((a, b))
}

/// Renders `A = {..} / B = {..}`.
pub(crate) fn render_constraint<'a>(
    a: impl IntoIterator<Item = &'a str>,
    b: impl IntoIterator<Item = &'a str>,
) -> String {
    let join = |it: &mut dyn Iterator<Item = &'a str>| it.collect::<Vec<_>>().join(", ");
    format!(
        "A = {{{}}} / B = {{{}}}",
        join(&mut a.into_iter()),
        join(&mut b.into_iter())
    )
}

/// Groups lines into sections: a `name:` line opens a section whose content is
/// the inline remainder plus all following non-section lines. `action` lines
/// are returned as their own entries.
#[derive(Debug)]
pub(crate) enum Entry<'a> {
    Section {
        name: &'a str,
        number: usize,
        body: Vec<Line<'a>>,
    },
    Action(Line<'a>),
}

pub(crate) fn entries<'a>(
    lines: Vec<Line<'a>>,
    sections: &[&str],
) -> Result<Vec<Entry<'a>>, ParseError> {
    let mut out: Vec<Entry<'a>> = Vec::new();
    for line in lines {
        if line.text.starts_with("action ") {
            out.push(Entry::Action(line));
            continue;
        }
        if let Some((name, rest)) = split_section(line.text) {
            if !sections.contains(&name) {
                return Err(ParseError::syntax(
                    line.number,
                    format!("unknown section `{name}`"),
                ));
            }
            if out
                .iter()
                .any(|e| matches!(e, Entry::Section { name: n, .. } if *n == name))
            {
                return Err(ParseError::syntax(
                    line.number,
                    format!("duplicate section `{name}`"),
                ));
            }
            let mut body = Vec::new();
            if !rest.is_empty() {
                body.push(Line {
                    number: line.number,
                    text: rest,
                });
            }
            out.push(Entry::Section {
                name,
                number: line.number,
                body,
            });
            continue;
        }
        match out.last_mut() {
            Some(Entry::Section { body, .. }) => body.push(line),
            _ => {
                return Err(ParseError::syntax(
                    line.number,
                    format!("unexpected line `{}`", line.text),
                ))
            }
        }
    }
    Ok(out)
}

pub(crate) fn section<'e, 'a>(
    entries: &'e [Entry<'a>],
    name: &str,
) -> Option<(usize, &'e [Line<'a>])> {
    entries.iter().find_map(|e| match e {
        Entry::Section {
            name: n,
            number,
            body,
        } if *n == name => Some((*number, body.as_slice())),
        _ => None,
    })
}

/// All whitespace/comma separated items of a section body, with line numbers.
pub(crate) fn section_items<'a>(body: &[Line<'a>]) -> Vec<(usize, &'a str)> {
    body.iter()
        .flat_map(|l| list_items(l.text).map(move |t| (l.number, t)))
        .collect()
}

/// `key: value`, without trailing whitespace when `value` is empty.
pub(crate) fn key_line(key: &str, value: &str) -> String {
    if value.is_empty() {
        format!("{key}:")
    } else {
        format!("{key}: {value}")
    }
}
