//! The `.dn` text format.
//!
//! ```text
//! # comment
//! system abcd
//! observable: o1 o2
//! unobservable: u1 f
//! faults: f
//! component A
//!   initial q0
//!   trans q0 f q1
//!   trans q1 o1 q1
//! end
//! ```
//!
//! Alphabet lines may repeat and accumulate. States are created on first
//! mention; the `initial` state always comes first.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::composition::SystemSpec;
use crate::error::Error;
use crate::model::{Action, AlphabetPartition, Automaton, AutomatonBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: action `{action}` is not declared")]
    UndeclaredAction { line: usize, action: String },

    #[error("line {line}: component `{component}` already has an initial state")]
    DuplicateState { line: usize, component: String },

    #[error("line {line}: duplicate transition `{source_state} {action} {target}`")]
    DuplicateTransition {
        line: usize,
        source_state: String,
        action: String,
        target: String,
    },

    #[error(transparent)]
    Model(#[from] Error),
}

struct Pending {
    name: String,
    start: usize,
    initial: Option<String>,
    edges: Vec<(usize, String, Action, String)>,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a system description.
pub fn parse_system(text: &str) -> Result<SystemSpec, ParseError> {
    let mut name: Option<String> = None;
    let mut obs: Vec<(usize, String)> = Vec::new();
    let mut unobs: Vec<(usize, String)> = Vec::new();
    let mut faults: Vec<(usize, String)> = Vec::new();
    let mut done: Vec<Pending> = Vec::new();
    let mut current: Option<Pending> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, rest)) = content.split_once(':') {
            let target = match key.trim() {
                "observable" => &mut obs,
                "unobservable" => &mut unobs,
                "faults" => &mut faults,
                other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
            };
            if current.is_some() {
                return Err(syntax(
                    line,
                    "alphabet declarations must precede components",
                ));
            }
            target.extend(rest.split_whitespace().map(|a| (line, a.to_string())));
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match (words[0], &mut current) {
            ("system", None) => {
                if words.len() != 2 {
                    return Err(syntax(line, "expected `system <name>`"));
                }
                if name.replace(words[1].to_string()).is_some() {
                    return Err(syntax(line, "system name given twice"));
                }
            }
            ("component", None) => {
                if words.len() != 2 {
                    return Err(syntax(line, "expected `component <name>`"));
                }
                current = Some(Pending {
                    name: words[1].to_string(),
                    start: line,
                    initial: None,
                    edges: Vec::new(),
                });
            }
            ("initial", Some(c)) => {
                if words.len() != 2 {
                    return Err(syntax(line, "expected `initial <state>`"));
                }
                if c.initial.is_some() {
                    return Err(ParseError::DuplicateState {
                        line,
                        component: c.name.clone(),
                    });
                }
                c.initial = Some(words[1].to_string());
            }
            ("trans", Some(c)) => {
                if words.len() != 4 {
                    return Err(syntax(line, "expected `trans <source> <action> <target>`"));
                }
                let action = Action::new(words[2]).map_err(|e| syntax(line, e.to_string()))?;
                c.edges
                    .push((line, words[1].to_string(), action, words[3].to_string()));
            }
            ("end", Some(_)) => done.push(current.take().expect("inside a component")),
            (w, None) => {
                return Err(syntax(
                    line,
                    format!("unexpected `{w}` outside a component"),
                ))
            }
            (w, Some(_)) => {
                return Err(syntax(line, format!("unexpected `{w}` inside a component")))
            }
        }
    }
    if let Some(c) = current {
        return Err(syntax(
            c.start,
            format!("component `{}` is missing `end`", c.name),
        ));
    }
    let name = name.ok_or_else(|| syntax(1, "missing `system <name>`"))?;

    let to_actions = |xs: &[(usize, String)]| -> Result<Vec<Action>, ParseError> {
        xs.iter()
            .map(|(l, a)| Action::new(a).map_err(|e| syntax(*l, e.to_string())))
            .collect()
    };
    let sigma =
        AlphabetPartition::new(to_actions(&obs)?, to_actions(&unobs)?, to_actions(&faults)?)?;

    let mut components = Vec::with_capacity(done.len());
    for c in done {
        let initial = c.initial.ok_or_else(|| {
            syntax(
                c.start,
                format!("component `{}` has no initial state", c.name),
            )
        })?;
        let mut b = AutomatonBuilder::new(c.name.as_str(), initial);
        for (line, src, action, dst) in c.edges {
            if !sigma.contains(&action) {
                return Err(ParseError::UndeclaredAction {
                    line,
                    action: action.to_string(),
                });
            }
            if b.has_edge(&src, &action, &dst) {
                return Err(ParseError::DuplicateTransition {
                    line,
                    source_state: src,
                    action: action.to_string(),
                    target: dst,
                });
            }
            b.push_edge(&src, action, &dst);
        }
        components.push(b.build()?);
    }
    Ok(SystemSpec::new(name, components, sigma)?)
}

fn join(xs: &BTreeSet<Action>) -> String {
    xs.iter().map(Action::as_str).collect::<Vec<_>>().join(" ")
}

fn render_component(out: &mut String, a: &Automaton) {
    let _ = writeln!(out, "component {}", a.name());
    let _ = writeln!(out, "  initial {}", a.states()[a.initial()]);
    for e in a.edges() {
        let _ = writeln!(
            out,
            "  trans {} {} {}",
            a.states()[e.source],
            e.action,
            a.states()[e.target]
        );
    }
    out.push_str("end\n");
}

/// Renders a system in the text format; parsing the output gives back an
/// equal system.
pub fn render(spec: &SystemSpec) -> String {
    let sigma = spec.sigma();
    let mut out = format!("system {}\n", spec.name());
    let _ = writeln!(out, "observable: {}", join(sigma.observable()));
    let _ = writeln!(out, "unobservable: {}", join(sigma.unobservable()));
    let _ = writeln!(out, "faults: {}", join(sigma.faults()));
    for a in spec.components() {
        out.push('\n');
        render_component(&mut out, a);
    }
    out
}
