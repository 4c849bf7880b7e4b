//! Text format for counterexamples.
//!
//! ```text
//! cex finite          cex lasso
//! state s0            state s0
//! state s1            cycle
//!                     state s1
//!                     state s2
//! ```
//!
//! The first line fixes the kind. `state` lines list the execution in
//! order; for lassos the `cycle` marker separates the stem (possibly
//! empty) from the non-empty cycle. `#` starts a comment; blank lines
//! are ignored. State names refer to a specific transition system, so
//! parsing takes one.

use super::{Counterexample, FinitePath, LassoPath};
use crate::systems::TransitionSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct CexParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> CexParseError {
    CexParseError { line, message: message.into() }
}

/// Renders a counterexample using the system's state names.
pub fn render_cex(m: &TransitionSystem, c: &Counterexample) -> String {
    let mut out = String::new();
    let name = |s: usize| m.states()[s].as_str();
    match c {
        Counterexample::Finite(path) => {
            out.push_str("cex finite\n");
            for &s in &path.states {
                out.push_str(&format!("state {}\n", name(s)));
            }
        }
        Counterexample::Lasso(lasso) => {
            out.push_str("cex lasso\n");
            for &s in &lasso.stem {
                out.push_str(&format!("state {}\n", name(s)));
            }
            out.push_str("cycle\n");
            for &s in &lasso.cycle {
                out.push_str(&format!("state {}\n", name(s)));
            }
        }
    }
    out
}

/// Parses the counterexample format, resolving state names against `m`.
pub fn parse_cex(m: &TransitionSystem, text: &str) -> Result<Counterexample, CexParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (i + 1, content)
        })
        .filter(|(_, content)| !content.is_empty());

    let (first_no, first) = lines
        .next()
        .ok_or_else(|| err(0, "empty counterexample"))?;
    let mut header = first.split_whitespace();
    if header.next() != Some("cex") {
        return Err(err(first_no, "expected `cex finite` or `cex lasso`"));
    }
    let kind = header
        .next()
        .ok_or_else(|| err(first_no, "missing counterexample kind"))?;
    if header.next().is_some() {
        return Err(err(first_no, "trailing tokens after counterexample kind"));
    }

    let resolve = |line: usize, name: &str| {
        m.state_index(name)
            .ok_or_else(|| err(line, format!("unknown state `{name}`")))
    };

    let mut stem: Vec<usize> = Vec::new();
    let mut cycle: Vec<usize> = Vec::new();
    let mut in_cycle = false;
    for (no, content) in lines {
        let mut words = content.split_whitespace();
        match words.next() {
            Some("state") => {
                let name = words
                    .next()
                    .ok_or_else(|| err(no, "missing state name"))?;
                if words.next().is_some() {
                    return Err(err(no, "trailing tokens after state name"));
                }
                let idx = resolve(no, name)?;
                if in_cycle {
                    cycle.push(idx);
                } else {
                    stem.push(idx);
                }
            }
            Some("cycle") => {
                if kind != "lasso" {
                    return Err(err(no, "`cycle` marker in a finite counterexample"));
                }
                if in_cycle {
                    return Err(err(no, "duplicate `cycle` marker"));
                }
                if words.next().is_some() {
                    return Err(err(no, "trailing tokens after `cycle`"));
                }
                in_cycle = true;
            }
            Some(other) => return Err(err(no, format!("unknown directive `{other}`"))),
            None => unreachable!("blank lines are filtered"),
        }
    }

    match kind {
        "finite" => {
            if stem.is_empty() {
                return Err(err(first_no, "finite counterexample lists no states"));
            }
            Ok(Counterexample::Finite(FinitePath { states: stem }))
        }
        "lasso" => {
            if !in_cycle {
                return Err(err(first_no, "lasso counterexample has no `cycle` marker"));
            }
            if cycle.is_empty() {
                return Err(err(first_no, "lasso cycle lists no states"));
            }
            Ok(Counterexample::Lasso(LassoPath { stem, cycle }))
        }
        other => Err(err(first_no, format!("unknown counterexample kind `{other}`"))),
    }
}
