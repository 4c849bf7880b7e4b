//! Text serialization for automata.
//!
//! The `aut` format is line-oriented; blank lines and `#` comments are
//! ignored:
//!
//! ```text
//! nfa | dfa | dba        # kind, first directive
//! props a b              # sorted proposition names, possibly none
//! state <name> [accepting]
//! init <name>            # one line per initial state
//! edge <src> {<props>} <dst>
//! ```
//!
//! The letter of an edge is the set of propositions between the braces.
//! For `dfa` and `dba` kinds exactly one `init` line is required and the
//! edges must form a complete deterministic transition function.
//! Rendering is canonical (states in index order, edges sorted by
//! source, letter, target), so render-parse-render is the identity.

use super::{AutomatonError, Dfa, Nfa, SafetyDba};
use std::fmt::Write as _;

/// Any of the three automaton kinds, as stored in an `aut` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutAutomaton {
    Nfa(Nfa),
    Dfa(Dfa),
    Dba(SafetyDba),
}

impl AutAutomaton {
    pub fn kind(&self) -> &'static str {
        match self {
            AutAutomaton::Nfa(_) => "nfa",
            AutAutomaton::Dfa(_) => "dfa",
            AutAutomaton::Dba(_) => "dba",
        }
    }

    pub fn state_count(&self) -> usize {
        match self {
            AutAutomaton::Nfa(a) => a.state_count(),
            AutAutomaton::Dfa(a) => a.state_count(),
            AutAutomaton::Dba(a) => a.state_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct AutParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> AutParseError {
    AutParseError { line, message: message.into() }
}

pub(crate) fn letter_label(props: &[String], mask: u64) -> String {
    let mut out = String::from("{");
    let mut first = true;
    for (i, p) in props.iter().enumerate() {
        if mask & (1 << i) != 0 {
            if !first {
                out.push(' ');
            }
            out.push_str(p);
            first = false;
        }
    }
    out.push('}');
    out
}

fn render_common(
    out: &mut String,
    kind: &str,
    props: &[String],
    states: &[String],
    accepting: &[bool],
    initial: &[usize],
    edges: impl Iterator<Item = (usize, u64, usize)>,
) {
    out.push_str(kind);
    out.push('\n');
    out.push_str("props");
    for p in props {
        out.push(' ');
        out.push_str(p);
    }
    out.push('\n');
    for (i, name) in states.iter().enumerate() {
        if accepting[i] {
            let _ = writeln!(out, "state {name} accepting");
        } else {
            let _ = writeln!(out, "state {name}");
        }
    }
    for &i in initial {
        let _ = writeln!(out, "init {}", states[i]);
    }
    for (src, letter, dst) in edges {
        let _ = writeln!(
            out,
            "edge {} {} {}",
            states[src],
            letter_label(props, letter),
            states[dst]
        );
    }
}

fn delta_edges(delta: &[Vec<usize>]) -> impl Iterator<Item = (usize, u64, usize)> + '_ {
    delta.iter().enumerate().flat_map(|(src, row)| {
        row.iter().enumerate().map(move |(letter, &dst)| (src, letter as u64, dst))
    })
}

/// Renders an automaton in the canonical `aut` form.
pub fn render_aut(a: &AutAutomaton) -> String {
    let mut out = String::new();
    match a {
        AutAutomaton::Nfa(a) => render_common(
            &mut out,
            "nfa",
            a.props(),
            a.states(),
            a.accepting(),
            a.initial(),
            a.transitions().iter().copied(),
        ),
        AutAutomaton::Dfa(a) => render_common(
            &mut out,
            "dfa",
            a.props(),
            a.states(),
            a.accepting(),
            &[a.initial()],
            delta_edges(&a.delta),
        ),
        AutAutomaton::Dba(a) => render_common(
            &mut out,
            "dba",
            a.props(),
            a.states(),
            a.accepting(),
            &[a.initial()],
            delta_edges(&a.delta),
        ),
    }
    out
}

struct RawAut {
    kind: String,
    kind_line: usize,
    props: Option<(usize, Vec<String>)>,
    states: Vec<(usize, String, bool)>,
    inits: Vec<(usize, String)>,
    edges: Vec<(usize, String, Vec<String>, String)>,
}

fn split_edge_line(line_no: usize, rest: &str) -> Result<(String, Vec<String>, String), AutParseError> {
    let open = rest
        .find('{')
        .ok_or_else(|| err(line_no, "edge line is missing `{`"))?;
    let close = rest
        .rfind('}')
        .ok_or_else(|| err(line_no, "edge line is missing `}`"))?;
    if close < open {
        return Err(err(line_no, "mismatched braces in edge line"));
    }
    let src = rest[..open].trim();
    let dst = rest[close + 1..].trim();
    if src.is_empty() || dst.is_empty() {
        return Err(err(line_no, "edge line needs a source and a target state"));
    }
    if src.split_whitespace().count() != 1 || dst.split_whitespace().count() != 1 {
        return Err(err(line_no, "edge line needs exactly one source and one target"));
    }
    let letter_props = rest[open + 1..close]
        .split_whitespace()
        .map(str::to_string)
        .collect();
    Ok((src.to_string(), letter_props, dst.to_string()))
}

fn scan_aut(text: &str) -> Result<RawAut, AutParseError> {
    let mut raw: Option<RawAut> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some(raw) = raw.as_mut() else {
            match line {
                "nfa" | "dfa" | "dba" => {
                    raw = Some(RawAut {
                        kind: line.to_string(),
                        kind_line: line_no,
                        props: None,
                        states: Vec::new(),
                        inits: Vec::new(),
                        edges: Vec::new(),
                    });
                }
                other => {
                    return Err(err(
                        line_no,
                        format!("expected automaton kind (nfa, dfa or dba), found `{other}`"),
                    ))
                }
            }
            continue;
        };
        let (directive, rest) = match line.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r.trim()),
            None => (line, ""),
        };
        match directive {
            "props" => {
                if raw.props.is_some() {
                    return Err(err(line_no, "duplicate props line"));
                }
                let names = rest.split_whitespace().map(str::to_string).collect();
                raw.props = Some((line_no, names));
            }
            "state" => {
                let mut parts = rest.split_whitespace();
                let name = parts
                    .next()
                    .ok_or_else(|| err(line_no, "state line needs a name"))?;
                let accepting = match parts.next() {
                    None => false,
                    Some("accepting") => true,
                    Some(other) => {
                        return Err(err(line_no, format!("unexpected token `{other}`")))
                    }
                };
                if parts.next().is_some() {
                    return Err(err(line_no, "trailing tokens after state line"));
                }
                raw.states.push((line_no, name.to_string(), accepting));
            }
            "init" => {
                if rest.split_whitespace().count() != 1 {
                    return Err(err(line_no, "init line needs exactly one state name"));
                }
                raw.inits.push((line_no, rest.to_string()));
            }
            "edge" => {
                let (src, letter, dst) = split_edge_line(line_no, rest)?;
                raw.edges.push((line_no, src, letter, dst));
            }
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }
    raw.ok_or_else(|| err(1, "empty automaton file"))
}

/// Parses the `aut` format.
pub fn parse_aut(text: &str) -> Result<AutAutomaton, AutParseError> {
    let raw = scan_aut(text)?;
    let (props_line, props) = raw
        .props
        .ok_or_else(|| err(raw.kind_line, "missing props line"))?;
    {
        let mut sorted = props.clone();
        sorted.sort();
        sorted.dedup();
        if sorted != props {
            return Err(err(props_line, "props must be sorted and duplicate-free"));
        }
        if props.len() > 8 {
            return Err(err(props_line, "automata support at most 8 propositions"));
        }
    }
    let mut states = Vec::new();
    let mut accepting = Vec::new();
    let mut state_ids = std::collections::HashMap::new();
    for (line_no, name, acc) in &raw.states {
        if state_ids.insert(name.clone(), states.len()).is_some() {
            return Err(err(*line_no, format!("duplicate state `{name}`")));
        }
        states.push(name.clone());
        accepting.push(*acc);
    }
    let lookup = |line_no: usize, name: &str| -> Result<usize, AutParseError> {
        state_ids
            .get(name)
            .copied()
            .ok_or_else(|| err(line_no, format!("unknown state `{name}`")))
    };
    let mut inits = Vec::new();
    for (line_no, name) in &raw.inits {
        inits.push(lookup(*line_no, name)?);
    }
    let mut edges = Vec::new();
    for (line_no, src, letter_props, dst) in &raw.edges {
        let mut mask = 0u64;
        for p in letter_props {
            let bit = props
                .binary_search(p)
                .map_err(|_| err(*line_no, format!("undeclared proposition `{p}`")))?;
            mask |= 1 << bit;
        }
        edges.push((*line_no, lookup(*line_no, src)?, mask, lookup(*line_no, dst)?));
    }
    let into_parse_err = |line: usize, e: AutomatonError| err(line, e.to_string());
    match raw.kind.as_str() {
        "nfa" => {
            let transitions = edges.iter().map(|&(_, s, m, d)| (s, m, d)).collect();
            let nfa = Nfa::new(props, states, inits, accepting, transitions)
                .map_err(|e| into_parse_err(raw.kind_line, e))?;
            Ok(AutAutomaton::Nfa(nfa))
        }
        kind => {
            if inits.len() != 1 {
                return Err(err(
                    raw.kind_line,
                    format!("{kind} requires exactly one init line, found {}", inits.len()),
                ));
            }
            let letter_count = 1usize << props.len();
            let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; letter_count]; states.len()];
            for &(line_no, src, mask, dst) in &edges {
                let slot = &mut delta[src][mask as usize];
                if slot.is_some() {
                    return Err(err(
                        line_no,
                        format!(
                            "duplicate transition from `{}` on {}",
                            states[src],
                            letter_label(&props, mask)
                        ),
                    ));
                }
                *slot = Some(dst);
            }
            let mut complete = Vec::with_capacity(states.len());
            for (s, row) in delta.into_iter().enumerate() {
                let mut out_row = Vec::with_capacity(letter_count);
                for (m, slot) in row.into_iter().enumerate() {
                    out_row.push(slot.ok_or_else(|| {
                        err(
                            raw.kind_line,
                            format!(
                                "missing transition from `{}` on {}",
                                states[s],
                                letter_label(&props, m as u64)
                            ),
                        )
                    })?);
                }
                complete.push(out_row);
            }
            if kind == "dfa" {
                let dfa = Dfa::new(props, states, inits[0], accepting, complete)
                    .map_err(|e| into_parse_err(raw.kind_line, e))?;
                Ok(AutAutomaton::Dfa(dfa))
            } else {
                let dba = SafetyDba::new(props, states, inits[0], accepting, complete)
                    .map_err(|e| into_parse_err(raw.kind_line, e))?;
                Ok(AutAutomaton::Dba(dba))
            }
        }
    }
}

fn dot_common(
    kind: &str,
    props: &[String],
    states: &[String],
    accepting: &[bool],
    initial: &[usize],
    edges: impl Iterator<Item = (usize, u64, usize)>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {kind} {{");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for (i, name) in states.iter().enumerate() {
        if accepting[i] {
            let _ = writeln!(out, "  \"{name}\" [shape=doublecircle];");
        } else {
            let _ = writeln!(out, "  \"{name}\";");
        }
    }
    for (k, &i) in initial.iter().enumerate() {
        let _ = writeln!(out, "  \"__init{k}\" [shape=point];");
        let _ = writeln!(out, "  \"__init{k}\" -> \"{}\";", states[i]);
    }
    let mut grouped: std::collections::BTreeMap<(usize, usize), Vec<u64>> =
        std::collections::BTreeMap::new();
    for (src, letter, dst) in edges {
        grouped.entry((src, dst)).or_default().push(letter);
    }
    for ((src, dst), mut letters) in grouped {
        letters.sort_unstable();
        letters.dedup();
        let label = letters
            .iter()
            .map(|&m| letter_label(props, m))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{label}\"];",
            states[src], states[dst]
        );
    }
    out.push_str("}\n");
    out
}

/// Renders an automaton as a Graphviz digraph. Accepting states get a
/// double circle; point-shaped pseudo-nodes mark initial states. Output
/// order is deterministic.
pub fn to_dot(a: &AutAutomaton) -> String {
    match a {
        AutAutomaton::Nfa(a) => dot_common(
            "nfa",
            a.props(),
            a.states(),
            a.accepting(),
            a.initial(),
            a.transitions().iter().copied(),
        ),
        AutAutomaton::Dfa(a) => dot_common(
            "dfa",
            a.props(),
            a.states(),
            a.accepting(),
            &[a.initial()],
            delta_edges(&a.delta),
        ),
        AutAutomaton::Dba(a) => dot_common(
            "dba",
            a.props(),
            a.states(),
            a.accepting(),
            &[a.initial()],
            delta_edges(&a.delta),
        ),
    }
}
