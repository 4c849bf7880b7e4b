//! Text formats for transition systems and Moore machines.
//!
//! Both formats are line-oriented and UTF-8; blank lines and `#`
//! comments are ignored, and directives after the header may appear in
//! any order.
//!
//! The `ts` format:
//!
//! ```text
//! system terminating | system nonterminating
//! props a b ...
//! state <id> { a c }      # label = propositions between the braces
//! init <id> ...
//! edge <src> <dst>
//! terminal <id> ...       # terminating systems only
//! ```
//!
//! The `moore` format:
//!
//! ```text
//! moore [terminating]
//! inputs i ...
//! outputs g ...
//! state <id> outputs { g ... }
//! init <id>
//! delta <id> { i ... } <id>   # one input valuation
//! delta <id> default <id>     # all valuations not covered explicitly
//! terminal <id> ...
//! ```
//!
//! Rendering is canonical (states in declaration order, edges and delta
//! rows sorted, wildcard rows expanded), so render-parse-render is the
//! identity.

use super::{MooreMachine, SystemError, TransitionSystem, TsKind};
use std::collections::HashMap;
use std::fmt::Write as _;

fn err(line: usize, message: impl Into<String>) -> SystemError {
    SystemError::Parse { line, message: message.into() }
}

/// Splits `rest` around one `{ ... }` group: tokens before, names
/// inside, tokens after.
fn split_braces(
    line_no: usize,
    rest: &str,
) -> Result<(Vec<&str>, Vec<&str>, Vec<&str>), SystemError> {
    let open = rest.find('{').ok_or_else(|| err(line_no, "missing `{`"))?;
    let close = rest.rfind('}').ok_or_else(|| err(line_no, "missing `}`"))?;
    if close < open {
        return Err(err(line_no, "mismatched braces"));
    }
    let before = rest[..open].split_whitespace().collect();
    let inside = rest[open + 1..close].split_whitespace().collect();
    let after = rest[close + 1..].split_whitespace().collect();
    Ok((before, inside, after))
}

fn mask_over(
    line_no: usize,
    sorted: &[String],
    names: &[&str],
    what: &str,
) -> Result<u64, SystemError> {
    let mut mask = 0u64;
    for name in names {
        let bit = sorted
            .binary_search_by(|p| p.as_str().cmp(name))
            .map_err(|_| err(line_no, format!("undeclared {what} `{name}`")))?;
        mask |= 1 << bit;
    }
    Ok(mask)
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { iter: text.lines().enumerate() }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, &'a str);

    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.iter.by_ref() {
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            };
            let line = line.trim();
            if !line.is_empty() {
                return Some((idx + 1, line));
            }
        }
        None
    }
}

fn parse_kind(line_no: usize, header: &str, leader: &str) -> Result<TsKind, SystemError> {
    let mut tokens = header.split_whitespace();
    let first = tokens.next().unwrap_or("");
    if first != leader {
        return Err(err(line_no, format!("expected `{leader}` header, found `{first}`")));
    }
    let kind = match tokens.next() {
        Some("terminating") => TsKind::Terminating,
        Some("nonterminating") => TsKind::NonTerminating,
        None if leader == "moore" => TsKind::NonTerminating,
        Some(other) => return Err(err(line_no, format!("unknown system kind `{other}`"))),
        None => return Err(err(line_no, "missing system kind")),
    };
    if tokens.next().is_some() {
        return Err(err(line_no, "trailing tokens after header"));
    }
    Ok(kind)
}

/// Parses the `ts` format into a validated [`TransitionSystem`].
pub fn parse_ts(text: &str) -> Result<TransitionSystem, SystemError> {
    let mut lines = Lines::new(text);
    let (header_line, header) =
        lines.next().ok_or_else(|| err(1, "empty transition system file"))?;
    let kind = parse_kind(header_line, header, "system")?;
    let mut props: Option<Vec<String>> = None;
    let mut states: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut inits: Vec<(usize, String)> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut terminals: Vec<(usize, String)> = Vec::new();
    for (line_no, line) in lines {
        let (directive, rest) = match line.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r.trim()),
            None => (line, ""),
        };
        match directive {
            "props" => {
                if props.is_some() {
                    return Err(err(line_no, "duplicate props line"));
                }
                props = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            "state" => {
                let (before, inside, after) = split_braces(line_no, rest)?;
                if before.len() != 1 || !after.is_empty() {
                    return Err(err(line_no, "state line must be `state <id> { ... }`"));
                }
                let label = inside.iter().map(|s| s.to_string()).collect();
                states.push((line_no, before[0].to_string(), label));
            }
            "init" => {
                for name in rest.split_whitespace() {
                    inits.push((line_no, name.to_string()));
                }
            }
            "edge" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                if tokens.len() != 2 {
                    return Err(err(line_no, "edge line must be `edge <src> <dst>`"));
                }
                edges.push((line_no, tokens[0].to_string(), tokens[1].to_string()));
            }
            "terminal" => {
                for name in rest.split_whitespace() {
                    terminals.push((line_no, name.to_string()));
                }
            }
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }
    let mut sorted_props = props.unwrap_or_default();
    sorted_props.sort();
    sorted_props.dedup();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for (line_no, name, _) in &states {
        if ids.insert(name.as_str(), ids.len()).is_some() {
            return Err(err(*line_no, format!("duplicate state `{name}`")));
        }
    }
    let lookup = |line_no: usize, name: &str| -> Result<usize, SystemError> {
        ids.get(name)
            .copied()
            .ok_or_else(|| err(line_no, format!("unknown state `{name}`")))
    };
    let names: Vec<String> = states.iter().map(|(_, n, _)| n.clone()).collect();
    let mut labels = Vec::with_capacity(states.len());
    for (line_no, _, label) in &states {
        let refs: Vec<&str> = label.iter().map(String::as_str).collect();
        labels.push(mask_over(*line_no, &sorted_props, &refs, "proposition")?);
    }
    let initial = inits
        .iter()
        .map(|(l, n)| lookup(*l, n))
        .collect::<Result<Vec<_>, _>>()?;
    let edge_ids = edges
        .iter()
        .map(|(l, s, d)| Ok((lookup(*l, s)?, lookup(*l, d)?)))
        .collect::<Result<Vec<_>, SystemError>>()?;
    let terminal_ids = terminals
        .iter()
        .map(|(l, n)| lookup(*l, n))
        .collect::<Result<Vec<_>, _>>()?;
    TransitionSystem::new(kind, sorted_props, names, labels, edge_ids, initial, terminal_ids)
}

fn brace_set(names: &[&str]) -> String {
    if names.is_empty() {
        "{ }".to_string()
    } else {
        format!("{{ {} }}", names.join(" "))
    }
}

fn mask_names(sorted: &[String], mask: u64) -> Vec<&str> {
    sorted
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, p)| p.as_str())
        .collect()
}

/// Renders a transition system in the canonical `ts` form.
pub fn render_ts(ts: &TransitionSystem) -> String {
    let mut out = String::new();
    let kind = match ts.kind() {
        TsKind::Terminating => "terminating",
        TsKind::NonTerminating => "nonterminating",
    };
    let _ = writeln!(out, "system {kind}");
    out.push_str("props");
    for p in ts.props() {
        out.push(' ');
        out.push_str(p);
    }
    out.push('\n');
    for (i, name) in ts.states().iter().enumerate() {
        let _ = writeln!(out, "state {name} {}", brace_set(&mask_names(ts.props(), ts.label(i))));
    }
    out.push_str("init");
    for &i in ts.initial() {
        out.push(' ');
        out.push_str(&ts.states()[i]);
    }
    out.push('\n');
    for &(src, dst) in ts.edges() {
        let _ = writeln!(out, "edge {} {}", ts.states()[src], ts.states()[dst]);
    }
    let terminals = ts.terminals();
    if !terminals.is_empty() {
        out.push_str("terminal");
        for i in terminals {
            out.push(' ');
            out.push_str(&ts.states()[i]);
        }
        out.push('\n');
    }
    out
}

/// Parses the `moore` format into a validated [`MooreMachine`].
pub fn parse_moore(text: &str) -> Result<MooreMachine, SystemError> {
    let mut lines = Lines::new(text);
    let (header_line, header) = lines.next().ok_or_else(|| err(1, "empty machine file"))?;
    let kind = parse_kind(header_line, header, "moore")?;
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut states: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut init: Option<(usize, String)> = None;
    // Explicit rows (state, valuation names) and wildcard rows.
    let mut rows: Vec<(usize, String, Vec<String>, String)> = Vec::new();
    let mut defaults: Vec<(usize, String, String)> = Vec::new();
    let mut terminals: Vec<(usize, String)> = Vec::new();
    for (line_no, line) in lines {
        let (directive, rest) = match line.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r.trim()),
            None => (line, ""),
        };
        match directive {
            "inputs" => {
                if inputs.is_some() {
                    return Err(err(line_no, "duplicate inputs line"));
                }
                inputs = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            "outputs" => {
                if outputs.is_some() {
                    return Err(err(line_no, "duplicate outputs line"));
                }
                outputs = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            "state" => {
                let (before, inside, after) = split_braces(line_no, rest)?;
                if before.len() != 2 || before[1] != "outputs" || !after.is_empty() {
                    return Err(err(line_no, "state line must be `state <id> outputs { ... }`"));
                }
                let outs = inside.iter().map(|s| s.to_string()).collect();
                states.push((line_no, before[0].to_string(), outs));
            }
            "init" => {
                if init.is_some() {
                    return Err(err(line_no, "duplicate init line"));
                }
                if rest.split_whitespace().count() != 1 {
                    return Err(err(line_no, "init line needs exactly one state"));
                }
                init = Some((line_no, rest.to_string()));
            }
            "delta" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                if tokens.len() == 3 && tokens[1] == "default" {
                    defaults.push((line_no, tokens[0].to_string(), tokens[2].to_string()));
                } else {
                    let (before, inside, after) = split_braces(line_no, rest)?;
                    if before.len() != 1 || after.len() != 1 {
                        return Err(err(
                            line_no,
                            "delta line must be `delta <id> { ... } <id>` or `delta <id> default <id>`",
                        ));
                    }
                    let val = inside.iter().map(|s| s.to_string()).collect();
                    rows.push((line_no, before[0].to_string(), val, after[0].to_string()));
                }
            }
            "terminal" => {
                for name in rest.split_whitespace() {
                    terminals.push((line_no, name.to_string()));
                }
            }
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }
    let mut inputs = inputs.unwrap_or_default();
    inputs.sort();
    inputs.dedup();
    if inputs.len() > 8 {
        return Err(SystemError::TooManyInputs(inputs.len()));
    }
    let mut outputs = outputs.unwrap_or_default();
    outputs.sort();
    outputs.dedup();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for (line_no, name, _) in &states {
        if ids.insert(name.as_str(), ids.len()).is_some() {
            return Err(err(*line_no, format!("duplicate state `{name}`")));
        }
    }
    let lookup = |line_no: usize, name: &str| -> Result<usize, SystemError> {
        ids.get(name)
            .copied()
            .ok_or_else(|| err(line_no, format!("unknown state `{name}`")))
    };
    let names: Vec<String> = states.iter().map(|(_, n, _)| n.clone()).collect();
    let mut output_fn = Vec::with_capacity(states.len());
    for (line_no, _, outs) in &states {
        let refs: Vec<&str> = outs.iter().map(String::as_str).collect();
        output_fn.push(mask_over(*line_no, &outputs, &refs, "output atom")?);
    }
    let (init_line, init_name) =
        init.ok_or_else(|| err(header_line, "missing init line"))?;
    let initial = lookup(init_line, &init_name)?;
    let val_count = 1usize << inputs.len();
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; val_count]; states.len()];
    for (line_no, src, val_names, dst) in &rows {
        let refs: Vec<&str> = val_names.iter().map(String::as_str).collect();
        let val = mask_over(*line_no, &inputs, &refs, "input atom")? as usize;
        let (src, dst) = (lookup(*line_no, src)?, lookup(*line_no, dst)?);
        if delta[src][val].is_some() {
            return Err(err(
                *line_no,
                format!("overlapping delta rows for `{}` on {}", names[src], brace_set(&refs)),
            ));
        }
        delta[src][val] = Some(dst);
    }
    let mut default_of: Vec<Option<usize>> = vec![None; states.len()];
    for (line_no, src, dst) in &defaults {
        let (src, dst) = (lookup(*line_no, src)?, lookup(*line_no, dst)?);
        if default_of[src].is_some() {
            return Err(err(*line_no, format!("overlapping default rows for `{}`", names[src])));
        }
        default_of[src] = Some(dst);
    }
    let mut complete = Vec::with_capacity(states.len());
    for (s, row) in delta.into_iter().enumerate() {
        let mut out_row = Vec::with_capacity(val_count);
        for (val, slot) in row.into_iter().enumerate() {
            match slot.or(default_of[s]) {
                Some(dst) => out_row.push(dst),
                None => {
                    return Err(SystemError::Invalid(format!(
                        "missing delta row for `{}` on {}",
                        names[s],
                        brace_set(&mask_names(&inputs, val as u64))
                    )))
                }
            }
        }
        complete.push(out_row);
    }
    let terminal_ids = terminals
        .iter()
        .map(|(l, n)| lookup(*l, n))
        .collect::<Result<Vec<_>, _>>()?;
    MooreMachine::new(kind, inputs, outputs, names, initial, output_fn, complete, terminal_ids)
}

/// Renders a Moore machine in the canonical `moore` form; wildcard rows
/// are expanded.
pub fn render_moore(m: &MooreMachine) -> String {
    let mut out = String::new();
    match m.kind() {
        TsKind::Terminating => out.push_str("moore terminating\n"),
        TsKind::NonTerminating => out.push_str("moore\n"),
    }
    out.push_str("inputs");
    for i in m.inputs() {
        out.push(' ');
        out.push_str(i);
    }
    out.push('\n');
    out.push_str("outputs");
    for o in m.outputs() {
        out.push(' ');
        out.push_str(o);
    }
    out.push('\n');
    for (q, name) in m.states().iter().enumerate() {
        let _ = writeln!(
            out,
            "state {name} outputs {}",
            brace_set(&mask_names(m.outputs(), m.output_of(q)))
        );
    }
    let _ = writeln!(out, "init {}", m.states()[m.initial()]);
    let val_count = 1u64 << m.inputs().len();
    for (q, name) in m.states().iter().enumerate() {
        for val in 0..val_count {
            let _ = writeln!(
                out,
                "delta {name} {} {}",
                brace_set(&mask_names(m.inputs(), val)),
                m.states()[m.step(q, val)]
            );
        }
    }
    let terminals: Vec<usize> =
        (0..m.states().len()).filter(|&q| m.is_terminal(q)).collect();
    if !terminals.is_empty() {
        out.push_str("terminal");
        for q in terminals {
            out.push(' ');
            out.push_str(&m.states()[q]);
        }
        out.push('\n');
    }
    out
}
