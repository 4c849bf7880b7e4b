//! Text format for Turing machine specifications.
//!
//! The `tm` format is line-oriented and UTF-8; blank lines and `#`
//! comments are ignored, and directives may appear in any order:
//!
//! ```text
//! states q0 q1 qacc
//! start q0
//! accept qacc ...         # may be empty
//! alphabet _ 0 1          # `_` is the blank symbol
//! c 1                     # space coefficient, tape = 2^{c·n} cells
//! rule <q> <sym> <q'> <sym'> L|R
//! ```
//!
//! Rendering is canonical (rules sorted by state then symbol), so
//! render-parse-render is the identity.

use super::{Dir, HardnessError, TuringMachineSpec};
use std::collections::BTreeMap;

fn err(line: usize, message: impl Into<String>) -> HardnessError {
    HardnessError::Parse { line, message: message.into() }
}

/// Parses the `tm` format and validates the machine.
pub fn parse_tm(text: &str) -> Result<TuringMachineSpec, HardnessError> {
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut start: Option<(usize, String)> = None;
    let mut accept: Option<(usize, Vec<String>)> = None;
    let mut c: Option<(usize, usize)> = None;
    let mut rule_lines: Vec<(usize, Vec<String>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let mut tokens = line.split_whitespace().map(str::to_string);
        let Some(head) = tokens.next() else { continue };
        let rest: Vec<String> = tokens.collect();
        let set_once = |slot: &mut Option<(usize, Vec<String>)>, what: &str| {
            if slot.is_some() {
                return Err(err(line_no, format!("duplicate `{what}` directive")));
            }
            *slot = Some((line_no, rest.clone()));
            Ok(())
        };
        match head.as_str() {
            "states" => set_once(&mut states, "states")?,
            "alphabet" => set_once(&mut alphabet, "alphabet")?,
            "accept" => set_once(&mut accept, "accept")?,
            "start" => {
                if start.is_some() {
                    return Err(err(line_no, "duplicate `start` directive"));
                }
                if rest.len() != 1 {
                    return Err(err(line_no, "`start` takes exactly one state"));
                }
                start = Some((line_no, rest[0].clone()));
            }
            "c" => {
                if c.is_some() {
                    return Err(err(line_no, "duplicate `c` directive"));
                }
                if rest.len() != 1 {
                    return Err(err(line_no, "`c` takes exactly one integer"));
                }
                let value = rest[0]
                    .parse::<usize>()
                    .map_err(|_| err(line_no, format!("bad integer `{}`", rest[0])))?;
                c = Some((line_no, value));
            }
            "rule" => rule_lines.push((line_no, rest)),
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }

    let (_, state_names) = states.ok_or_else(|| err(0, "missing `states` directive"))?;
    let (_, symbol_names) = alphabet.ok_or_else(|| err(0, "missing `alphabet` directive"))?;
    let (start_line, start_name) = start.ok_or_else(|| err(0, "missing `start` directive"))?;
    let (accept_line, accept_names) = accept.ok_or_else(|| err(0, "missing `accept` directive"))?;
    let (_, c) = c.ok_or_else(|| err(0, "missing `c` directive"))?;

    let state_of = |line: usize, name: &str| {
        state_names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| err(line, format!("unknown state `{name}`")))
    };
    let symbol_of = |line: usize, name: &str| {
        symbol_names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| err(line, format!("unknown symbol `{name}`")))
    };

    let blank = symbol_names
        .iter()
        .position(|s| s == "_")
        .ok_or_else(|| err(0, "alphabet must contain the blank symbol `_`"))?;
    let start = state_of(start_line, &start_name)?;
    let mut accept = vec![false; state_names.len()];
    for name in &accept_names {
        accept[state_of(accept_line, name)?] = true;
    }

    let mut rules = BTreeMap::new();
    for (line, tokens) in rule_lines {
        if tokens.len() != 5 {
            return Err(err(line, "`rule` takes state symbol state symbol L|R"));
        }
        let q = state_of(line, &tokens[0])?;
        let g = symbol_of(line, &tokens[1])?;
        let q2 = state_of(line, &tokens[2])?;
        let g2 = symbol_of(line, &tokens[3])?;
        let dir = match tokens[4].as_str() {
            "L" => Dir::Left,
            "R" => Dir::Right,
            other => return Err(err(line, format!("bad direction `{other}`"))),
        };
        if rules.insert((q, g), (q2, g2, dir)).is_some() {
            return Err(err(
                line,
                format!("duplicate rule for `{}` reading `{}`", tokens[0], tokens[1]),
            ));
        }
    }

    let tm = TuringMachineSpec {
        states: state_names,
        start,
        accept,
        symbols: symbol_names,
        blank,
        rules,
        c,
    };
    tm.validate()?;
    Ok(tm)
}

/// Renders a machine in the `tm` format.
pub fn render_tm(tm: &TuringMachineSpec) -> String {
    let mut out = String::new();
    out.push_str("states");
    for s in &tm.states {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    out.push_str(&format!("start {}\n", tm.states[tm.start]));
    out.push_str("accept");
    for (q, s) in tm.states.iter().enumerate() {
        if tm.accept[q] {
            out.push(' ');
            out.push_str(s);
        }
    }
    out.push('\n');
    out.push_str("alphabet");
    for s in &tm.symbols {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    out.push_str(&format!("c {}\n", tm.c));
    for (&(q, g), &(q2, g2, dir)) in &tm.rules {
        out.push_str(&format!(
            "rule {} {} {} {} {}\n",
            tm.states[q],
            tm.symbols[g],
            tm.states[q2],
            tm.symbols[g2],
            match dir {
                Dir::Left => "L",
                Dir::Right => "R",
            }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const OSCILLATOR: &str = "\
# bounces between the first two cells forever
states q0 q1
start q0
accept
alphabet _ 0
c 1
rule q0 _ q1 _ R
rule q0 0 q1 0 R
rule q1 _ q0 _ L
rule q1 0 q0 0 L
";

    #[test]
    fn roundtrip_is_identity() {
        let tm = parse_tm(OSCILLATOR).unwrap();
        let rendered = render_tm(&tm);
        let again = parse_tm(&rendered).unwrap();
        assert_eq!(tm, again);
        assert_eq!(rendered, render_tm(&again));
    }

    #[test]
    fn directives_are_order_insensitive() {
        let shuffled = "\
rule q0 _ q1 _ R
c 1
rule q0 0 q1 0 R
alphabet _ 0
rule q1 _ q0 _ L
start q0
rule q1 0 q0 0 L
accept
states q0 q1
";
        assert_eq!(parse_tm(shuffled).unwrap(), parse_tm(OSCILLATOR).unwrap());
    }

    #[test]
    fn missing_directive_is_reported() {
        let text = OSCILLATOR.replace("c 1\n", "");
        let e = parse_tm(&text).unwrap_err();
        assert!(e.to_string().contains("missing `c`"), "{e}");
    }

    #[test]
    fn duplicate_rule_is_reported() {
        let text = format!("{OSCILLATOR}rule q0 _ q0 _ L\n");
        let e = parse_tm(&text).unwrap_err();
        assert!(e.to_string().contains("duplicate rule"), "{e}");
    }

    #[test]
    fn unknown_symbol_is_reported_with_its_line() {
        let text = format!("{OSCILLATOR}rule q0 2 q0 2 L\n");
        match parse_tm(&text).unwrap_err() {
            HardnessError::Parse { line, message } => {
                assert_eq!(line, 11);
                assert!(message.contains("unknown symbol `2`"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn partial_rule_tables_are_rejected() {
        let text = OSCILLATOR.replace("rule q1 0 q0 0 L\n", "");
        assert!(matches!(
            parse_tm(&text).unwrap_err(),
            HardnessError::InvalidMachine(_)
        ));
    }

    #[test]
    fn bad_direction_is_reported() {
        let text = OSCILLATOR.replace("rule q1 0 q0 0 L", "rule q1 0 q0 0 S");
        let e = parse_tm(&text).unwrap_err();
        assert!(e.to_string().contains("bad direction `S`"), "{e}");
    }
}
