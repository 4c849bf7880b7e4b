//! Formula rendering. Output re-parses to the same syntax tree, with
//! parentheses inserted only where precedence or associativity demands.

use super::{Dialect, Formula};
use std::fmt;

/// Binding strength; higher binds tighter.
fn level(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        True | False | Atom(_) => 7,
        Not(_) | Next(_) | WeakNext(_) | Eventually(_) | Globally(_) => 6,
        Until(..) | Release(..) | WeakUntil(..) => 5,
        And(..) => 4,
        Or(..) => 3,
        Implies(..) => 2,
        Iff(..) => 1,
    }
}

fn write_child(out: &mut String, child: &Formula, parens: bool) {
    if parens {
        out.push('(');
        write_formula(out, child);
        out.push(')');
    } else {
        write_formula(out, child);
    }
}

/// Right-associative infix operator: the left child needs parentheses
/// when it binds at the same level or looser; the right child only when
/// strictly looser.
fn write_right_assoc(out: &mut String, f: &Formula, a: &Formula, op: &str, b: &Formula) {
    let lv = level(f);
    write_child(out, a, level(a) <= lv);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_child(out, b, level(b) < lv);
}

/// Left-associative infix operator: mirror image of the right-associative
/// case.
fn write_left_assoc(out: &mut String, f: &Formula, a: &Formula, op: &str, b: &Formula) {
    let lv = level(f);
    write_child(out, a, level(a) < lv);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_child(out, b, level(b) <= lv);
}

fn write_unary(out: &mut String, f: &Formula, op: &str, spaced: bool, child: &Formula) {
    out.push_str(op);
    if spaced {
        out.push(' ');
    }
    write_child(out, child, level(child) < level(f));
}

fn write_formula(out: &mut String, f: &Formula) {
    use Formula::*;
    match f {
        True => out.push_str("true"),
        False => out.push_str("false"),
        Atom(name) => out.push_str(name),
        Not(a) => write_unary(out, f, "!", false, a),
        Next(a) => write_unary(out, f, "X", true, a),
        WeakNext(a) => write_unary(out, f, "N", true, a),
        Eventually(a) => write_unary(out, f, "F", true, a),
        Globally(a) => write_unary(out, f, "G", true, a),
        And(a, b) => write_left_assoc(out, f, a, "&", b),
        Or(a, b) => write_left_assoc(out, f, a, "|", b),
        Implies(a, b) => write_right_assoc(out, f, a, "->", b),
        Iff(a, b) => write_right_assoc(out, f, a, "<->", b),
        Until(a, b) => write_right_assoc(out, f, a, "U", b),
        Release(a, b) => write_right_assoc(out, f, a, "R", b),
        WeakUntil(a, b) => write_right_assoc(out, f, a, "W", b),
    }
}

/// Renders a formula to concrete syntax. Both dialects share one
/// grammar, so the dialect does not change the output text.
pub fn render_formula(f: &Formula, _dialect: Dialect) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self, Dialect::Ltlf))
    }
}
