//! Direct semantic evaluation: LTLf over finite traces and an LTL
//! fragment over ultimately periodic words.

use super::{Formula, Lasso, Trace};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("atom `{0}` is not declared by the trace")]
    UndeclaredAtom(String),
    #[error("operator `{0}` is not supported on infinite words here")]
    UnsupportedOnWords(String),
}

/// Distinct subformulas in bottom-up order (children before parents),
/// with an index map.
fn postorder(f: &Formula) -> (Vec<&Formula>, HashMap<&Formula, usize>) {
    fn walk<'a>(
        f: &'a Formula,
        order: &mut Vec<&'a Formula>,
        index: &mut HashMap<&'a Formula, usize>,
    ) {
        if index.contains_key(f) {
            return;
        }
        for c in f.children() {
            walk(c, order, index);
        }
        index.insert(f, order.len());
        order.push(f);
    }
    let mut order = Vec::new();
    let mut index = HashMap::new();
    walk(f, &mut order, &mut index);
    (order, index)
}

/// LTLf satisfaction `t, 0 |= f` over a finite non-empty trace.
///
/// Works bottom-up through a table of truth values per distinct
/// subformula and position, so the cost is `O(size(f) * len(t))`. `X`
/// fails and `N` holds at the last position; `p W q` abbreviates
/// `(p U q) | G p`.
pub fn evaluate(f: &Formula, t: &Trace) -> Result<bool, EvalError> {
    for atom in f.atoms() {
        if t.prop_index(&atom).is_none() {
            return Err(EvalError::UndeclaredAtom(atom));
        }
    }
    let n = t.len();
    let (order, index) = postorder(f);
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(order.len());
    for sub in &order {
        let row = match sub {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Atom(name) => {
                let idx = t.prop_index(name).expect("atom checked above");
                (0..n).map(|i| t.holds(i, idx)).collect()
            }
            Formula::Not(a) => rows[index[&**a]].iter().map(|v| !v).collect(),
            Formula::And(a, b) => {
                binop(&rows[index[&**a]], &rows[index[&**b]], |x, y| x && y)
            }
            Formula::Or(a, b) => binop(&rows[index[&**a]], &rows[index[&**b]], |x, y| x || y),
            Formula::Implies(a, b) => {
                binop(&rows[index[&**a]], &rows[index[&**b]], |x, y| !x || y)
            }
            Formula::Iff(a, b) => binop(&rows[index[&**a]], &rows[index[&**b]], |x, y| x == y),
            Formula::Next(a) => {
                let child = &rows[index[&**a]];
                (0..n).map(|i| i + 1 < n && child[i + 1]).collect()
            }
            Formula::WeakNext(a) => {
                let child = &rows[index[&**a]];
                (0..n).map(|i| i + 1 >= n || child[i + 1]).collect()
            }
            Formula::Until(a, b) => {
                let (pa, pb) = (&rows[index[&**a]], &rows[index[&**b]]);
                backward(n, |i, next| pb[i] || (pa[i] && next.unwrap_or(false)))
            }
            Formula::Release(a, b) => {
                let (pa, pb) = (&rows[index[&**a]], &rows[index[&**b]]);
                backward(n, |i, next| pb[i] && (pa[i] || next.unwrap_or(true)))
            }
            Formula::WeakUntil(a, b) => {
                let (pa, pb) = (&rows[index[&**a]], &rows[index[&**b]]);
                // p W q == (p U q) | G p; at the last position this is
                // q | p.
                backward(n, |i, next| pb[i] || (pa[i] && next.unwrap_or(true)))
            }
            Formula::Eventually(a) => {
                let child = &rows[index[&**a]];
                backward(n, |i, next| child[i] || next.unwrap_or(false))
            }
            Formula::Globally(a) => {
                let child = &rows[index[&**a]];
                backward(n, |i, next| child[i] && next.unwrap_or(true))
            }
        };
        rows.push(row);
    }
    Ok(rows[index[f]][0])
}

fn binop(a: &[bool], b: &[bool], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

/// Computes a row right to left; `next` is `None` at the last position.
fn backward(n: usize, step: impl Fn(usize, Option<bool>) -> bool) -> Vec<bool> {
    let mut row = vec![false; n];
    for i in (0..n).rev() {
        let next = if i + 1 < n { Some(row[i + 1]) } else { None };
        row[i] = step(i, next);
    }
    row
}

/// LTL satisfaction of `stem . cycle^omega` at position 0, for formulas
/// built from propositional parts, `&`, `|`, `X`, `F`, `G` and `U`
/// (negation only over propositional subformulas).
///
/// The word is unrolled to `stem` plus two copies of `cycle`; the
/// successor of the final position loops back to the start of the second
/// copy. Positional truth values on an ultimately periodic word are
/// periodic with the cycle length, so evaluation on this finite loop
/// structure is exact. `F`, `G` and `U` values are computed by a forward
/// scan with a visited guard.
pub fn evaluate_ltl_on_lasso(f: &Formula, w: &Lasso) -> Result<bool, EvalError> {
    check_word_fragment(f)?;
    for atom in f.atoms() {
        if w.prop_index(&atom).is_none() {
            return Err(EvalError::UndeclaredAtom(atom));
        }
    }
    let stem_len = w.stem().len();
    let cycle_len = w.cycle().len();
    let total = stem_len + 2 * cycle_len;
    let letters: Vec<u64> = (0..total).map(|i| w.letter(i)).collect();
    let succ = |i: usize| if i + 1 < total { i + 1 } else { stem_len + cycle_len };

    let (order, index) = postorder(f);
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(order.len());
    for sub in &order {
        let row: Vec<bool> = match sub {
            Formula::True => vec![true; total],
            Formula::False => vec![false; total],
            Formula::Atom(name) => {
                let idx = w.prop_index(name).expect("atom checked above");
                letters.iter().map(|&m| m & (1 << idx) != 0).collect()
            }
            Formula::Not(a) => rows[index[&**a]].iter().map(|v| !v).collect(),
            Formula::And(a, b) => {
                binop(&rows[index[&**a]], &rows[index[&**b]], |x, y| x && y)
            }
            Formula::Or(a, b) => binop(&rows[index[&**a]], &rows[index[&**b]], |x, y| x || y),
            Formula::Next(a) => {
                let child = &rows[index[&**a]];
                (0..total).map(|i| child[succ(i)]).collect()
            }
            Formula::Eventually(a) => {
                let child = &rows[index[&**a]];
                scan(total, succ, |i| if child[i] { Some(true) } else { None }, false)
            }
            Formula::Globally(a) => {
                let child = &rows[index[&**a]];
                scan(total, succ, |i| if !child[i] { Some(false) } else { None }, true)
            }
            Formula::Until(a, b) => {
                let (pa, pb) = (&rows[index[&**a]], &rows[index[&**b]]);
                scan(
                    total,
                    succ,
                    |i| {
                        if pb[i] {
                            Some(true)
                        } else if !pa[i] {
                            Some(false)
                        } else {
                            None
                        }
                    },
                    false,
                )
            }
            other => {
                // check_word_fragment admits Not only over propositional
                // subformulas, which the Not arm above covers.
                unreachable!("rejected by fragment check: {other}")
            }
        };
        rows.push(row);
    }
    Ok(rows[index[f]][0])
}

/// Forward scan from each position: follow successors until `decide`
/// fires; completing a loop without a decision resolves to `on_loop`.
/// `F` and `U` pass false (no witness anywhere around the loop), `G`
/// passes true (no violation anywhere around the loop).
fn scan(
    total: usize,
    succ: impl Fn(usize) -> usize,
    decide: impl Fn(usize) -> Option<bool>,
    on_loop: bool,
) -> Vec<bool> {
    (0..total)
        .map(|start| {
            let mut visited = vec![false; total];
            let mut i = start;
            loop {
                if let Some(v) = decide(i) {
                    return v;
                }
                if visited[i] {
                    return on_loop;
                }
                visited[i] = true;
                i = succ(i);
            }
        })
        .collect()
}

fn check_word_fragment(f: &Formula) -> Result<(), EvalError> {
    use Formula::*;
    if f.is_propositional() {
        return Ok(());
    }
    match f {
        Not(_) => Err(EvalError::UnsupportedOnWords(
            "! above a temporal operator".into(),
        )),
        And(a, b) | Or(a, b) | Until(a, b) => {
            check_word_fragment(a)?;
            check_word_fragment(b)
        }
        Next(a) | Eventually(a) | Globally(a) => check_word_fragment(a),
        WeakNext(_) => Err(EvalError::UnsupportedOnWords("N".into())),
        Release(..) => Err(EvalError::UnsupportedOnWords("R".into())),
        WeakUntil(..) => Err(EvalError::UnsupportedOnWords("W".into())),
        Implies(..) => Err(EvalError::UnsupportedOnWords("->".into())),
        Iff(..) => Err(EvalError::UnsupportedOnWords("<->".into())),
        True | False | Atom(_) => Ok(()),
    }
}
