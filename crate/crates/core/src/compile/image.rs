//! Direct safety-automaton construction for translated fragment
//! formulas.
//!
//! The image grammar is: propositional formulas, conjunction, next and
//! globally, interpreted over infinite words. Such a formula is a
//! safety property with a linear-size deterministic automaton: a state
//! is the set of obligations that still constrain the future, and each
//! letter either discharges the propositional parts now or dooms the
//! run.

use super::{checked_props, is_basic_prop, own_atoms, CompileError};
use crate::automata::{AutomatonError, SafetyDba};
use crate::compile::progression::FormulaTable;
use crate::formula::Formula;
use std::collections::{BTreeSet, HashMap};

/// Membership in the image grammar.
fn is_image(f: &Formula) -> bool {
    if is_basic_prop(f) {
        return true;
    }
    match f {
        Formula::And(a, b) => is_image(a) && is_image(b),
        Formula::Next(a) | Formula::Globally(a) => is_image(a),
        _ => false,
    }
}

fn eval_prop(f: &Formula, letter: u64, props: &[String]) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p) => match props.binary_search_by(|q| q.as_str().cmp(p)) {
            Ok(i) => letter & (1 << i) != 0,
            Err(_) => false,
        },
        Formula::Not(a) => !eval_prop(a, letter, props),
        Formula::And(a, b) => eval_prop(a, letter, props) && eval_prop(b, letter, props),
        Formula::Or(a, b) => eval_prop(a, letter, props) || eval_prop(b, letter, props),
        _ => unreachable!("checked by is_basic_prop"),
    }
}

/// One deterministic progression step of an obligation set; `None`
/// means a propositional obligation failed on this letter.
fn det_step(
    table: &mut FormulaTable,
    props: &[String],
    members: &[usize],
    letter: u64,
) -> Option<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<Formula> = members.iter().map(|&id| table.get(id).clone()).collect();
    while let Some(f) = stack.pop() {
        if is_basic_prop(&f) {
            if !eval_prop(&f, letter, props) {
                return None;
            }
            continue;
        }
        match f {
            Formula::And(a, b) => {
                stack.push(*a);
                stack.push(*b);
            }
            Formula::Next(a) => {
                if !matches!(*a, Formula::True) {
                    out.insert(table.intern(*a));
                }
            }
            Formula::Globally(a) => {
                out.insert(table.intern(Formula::globally((*a).clone())));
                stack.push(*a);
            }
            _ => unreachable!("checked by is_image"),
        }
    }
    Some(out)
}

/// Compiles an image-grammar formula over infinite words into a safety
/// automaton: obligation states are accepting, and a single rejecting
/// sink collects runs that have failed a propositional obligation.
pub fn image_dba_over(f: &Formula, props: &[String]) -> Result<SafetyDba, CompileError> {
    if !is_image(f) {
        return Err(CompileError::NotInImage);
    }
    let props = checked_props(f, props)?;
    if props.len() > 8 {
        return Err(AutomatonError::TooManyProps(props.len()).into());
    }
    let letter_count = 1u64 << props.len();
    let mut table = FormulaTable::new();
    let root = table.intern(f.clone());
    let initial: Vec<usize> = vec![root];
    let mut order: Vec<Vec<usize>> = vec![initial.clone()];
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(initial, 0)]);
    // Row targets use usize::MAX as a placeholder for the dead sink
    // until its final index is known.
    const DEAD: usize = usize::MAX;
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let members = order[head].clone();
        head += 1;
        let mut row = Vec::with_capacity(letter_count as usize);
        for letter in 0..letter_count {
            match det_step(&mut table, &props, &members, letter) {
                None => row.push(DEAD),
                Some(set) => {
                    let key: Vec<usize> = set.into_iter().collect();
                    let id = match ids.get(&key) {
                        Some(&id) => id,
                        None => {
                            let id = order.len();
                            ids.insert(key.clone(), id);
                            order.push(key);
                            id
                        }
                    };
                    row.push(id);
                }
            }
        }
        delta.push(row);
    }
    let dead = order.len();
    for row in delta.iter_mut() {
        for dst in row.iter_mut() {
            if *dst == DEAD {
                *dst = dead;
            }
        }
    }
    delta.push(vec![dead; letter_count as usize]);
    let mut names: Vec<String> = (0..order.len()).map(|i| format!("s{i}")).collect();
    names.push("dead".to_string());
    let mut accepting = vec![true; order.len()];
    accepting.push(false);
    Ok(SafetyDba::new(props, names, 0, accepting, delta)?)
}

/// [`image_dba_over`] with the alphabet taken from the formula's atoms.
pub fn image_dba(f: &Formula) -> Result<SafetyDba, CompileError> {
    image_dba_over(f, &own_atoms(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::dba_accepts_lasso;
    use crate::formula::{parse_formula, Dialect, Lasso};

    fn parse(text: &str) -> Formula {
        parse_formula(text, Dialect::Ltl).unwrap()
    }

    fn lasso(props: &[&str], stem: &[u64], cycle: &[u64]) -> Lasso {
        Lasso::from_masks(
            props.iter().map(|s| s.to_string()).collect(),
            stem.to_vec(),
            cycle.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn globally_atom() {
        let dba = image_dba(&parse("G a")).unwrap();
        assert_eq!(dba.state_count(), 2);
        assert!(dba_accepts_lasso(&dba, &lasso(&["a"], &[], &[1])).unwrap());
        assert!(!dba_accepts_lasso(&dba, &lasso(&["a"], &[1, 1], &[0])).unwrap());
    }

    #[test]
    fn next_shifts_one_position() {
        let dba = image_dba(&parse("X a")).unwrap();
        assert!(dba_accepts_lasso(&dba, &lasso(&["a"], &[0, 1], &[0])).unwrap());
        assert!(!dba_accepts_lasso(&dba, &lasso(&["a"], &[0, 0], &[1])).unwrap());
    }

    #[test]
    fn false_rejects_everything() {
        let dba = image_dba_over(&Formula::False, &["a".to_string()]).unwrap();
        assert!(!dba_accepts_lasso(&dba, &lasso(&["a"], &[], &[0])).unwrap());
        assert!(dba.is_empty_language().unwrap());
    }

    #[test]
    fn conjunction_of_obligations() {
        let dba = image_dba(&parse("a & X G b")).unwrap();
        // Letters over [a, b]: need a first, then b forever.
        assert!(dba_accepts_lasso(&dba, &lasso(&["a", "b"], &[0b01], &[0b10])).unwrap());
        assert!(dba_accepts_lasso(&dba, &lasso(&["a", "b"], &[0b11], &[0b11])).unwrap());
        assert!(!dba_accepts_lasso(&dba, &lasso(&["a", "b"], &[0b10], &[0b10])).unwrap());
        assert!(!dba_accepts_lasso(&dba, &lasso(&["a", "b"], &[0b01, 0b10], &[0b00])).unwrap());
    }

    #[test]
    fn outside_grammar_is_rejected() {
        assert_eq!(
            image_dba(&parse("F a")).unwrap_err(),
            CompileError::NotInImage
        );
    }
}
