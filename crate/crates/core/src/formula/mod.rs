//! LTLf/LTL formula syntax trees, normal forms, parsing, rendering,
//! random generation, and direct semantic evaluation.
//!
//! The same abstract syntax serves two interpretations: finite non-empty
//! traces (LTLf) and infinite words (LTL). Which interpretation applies is
//! carried out of band as a [`Dialect`]; the concrete grammar is shared.

mod eval;
mod parse;
mod print;
mod random;
mod trace;

pub use eval::{evaluate, evaluate_ltl_on_lasso, EvalError};
pub use parse::{parse_formula, ParseError};
pub use print::render_formula;
pub use random::{random_formula, RandomError, Restrict};
pub use trace::{enumerate_traces, Lasso, Trace, TraceError};

use std::collections::{BTreeSet, HashSet};

/// Interpretation style for a formula.
///
/// `Ltlf` reads temporal operators over finite non-empty traces, where
/// `X` (strong next) fails at the last position and `N` (weak next)
/// succeeds there. `Ltl` reads them over infinite words, where the two
/// coincide. Both dialects share one concrete syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dialect {
    Ltlf,
    Ltl,
}

/// A temporal formula.
///
/// All common abbreviations are first-class constructors; algorithms that
/// need a smaller core expand them on entry. `WeakUntil` is defined by
/// `p W q == (p U q) | G p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// Strong next `X`: requires that a next position exists.
    Next(Box<Formula>),
    /// Weak next `N`: holds at the last position of a finite trace.
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Formula {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Formula, b: Formula) -> Formula {
        Formula::WeakUntil(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    /// `X^k f`: `k` nested strong-next operators around `f`.
    pub fn next_n(f: Formula, k: usize) -> Formula {
        let mut out = f;
        for _ in 0..k {
            out = Formula::next(out);
        }
        out
    }

    /// Conjunction of all formulas in the iterator; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of all formulas in the iterator; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Immediate child formulas.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Globally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b)
            | WeakUntil(a, b) => vec![a, b],
        }
    }

    /// Size of the formula: the number of distinct subformulas (each
    /// operator node and atom counted once even when it occurs several
    /// times).
    pub fn size(&self) -> usize {
        let mut seen: HashSet<&Formula> = HashSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if seen.insert(f) {
                stack.extend(f.children());
            }
        }
        seen.len()
    }

    /// All atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Formula::Atom(name) = f {
                out.insert(name.clone());
            }
            stack.extend(f.children());
        }
        out
    }

    /// True when the formula is purely propositional: built only from
    /// `true`, `false`, atoms, `!`, `&` and `|`.
    pub fn is_propositional(&self) -> bool {
        use Formula::*;
        match self {
            True | False | Atom(_) => true,
            Not(a) => a.is_propositional(),
            And(a, b) | Or(a, b) => a.is_propositional() && b.is_propositional(),
            _ => false,
        }
    }
}

/// Negation normal form: pushes negations inward until `!` appears only
/// directly above atoms. The result is semantically equivalent in both
/// dialects and its [`Formula::size`] is at most `2 * size + 1`.
///
/// Operators are rewritten through their duals (`!X p` to `N !p`,
/// `!(p U q)` to `!p R !q`, and so on). `->`, `<->` and `W` are kept as
/// constructors where no negation forces a rewrite: `!(p -> q)` becomes
/// `p & !q`, `!(p <-> q)` becomes `p <-> !q`, and `!(p W q)` becomes
/// `!q U (!p & !q)`.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, pos: bool) -> Formula {
    use Formula::*;
    match f {
        True => {
            if pos {
                True
            } else {
                False
            }
        }
        False => {
            if pos {
                False
            } else {
                True
            }
        }
        Atom(name) => {
            if pos {
                Atom(name.clone())
            } else {
                Formula::not(Atom(name.clone()))
            }
        }
        Not(a) => nnf(a, !pos),
        And(a, b) => {
            if pos {
                Formula::and(nnf(a, true), nnf(b, true))
            } else {
                Formula::or(nnf(a, false), nnf(b, false))
            }
        }
        Or(a, b) => {
            if pos {
                Formula::or(nnf(a, true), nnf(b, true))
            } else {
                Formula::and(nnf(a, false), nnf(b, false))
            }
        }
        Implies(a, b) => {
            if pos {
                Formula::or(nnf(a, false), nnf(b, true))
            } else {
                Formula::and(nnf(a, true), nnf(b, false))
            }
        }
        Iff(a, b) => {
            if pos {
                Formula::iff(nnf(a, true), nnf(b, true))
            } else {
                Formula::iff(nnf(a, true), nnf(b, false))
            }
        }
        Next(a) => {
            if pos {
                Formula::next(nnf(a, true))
            } else {
                Formula::weak_next(nnf(a, false))
            }
        }
        WeakNext(a) => {
            if pos {
                Formula::weak_next(nnf(a, true))
            } else {
                Formula::next(nnf(a, false))
            }
        }
        Until(a, b) => {
            if pos {
                Formula::until(nnf(a, true), nnf(b, true))
            } else {
                Formula::release(nnf(a, false), nnf(b, false))
            }
        }
        Release(a, b) => {
            if pos {
                Formula::release(nnf(a, true), nnf(b, true))
            } else {
                Formula::until(nnf(a, false), nnf(b, false))
            }
        }
        WeakUntil(a, b) => {
            if pos {
                Formula::weak_until(nnf(a, true), nnf(b, true))
            } else {
                let na = nnf(a, false);
                let nb = nnf(b, false);
                Formula::until(nb.clone(), Formula::and(na, nb))
            }
        }
        Eventually(a) => {
            if pos {
                Formula::eventually(nnf(a, true))
            } else {
                Formula::globally(nnf(a, false))
            }
        }
        Globally(a) => {
            if pos {
                Formula::globally(nnf(a, true))
            } else {
                Formula::eventually(nnf(a, false))
            }
        }
    }
}

/// Negation normal form over the core constructor set only: expands
/// `->`, `<->` and `W` so the result uses nothing but `true`, `false`,
/// literals, `&`, `|`, `X`, `N`, `U`, `R`, `F` and `G`. Used by the
/// automata compilers, which progress formulas through that core.
pub(crate) fn to_core_nnf(f: &Formula) -> Formula {
    core_nnf(f, true)
}

fn core_nnf(f: &Formula, pos: bool) -> Formula {
    use Formula::*;
    match f {
        Implies(a, b) => {
            if pos {
                Formula::or(core_nnf(a, false), core_nnf(b, true))
            } else {
                Formula::and(core_nnf(a, true), core_nnf(b, false))
            }
        }
        Iff(a, b) => {
            let both = Formula::and(core_nnf(a, true), core_nnf(b, true));
            let neither = Formula::and(core_nnf(a, false), core_nnf(b, false));
            let only_a = Formula::and(core_nnf(a, true), core_nnf(b, false));
            let only_b = Formula::and(core_nnf(a, false), core_nnf(b, true));
            if pos {
                Formula::or(both, neither)
            } else {
                Formula::or(only_a, only_b)
            }
        }
        WeakUntil(a, b) => {
            if pos {
                Formula::or(
                    Formula::until(core_nnf(a, true), core_nnf(b, true)),
                    Formula::globally(core_nnf(a, true)),
                )
            } else {
                let na = core_nnf(a, false);
                let nb = core_nnf(b, false);
                Formula::until(nb.clone(), Formula::and(na, nb))
            }
        }
        Not(a) => core_nnf(a, !pos),
        True | False | Atom(_) => nnf(f, pos),
        And(a, b) => {
            if pos {
                Formula::and(core_nnf(a, true), core_nnf(b, true))
            } else {
                Formula::or(core_nnf(a, false), core_nnf(b, false))
            }
        }
        Or(a, b) => {
            if pos {
                Formula::or(core_nnf(a, true), core_nnf(b, true))
            } else {
                Formula::and(core_nnf(a, false), core_nnf(b, false))
            }
        }
        Next(a) => {
            if pos {
                Formula::next(core_nnf(a, true))
            } else {
                Formula::weak_next(core_nnf(a, false))
            }
        }
        WeakNext(a) => {
            if pos {
                Formula::weak_next(core_nnf(a, true))
            } else {
                Formula::next(core_nnf(a, false))
            }
        }
        Until(a, b) => {
            if pos {
                Formula::until(core_nnf(a, true), core_nnf(b, true))
            } else {
                Formula::release(core_nnf(a, false), core_nnf(b, false))
            }
        }
        Release(a, b) => {
            if pos {
                Formula::release(core_nnf(a, true), core_nnf(b, true))
            } else {
                Formula::until(core_nnf(a, false), core_nnf(b, false))
            }
        }
        Eventually(a) => {
            if pos {
                Formula::eventually(core_nnf(a, true))
            } else {
                Formula::globally(core_nnf(a, false))
            }
        }
        Globally(a) => {
            if pos {
                Formula::globally(core_nnf(a, true))
            } else {
                Formula::eventually(core_nnf(a, false))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Formula {
        parse_formula(text, Dialect::Ltlf).unwrap()
    }

    #[test]
    fn nnf_until_dual() {
        assert_eq!(to_nnf(&p("!(a U b)")), p("!a R !b"));
    }

    #[test]
    fn nnf_next_dual() {
        assert_eq!(to_nnf(&p("!(X a)")), p("N !a"));
    }

    #[test]
    fn nnf_double_negation() {
        assert_eq!(to_nnf(&p("!!a")), p("a"));
    }

    #[test]
    fn nnf_negations_only_on_atoms() {
        fn check(f: &Formula) {
            if let Formula::Not(inner) = f {
                assert!(matches!(**inner, Formula::Atom(_)), "bad NNF node: {f}");
            }
            for c in f.children() {
                check(c);
            }
        }
        for text in [
            "!(a <-> (b W c))",
            "!(a -> X b)",
            "!G(a | !F b)",
            "!(a W b)",
            "!(true U !(a & false))",
        ] {
            check(&to_nnf(&p(text)));
            check(&to_core_nnf(&p(text)));
        }
    }

    #[test]
    fn nnf_size_bound() {
        for text in [
            "!(a <-> b)",
            "a <-> b",
            "!(a W (b W c))",
            "!(a W (b W (c W d)))",
            "!((a <-> b) <-> c)",
            "!(a -> (b | !c))",
        ] {
            let f = p(text);
            assert!(
                to_nnf(&f).size() <= 2 * f.size() + 1,
                "size bound violated for {text}: {} vs {}",
                to_nnf(&f).size(),
                f.size()
            );
        }
    }

    #[test]
    fn size_counts_distinct_subformulas() {
        assert_eq!(p("a").size(), 1);
        assert_eq!(p("a & X b").size(), 4);
        assert_eq!(p("a & a").size(), 2);
    }

    #[test]
    fn atoms_are_collected_sorted() {
        let f = p("b U (a & c)");
        let atoms: Vec<_> = f.atoms().into_iter().collect();
        assert_eq!(atoms, ["a", "b", "c"]);
    }

    #[test]
    fn core_nnf_expands_abbreviations() {
        fn core_only(f: &Formula) -> bool {
            use Formula::*;
            match f {
                Implies(..) | Iff(..) | WeakUntil(..) => false,
                Not(inner) => matches!(**inner, Atom(_)),
                _ => f.children().into_iter().all(core_only),
            }
        }
        for text in ["a -> b", "a <-> (b -> c)", "a W b", "!(a W b)", "G(a <-> b)"] {
            assert!(core_only(&to_core_nnf(&p(text))), "not core: {text}");
        }
    }
}
