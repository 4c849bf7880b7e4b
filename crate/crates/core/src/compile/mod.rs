//! Compilation of formulas into automata.
//!
//! The finite-trace pipeline goes formula -> progression NFA -> subset
//! DFA. The prefix automaton for a formula `f` then recognizes exactly
//! the infinite words all of whose finite non-empty prefixes satisfy
//! `f`: compile the DFA for `!f`, freeze its accepting states into
//! sinks, and complement the acceptance marking. [`LazyPrefixDba`]
//! exposes the same automaton without materializing it, which is the
//! form the model checker uses on large alphabets.
//!
//! A syntactic forward fragment of the finite-trace logic admits a
//! linear-size description of its prefix languages: [`translate_fragment`]
//! maps a fragment formula to an infinite-word formula built from
//! literals, conjunction, next and globally, and [`image_dba`] compiles
//! that image directly into a safety automaton.

mod image;
mod progression;

pub use image::{image_dba, image_dba_over};
pub(crate) use progression::ProgressionMachine;

use crate::automata::{
    determinize, make_accepting_sinks, swap_acceptance, AutomatonError, Dfa, Nfa, SafetyDba,
};
use crate::formula::{to_core_nnf, Formula};
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("formula atoms {0:?} are missing from the requested alphabet")]
    AtomsNotCovered(Vec<String>),
    #[error("formula is outside the forward fragment")]
    NotInFragment,
    #[error("formula is outside the image grammar")]
    NotInImage,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Sorts and deduplicates `props` and checks it covers the atoms of
/// `f`.
fn checked_props(f: &Formula, props: &[String]) -> Result<Vec<String>, CompileError> {
    let mut sorted: Vec<String> = props.to_vec();
    sorted.sort();
    sorted.dedup();
    let missing: Vec<String> = f
        .atoms()
        .into_iter()
        .filter(|a| sorted.binary_search(a).is_err())
        .collect();
    if !missing.is_empty() {
        return Err(CompileError::AtomsNotCovered(missing));
    }
    Ok(sorted)
}

fn own_atoms(f: &Formula) -> Vec<String> {
    f.atoms().into_iter().collect()
}

/// Compiles a formula into a nondeterministic finite automaton over the
/// alphabet `2^props` accepting exactly the traces that satisfy it.
///
/// States are obligation sets of the progression machine plus one
/// accepting terminal; a transition into the terminal is added for
/// every letter that can end the trace with all obligations satisfied.
pub fn ltlf_to_nfa_over(f: &Formula, props: &[String]) -> Result<Nfa, CompileError> {
    let props = checked_props(f, props)?;
    if props.len() > 8 {
        return Err(AutomatonError::TooManyProps(props.len()).into());
    }
    let mut machine = ProgressionMachine::new(to_core_nnf(f), props.clone());
    let letter_count = 1u64 << props.len();
    let mut order = vec![machine.initial()];
    let mut index: HashMap<usize, usize> = HashMap::from([(machine.initial(), 0)]);
    let mut transitions: Vec<(usize, u64, usize)> = Vec::new();
    let mut accept_edges: Vec<(usize, u64)> = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let (src, state) = (head, order[head]);
        head += 1;
        for letter in 0..letter_count {
            let step = machine.step(state, letter);
            if step.accepts {
                accept_edges.push((src, letter));
            }
            for &succ in &step.successors {
                let dst = match index.get(&succ) {
                    Some(&i) => i,
                    None => {
                        let i = order.len();
                        index.insert(succ, i);
                        order.push(succ);
                        i
                    }
                };
                transitions.push((src, letter, dst));
            }
        }
    }
    let accept_idx = order.len();
    for (src, letter) in accept_edges {
        transitions.push((src, letter, accept_idx));
    }
    let mut names: Vec<String> = (0..order.len()).map(|i| format!("q{i}")).collect();
    names.push("acc".to_string());
    let mut accepting = vec![false; order.len()];
    accepting.push(true);
    Ok(Nfa::new(props, names, vec![0], accepting, transitions)?)
}

/// [`ltlf_to_nfa_over`] with the alphabet taken from the formula's own
/// atoms.
pub fn ltlf_to_nfa(f: &Formula) -> Result<Nfa, CompileError> {
    ltlf_to_nfa_over(f, &own_atoms(f))
}

/// Deterministic automaton for the traces satisfying `f`, via subset
/// construction of the progression NFA.
pub fn ltlf_to_dfa_over(f: &Formula, props: &[String]) -> Result<Dfa, CompileError> {
    Ok(determinize(&ltlf_to_nfa_over(f, props)?))
}

pub fn ltlf_to_dfa(f: &Formula) -> Result<Dfa, CompileError> {
    ltlf_to_dfa_over(f, &own_atoms(f))
}

/// Safety automaton accepting the infinite words all of whose finite
/// non-empty prefixes satisfy `f`: compile `!f` to a DFA, freeze its
/// accepting states (a bad prefix stays bad), and swap acceptance.
/// Rejecting states of the result are sinks.
pub fn prefix_dba_over(f: &Formula, props: &[String]) -> Result<SafetyDba, CompileError> {
    let negated = Formula::not(f.clone());
    let dfa = ltlf_to_dfa_over(&negated, props)?;
    Ok(swap_acceptance(&make_accepting_sinks(&dfa))?)
}

pub fn prefix_dba(f: &Formula) -> Result<SafetyDba, CompileError> {
    prefix_dba_over(f, &own_atoms(f))
}

/// The prefix automaton of [`prefix_dba`], expanded on demand.
///
/// Tokens stand for automaton states; the machine starts at
/// [`LazyPrefixDba::initial`] and is advanced one letter at a time with
/// [`LazyPrefixDba::step`]. A rejecting token means some prefix already
/// read violates the formula; rejecting tokens are absorbing. Because
/// states materialize only as they are visited, the alphabet may be
/// exponentially larger than anything the eager pipeline could
/// enumerate (up to 64 propositions).
pub struct LazyPrefixDba {
    machine: ProgressionMachine,
    tokens: Vec<(Vec<usize>, bool)>,
    token_ids: HashMap<(Vec<usize>, bool), usize>,
    memo: HashMap<(usize, u64), usize>,
}

/// Opaque state handle of a [`LazyPrefixDba`].
pub type TokenId = usize;

impl LazyPrefixDba {
    pub fn new_over(f: &Formula, props: &[String]) -> Result<LazyPrefixDba, CompileError> {
        let props = checked_props(f, props)?;
        let negated = Formula::not(f.clone());
        let machine = ProgressionMachine::new(to_core_nnf(&negated), props);
        let start = (vec![machine.initial()], false);
        let mut dba = LazyPrefixDba {
            machine,
            tokens: Vec::new(),
            token_ids: HashMap::new(),
            memo: HashMap::new(),
        };
        dba.intern(start);
        Ok(dba)
    }

    pub fn new(f: &Formula) -> Result<LazyPrefixDba, CompileError> {
        LazyPrefixDba::new_over(f, &own_atoms(f))
    }

    fn intern(&mut self, token: (Vec<usize>, bool)) -> TokenId {
        if let Some(&id) = self.token_ids.get(&token) {
            return id;
        }
        let id = self.tokens.len();
        self.token_ids.insert(token.clone(), id);
        self.tokens.push(token);
        id
    }

    pub fn props(&self) -> &[String] {
        self.machine.props()
    }

    pub fn initial(&self) -> TokenId {
        0
    }

    /// True iff some prefix consumed on the way to this token violates
    /// the formula. Rejecting tokens only step to themselves.
    pub fn is_rejecting(&self, token: TokenId) -> bool {
        self.tokens[token].1
    }

    /// Number of distinct tokens materialized so far.
    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn step(&mut self, token: TokenId, letter: u64) -> TokenId {
        if self.tokens[token].1 {
            return token;
        }
        if let Some(&next) = self.memo.get(&(token, letter)) {
            return next;
        }
        let members = self.tokens[token].0.clone();
        let mut next_states: BTreeSet<usize> = BTreeSet::new();
        let mut rejected = false;
        for state in members {
            let step = self.machine.step(state, letter);
            if step.accepts {
                rejected = true;
            }
            next_states.extend(step.successors);
        }
        // All rejecting tokens are one absorbing state; the surviving
        // obligation sets are irrelevant once a bad prefix is seen.
        let next_token = if rejected {
            (Vec::new(), true)
        } else {
            (next_states.into_iter().collect(), false)
        };
        let id = self.intern(next_token);
        self.memo.insert((token, letter), id);
        id
    }
}

/// Free-function form of [`LazyPrefixDba::new`].
pub fn lazy_prefix_dba(f: &Formula) -> Result<LazyPrefixDba, CompileError> {
    LazyPrefixDba::new(f)
}

/// Propositional formulas over the basic connectives; the literals of
/// the forward fragment.
pub(crate) fn is_basic_prop(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => true,
        Formula::Not(a) => is_basic_prop(a),
        Formula::And(a, b) | Formula::Or(a, b) => is_basic_prop(a) && is_basic_prop(b),
        _ => false,
    }
}

fn contains_weak_next(f: &Formula) -> bool {
    match f {
        Formula::WeakNext(_) => true,
        Formula::True | Formula::False | Formula::Atom(_) => false,
        Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Globally(a) => {
            contains_weak_next(a)
        }
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b)
        | Formula::Until(a, b)
        | Formula::Release(a, b)
        | Formula::WeakUntil(a, b) => contains_weak_next(a) || contains_weak_next(b),
    }
}

/// The forward fragment: propositional formulas combined with
/// conjunction, next, weak next, eventually, globally and until.
/// Disjunction, release and the derived implication forms are only
/// allowed inside propositional subformulas, and a weak next may not
/// occur inside an eventually or the right side of an until.
///
/// The weak-next restriction is what keeps the translation sound: `N`
/// succeeds for free at the last position of every finite trace, so a
/// formula like `F (N a)` holds on all traces (pick the last position)
/// and its prefix language is universal, while discarding the `F`
/// would keep the strict obligation `X a`. Outside of `F`/`U`
/// operands the discharge position is pinned, so `N` stays exact.
pub fn in_fragment(f: &Formula) -> bool {
    if is_basic_prop(f) {
        return true;
    }
    match f {
        Formula::And(a, b) => in_fragment(a) && in_fragment(b),
        Formula::Until(a, b) => in_fragment(a) && in_fragment(b) && !contains_weak_next(b),
        Formula::Eventually(a) => in_fragment(a) && !contains_weak_next(a),
        Formula::Next(a) | Formula::WeakNext(a) | Formula::Globally(a) => in_fragment(a),
        _ => false,
    }
}

fn translate(f: &Formula) -> Formula {
    if is_basic_prop(f) {
        return f.clone();
    }
    match f {
        Formula::And(a, b) => Formula::and(translate(a), translate(b)),
        Formula::Next(_) => Formula::False,
        Formula::WeakNext(a) => Formula::next(translate(a)),
        Formula::Eventually(a) => translate(a),
        Formula::Until(_, b) => translate(b),
        Formula::Globally(a) => Formula::globally(translate(a)),
        _ => unreachable!("checked by in_fragment"),
    }
}

/// Maps a forward-fragment formula to an infinite-word formula with the
/// same prefix language, built only from literals, conjunction, next
/// and globally. The prefix language of a strong next is empty (the
/// length-one prefix always refutes it), an eventually or until defers
/// entirely to its continuation, and a weak next shifts by one
/// position. The image never grows: its size is at most the input's.
pub fn translate_fragment(f: &Formula) -> Result<Formula, CompileError> {
    if !in_fragment(f) {
        return Err(CompileError::NotInFragment);
    }
    Ok(translate(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{dba_accepts_lasso, nfa_accepts};
    use crate::formula::{enumerate_traces, evaluate, parse_formula, Dialect, Lasso};

    fn parse(text: &str) -> Formula {
        parse_formula(text, Dialect::Ltlf).unwrap()
    }

    fn agree_on_all_traces(text: &str, max_len: usize) {
        let f = parse(text);
        let props: Vec<String> = f.atoms().into_iter().collect();
        let nfa = ltlf_to_nfa(&f).unwrap();
        let dfa = ltlf_to_dfa(&f).unwrap();
        for t in enumerate_traces(&props, max_len).unwrap() {
            let expected = evaluate(&f, &t).unwrap();
            assert_eq!(nfa_accepts(&nfa, &t).unwrap(), expected, "{text} on {:?}", t.masks());
            assert_eq!(dfa.accepts(&t).unwrap(), expected, "{text} on {:?}", t.masks());
        }
    }

    #[test]
    fn nfa_matches_evaluation() {
        for text in [
            "a",
            "!a",
            "X a",
            "N a",
            "a U b",
            "a R b",
            "F a -> G b",
            "a W b",
            "(a <-> X a) U b",
            "G (a -> X b)",
            "F (a & N b)",
        ] {
            agree_on_all_traces(text, 4);
        }
    }

    #[test]
    fn nfa_state_count_is_bounded() {
        for text in ["a U (b U a)", "G (a -> F b)", "!(a <-> b) & X X a"] {
            let f = parse(text);
            let nfa = ltlf_to_nfa(&f).unwrap();
            assert!(
                nfa.state_count() <= 1 << (f.size() + 2),
                "{text}: {} states for size {}",
                nfa.state_count(),
                f.size()
            );
        }
    }

    #[test]
    fn constant_formulas_compile() {
        let top = ltlf_to_nfa(&Formula::True).unwrap();
        let bottom = ltlf_to_nfa(&Formula::False).unwrap();
        let t = enumerate_traces(&[], 3).unwrap();
        for trace in t {
            assert!(nfa_accepts(&top, &trace).unwrap());
            assert!(!nfa_accepts(&bottom, &trace).unwrap());
        }
    }

    #[test]
    fn prefix_dba_of_disjunction_accepts_sample_lasso() {
        let f = parse("G a | F b");
        let dba = prefix_dba(&f).unwrap();
        // Letters over sorted props [a, b]: {a} = 0b01, {b} = 0b10.
        let w = Lasso::from_masks(
            vec!["a".into(), "b".into()],
            vec![0b01, 0b10],
            vec![0b00],
        )
        .unwrap();
        assert!(dba_accepts_lasso(&dba, &w).unwrap());
    }

    #[test]
    fn prefix_dba_of_strong_next_is_empty() {
        let f = parse("X a");
        let dba = prefix_dba(&f).unwrap();
        assert!(dba.is_empty_language().unwrap());
    }

    #[test]
    fn lazy_matches_eager_on_words() {
        let f = parse("G (a -> X b)");
        let eager = prefix_dba(&f).unwrap();
        let mut lazy = lazy_prefix_dba(&f).unwrap();
        // A fixed sample of words over the four letters.
        for word in [
            vec![0b01, 0b11, 0b10, 0b00],
            vec![0b01, 0b00],
            vec![0b11, 0b11, 0b11, 0b11, 0b01],
            vec![0b00, 0b10, 0b01, 0b10, 0b01, 0b11],
        ] {
            let mut state = eager.initial();
            let mut token = lazy.initial();
            for &letter in &word {
                state = eager.step(state, letter);
                token = lazy.step(token, letter);
                assert_eq!(
                    !eager.accepting()[state],
                    lazy.is_rejecting(token),
                    "word {word:?} diverged"
                );
            }
        }
    }

    #[test]
    fn rejecting_tokens_absorb() {
        let mut lazy = lazy_prefix_dba(&parse("a")).unwrap();
        let bad = lazy.step(lazy.initial(), 0);
        assert!(lazy.is_rejecting(bad));
        assert_eq!(lazy.step(bad, 1), bad);
    }

    #[test]
    fn fragment_membership() {
        for yes in ["a & !b", "F (a & b)", "G (a U b)", "X N F a", "(!a | b) U (a & b)"] {
            assert!(in_fragment(&parse(yes)), "{yes}");
        }
        for no in ["a R b", "F a | G b", "G (a -> b)", "F (X a | b)", "a W b"] {
            assert!(!in_fragment(&parse(no)), "{no}");
        }
        for vacuous in ["F (N a)", "F (a & N b)", "a U (N b)", "(N a) U (b U (N c))"] {
            assert!(!in_fragment(&parse(vacuous)), "{vacuous}");
        }
        // A weak next is fine when no enclosing eventually or until can
        // move its discharge position to the end of the trace.
        for ok in ["N (F a)", "G (a & N b)", "(N a) U b"] {
            assert!(in_fragment(&parse(ok)), "{ok}");
        }
    }

    #[test]
    fn translation_shapes() {
        let cases = [
            ("X a", "false"),
            ("N a", "X a"),
            ("F a", "a"),
            ("a U b", "b"),
            ("G (a U b)", "G b"),
            ("G (a & N b)", "G (a & X b)"),
            ("F (a U b)", "b"),
            ("!a & G b", "!a & G b"),
        ];
        for (from, to) in cases {
            let translated = translate_fragment(&parse(from)).unwrap();
            assert_eq!(translated, parse(to), "{from}");
        }
    }

    #[test]
    fn translation_never_grows() {
        for text in ["G (a U (b & X a))", "F F F a", "X (a U b) & G !a"] {
            let f = parse(text);
            let t = translate_fragment(&f).unwrap();
            assert!(t.size() <= f.size(), "{text}: {} > {}", t.size(), f.size());
        }
    }

    #[test]
    fn translation_rejects_outside_fragment() {
        assert_eq!(
            translate_fragment(&parse("a R b")),
            Err(CompileError::NotInFragment)
        );
    }

    #[test]
    fn alphabet_must_cover_atoms() {
        let f = parse("a & b");
        let err = ltlf_to_nfa_over(&f, &["a".to_string()]).unwrap_err();
        assert_eq!(err, CompileError::AtomsNotCovered(vec!["b".to_string()]));
    }
}
