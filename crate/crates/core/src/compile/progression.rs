//! Obligation-set progression over single letters.
//!
//! A machine state is a set of formulas (implicitly conjoined) that the
//! remaining suffix of the trace must satisfy. Reading a letter rewrites
//! the conjunction into a positive Boolean combination of "next
//! obligations" (strong or weak next atoms); the minimal models of that
//! combination, one successor state per model, give the nondeterministic
//! transition relation. A separate tail evaluation decides whether the
//! letter may be the last one of the trace with all obligations
//! discharged.
//!
//! Formulas are kept in negation normal form built from the core
//! constructors only (no implication, equivalence or weak until).

use crate::formula::Formula;
use std::collections::{BTreeSet, HashMap};

/// Interner for formulas; ids are dense and stable.
pub(crate) struct FormulaTable {
    formulas: Vec<Formula>,
    ids: HashMap<Formula, usize>,
}

impl FormulaTable {
    pub(crate) fn new() -> Self {
        FormulaTable { formulas: Vec::new(), ids: HashMap::new() }
    }

    pub(crate) fn intern(&mut self, f: Formula) -> usize {
        if let Some(&id) = self.ids.get(&f) {
            return id;
        }
        let id = self.formulas.len();
        self.ids.insert(f.clone(), id);
        self.formulas.push(f);
        id
    }

    pub(crate) fn get(&self, id: usize) -> &Formula {
        &self.formulas[id]
    }
}

/// A next-obligation literal: weak flag plus the payload formula id.
type Lit = (bool, usize);
/// Disjunction of conjunctions of next-obligation literals, kept as an
/// antichain of minimal models. No models means false; the single empty
/// model means true.
type Dnf = BTreeSet<BTreeSet<Lit>>;

fn dnf_true() -> Dnf {
    BTreeSet::from([BTreeSet::new()])
}

fn dnf_false() -> Dnf {
    BTreeSet::new()
}

fn dnf_lit(lit: Lit) -> Dnf {
    BTreeSet::from([BTreeSet::from([lit])])
}

fn dnf_reduce(dnf: Dnf) -> Dnf {
    let mut out = Dnf::new();
    'models: for m in &dnf {
        for other in &dnf {
            if other != m && other.is_subset(m) {
                continue 'models;
            }
        }
        out.insert(m.clone());
    }
    out
}

fn dnf_or(a: Dnf, b: Dnf) -> Dnf {
    dnf_reduce(a.into_iter().chain(b).collect())
}

fn dnf_and(a: Dnf, b: Dnf) -> Dnf {
    let mut out = BTreeSet::new();
    for m in &a {
        for n in &b {
            out.insert(m.union(n).cloned().collect());
        }
    }
    dnf_reduce(out)
}

/// Successor states and tail verdict of one progression step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct StepResult {
    /// Successor obligation states, sorted and duplicate-free.
    pub successors: Vec<usize>,
    /// True iff the letter just read may end the trace with every
    /// obligation satisfied.
    pub accepts: bool,
}

/// Memoizing progression automaton for one formula over a fixed
/// proposition alphabet. States are created on demand, so the machine
/// works over alphabets far too large to enumerate.
pub(crate) struct ProgressionMachine {
    table: FormulaTable,
    props: Vec<String>,
    true_id: usize,
    false_id: usize,
    states: Vec<Vec<usize>>,
    state_ids: HashMap<Vec<usize>, usize>,
    initial: usize,
    memo: HashMap<(usize, u64), StepResult>,
}

impl ProgressionMachine {
    /// The formula must be in core negation normal form and its atoms
    /// must all occur in `props` (sorted).
    pub fn new(nnf: Formula, props: Vec<String>) -> Self {
        let mut table = FormulaTable::new();
        let true_id = table.intern(Formula::True);
        let false_id = table.intern(Formula::False);
        let root = table.intern(nnf);
        let mut machine = ProgressionMachine {
            table,
            props,
            true_id,
            false_id,
            states: Vec::new(),
            state_ids: HashMap::new(),
            initial: 0,
            memo: HashMap::new(),
        };
        let initial_set: BTreeSet<usize> = BTreeSet::from([root]);
        machine.initial = machine.intern_state(initial_set);
        machine
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    fn canonical(&self, mut set: BTreeSet<usize>) -> Vec<usize> {
        if set.contains(&self.false_id) {
            return vec![self.false_id];
        }
        set.remove(&self.true_id);
        set.into_iter().collect()
    }

    fn intern_state(&mut self, set: BTreeSet<usize>) -> usize {
        let key = self.canonical(set);
        if let Some(&id) = self.state_ids.get(&key) {
            return id;
        }
        let id = self.states.len();
        self.state_ids.insert(key.clone(), id);
        self.states.push(key);
        id
    }

    fn prop_holds(&self, name: &str, letter: u64) -> bool {
        match self.props.binary_search_by(|p| p.as_str().cmp(name)) {
            Ok(i) => letter & (1 << i) != 0,
            Err(_) => false,
        }
    }

    fn prog(&mut self, f: &Formula, letter: u64) -> Dnf {
        match f {
            Formula::True => dnf_true(),
            Formula::False => dnf_false(),
            Formula::Atom(p) => {
                if self.prop_holds(p, letter) {
                    dnf_true()
                } else {
                    dnf_false()
                }
            }
            Formula::Not(inner) => {
                if self.tail_literal(inner, letter) {
                    dnf_false()
                } else {
                    dnf_true()
                }
            }
            Formula::And(a, b) => {
                let left = self.prog(a, letter);
                if left.is_empty() {
                    return dnf_false();
                }
                dnf_and(left, self.prog(b, letter))
            }
            Formula::Or(a, b) => {
                let left = self.prog(a, letter);
                dnf_or(left, self.prog(b, letter))
            }
            Formula::Next(a) => dnf_lit((false, self.table.intern((**a).clone()))),
            Formula::WeakNext(a) => dnf_lit((true, self.table.intern((**a).clone()))),
            Formula::Until(a, b) => {
                let again = dnf_lit((false, self.table.intern(f.clone())));
                let now = self.prog(b, letter);
                let continued = dnf_and(self.prog(a, letter), again);
                dnf_or(now, continued)
            }
            Formula::Release(a, b) => {
                let again = dnf_lit((true, self.table.intern(f.clone())));
                let hold = self.prog(b, letter);
                let released = dnf_or(self.prog(a, letter), again);
                dnf_and(hold, released)
            }
            Formula::Eventually(a) => {
                let again = dnf_lit((false, self.table.intern(f.clone())));
                dnf_or(self.prog(a, letter), again)
            }
            Formula::Globally(a) => {
                let again = dnf_lit((true, self.table.intern(f.clone())));
                dnf_and(self.prog(a, letter), again)
            }
            Formula::Implies(..) | Formula::Iff(..) | Formula::WeakUntil(..) => {
                unreachable!("progression runs on core negation normal form")
            }
        }
    }

    /// Truth of a negated literal's body; core NNF only negates
    /// propositional leaves, so no temporal case can occur here.
    fn tail_literal(&self, f: &Formula, letter: u64) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => self.prop_holds(p, letter),
            _ => unreachable!("negation applied to a non-literal in core NNF"),
        }
    }

    /// Whether the obligation is satisfied by the one-letter trace
    /// consisting of `letter` alone.
    fn tail_eval(&self, f: &Formula, letter: u64) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => self.prop_holds(p, letter),
            Formula::Not(inner) => !self.tail_eval(inner, letter),
            Formula::And(a, b) => self.tail_eval(a, letter) && self.tail_eval(b, letter),
            Formula::Or(a, b) => self.tail_eval(a, letter) || self.tail_eval(b, letter),
            Formula::Next(_) => false,
            Formula::WeakNext(_) => true,
            Formula::Until(_, b) | Formula::Release(_, b) => self.tail_eval(b, letter),
            Formula::Eventually(a) | Formula::Globally(a) => self.tail_eval(a, letter),
            Formula::Implies(..) | Formula::Iff(..) | Formula::WeakUntil(..) => {
                unreachable!("tail evaluation runs on core negation normal form")
            }
        }
    }

    /// Progresses one obligation state over one letter. Memoized.
    pub fn step(&mut self, state: usize, letter: u64) -> StepResult {
        if let Some(cached) = self.memo.get(&(state, letter)) {
            return cached.clone();
        }
        let members: Vec<Formula> = self.states[state]
            .iter()
            .map(|&id| self.table.get(id).clone())
            .collect();
        let mut dnf = dnf_true();
        let mut accepts = true;
        for f in &members {
            if accepts {
                accepts = self.tail_eval(f, letter);
            }
            if !dnf.is_empty() {
                let part = self.prog(f, letter);
                dnf = dnf_and(dnf, part);
            }
        }
        let mut successors: Vec<usize> = Vec::new();
        for model in dnf {
            let set: BTreeSet<usize> = model.into_iter().map(|(_, payload)| payload).collect();
            successors.push(self.intern_state(set));
        }
        successors.sort_unstable();
        successors.dedup();
        let result = StepResult { successors, accepts };
        self.memo.insert((state, letter), result.clone());
        result
    }
}
