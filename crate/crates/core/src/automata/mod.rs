//! Finite-word and safety Büchi automata over valuation alphabets.
//!
//! The alphabet of an automaton is `2^props` for a declared proposition
//! set of at most eight propositions; letters are bitmasks in the sorted
//! proposition order, exactly as in [`crate::formula::Trace`].
//!
//! [`SafetyDba`] is a deterministic complete Büchi automaton in sink
//! normal form: depending on provenance either every accepting state or
//! every rejecting state is a sink. The prefix-automaton pipeline
//! produces the rejecting-sink shape, where acceptance of an infinite
//! word is equivalent to its unique run never entering a rejecting
//! state.

mod format;

pub use format::{parse_aut, render_aut, to_dot, AutAutomaton, AutParseError};

use crate::formula::{Lasso, Trace, TraceError};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("automata support at most 8 propositions, got {0}")]
    TooManyProps(usize),
    #[error("trace/lasso propositions do not match the automaton alphabet")]
    AlphabetMismatch,
    #[error("sink invariant violated: {0}")]
    SinkInvariant(String),
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

fn normalize_props(mut props: Vec<String>) -> Result<Vec<String>, AutomatonError> {
    props.sort();
    props.dedup();
    if props.len() > 8 {
        return Err(AutomatonError::TooManyProps(props.len()));
    }
    Ok(props)
}

fn check_states(states: &[String]) -> Result<(), AutomatonError> {
    let mut seen = BTreeSet::new();
    for name in states {
        if !seen.insert(name) {
            return Err(AutomatonError::Invalid(format!("duplicate state `{name}`")));
        }
    }
    if states.is_empty() {
        return Err(AutomatonError::Invalid("automaton needs at least one state".into()));
    }
    Ok(())
}

/// A nondeterministic finite automaton over finite traces. Multiple
/// initial states are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    props: Vec<String>,
    states: Vec<String>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    transitions: Vec<(usize, u64, usize)>,
    index: HashMap<(usize, u64), Vec<usize>>,
}

impl Nfa {
    pub fn new(
        props: Vec<String>,
        states: Vec<String>,
        initial: Vec<usize>,
        accepting: Vec<bool>,
        mut transitions: Vec<(usize, u64, usize)>,
    ) -> Result<Nfa, AutomatonError> {
        let props = normalize_props(props)?;
        check_states(&states)?;
        if initial.is_empty() {
            return Err(AutomatonError::Invalid("no initial state".into()));
        }
        if accepting.len() != states.len() {
            return Err(AutomatonError::Invalid("accepting flags misaligned".into()));
        }
        let letter_count = 1u64 << props.len();
        for &s in &initial {
            if s >= states.len() {
                return Err(AutomatonError::Invalid("initial state out of range".into()));
            }
        }
        for &(src, letter, dst) in &transitions {
            if src >= states.len() || dst >= states.len() {
                return Err(AutomatonError::Invalid("transition endpoint out of range".into()));
            }
            if letter >= letter_count {
                return Err(AutomatonError::Invalid(format!(
                    "letter {letter:#x} outside alphabet of {} propositions",
                    props.len()
                )));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        let mut index: HashMap<(usize, u64), Vec<usize>> = HashMap::new();
        for &(src, letter, dst) in &transitions {
            index.entry((src, letter)).or_default().push(dst);
        }
        Ok(Nfa { props, states, initial, accepting, transitions, index })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn transitions(&self) -> &[(usize, u64, usize)] {
        &self.transitions
    }

    pub fn successors(&self, state: usize, letter: u64) -> &[usize] {
        self.index.get(&(state, letter)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn letter_count(&self) -> u64 {
        1u64 << self.props.len()
    }
}

/// True iff some run of the automaton over the trace ends in an
/// accepting state.
pub fn nfa_accepts(a: &Nfa, t: &Trace) -> Result<bool, AutomatonError> {
    if a.props != t.props() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let mut current: BTreeSet<usize> = a.initial.iter().copied().collect();
    for i in 0..t.len() {
        let letter = t.mask(i);
        let mut next = BTreeSet::new();
        for &s in &current {
            next.extend(a.successors(s, letter).iter().copied());
        }
        current = next;
        if current.is_empty() {
            return Ok(false);
        }
    }
    Ok(current.iter().any(|&s| a.accepting[s]))
}

/// A deterministic complete finite automaton: exactly one successor per
/// state and letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    props: Vec<String>,
    states: Vec<String>,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn new(
        props: Vec<String>,
        states: Vec<String>,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Dfa, AutomatonError> {
        let props = normalize_props(props)?;
        check_states(&states)?;
        let letter_count = 1usize << props.len();
        if initial >= states.len() {
            return Err(AutomatonError::Invalid("initial state out of range".into()));
        }
        if accepting.len() != states.len() || delta.len() != states.len() {
            return Err(AutomatonError::Invalid("tables misaligned with state set".into()));
        }
        for row in &delta {
            if row.len() != letter_count {
                return Err(AutomatonError::Invalid("transition function not complete".into()));
            }
            for &dst in row {
                if dst >= states.len() {
                    return Err(AutomatonError::Invalid("transition target out of range".into()));
                }
            }
        }
        Ok(Dfa { props, states, initial, accepting, delta })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn step(&self, state: usize, letter: u64) -> usize {
        self.delta[state][letter as usize]
    }

    pub fn letter_count(&self) -> u64 {
        1u64 << self.props.len()
    }

    /// Runs the trace from the initial state and returns the final
    /// state.
    pub fn run(&self, t: &Trace) -> Result<usize, AutomatonError> {
        if self.props != t.props() {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let mut state = self.initial;
        for i in 0..t.len() {
            state = self.step(state, t.mask(i));
        }
        Ok(state)
    }

    pub fn accepts(&self, t: &Trace) -> Result<bool, AutomatonError> {
        Ok(self.accepting[self.run(t)?])
    }
}

/// Subset construction. The result is deterministic and complete;
/// missing transitions funnel into the empty-subset sink state. States
/// are named `s0`, `s1`, ... in breadth-first discovery order, so the
/// output is canonical for a given input.
pub fn determinize(a: &Nfa) -> Dfa {
    let letter_count = a.letter_count();
    let start: BTreeSet<usize> = a.initial.iter().copied().collect();
    let mut subsets: Vec<BTreeSet<usize>> = vec![start.clone()];
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start, 0)]);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut next_unprocessed = 0;
    while next_unprocessed < subsets.len() {
        let current = subsets[next_unprocessed].clone();
        let mut row = Vec::with_capacity(letter_count as usize);
        for letter in 0..letter_count {
            let mut target = BTreeSet::new();
            for &s in &current {
                target.extend(a.successors(s, letter).iter().copied());
            }
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    ids.insert(target.clone(), id);
                    subsets.push(target);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        next_unprocessed += 1;
    }
    let accepting = subsets
        .iter()
        .map(|subset| subset.iter().any(|&s| a.accepting[s]))
        .collect();
    let states = (0..subsets.len()).map(|i| format!("s{i}")).collect();
    Dfa { props: a.props.clone(), states, initial: 0, accepting, delta }
}

/// A deterministic complete Büchi automaton in sink normal form (see
/// the module documentation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyDba {
    props: Vec<String>,
    states: Vec<String>,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<Vec<usize>>,
}

impl SafetyDba {
    pub fn new(
        props: Vec<String>,
        states: Vec<String>,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<Vec<usize>>,
    ) -> Result<SafetyDba, AutomatonError> {
        let dfa = Dfa::new(props, states, initial, accepting, delta)?;
        Ok(SafetyDba {
            props: dfa.props,
            states: dfa.states,
            initial: dfa.initial,
            accepting: dfa.accepting,
            delta: dfa.delta,
        })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn step(&self, state: usize, letter: u64) -> usize {
        self.delta[state][letter as usize]
    }

    pub fn letter_count(&self) -> u64 {
        1u64 << self.props.len()
    }

    pub fn is_sink(&self, state: usize) -> bool {
        self.delta[state].iter().all(|&dst| dst == state)
    }

    /// True iff the safety language is empty: after tightening, the
    /// initial state is already rejecting.
    pub fn is_empty_language(&self) -> Result<bool, AutomatonError> {
        let tightened = safety_tighten(self)?;
        Ok(!tightened.accepting[tightened.initial])
    }
}

/// Redirects every transition out of an accepting state back to that
/// state, freezing acceptance once reached. On the result, Büchi
/// acceptance of an infinite word is equivalent to some finite prefix
/// being accepted by the input DFA.
pub fn make_accepting_sinks(d: &Dfa) -> SafetyDba {
    let mut delta = d.delta.clone();
    for (s, row) in delta.iter_mut().enumerate() {
        if d.accepting[s] {
            for dst in row.iter_mut() {
                *dst = s;
            }
        }
    }
    SafetyDba {
        props: d.props.clone(),
        states: d.states.clone(),
        initial: d.initial,
        accepting: d.accepting.clone(),
        delta,
    }
}

/// Complements the accepting set. The input must have all accepting
/// states as sinks (the [`make_accepting_sinks`] shape); the output then
/// has all rejecting states as sinks, i.e. the safety shape, and its
/// language is the complement of the input's.
pub fn swap_acceptance(c: &SafetyDba) -> Result<SafetyDba, AutomatonError> {
    for s in 0..c.state_count() {
        if c.accepting[s] && !c.is_sink(s) {
            return Err(AutomatonError::SinkInvariant(format!(
                "accepting state `{}` is not a sink",
                c.states[s]
            )));
        }
    }
    let accepting = c.accepting.iter().map(|a| !a).collect();
    Ok(SafetyDba {
        props: c.props.clone(),
        states: c.states.clone(),
        initial: c.initial,
        accepting,
        delta: c.delta.clone(),
    })
}

/// Deterministic Büchi acceptance of an ultimately periodic word: run
/// the stem, then iterate the cycle until the (cycle position, state)
/// pair repeats; accept iff the states visited in the repeating block
/// include an accepting one. Terminates within
/// `|stem| + |cycle| * (state_count + 1)` steps.
pub fn dba_accepts_lasso(b: &SafetyDba, w: &Lasso) -> Result<bool, AutomatonError> {
    if b.props != w.props() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let mut state = b.initial;
    for &letter in w.stem() {
        state = b.step(state, letter);
    }
    // Observing the state at each cycle boundary is enough: a repeat
    // there repeats the whole (cycle position, state) trajectory.
    let mut boundary_seen: HashMap<usize, usize> = HashMap::new();
    let mut visited_per_lap: Vec<Vec<usize>> = Vec::new();
    loop {
        if let Some(&first_lap) = boundary_seen.get(&state) {
            let mut accepting_in_loop = false;
            for lap in &visited_per_lap[first_lap..] {
                if lap.iter().any(|&s| b.accepting[s]) {
                    accepting_in_loop = true;
                }
            }
            return Ok(accepting_in_loop);
        }
        boundary_seen.insert(state, visited_per_lap.len());
        let mut lap = Vec::with_capacity(w.cycle().len());
        for &letter in w.cycle() {
            state = b.step(state, letter);
            lap.push(state);
        }
        visited_per_lap.push(lap);
    }
}

/// Re-marks doomed states as rejecting sinks. A state is survivable iff
/// it is accepting and has some survivable successor (greatest
/// fixpoint); every other state inevitably reaches a rejecting sink, so
/// re-marking it leaves the language unchanged while making the
/// rejecting flag characterize "some prefix is already bad".
///
/// Requires the safety shape (rejecting states are sinks).
pub fn safety_tighten(b: &SafetyDba) -> Result<SafetyDba, AutomatonError> {
    for s in 0..b.state_count() {
        if !b.accepting[s] && !b.is_sink(s) {
            return Err(AutomatonError::SinkInvariant(format!(
                "rejecting state `{}` is not a sink",
                b.states[s]
            )));
        }
    }
    let letter_count = b.letter_count();
    let mut survivable = b.accepting.clone();
    loop {
        let mut changed = false;
        for s in 0..b.state_count() {
            if survivable[s]
                && !(0..letter_count).any(|m| survivable[b.step(s, m)])
            {
                survivable[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = b.clone();
    for s in 0..b.state_count() {
        if !survivable[s] {
            out.accepting[s] = false;
            for dst in out.delta[s].iter_mut() {
                *dst = s;
            }
        }
    }
    Ok(out)
}

/// Result of a safety-language comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SafetyEquiv {
    Equivalent,
    /// A lasso accepted by exactly one of the two automata.
    Witness(Lasso),
}

/// Decides language equality of two safety automata over the same
/// proposition set. Both are tightened first; then a breadth-first
/// product search looks for a reachable state pair that disagrees on
/// the rejecting flag. On disagreement the returned witness follows the
/// shortest stem to the disagreement and continues from the survivable
/// side along minimal letters until a state repeats, forming the cycle.
pub fn safety_equiv(x: &SafetyDba, y: &SafetyDba) -> Result<SafetyEquiv, AutomatonError> {
    if x.props != y.props {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let tx = safety_tighten(x)?;
    let ty = safety_tighten(y)?;
    let letter_count = tx.letter_count();

    let witness = |stem: Vec<u64>, side: &SafetyDba, from: usize| -> Result<SafetyEquiv, AutomatonError> {
        // Extend from the survivable state along minimal survivable
        // letters until a state repeats; that loop is the cycle.
        let mut path = vec![from];
        let mut letters: Vec<u64> = Vec::new();
        let mut state = from;
        loop {
            let m = (0..letter_count)
                .find(|&m| side.accepting[side.step(state, m)])
                .expect("tightened accepting states have survivable successors");
            state = side.step(state, m);
            letters.push(m);
            if let Some(pos) = path.iter().position(|&s| s == state) {
                let mut full_stem = stem;
                full_stem.extend_from_slice(&letters[..pos]);
                let cycle = letters[pos..].to_vec();
                let lasso = Lasso::from_masks(side.props.clone(), full_stem, cycle)?;
                return Ok(SafetyEquiv::Witness(lasso));
            }
            path.push(state);
        }
    };

    let start = (tx.initial, ty.initial);
    let mut parents: HashMap<(usize, usize), ((usize, usize), u64)> = HashMap::new();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::from([start]);
    let mut queue: VecDeque<(usize, usize)> = VecDeque::from([start]);
    let stem_to = |pair: (usize, usize), parents: &HashMap<(usize, usize), ((usize, usize), u64)>| {
        let mut letters = Vec::new();
        let mut cursor = pair;
        while let Some(&(prev, letter)) = parents.get(&cursor) {
            letters.push(letter);
            cursor = prev;
        }
        letters.reverse();
        letters
    };
    while let Some((p, q)) = queue.pop_front() {
        let (pa, qa) = (tx.accepting[p], ty.accepting[q]);
        if pa != qa {
            let stem = stem_to((p, q), &parents);
            return if pa {
                witness(stem, &tx, p)
            } else {
                witness(stem, &ty, q)
            };
        }
        if !pa {
            // Both rejecting: both are sinks, nothing new is reachable.
            continue;
        }
        for m in 0..letter_count {
            let next = (tx.step(p, m), ty.step(q, m));
            if seen.insert(next) {
                parents.insert(next, ((p, q), m));
                queue.push_back(next);
            }
        }
    }
    Ok(SafetyEquiv::Equivalent)
}

/// Moore partition refinement on the reachable part, producing the
/// canonical minimal equivalent DFA. Applied when reporting automaton
/// sizes; the correctness suites run on unminimized automata.
pub fn minimize(d: &Dfa) -> Dfa {
    let (states, initial, accepting, delta) =
        minimize_parts(d.initial, &d.accepting, &d.delta, d.letter_count());
    Dfa { props: d.props.clone(), states, initial, accepting, delta }
}

/// Partition refinement for a safety automaton; the sink normal form is
/// preserved because merged states have identical successor blocks.
pub fn minimize_dba(b: &SafetyDba) -> SafetyDba {
    let (states, initial, accepting, delta) =
        minimize_parts(b.initial, &b.accepting, &b.delta, b.letter_count());
    SafetyDba { props: b.props.clone(), states, initial, accepting, delta }
}

fn minimize_parts(
    initial: usize,
    accepting: &[bool],
    delta: &[Vec<usize>],
    letter_count: u64,
) -> (Vec<String>, usize, Vec<bool>, Vec<Vec<usize>>) {
    // Reachable restriction first, in breadth-first letter order.
    let mut reach_order = vec![initial];
    let mut reach_id: HashMap<usize, usize> = HashMap::from([(initial, 0)]);
    let mut head = 0;
    while head < reach_order.len() {
        let s = reach_order[head];
        head += 1;
        for m in 0..letter_count {
            let dst = delta[s][m as usize];
            if !reach_id.contains_key(&dst) {
                reach_id.insert(dst, reach_order.len());
                reach_order.push(dst);
            }
        }
    }
    let m_count = letter_count as usize;
    let mut block: Vec<usize> = reach_order.iter().map(|&s| usize::from(accepting[s])).collect();
    loop {
        let mut next_ids: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next_block = vec![0usize; reach_order.len()];
        let mut assigned = 0usize;
        for (i, &s) in reach_order.iter().enumerate() {
            let sig: Vec<usize> =
                (0..m_count).map(|m| block[reach_id[&delta[s][m]]]).collect();
            let key = (block[i], sig);
            let id = *next_ids.entry(key).or_insert_with(|| {
                let id = assigned;
                assigned += 1;
                id
            });
            next_block[i] = id;
        }
        let stable = next_block == block;
        block = next_block;
        if stable {
            break;
        }
    }
    let block_count = block.iter().max().map(|&b| b + 1).unwrap_or(0);
    // Representative per block: first state (in reach order) of the
    // block.
    let mut rep: Vec<Option<usize>> = vec![None; block_count];
    for (i, &b) in block.iter().enumerate() {
        if rep[b].is_none() {
            rep[b] = Some(reach_order[i]);
        }
    }
    let mut out_delta = Vec::with_capacity(block_count);
    let mut out_accepting = Vec::with_capacity(block_count);
    for b in 0..block_count {
        let r = rep[b].expect("every block has a member");
        out_accepting.push(accepting[r]);
        out_delta.push(
            (0..m_count)
                .map(|m| block[reach_id[&delta[r][m]]])
                .collect::<Vec<_>>(),
        );
    }
    let out_states = (0..block_count).map(|i| format!("s{i}")).collect();
    (out_states, block[0], out_accepting, out_delta)
}
