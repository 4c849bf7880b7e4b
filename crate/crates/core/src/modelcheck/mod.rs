//! Model checking of transition systems against finite-trace formulas.
//!
//! Terminating systems: every finite execution (a path from an initial
//! state ending in a terminal state) must satisfy the formula. The
//! checker searches the product of the system with the progression NFA
//! of the negated formula; an accepting product path is a violating
//! execution.
//!
//! Non-terminating systems: every infinite execution must have some
//! finite prefix satisfying the formula. The checker runs the lazy
//! prefix automaton of the negated formula alongside the system; a
//! reachable cycle among states whose prefix token is still safe spells
//! out an infinite execution none of whose prefixes satisfies the
//! formula.
//!
//! Counterexamples are replayable and certified independently of the
//! automata pipeline via direct formula evaluation.

mod format;

pub use format::{parse_cex, render_cex, CexParseError};

use crate::compile::{CompileError, LazyPrefixDba, ProgressionMachine};
use crate::formula::{
    evaluate, to_core_nnf, EvalError, Formula, Lasso, Trace, TraceError,
};
use crate::systems::{TransitionSystem, TsKind};
use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

/// Exploration cap for the brute-force oracles.
const ORACLE_NODE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("expected a {expected} system, got a {got} one")]
    WrongKind { expected: &'static str, got: &'static str },
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("bounded search exceeded the {0}-node exploration guard")]
    BoundExplosion(usize),
}

/// Why a counterexample failed to certify.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    /// The path is not an execution of the system (bad edge, wrong
    /// endpoints, wrong counterexample kind).
    #[error("structural: {0}")]
    Structural(String),
    /// The path is an execution but its trace does not refute the
    /// formula.
    #[error("semantic: {0}")]
    Semantic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Violated,
}

/// A violating finite execution: a path from an initial to a terminal
/// state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePath {
    pub states: Vec<usize>,
}

/// A violating infinite execution in stem + repeated cycle form. The
/// cycle is non-empty and its last state has an edge back to its first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoPath {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    Finite(FinitePath),
    Lasso(LassoPath),
}

/// Search statistics; informational only and excluded from verdict
/// comparisons.
#[derive(Debug, Clone, Default)]
pub struct CheckStats {
    /// Product (or oracle search tree) states explored.
    pub explored: usize,
    /// Peak size of the search frontier.
    pub peak_frontier: usize,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Present iff violated.
    pub counterexample: Option<Counterexample>,
    /// Terminating check only: the system has no executions at all, so
    /// it holds vacuously.
    pub vacuous: bool,
    /// Set when "holds" only means "no violation within the search
    /// bound" (the bounded oracle).
    pub bounded: bool,
    pub stats: CheckStats,
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        self.outcome == Outcome::Violated
    }

    fn holds(stats: CheckStats) -> Verdict {
        Verdict {
            outcome: Outcome::Holds,
            counterexample: None,
            vacuous: false,
            bounded: false,
            stats,
        }
    }

    fn violated(c: Counterexample, stats: CheckStats) -> Verdict {
        Verdict {
            outcome: Outcome::Violated,
            counterexample: Some(c),
            vacuous: false,
            bounded: false,
            stats,
        }
    }
}

fn kind_name(kind: TsKind) -> &'static str {
    match kind {
        TsKind::Terminating => "terminating",
        TsKind::NonTerminating => "nonterminating",
    }
}

fn require_kind(m: &TransitionSystem, expected: TsKind) -> Result<(), CheckError> {
    if m.kind() != expected {
        return Err(CheckError::WrongKind {
            expected: kind_name(expected),
            got: kind_name(m.kind()),
        });
    }
    Ok(())
}

fn require_atoms(m: &TransitionSystem, f: &Formula) -> Result<(), CheckError> {
    let missing: Vec<String> = f
        .atoms()
        .into_iter()
        .filter(|a| m.props().binary_search(a).is_err())
        .collect();
    if !missing.is_empty() {
        return Err(CompileError::AtomsNotCovered(missing).into());
    }
    Ok(())
}

fn trace_of(m: &TransitionSystem, states: &[usize]) -> Result<Trace, CheckError> {
    let letters = states.iter().map(|&s| m.label(s)).collect();
    Ok(Trace::from_masks(m.props().to_vec(), letters)?)
}

/// Checks a terminating system: holds iff every finite execution's
/// trace satisfies the formula. A violation is returned as the
/// breadth-first shortest execution whose trace satisfies the negated
/// formula. Systems with no executions at all hold vacuously and are
/// flagged as such.
pub fn check_terminating(m: &TransitionSystem, f: &Formula) -> Result<Verdict, CheckError> {
    require_kind(m, TsKind::Terminating)?;
    require_atoms(m, f)?;
    let started = Instant::now();

    // Vacuity: is any terminal state reachable at all?
    let mut seen = vec![false; m.state_count()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in m.initial() {
        seen[s] = true;
        queue.push_back(s);
    }
    let mut any_execution = false;
    while let Some(s) = queue.pop_front() {
        if m.is_terminal(s) {
            any_execution = true;
            break;
        }
        for &s2 in m.successors(s) {
            if !seen[s2] {
                seen[s2] = true;
                queue.push_back(s2);
            }
        }
    }
    if !any_execution {
        let mut verdict = Verdict::holds(CheckStats {
            explored: 0,
            peak_frontier: 0,
            wall: started.elapsed(),
        });
        verdict.vacuous = true;
        return Ok(verdict);
    }

    let negated = Formula::not(f.clone());
    let mut machine = ProgressionMachine::new(to_core_nnf(&negated), m.props().to_vec());

    // Product nodes (system state, obligation state). The accepting bit
    // lives on steps, not nodes: it is checked on every generated edge.
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut frontier: VecDeque<usize> = VecDeque::new();
    let mut peak = 0usize;

    let path_to = |nodes: &[(usize, usize)], parents: &[Option<usize>], last: usize| {
        let mut path = Vec::new();
        let mut cursor = Some(last);
        while let Some(idx) = cursor {
            path.push(nodes[idx].0);
            cursor = parents[idx];
        }
        path.reverse();
        path
    };
    let finish_violated = |path: Vec<usize>, explored: usize, peak: usize| {
        Verdict::violated(
            Counterexample::Finite(FinitePath { states: path }),
            CheckStats { explored, peak_frontier: peak, wall: started.elapsed() },
        )
    };

    for &s0 in m.initial() {
        let step = machine.step(machine.initial(), m.label(s0));
        if m.is_terminal(s0) && step.accepts {
            return Ok(finish_violated(vec![s0], nodes.len(), peak));
        }
        for &q in &step.successors {
            if let std::collections::hash_map::Entry::Vacant(e) = ids.entry((s0, q)) {
                e.insert(nodes.len());
                frontier.push_back(nodes.len());
                nodes.push((s0, q));
                parents.push(None);
            }
        }
    }
    peak = peak.max(frontier.len());

    while let Some(idx) = frontier.pop_front() {
        let (s, q) = nodes[idx];
        for &s2 in m.successors(s) {
            let step = machine.step(q, m.label(s2));
            if m.is_terminal(s2) && step.accepts {
                let mut path = path_to(&nodes, &parents, idx);
                path.push(s2);
                return Ok(finish_violated(path, nodes.len(), peak));
            }
            for &q2 in &step.successors {
                if let std::collections::hash_map::Entry::Vacant(e) = ids.entry((s2, q2)) {
                    e.insert(nodes.len());
                    frontier.push_back(nodes.len());
                    nodes.push((s2, q2));
                    parents.push(Some(idx));
                }
            }
        }
        peak = peak.max(frontier.len());
    }

    Ok(Verdict::holds(CheckStats {
        explored: nodes.len(),
        peak_frontier: peak,
        wall: started.elapsed(),
    }))
}

/// Strongly connected components (Tarjan, iterative). Returns the
/// component id of each node.
fn sccs(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let unvisited = usize::MAX;
    let mut index = vec![unvisited; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![unvisited; n];
    let mut next_index = 0usize;
    let mut comp_count = 0usize;
    for root in 0..n {
        if index[root] != unvisited {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(frame) = frames.last_mut() {
            let (v, child) = *frame;
            if child < adj[v].len() {
                frame.1 += 1;
                let w = adj[v][child];
                if index[w] == unvisited {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    comp
}

/// Shortest cycle through `entry` (breadth-first over sorted adjacency);
/// returns the cycle nodes starting at `entry`. `None` if no cycle
/// passes through `entry`.
fn shortest_cycle(adj: &[Vec<usize>], entry: usize) -> Option<Vec<usize>> {
    if adj[entry].contains(&entry) {
        return Some(vec![entry]);
    }
    let mut pred: HashMap<usize, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in &adj[entry] {
        if !pred.contains_key(&v) {
            pred.insert(v, entry);
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if v == entry {
                let mut cycle = vec![u];
                let mut cursor = u;
                while cursor != entry {
                    cursor = pred[&cursor];
                    cycle.push(cursor);
                }
                cycle.reverse();
                return Some(cycle);
            }
            if let std::collections::hash_map::Entry::Vacant(e) = pred.entry(v) {
                e.insert(u);
                queue.push_back(v);
            }
        }
    }
    None
}

/// Checks a non-terminating system: holds iff every infinite execution
/// has a finite prefix satisfying the formula.
///
/// The product of the system with the lazy prefix automaton of the
/// negated formula is explored breadth-first, restricted to safe states
/// (prefix token not yet rejecting); rejecting tokens are never
/// expanded. A cycle in the safe region yields the violating lasso with
/// the shortest stem, then the shortest cycle, ties broken by state
/// index.
pub fn check_nonterminating(m: &TransitionSystem, f: &Formula) -> Result<Verdict, CheckError> {
    require_kind(m, TsKind::NonTerminating)?;
    require_atoms(m, f)?;
    let started = Instant::now();

    // Tokens of the lazy automaton for Not(f) are rejecting once some
    // prefix satisfies f, i.e. once the execution can no longer violate.
    let negated = Formula::not(f.clone());
    let mut lazy = LazyPrefixDba::new_over(&negated, m.props())?;

    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut dist: Vec<usize> = Vec::new();
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut frontier: VecDeque<usize> = VecDeque::new();
    let mut peak = 0usize;

    for &s0 in m.initial() {
        let token = lazy.step(lazy.initial(), m.label(s0));
        if lazy.is_rejecting(token) {
            continue;
        }
        let key = (s0, token);
        if !ids.contains_key(&key) {
            ids.insert(key, nodes.len());
            frontier.push_back(nodes.len());
            nodes.push(key);
            dist.push(0);
            parents.push(None);
            adj.push(Vec::new());
        }
    }
    peak = peak.max(frontier.len());

    while let Some(idx) = frontier.pop_front() {
        let (s, token) = nodes[idx];
        for &s2 in m.successors(s) {
            let token2 = lazy.step(token, m.label(s2));
            if lazy.is_rejecting(token2) {
                continue;
            }
            let key = (s2, token2);
            let dst = match ids.get(&key) {
                Some(&dst) => dst,
                None => {
                    let dst = nodes.len();
                    ids.insert(key, dst);
                    frontier.push_back(dst);
                    nodes.push(key);
                    dist.push(dist[idx] + 1);
                    parents.push(Some(idx));
                    adj.push(Vec::new());
                    dst
                }
            };
            adj[idx].push(dst);
        }
        peak = peak.max(frontier.len());
    }

    let stats = |explored: usize, peak: usize| CheckStats {
        explored,
        peak_frontier: peak,
        wall: started.elapsed(),
    };

    // A safe infinite execution exists iff the safe region has a cycle.
    let comp = sccs(&adj);
    let mut comp_size: HashMap<usize, usize> = HashMap::new();
    for &c in &comp {
        *comp_size.entry(c).or_insert(0) += 1;
    }
    let cyclic: Vec<usize> = (0..nodes.len())
        .filter(|&v| comp_size[&comp[v]] > 1 || adj[v].contains(&v))
        .collect();
    if cyclic.is_empty() {
        return Ok(Verdict::holds(stats(nodes.len(), peak)));
    }

    let min_dist = cyclic.iter().map(|&v| dist[v]).min().expect("non-empty");
    let mut best: Option<(Vec<usize>, usize)> = None;
    for &v in cyclic.iter().filter(|&&v| dist[v] == min_dist) {
        let cycle = shortest_cycle(&adj, v).expect("cyclic node has a cycle");
        let better = match &best {
            None => true,
            Some((bc, bv)) => {
                let key = (cycle.len(), nodes[v].0, nodes[v].1);
                let best_key = (bc.len(), nodes[*bv].0, nodes[*bv].1);
                key < best_key
            }
        };
        if better {
            best = Some((cycle, v));
        }
    }
    let (cycle_nodes, entry) = best.expect("candidate selected");

    let mut stem = Vec::new();
    let mut cursor = parents[entry];
    while let Some(idx) = cursor {
        stem.push(nodes[idx].0);
        cursor = parents[idx];
    }
    stem.reverse();
    let cycle: Vec<usize> = cycle_nodes.iter().map(|&v| nodes[v].0).collect();
    Ok(Verdict::violated(
        Counterexample::Lasso(LassoPath { stem, cycle }),
        stats(nodes.len(), peak),
    ))
}

/// How far into a lasso's infinite trace the prefix checks must go
/// before determinism and pigeonhole make them conclusive.
enum WrapBound {
    /// Deterministic-automaton state count for the formula; the bound
    /// is `|stem| + |cycle| * (n + 1)` letters.
    DfaStates(usize),
    /// Alphabet too large to materialize the automaton: run the lazy
    /// prefix machinery and stop when the token at a cycle boundary
    /// repeats.
    TokenRepeat,
}

fn wrap_bound(f: &Formula, m: &TransitionSystem) -> Result<WrapBound, CheckError> {
    if f.atoms().len() <= 8 {
        let dfa = crate::compile::ltlf_to_dfa(f)?;
        Ok(WrapBound::DfaStates(dfa.state_count()))
    } else {
        let _ = m;
        Ok(WrapBound::TokenRepeat)
    }
}

/// True iff every non-empty prefix of the lasso's infinite trace, out
/// to the conclusive bound, falsifies `f`. Prefix lengths up to
/// `skip` are assumed already checked by the caller.
fn lasso_refutes_all_prefixes(
    m: &TransitionSystem,
    f: &Formula,
    stem: &[usize],
    cycle: &[usize],
    bound: &WrapBound,
    skip: usize,
) -> Result<bool, CheckError> {
    let stem_letters: Vec<u64> = stem.iter().map(|&s| m.label(s)).collect();
    let cycle_letters: Vec<u64> = cycle.iter().map(|&s| m.label(s)).collect();
    let lasso = Lasso::from_masks(m.props().to_vec(), stem_letters, cycle_letters)?;
    match bound {
        WrapBound::DfaStates(n) => {
            let total = stem.len() + cycle.len() * (n + 1);
            for len in (skip + 1)..=total {
                if evaluate(f, &lasso.prefix(len))? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        WrapBound::TokenRepeat => {
            let negated = Formula::not(f.clone());
            let mut lazy = LazyPrefixDba::new_over(&negated, m.props())?;
            let mut token = lazy.initial();
            let mut len = 0usize;
            for &letter in lasso.stem() {
                token = lazy.step(token, letter);
                len += 1;
                if len > skip && evaluate(f, &lasso.prefix(len))? {
                    return Ok(false);
                }
            }
            let mut boundary_seen = std::collections::HashSet::new();
            while boundary_seen.insert(token) {
                for &letter in lasso.cycle() {
                    token = lazy.step(token, letter);
                    len += 1;
                    if len > skip && evaluate(f, &lasso.prefix(len))? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Replays a counterexample against the system and formula,
/// independently of the checker that produced it. Structural failures
/// (not an execution of the system) are distinguished from semantic
/// ones (an execution whose trace does not refute the formula).
pub fn certify_counterexample(
    m: &TransitionSystem,
    f: &Formula,
    c: &Counterexample,
) -> Result<(), CertifyError> {
    let structural = |msg: String| CertifyError::Structural(msg);
    let edge_ok = |src: usize, dst: usize| m.successors(src).contains(&dst);
    let check_state = |s: usize| -> Result<(), CertifyError> {
        if s >= m.state_count() {
            return Err(structural(format!("state index {s} out of range")));
        }
        Ok(())
    };
    match c {
        Counterexample::Finite(path) => {
            if m.kind() != TsKind::Terminating {
                return Err(structural("finite path against a non-terminating system".into()));
            }
            if path.states.is_empty() {
                return Err(structural("empty path".into()));
            }
            for &s in &path.states {
                check_state(s)?;
            }
            if !m.initial().contains(&path.states[0]) {
                return Err(structural(format!(
                    "path starts at non-initial state `{}`",
                    m.states()[path.states[0]]
                )));
            }
            for pair in path.states.windows(2) {
                if !edge_ok(pair[0], pair[1]) {
                    return Err(structural(format!(
                        "missing edge {} -> {}",
                        m.states()[pair[0]],
                        m.states()[pair[1]]
                    )));
                }
            }
            let last = *path.states.last().expect("non-empty");
            if !m.is_terminal(last) {
                return Err(structural(format!(
                    "path ends at non-terminal state `{}`",
                    m.states()[last]
                )));
            }
            let trace = trace_of(m, &path.states)
                .map_err(|e| structural(e.to_string()))?;
            let negated = Formula::not(f.clone());
            match evaluate(&negated, &trace) {
                Ok(true) => Ok(()),
                Ok(false) => Err(CertifyError::Semantic(
                    "execution trace satisfies the formula".into(),
                )),
                Err(e) => Err(structural(e.to_string())),
            }
        }
        Counterexample::Lasso(lasso) => {
            if m.kind() != TsKind::NonTerminating {
                return Err(structural("lasso against a terminating system".into()));
            }
            if lasso.cycle.is_empty() {
                return Err(structural("empty cycle".into()));
            }
            for &s in lasso.stem.iter().chain(lasso.cycle.iter()) {
                check_state(s)?;
            }
            let first = *lasso.stem.first().unwrap_or(&lasso.cycle[0]);
            if !m.initial().contains(&first) {
                return Err(structural(format!(
                    "lasso starts at non-initial state `{}`",
                    m.states()[first]
                )));
            }
            let sequence: Vec<usize> =
                lasso.stem.iter().chain(lasso.cycle.iter()).copied().collect();
            for pair in sequence.windows(2) {
                if !edge_ok(pair[0], pair[1]) {
                    return Err(structural(format!(
                        "missing edge {} -> {}",
                        m.states()[pair[0]],
                        m.states()[pair[1]]
                    )));
                }
            }
            let last = *lasso.cycle.last().expect("non-empty");
            if !edge_ok(last, lasso.cycle[0]) {
                return Err(structural(format!(
                    "cycle does not close: missing edge {} -> {}",
                    m.states()[last],
                    m.states()[lasso.cycle[0]]
                )));
            }
            let bound = wrap_bound(f, m).map_err(|e| structural(e.to_string()))?;
            match lasso_refutes_all_prefixes(m, f, &lasso.stem, &lasso.cycle, &bound, 0) {
                Ok(true) => Ok(()),
                Ok(false) => Err(CertifyError::Semantic(
                    "some prefix of the execution satisfies the formula".into(),
                )),
                Err(e) => Err(structural(e.to_string())),
            }
        }
    }
}

/// Brute-force enumeration oracle. Violations are definitive (the
/// counterexample certifies); a "holds" outcome only covers executions
/// within `max_len` states and is flagged `bounded`.
pub fn bounded_oracle_check(
    m: &TransitionSystem,
    f: &Formula,
    mode: TsKind,
    max_len: usize,
) -> Result<Verdict, CheckError> {
    require_kind(m, mode)?;
    require_atoms(m, f)?;
    let started = Instant::now();
    let mut explored = 0usize;
    let mut peak_depth = 0usize;
    let verdict = match mode {
        TsKind::Terminating => {
            let mut best: Option<Vec<usize>> = None;
            let mut path = Vec::new();
            for &s0 in m.initial() {
                path.push(s0);
                oracle_paths(m, f, &mut path, max_len, &mut explored, &mut peak_depth, &mut best)?;
                path.pop();
            }
            match best {
                Some(states) => Verdict::violated(
                    Counterexample::Finite(FinitePath { states }),
                    CheckStats::default(),
                ),
                None => {
                    let mut v = Verdict::holds(CheckStats::default());
                    v.bounded = true;
                    v
                }
            }
        }
        TsKind::NonTerminating => {
            let bound = wrap_bound(f, m)?;
            let mut candidates: Vec<(Vec<usize>, usize)> = Vec::new();
            let mut walk = Vec::new();
            for &s0 in m.initial() {
                walk.push(s0);
                if !evaluate(f, &trace_of(m, &walk)?)? {
                    oracle_walks(m, f, &mut walk, max_len, &mut explored, &mut peak_depth, &mut candidates)?;
                }
                walk.pop();
            }
            // Order candidates by stem length, then cycle length, then
            // the state sequences themselves.
            candidates.sort_by(|(wa, aa), (wb, ab)| {
                let ka = (*aa, wa.len() - *aa, &wa[..*aa], &wa[*aa..]);
                let kb = (*ab, wb.len() - *ab, &wb[..*ab], &wb[*ab..]);
                ka.cmp(&kb)
            });
            let mut found: Option<LassoPath> = None;
            for (walk, split) in candidates {
                let (stem, cycle) = (&walk[..split], &walk[split..]);
                if lasso_refutes_all_prefixes(m, f, stem, cycle, &bound, walk.len())? {
                    found = Some(LassoPath { stem: stem.to_vec(), cycle: cycle.to_vec() });
                    break;
                }
            }
            match found {
                Some(lasso) => {
                    Verdict::violated(Counterexample::Lasso(lasso), CheckStats::default())
                }
                None => {
                    let mut v = Verdict::holds(CheckStats::default());
                    v.bounded = true;
                    v
                }
            }
        }
    };
    let mut verdict = verdict;
    verdict.stats = CheckStats {
        explored,
        peak_frontier: peak_depth,
        wall: started.elapsed(),
    };
    Ok(verdict)
}

/// Depth-first enumeration of executions (paths ending at a terminal
/// state) with at most `max_len` states; keeps the shortest, then
/// lexicographically first, falsifying execution.
fn oracle_paths(
    m: &TransitionSystem,
    f: &Formula,
    path: &mut Vec<usize>,
    max_len: usize,
    explored: &mut usize,
    peak_depth: &mut usize,
    best: &mut Option<Vec<usize>>,
) -> Result<(), CheckError> {
    *explored += 1;
    if *explored > ORACLE_NODE_LIMIT {
        return Err(CheckError::BoundExplosion(ORACLE_NODE_LIMIT));
    }
    *peak_depth = (*peak_depth).max(path.len());
    let s = *path.last().expect("non-empty path");
    if m.is_terminal(s) && !evaluate(f, &trace_of(m, path)?)? {
        let better = match best {
            None => true,
            Some(b) => (path.len(), &*path) < (b.len(), b),
        };
        if better {
            *best = Some(path.clone());
        }
    }
    if path.len() < max_len {
        for &s2 in m.successors(s) {
            path.push(s2);
            oracle_paths(m, f, path, max_len, explored, peak_depth, best)?;
            path.pop();
        }
    }
    Ok(())
}

/// Depth-first enumeration of walks whose every prefix falsifies `f`
/// (longer walks cannot help once a prefix satisfies it). Each walk
/// contributes one lasso candidate per closing split.
fn oracle_walks(
    m: &TransitionSystem,
    f: &Formula,
    walk: &mut Vec<usize>,
    max_len: usize,
    explored: &mut usize,
    peak_depth: &mut usize,
    candidates: &mut Vec<(Vec<usize>, usize)>,
) -> Result<(), CheckError> {
    *explored += 1;
    if *explored > ORACLE_NODE_LIMIT {
        return Err(CheckError::BoundExplosion(ORACLE_NODE_LIMIT));
    }
    *peak_depth = (*peak_depth).max(walk.len());
    let last = *walk.last().expect("non-empty walk");
    for split in 0..walk.len() {
        if m.successors(last).contains(&walk[split]) {
            candidates.push((walk.clone(), split));
        }
    }
    if walk.len() < max_len {
        for &s2 in m.successors(last) {
            walk.push(s2);
            if !evaluate(f, &trace_of(m, walk)?)? {
                oracle_walks(m, f, walk, max_len, explored, peak_depth, candidates)?;
            }
            walk.pop();
        }
    }
    Ok(())
}
