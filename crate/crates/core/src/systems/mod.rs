//! Transition systems, Moore machines, and the transducer-to-system
//! conversion.
//!
//! A transition system is either non-terminating (no sink states; all
//! executions are infinite) or terminating (a non-empty terminal set;
//! terminal states are the only ones allowed to be sinks, and finite
//! executions end there). Labels are valuation bitmasks over the sorted
//! proposition list, matching [`crate::formula::Trace`].

mod format;

pub use format::{parse_moore, parse_ts, render_moore, render_ts};

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error("moore machines support at most 8 input atoms, got {0}")]
    TooManyInputs(usize),
    #[error("systems support at most 64 propositions, got {0}")]
    TooManyProps(usize),
}

fn invalid(msg: impl Into<String>) -> SystemError {
    SystemError::Invalid(msg.into())
}

/// Whether executions are finite (ending in terminal states) or
/// infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsKind {
    Terminating,
    NonTerminating,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    kind: TsKind,
    props: Vec<String>,
    states: Vec<String>,
    labels: Vec<u64>,
    edges: Vec<(usize, usize)>,
    initial: Vec<usize>,
    terminal: Vec<bool>,
    succ: Vec<Vec<usize>>,
}

impl TransitionSystem {
    pub fn new(
        kind: TsKind,
        props: Vec<String>,
        states: Vec<String>,
        labels: Vec<u64>,
        mut edges: Vec<(usize, usize)>,
        mut initial: Vec<usize>,
        terminal: Vec<usize>,
    ) -> Result<TransitionSystem, SystemError> {
        let mut sorted_props = props;
        sorted_props.sort();
        sorted_props.dedup();
        if sorted_props.len() > 64 {
            return Err(SystemError::TooManyProps(sorted_props.len()));
        }
        if states.is_empty() {
            return Err(invalid("a system needs at least one state"));
        }
        let mut seen = BTreeSet::new();
        for name in &states {
            if !seen.insert(name) {
                return Err(invalid(format!("duplicate state `{name}`")));
            }
        }
        if labels.len() != states.len() {
            return Err(invalid("labeling misaligned with state set"));
        }
        let full = if sorted_props.len() == 64 {
            u64::MAX
        } else {
            (1u64 << sorted_props.len()) - 1
        };
        for &mask in &labels {
            if mask & !full != 0 {
                return Err(invalid("label uses undeclared propositions"));
            }
        }
        for &(src, dst) in &edges {
            if src >= states.len() || dst >= states.len() {
                return Err(invalid("dangling edge"));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        if initial.is_empty() {
            return Err(invalid("empty initial state set"));
        }
        for &s in &initial {
            if s >= states.len() {
                return Err(invalid("initial state out of range"));
            }
        }
        initial.sort_unstable();
        initial.dedup();
        let mut terminal_flags = vec![false; states.len()];
        for &s in &terminal {
            if s >= states.len() {
                return Err(invalid("terminal state out of range"));
            }
            terminal_flags[s] = true;
        }
        match kind {
            TsKind::Terminating => {
                if !terminal_flags.iter().any(|&t| t) {
                    return Err(invalid("terminating system with empty terminal set"));
                }
            }
            TsKind::NonTerminating => {
                if terminal_flags.iter().any(|&t| t) {
                    return Err(invalid("non-terminating system cannot declare terminal states"));
                }
            }
        }
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
        for &(src, dst) in &edges {
            succ[src].push(dst);
        }
        for (s, outgoing) in succ.iter().enumerate() {
            if outgoing.is_empty() {
                match kind {
                    TsKind::NonTerminating => {
                        return Err(invalid(format!(
                            "sink state `{}` in a non-terminating system",
                            states[s]
                        )));
                    }
                    TsKind::Terminating if !terminal_flags[s] => {
                        return Err(invalid(format!(
                            "non-terminal sink state `{}` in a terminating system",
                            states[s]
                        )));
                    }
                    TsKind::Terminating => {}
                }
            }
        }
        Ok(TransitionSystem {
            kind,
            props: sorted_props,
            states,
            labels,
            edges,
            initial,
            terminal: terminal_flags,
            succ,
        })
    }

    pub fn kind(&self) -> TsKind {
        self.kind
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

    pub fn label(&self, state: usize) -> u64 {
        self.labels[state]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        self.terminal[state]
    }

    pub fn terminals(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&s| self.terminal[s]).collect()
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.succ[state]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreMachine {
    kind: TsKind,
    inputs: Vec<String>,
    outputs: Vec<String>,
    states: Vec<String>,
    initial: usize,
    output_fn: Vec<u64>,
    delta: Vec<Vec<usize>>,
    terminal: Vec<bool>,
}

impl MooreMachine {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: TsKind,
        inputs: Vec<String>,
        outputs: Vec<String>,
        states: Vec<String>,
        initial: usize,
        output_fn: Vec<u64>,
        delta: Vec<Vec<usize>>,
        terminal: Vec<usize>,
    ) -> Result<MooreMachine, SystemError> {
        let mut inputs = inputs;
        inputs.sort();
        inputs.dedup();
        let mut outputs = outputs;
        outputs.sort();
        outputs.dedup();
        if inputs.len() > 8 {
            return Err(SystemError::TooManyInputs(inputs.len()));
        }
        if outputs.len() > 56 {
            return Err(SystemError::TooManyProps(inputs.len() + outputs.len()));
        }
        if let Some(shared) = inputs.iter().find(|i| outputs.binary_search(i).is_ok()) {
            return Err(invalid(format!("atom `{shared}` is both input and output")));
        }
        if states.is_empty() {
            return Err(invalid("a machine needs at least one state"));
        }
        let mut seen = BTreeSet::new();
        for name in &states {
            if !seen.insert(name) {
                return Err(invalid(format!("duplicate state `{name}`")));
            }
        }
        if initial >= states.len() {
            return Err(invalid("initial state out of range"));
        }
        if output_fn.len() != states.len() || delta.len() != states.len() {
            return Err(invalid("tables misaligned with state set"));
        }
        let out_full = if outputs.is_empty() { 0 } else { (1u64 << outputs.len()) - 1 };
        for &mask in &output_fn {
            if mask & !out_full != 0 {
                return Err(invalid("output valuation uses undeclared atoms"));
            }
        }
        let val_count = 1usize << inputs.len();
        for row in &delta {
            if row.len() != val_count {
                return Err(invalid("transition function not total"));
            }
            for &dst in row {
                if dst >= states.len() {
                    return Err(invalid("transition target out of range"));
                }
            }
        }
        let mut terminal_flags = vec![false; states.len()];
        for &s in &terminal {
            if s >= states.len() {
                return Err(invalid("terminal state out of range"));
            }
            terminal_flags[s] = true;
        }
        match kind {
            TsKind::Terminating => {
                if !terminal_flags.iter().any(|&t| t) {
                    return Err(invalid("terminating machine with empty terminal set"));
                }
            }
            TsKind::NonTerminating => {
                if terminal_flags.iter().any(|&t| t) {
                    return Err(invalid("non-terminating machine cannot declare terminal states"));
                }
            }
        }
        Ok(MooreMachine {
            kind,
            inputs,
            outputs,
            states,
            initial,
            output_fn,
            delta,
            terminal: terminal_flags,
        })
    }

    pub fn kind(&self) -> TsKind {
        self.kind
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn output_of(&self, state: usize) -> u64 {
        self.output_fn[state]
    }

    pub fn step(&self, state: usize, input: u64) -> usize {
        self.delta[state][input as usize]
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        self.terminal[state]
    }
}

/// Converts a Moore machine into the transition system whose executions
/// are exactly the machine's traces.
///
/// States are reachable pairs of machine state and current input
/// valuation, labeled with the input valuation united with the state's
/// output. Every input valuation of the initial machine state is an
/// initial system state, and each step nondeterministically picks the
/// next input.
///
/// For a terminating machine, a pair whose machine successor is
/// machine-terminal is a terminal system state. By default such states
/// become sinks (the play ends on acceptance); with `terminal_continue`
/// their outgoing edges are kept, so executions may pass through them.
pub fn moore_to_ts_with(
    m: &MooreMachine,
    terminal_continue: bool,
) -> Result<TransitionSystem, SystemError> {
    if m.inputs.len() > 8 {
        return Err(SystemError::TooManyInputs(m.inputs.len()));
    }
    let val_count = 1u64 << m.inputs.len();
    // Combined proposition list; inputs and outputs are disjoint.
    let mut props: Vec<String> = m.inputs.iter().chain(m.outputs.iter()).cloned().collect();
    props.sort();
    let bit_of = |name: &String| props.binary_search(name).expect("own prop") as u32;
    let input_bits: Vec<u32> = m.inputs.iter().map(bit_of).collect();
    let output_bits: Vec<u32> = m.outputs.iter().map(bit_of).collect();
    let combine = |input_val: u64, output_val: u64| -> u64 {
        let mut mask = 0u64;
        for (i, &bit) in input_bits.iter().enumerate() {
            if input_val & (1 << i) != 0 {
                mask |= 1 << bit;
            }
        }
        for (o, &bit) in output_bits.iter().enumerate() {
            if output_val & (1 << o) != 0 {
                mask |= 1 << bit;
            }
        }
        mask
    };

    let is_terminal_pair =
        |q: usize, i: u64| m.kind == TsKind::Terminating && m.terminal[m.step(q, i)];

    let mut order: Vec<(usize, u64)> = Vec::new();
    let mut ids: std::collections::HashMap<(usize, u64), usize> = std::collections::HashMap::new();
    for i in 0..val_count {
        ids.insert((m.initial, i), order.len());
        order.push((m.initial, i));
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let (src_idx, (q, i)) = (head, order[head]);
        head += 1;
        if is_terminal_pair(q, i) && !terminal_continue {
            continue;
        }
        let q_next = m.step(q, i);
        for i_next in 0..val_count {
            let pair = (q_next, i_next);
            let dst_idx = match ids.get(&pair) {
                Some(&idx) => idx,
                None => {
                    let idx = order.len();
                    ids.insert(pair, idx);
                    order.push(pair);
                    idx
                }
            };
            edges.push((src_idx, dst_idx));
        }
    }
    let states: Vec<String> = order
        .iter()
        .map(|&(q, i)| format!("{}_i{}", m.states[q], i))
        .collect();
    let labels: Vec<u64> = order.iter().map(|&(q, i)| combine(i, m.output_fn[q])).collect();
    let initial: Vec<usize> = (0..val_count as usize).collect();
    let terminal: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|&(_, &(q, i))| is_terminal_pair(q, i))
        .map(|(idx, _)| idx)
        .collect();
    if m.kind == TsKind::Terminating && terminal.is_empty() {
        return Err(invalid(
            "terminating machine never reaches its terminal set from the initial state",
        ));
    }
    TransitionSystem::new(m.kind, props, states, labels, edges, initial, terminal)
}

/// [`moore_to_ts_with`] in the default terminal-as-sink mode.
pub fn moore_to_ts(m: &MooreMachine) -> Result<TransitionSystem, SystemError> {
    moore_to_ts_with(m, false)
}
