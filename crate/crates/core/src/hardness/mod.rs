//! Space-bounded Turing machine simulation and its encoding as a
//! nonterminating model-checking instance.
//!
//! A machine with state set Q, alphabet Γ, and space bound 2^{cn}
//! (c a per-machine constant, n the input length) is compiled to a
//! transition system whose infinite executions spell out sequences of
//! cells. Each cell is one tape position: a `part_0` state labeled
//! with the cell content, followed by cn counter states encoding the
//! tape position in binary (proposition `bit`, least significant
//! first). The accompanying formula holds on some prefix of every
//! execution except the faithful encodings of non-accepting
//! computations, so checking it decides acceptance.
//!
//! The consistency formula constrains each prefix that ends flush at
//! a cell boundary: counters must start at zero and increment mod
//! 2^{cn} (C1), the first configuration must spell the initial tape
//! (C2), and the last complete cell of the prefix must follow from
//! the matching cell one configuration earlier by the transition
//! rules (C3). C3 pins the new cell through six rule families: head
//! on the matching cell, head entering from either neighbor, head on
//! either neighbor but moving away, and no head nearby.

mod format;
mod phi;

pub use format::{parse_tm, render_tm};
pub use phi::{fn_member, gen_phi_n, ln_member, PHI_ATOMS};

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::formula::Formula;
use crate::systems::{SystemError, TransitionSystem, TsKind};

/// Hard cap on cn = c·|input| for instance generation; the generated
/// system has Θ(cn) states but the encoded computation runs for up to
/// 2^{cn} configurations of 2^{cn} cells each.
pub const MAX_CN: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum HardnessError {
    #[error("malformed letter: {0}")]
    MalformedLetter(String),
    #[error("unknown input symbol `{0}`")]
    UnknownSymbol(String),
    #[error("input must not contain the blank symbol")]
    BlankInInput,
    #[error("input must be non-empty")]
    EmptyInput,
    #[error("cn = {cn} exceeds the bound guard {max}")]
    BoundGuard { cn: usize, max: usize },
    #[error("proposition `{0}` collides with another generated name")]
    PropCollision(String),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Head movement direction; the transition function has no stay moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
}

/// A deterministic Turing machine with a declared space coefficient.
///
/// `rules` maps (state, read symbol) to (state, written symbol,
/// direction) and must be total on non-accepting states; accepting
/// states halt and carry no rules. `blank` indexes the blank symbol
/// within `symbols`. On input of length n the machine is confined to
/// 2^{c·n} tape cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachineSpec {
    pub states: Vec<String>,
    pub start: usize,
    pub accept: Vec<bool>,
    pub symbols: Vec<String>,
    pub blank: usize,
    pub rules: BTreeMap<(usize, usize), (usize, usize, Dir)>,
    pub c: usize,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TuringMachineSpec {
    /// Checks structural well-formedness: index ranges, name shapes,
    /// uniqueness, totality on non-accepting states, and c ≥ 1.
    pub fn validate(&self) -> Result<(), HardnessError> {
        let bad = |msg: String| Err(HardnessError::InvalidMachine(msg));
        if self.states.is_empty() {
            return bad("no states".into());
        }
        if self.accept.len() != self.states.len() {
            return bad("accept flags misaligned with state set".into());
        }
        if self.start >= self.states.len() {
            return bad("start state out of range".into());
        }
        if self.blank >= self.symbols.len() {
            return bad("blank symbol out of range".into());
        }
        if self.c == 0 {
            return bad("c must be at least 1".into());
        }
        let mut seen = BTreeSet::new();
        for name in &self.states {
            if !is_ident(name) || name == "_" {
                return bad(format!("state name `{name}` is not an identifier"));
            }
            if !seen.insert(name) {
                return bad(format!("duplicate state `{name}`"));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, name) in self.symbols.iter().enumerate() {
            if !is_ident(name) && !(i == self.blank && name == "_") {
                return bad(format!("symbol name `{name}` is not an identifier"));
            }
            if !seen.insert(name) {
                return bad(format!("duplicate symbol `{name}`"));
            }
        }
        for (&(q, g), &(q2, g2, _)) in &self.rules {
            if q >= self.states.len() || q2 >= self.states.len() {
                return bad("rule state out of range".into());
            }
            if g >= self.symbols.len() || g2 >= self.symbols.len() {
                return bad("rule symbol out of range".into());
            }
            if self.accept[q] {
                return bad(format!(
                    "rule from accepting state `{}`",
                    self.states[q]
                ));
            }
        }
        for q in 0..self.states.len() {
            if self.accept[q] {
                continue;
            }
            for g in 0..self.symbols.len() {
                if !self.rules.contains_key(&(q, g)) {
                    return bad(format!(
                        "no rule for state `{}` reading `{}`",
                        self.states[q], self.symbols[g]
                    ));
                }
            }
        }
        Ok(())
    }

    fn resolve_input<S: AsRef<str>>(&self, input: &[S]) -> Result<Vec<usize>, HardnessError> {
        if input.is_empty() {
            return Err(HardnessError::EmptyInput);
        }
        input
            .iter()
            .map(|s| {
                let s = s.as_ref();
                match self.symbols.iter().position(|t| t == s) {
                    None => Err(HardnessError::UnknownSymbol(s.to_string())),
                    Some(g) if g == self.blank => Err(HardnessError::BlankInInput),
                    Some(g) => Ok(g),
                }
            })
            .collect()
    }
}

/// Simulation outcome under the 2^{cn} space bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmOutcome {
    Accept,
    /// The head left the tape bound, or a configuration repeated
    /// (within bounded space, repetition proves divergence).
    Reject,
    /// The step budget ran out first.
    Loop,
}

/// Runs the machine on `input` with the head starting on the blank
/// cell immediately left of it, confined to 2^{cn} cells.
pub fn simulate_tm<S: AsRef<str>>(
    tm: &TuringMachineSpec,
    input: &[S],
    max_steps: usize,
) -> Result<TmOutcome, HardnessError> {
    tm.validate()?;
    let input = tm.resolve_input(input)?;
    let cn = tm.c * input.len();
    if cn > 24 {
        return Err(HardnessError::BoundGuard { cn, max: 24 });
    }
    let cells = 1usize << cn;
    let mut tape = vec![tm.blank; cells];
    for (i, &g) in input.iter().enumerate() {
        tape[i + 1] = g;
    }
    let mut state = tm.start;
    let mut head = 0usize;
    let mut seen = HashSet::new();
    let mut steps = 0usize;
    loop {
        if tm.accept[state] {
            return Ok(TmOutcome::Accept);
        }
        if !seen.insert((state, head, tape.clone())) {
            return Ok(TmOutcome::Reject);
        }
        if steps == max_steps {
            return Ok(TmOutcome::Loop);
        }
        let &(q2, g2, dir) = tm
            .rules
            .get(&(state, tape[head]))
            .expect("validated machine is total");
        tape[head] = g2;
        state = q2;
        match dir {
            Dir::Left => {
                if head == 0 {
                    return Ok(TmOutcome::Reject);
                }
                head -= 1;
            }
            Dir::Right => {
                head += 1;
                if head >= cells {
                    return Ok(TmOutcome::Reject);
                }
            }
        }
        steps += 1;
    }
}

/// A generated model-checking instance: the machine accepts its input
/// exactly when `formula` holds of `system` under nonterminating
/// semantics.
#[derive(Debug, Clone)]
pub struct TmInstance {
    pub system: TransitionSystem,
    pub formula: Formula,
    pub cn: usize,
    pub props: Vec<String>,
}

/// Cell content: either a plain tape symbol or a symbol under the head.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Plain(usize),
    Head(usize, usize),
}

fn render_cell(tm: &TuringMachineSpec, cell: Cell) -> String {
    let sym = |g: usize| {
        if tm.symbols[g] == "_" {
            "blank".to_string()
        } else {
            tm.symbols[g].clone()
        }
    };
    match cell {
        Cell::Plain(g) => sym(g),
        Cell::Head(q, g) => format!("{}_{}", tm.states[q], sym(g)),
    }
}

/// Builds the transition system and formula encoding acceptance of
/// `input` within 2^{cn} tape cells, where cn = c·|input|.
pub fn gen_tm_instance<S: AsRef<str>>(
    tm: &TuringMachineSpec,
    input: &[S],
    c: usize,
) -> Result<TmInstance, HardnessError> {
    tm.validate()?;
    if c == 0 {
        return Err(HardnessError::InvalidMachine("c must be at least 1".into()));
    }
    let input = tm.resolve_input(input)?;
    let n = input.len();
    let cn = c * n;
    if cn > MAX_CN {
        return Err(HardnessError::BoundGuard { cn, max: MAX_CN });
    }

    let nq = tm.states.len();
    let ng = tm.symbols.len();
    let mut cells: Vec<Cell> = (0..ng).map(Cell::Plain).collect();
    for q in 0..nq {
        for g in 0..ng {
            cells.push(Cell::Head(q, g));
        }
    }

    // Propositions, with collision detection across the generated
    // names (e.g. a symbol literally called "blank" next to `_`).
    let mut props: Vec<String> = Vec::new();
    let mut prop_set = BTreeSet::new();
    let mut add_prop = |name: String, props: &mut Vec<String>| {
        if !prop_set.insert(name.clone()) {
            return Err(HardnessError::PropCollision(name));
        }
        props.push(name);
        Ok(())
    };
    for i in 0..=cn {
        add_prop(format!("part_{i}"), &mut props)?;
    }
    add_prop("bit".to_string(), &mut props)?;
    let cell_props: Vec<String> = cells
        .iter()
        .map(|&cell| format!("cell_{}", render_cell(tm, cell)))
        .collect();
    for p in &cell_props {
        add_prop(p.clone(), &mut props)?;
    }

    let mut sorted_props = props.clone();
    sorted_props.sort();
    let bit_of = |name: &str| -> u64 {
        let i = sorted_props
            .binary_search_by(|p| p.as_str().cmp(name))
            .expect("generated proposition");
        1u64 << i
    };

    // States: one per cell content, then counter states (i, b) for
    // 1 ≤ i ≤ cn carrying bit b of the position counter.
    let mut state_names: Vec<String> = Vec::new();
    let mut labels: Vec<u64> = Vec::new();
    for (ci, &cell) in cells.iter().enumerate() {
        state_names.push(format!("c_{}", render_cell(tm, cell)));
        labels.push(bit_of("part_0") | bit_of(&cell_props[ci]));
    }
    let counter_base = cells.len();
    for i in 1..=cn {
        for b in 0..2u64 {
            state_names.push(format!("b{i}_{b}"));
            let mut mask = bit_of(&format!("part_{i}"));
            if b == 1 {
                mask |= bit_of("bit");
            }
            labels.push(mask);
        }
    }
    let counter = |i: usize, b: usize| counter_base + (i - 1) * 2 + b;

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for ci in 0..cells.len() {
        for b in 0..2 {
            edges.push((ci, counter(1, b)));
        }
    }
    for i in 1..cn {
        for b in 0..2 {
            for b2 in 0..2 {
                edges.push((counter(i, b), counter(i + 1, b2)));
            }
        }
    }
    for b in 0..2 {
        for ci in 0..cells.len() {
            edges.push((counter(cn, b), ci));
        }
    }
    let head_cell_index = |q: usize, g: usize| ng + q * ng + g;
    let initial = vec![head_cell_index(tm.start, tm.blank)];

    let system = TransitionSystem::new(
        TsKind::NonTerminating,
        props.clone(),
        state_names,
        labels,
        edges,
        initial,
        Vec::new(),
    )?;

    let formula = build_formula(tm, &input, cn, &cell_props, ng);
    let budget = {
        let a = cells.len();
        let r = tm.rules.len();
        200 * (cn + 2) * (cn + 2) * (a * a * a + r * a + n + 2)
    };
    assert!(
        formula.size() <= budget,
        "formula size {} exceeds polynomial budget {budget}",
        formula.size()
    );

    Ok(TmInstance {
        system,
        formula,
        cn,
        props,
    })
}

fn build_formula(
    tm: &TuringMachineSpec,
    input: &[usize],
    cn: usize,
    cell_props: &[String],
    ng: usize,
) -> Formula {
    let n = input.len();
    let tt = || Formula::True;
    let bit = || Formula::atom("bit");
    let part0 = || Formula::atom("part_0");
    let plain = |g: usize| Formula::atom(cell_props[g].clone());
    let head = |q: usize, g: usize| Formula::atom(cell_props[ng + q * ng + g].clone());
    let xn = |f: Formula, k: usize| Formula::next_n(f, k);
    // Holds when φ holds cn+1 positions from the end of the trace,
    // i.e. at the start of the last complete cell when the trace ends
    // flush at a cell boundary.
    let at_last_cell = |f: Formula| {
        Formula::eventually(Formula::and(
            f,
            xn(Formula::not(Formula::next(tt())), cn),
        ))
    };
    let xor = |a: Formula, b: Formula| Formula::not(Formula::iff(a, b));

    let new_config = Formula::conj(
        std::iter::once(part0())
            .chain((1..=cn).map(|i| xn(Formula::not(bit()), i))),
    );

    // C1: the counter starts at zero and increments mod 2^{cn}
    // between consecutive cells (least significant bit first).
    let c1_zero = Formula::implies(
        xn(tt(), cn),
        Formula::conj((1..=cn).map(|i| xn(Formula::not(bit()), i))),
    );
    let succ = {
        let b = |i: usize| xn(bit(), i);
        let bp = |i: usize| xn(bit(), cn + 1 + i);
        Formula::conj(std::iter::once(Formula::iff(bp(1), Formula::not(b(1)))).chain(
            (2..=cn).map(|i| {
                let carry = Formula::and(b(i - 1), Formula::not(bp(i - 1)));
                Formula::iff(bp(i), xor(b(i), carry))
            }),
        ))
    };
    let c1_succ = Formula::globally(Formula::implies(
        Formula::and(part0(), xn(tt(), 2 * cn + 1)),
        succ,
    ));
    let c1 = Formula::and(c1_zero, c1_succ);

    // C2: the first configuration spells the input left-padded with
    // the head on a blank, then blanks up to the next configuration.
    // Prefixes can end inside a cell, which makes the strong-next
    // NewConfig test false on a truncated opening cell; the release
    // condition therefore also fires on a cell cut off by the end of
    // the trace, which constrains nothing.
    let cell_width = cn + 1;
    let c2_input = Formula::implies(
        xn(tt(), cell_width * n),
        Formula::conj(
            (1..=n).map(|i| xn(plain(input[i - 1]), cell_width * i)),
        ),
    );
    let truncated = Formula::and(part0(), Formula::not(xn(tt(), cn)));
    let c2_blanks = Formula::implies(
        xn(tt(), cell_width * (n + 1)),
        xn(
            Formula::weak_until(
                Formula::implies(part0(), plain(tm.blank)),
                Formula::or(new_config.clone(), truncated),
            ),
            cell_width * (n + 1),
        ),
    );
    let c2 = Formula::and(c2_input, c2_blanks);

    // The current cell sits in the next-to-last configuration and its
    // position counter matches the last complete cell of the trace.
    let match_last_cell = Formula::conj(
        [
            part0(),
            at_last_cell(part0()),
        ]
        .into_iter()
        .chain((1..=cn).map(|i| Formula::iff(xn(bit(), i), at_last_cell(xn(bit(), i)))))
        .chain(std::iter::once(Formula::next(Formula::until(
            Formula::not(new_config.clone()),
            Formula::and(
                new_config.clone(),
                Formula::next(Formula::globally(Formula::not(new_config.clone()))),
            ),
        )))),
    );

    // C3: six rule families pinning the last complete cell from the
    // matching cell one configuration earlier. `mlc` guards fire at
    // the matching cell or at its left neighbor (for families whose
    // antecedent starts one cell early).
    let rules = &tm.rules;
    let fam_write = Formula::conj(rules.iter().map(|(&(q, g), &(_, g2, _))| {
        Formula::implies(head(q, g), at_last_cell(plain(g2)))
    }));
    let fam_enter_left = Formula::conj((0..ng).flat_map(|g1| {
        rules
            .iter()
            .filter(|&(_, &(_, _, d))| d == Dir::Left)
            .map(move |(&(q, g2), &(q2, _, _))| {
                Formula::implies(
                    Formula::and(plain(g1), xn(head(q, g2), cell_width)),
                    at_last_cell(head(q2, g1)),
                )
            })
    }));
    let fam_enter_right = Formula::conj(
        rules
            .iter()
            .filter(|&(_, &(_, _, d))| d == Dir::Right)
            .flat_map(|(&(q, g1), &(q2, _, _))| {
                (0..ng).map(move |g2| {
                    Formula::implies(
                        Formula::and(head(q, g1), xn(plain(g2), cell_width)),
                        at_last_cell(head(q2, g2)),
                    )
                })
            }),
    );
    let fam_idle = Formula::conj((0..ng).flat_map(|g1| {
        (0..ng).flat_map(move |g2| {
            (0..ng).map(move |g3| {
                Formula::implies(
                    Formula::conj([
                        plain(g1),
                        xn(plain(g2), cell_width),
                        xn(plain(g3), 2 * cell_width),
                    ]),
                    at_last_cell(plain(g2)),
                )
            })
        })
    }));
    let fam_leave_right = Formula::conj((0..ng).flat_map(|g1| {
        rules
            .iter()
            .filter(|&(_, &(_, _, d))| d == Dir::Right)
            .map(move |(&(q, g2), _)| {
                Formula::implies(
                    Formula::and(plain(g1), xn(head(q, g2), cell_width)),
                    at_last_cell(plain(g1)),
                )
            })
    }));
    let fam_leave_left = Formula::conj(
        rules
            .iter()
            .filter(|&(_, &(_, _, d))| d == Dir::Left)
            .flat_map(|(&(q, g1), _)| {
                (0..ng).map(move |g2| {
                    Formula::implies(
                        Formula::and(head(q, g1), xn(plain(g2), cell_width)),
                        at_last_cell(plain(g2)),
                    )
                })
            }),
    );
    let at_mlc = |f: Formula| Formula::globally(Formula::implies(match_last_cell.clone(), f));
    let before_mlc = |f: Formula| {
        Formula::globally(Formula::implies(xn(match_last_cell.clone(), cell_width), f))
    };
    let c3 = Formula::conj([
        at_mlc(fam_write),
        at_mlc(fam_enter_left),
        before_mlc(fam_enter_right),
        before_mlc(fam_idle),
        at_mlc(fam_leave_right),
        before_mlc(fam_leave_left),
    ]);

    let phi_cons = Formula::conj([c1, c2, c3]);
    let phi_acc = Formula::disj((0..tm.states.len()).filter(|&q| tm.accept[q]).flat_map(
        |q| (0..ng).map(move |g| Formula::eventually(head(q, g))),
    ));
    Formula::or(Formula::not(phi_cons), phi_acc)
}
