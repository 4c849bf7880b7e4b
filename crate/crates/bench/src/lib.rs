//! Shared input builders for the criterion benchmarks.
//!
//! Everything is deterministic: formulas come from fixed strings, the
//! seeded generator, or the hard family, and the systems are shaped so
//! the checkers cannot prune early (their labels never contain `a & b`,
//! keeping every prefix of `F (a & b)` falsified).

use ltlfmc_core::{
    gen_phi_n, parse_formula, random_formula, Dialect, Formula, Restrict, Trace,
    TransitionSystem, TsKind,
};

/// The worked disjunction example: safe forever or eventually granted.
pub fn worked_disjunction() -> Formula {
    parse_formula("G a | F b", Dialect::Ltlf).expect("fixed formula parses")
}

/// A nested formula inside the translatable fragment, exercising weak
/// next under `G` and on the left of `U`.
pub fn fragment_showcase() -> Formula {
    parse_formula("G ((a & N b) U c) & F (a U b)", Dialect::Ltlf).expect("fixed formula parses")
}

/// Seeded random formula over `a`, `b`, `c` using every operator.
pub fn dense_formula(seed: u64, size: usize) -> Formula {
    let props: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    random_formula(seed, size, &props, Restrict::Full).expect("generator arguments are valid")
}

/// Member of the compilation-hardness family.
pub fn hard_formula(n: usize) -> Formula {
    gen_phi_n(n)
}

fn striped_labels(states: usize) -> Vec<u64> {
    (0..states).map(|i| [0b00, 0b01, 0b10][i % 3]).collect()
}

/// Non-terminating ring over `a`, `b` whose labels cycle through the
/// three letters without `a & b`.
pub fn ring_system(states: usize) -> TransitionSystem {
    let names: Vec<String> = (0..states).map(|i| format!("s{i}")).collect();
    let edges: Vec<(usize, usize)> = (0..states).map(|i| (i, (i + 1) % states)).collect();
    TransitionSystem::new(
        TsKind::NonTerminating,
        vec!["a".into(), "b".into()],
        names,
        striped_labels(states),
        edges,
        vec![0],
        Vec::new(),
    )
    .expect("ring is well-formed")
}

/// Terminating chain with skip edges, so the number of paths grows
/// exponentially while the product stays linear.
pub fn braided_chain(states: usize) -> TransitionSystem {
    let names: Vec<String> = (0..states).map(|i| format!("s{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..states {
        if i + 1 < states {
            edges.push((i, i + 1));
        }
        if i + 2 < states {
            edges.push((i, i + 2));
        }
    }
    TransitionSystem::new(
        TsKind::Terminating,
        vec!["a".into(), "b".into()],
        names,
        striped_labels(states),
        edges,
        vec![0],
        vec![states - 1],
    )
    .expect("chain is well-formed")
}

/// Long finite trace over `a`, `b` with the same three-letter stripe.
pub fn striped_trace(len: usize) -> Trace {
    let masks = striped_labels(len);
    Trace::from_masks(vec!["a".into(), "b".into()], masks).expect("non-empty trace")
}
