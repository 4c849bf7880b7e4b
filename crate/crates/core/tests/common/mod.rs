//! Shared oracles and generators for the integration suites. The
//! evaluators here are deliberately written with different algorithms
//! than the library's (plain positional recursion and per-position
//! fixpoints instead of dynamic programming and unrolling) so the two
//! sides fail independently.
#![allow(dead_code)]

use ltlfmc_core::{Formula, Lasso, Trace, TransitionSystem, TsKind};
use rand::Rng;

/// Finite-trace satisfaction at position `i` by direct recursion on
/// the defining clauses.
pub fn naive_eval(f: &Formula, t: &Trace, i: usize) -> bool {
    let atom = |name: &str| t.holds(i, t.prop_index(name).expect("declared atom"));
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(name) => atom(name),
        Formula::Not(a) => !naive_eval(a, t, i),
        Formula::And(a, b) => naive_eval(a, t, i) && naive_eval(b, t, i),
        Formula::Or(a, b) => naive_eval(a, t, i) || naive_eval(b, t, i),
        Formula::Implies(a, b) => !naive_eval(a, t, i) || naive_eval(b, t, i),
        Formula::Iff(a, b) => naive_eval(a, t, i) == naive_eval(b, t, i),
        Formula::Next(a) => i + 1 < t.len() && naive_eval(a, t, i + 1),
        Formula::WeakNext(a) => i + 1 >= t.len() || naive_eval(a, t, i + 1),
        Formula::Until(a, b) => (i..t.len())
            .any(|j| naive_eval(b, t, j) && (i..j).all(|k| naive_eval(a, t, k))),
        Formula::Release(a, b) => (i..t.len())
            .all(|j| naive_eval(b, t, j) || (i..j).any(|k| naive_eval(a, t, k))),
        Formula::WeakUntil(a, b) => {
            (i..t.len()).any(|j| naive_eval(b, t, j) && (i..j).all(|k| naive_eval(a, t, k)))
                || (i..t.len()).all(|j| naive_eval(a, t, j))
        }
        Formula::Eventually(a) => (i..t.len()).any(|j| naive_eval(a, t, j)),
        Formula::Globally(a) => (i..t.len()).all(|j| naive_eval(a, t, j)),
    }
}

/// Infinite-word satisfaction at position 0 of stem·cycle^ω, by
/// computing the exact truth set over the lasso's positions with
/// least/greatest fixpoints for the recursive operators.
pub fn lasso_eval_fixpoint(f: &Formula, w: &Lasso) -> bool {
    truth_set(f, w)[0]
}

fn truth_set(f: &Formula, w: &Lasso) -> Vec<bool> {
    let n = w.stem().len() + w.cycle().len();
    let succ = |i: usize| if i + 1 < n { i + 1 } else { w.stem().len() };
    let unary = |a: &Formula, op: fn(bool) -> bool| -> Vec<bool> {
        truth_set(a, w).into_iter().map(op).collect()
    };
    let binary = |a: &Formula, b: &Formula, op: fn(bool, bool) -> bool| -> Vec<bool> {
        let (sa, sb) = (truth_set(a, w), truth_set(b, w));
        (0..n).map(|i| op(sa[i], sb[i])).collect()
    };
    // Least fixpoint of S = base ∨ (step ∧ S∘succ); starting from all
    // false and iterating to stability yields Until-like operators,
    // the greatest-fixpoint variant below yields Release-like ones.
    let lfp = |base: &[bool], step: &[bool]| -> Vec<bool> {
        let mut s = vec![false; n];
        loop {
            let next: Vec<bool> =
                (0..n).map(|i| base[i] || (step[i] && s[succ(i)])).collect();
            if next == s {
                return s;
            }
            s = next;
        }
    };
    let gfp = |hold: &[bool], escape: &[bool]| -> Vec<bool> {
        let mut s = vec![true; n];
        loop {
            let next: Vec<bool> =
                (0..n).map(|i| hold[i] && (escape[i] || s[succ(i)])).collect();
            if next == s {
                return s;
            }
            s = next;
        }
    };
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(name) => {
            let bit = w.prop_index(name).expect("declared atom");
            (0..n).map(|i| w.letter(i) >> bit & 1 == 1).collect()
        }
        Formula::Not(a) => unary(a, |x| !x),
        Formula::And(a, b) => binary(a, b, |x, y| x && y),
        Formula::Or(a, b) => binary(a, b, |x, y| x || y),
        Formula::Implies(a, b) => binary(a, b, |x, y| !x || y),
        Formula::Iff(a, b) => binary(a, b, |x, y| x == y),
        // Infinite words always have a next position.
        Formula::Next(a) | Formula::WeakNext(a) => {
            let sa = truth_set(a, w);
            (0..n).map(|i| sa[succ(i)]).collect()
        }
        Formula::Until(a, b) => {
            let (sa, sb) = (truth_set(a, w), truth_set(b, w));
            lfp(&sb, &sa)
        }
        Formula::Release(a, b) => {
            let (sa, sb) = (truth_set(a, w), truth_set(b, w));
            gfp(&sb, &sa)
        }
        Formula::WeakUntil(a, b) => {
            let (sa, sb) = (truth_set(a, w), truth_set(b, w));
            let until = lfp(&sb, &sa);
            let always = gfp(&sa, &vec![false; n]);
            (0..n).map(|i| until[i] || always[i]).collect()
        }
        Formula::Eventually(a) => {
            let sa = truth_set(a, w);
            lfp(&sa, &vec![true; n])
        }
        Formula::Globally(a) => {
            let sa = truth_set(a, w);
            gfp(&sa, &vec![false; n])
        }
    }
}

/// A random valid transition system of the requested kind: every state
/// of a nonterminating system has a successor, and every sink of a
/// terminating system is terminal.
pub fn random_ts(
    rng: &mut impl Rng,
    kind: TsKind,
    max_states: usize,
    props: &[String],
) -> TransitionSystem {
    let n = rng.gen_range(1..=max_states);
    let full: u64 = (1u64 << props.len()) - 1;
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let labels: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=full)).collect();
    let mut edges = Vec::new();
    for s in 0..n {
        let lo = match kind {
            TsKind::NonTerminating => 1,
            TsKind::Terminating => 0,
        };
        for _ in 0..rng.gen_range(lo..=2) {
            edges.push((s, rng.gen_range(0..n)));
        }
    }
    let initial = vec![rng.gen_range(0..n)];
    let terminal = match kind {
        TsKind::NonTerminating => Vec::new(),
        TsKind::Terminating => {
            let mut terminal: Vec<usize> = (0..n)
                .filter(|&s| !edges.iter().any(|&(src, _)| src == s) || rng.gen_bool(0.3))
                .collect();
            if terminal.is_empty() {
                terminal.push(rng.gen_range(0..n));
            }
            terminal
        }
    };
    TransitionSystem::new(
        kind,
        props.to_vec(),
        states,
        labels,
        edges,
        initial,
        terminal,
    )
    .expect("generator emits valid systems")
}

/// A random lasso over `props` with |stem| + |cycle| ≤ max_total.
pub fn random_lasso(rng: &mut impl Rng, props: &[String], max_total: usize) -> Lasso {
    let full: u64 = (1u64 << props.len()) - 1;
    let cycle_len = rng.gen_range(1..=max_total);
    let stem_len = rng.gen_range(0..=max_total - cycle_len);
    let stem: Vec<u64> = (0..stem_len).map(|_| rng.gen_range(0..=full)).collect();
    let cycle: Vec<u64> = (0..cycle_len).map(|_| rng.gen_range(0..=full)).collect();
    Lasso::from_masks(props.to_vec(), stem, cycle).expect("non-empty cycle")
}

pub fn prop_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}
