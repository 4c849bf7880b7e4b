//! End-to-end checks for the generated stress families: the formula
//! family over one-hot words against its definitional membership
//! checkers, and the Turing machine reduction against direct
//! simulation.

use ltlfmc_core::{
    check_nonterminating, dba_accepts_lasso, evaluate, fn_member, gen_phi_n, gen_tm_instance,
    ln_member, ltlf_to_dfa, parse_tm, prefix_dba_over, simulate_tm, Dir, Formula, Lasso, Trace,
    TmOutcome, TuringMachineSpec, PHI_ATOMS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn phi_props() -> Vec<String> {
    PHI_ATOMS.iter().map(|s| s.to_string()).collect()
}

const ONE_HOT: [u64; 4] = [1, 2, 4, 8];

#[test]
fn formula_family_matches_finite_membership_exhaustively() {
    let phi = gen_phi_n(1);
    let props = phi_props();
    let mut words: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..6 {
        let mut next = Vec::new();
        for word in &words {
            for &l in &ONE_HOT {
                let mut w = word.clone();
                w.push(l);
                next.push(w);
            }
        }
        for word in &next {
            let t = Trace::from_masks(props.clone(), word.clone()).unwrap();
            assert_eq!(
                evaluate(&phi, &t).unwrap(),
                fn_member(&t, 1).unwrap(),
                "letters {word:?}"
            );
        }
        words = next;
    }
}

#[test]
fn prefix_language_matches_automaton_and_prefix_membership() {
    let phi = gen_phi_n(1);
    let props = phi_props();
    let dba = prefix_dba_over(&phi, &props).unwrap();
    let bound_states = ltlf_to_dfa(&phi).unwrap().state_count();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    for _ in 0..500 {
        let stem_len = rng.gen_range(0..=4usize);
        let cycle_len = rng.gen_range(1..=4usize);
        let stem: Vec<u64> = (0..stem_len)
            .map(|_| ONE_HOT[rng.gen_range(0..4)])
            .collect();
        let cycle: Vec<u64> = (0..cycle_len)
            .map(|_| ONE_HOT[rng.gen_range(0..4)])
            .collect();
        let w = Lasso::from_masks(props.clone(), stem, cycle).unwrap();
        let expected = ln_member(&w, 1).unwrap();
        assert_eq!(
            dba_accepts_lasso(&dba, &w).unwrap(),
            expected,
            "stem {:?} cycle {:?}",
            w.stem(),
            w.cycle()
        );
        let bound = w.stem().len() + w.cycle().len() * (bound_states + 1);
        let every_prefix_in_language = (1..=bound)
            .all(|len| fn_member(&w.prefix(len), 1).unwrap());
        assert_eq!(every_prefix_in_language, expected);
    }
}

fn machine(
    states: &[(&str, bool)],
    symbols: &[&str],
    rules: &[(&str, &str, &str, &str, Dir)],
    c: usize,
) -> TuringMachineSpec {
    let names: Vec<String> = states.iter().map(|(s, _)| s.to_string()).collect();
    let syms: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
    let q = |name: &str| names.iter().position(|s| s == name).unwrap();
    let g = |name: &str| syms.iter().position(|s| s == name).unwrap();
    let rules: BTreeMap<(usize, usize), (usize, usize, Dir)> = rules
        .iter()
        .map(|&(q1, g1, q2, g2, d)| ((q(q1), g(g1)), (q(q2), g(g2), d)))
        .collect();
    TuringMachineSpec {
        start: 0,
        accept: states.iter().map(|&(_, a)| a).collect(),
        blank: g("_"),
        rules,
        states: names,
        symbols: syms,
        c,
    }
}

fn check_reduction(tm: &TuringMachineSpec, input: &[&str]) {
    let outcome = simulate_tm(tm, input, 10_000).unwrap();
    assert_ne!(outcome, TmOutcome::Loop, "budget too small for a desk machine");
    let inst = gen_tm_instance(tm, input, tm.c).unwrap();
    let verdict = check_nonterminating(&inst.system, &inst.formula).unwrap();
    assert_eq!(
        !verdict.is_violated(),
        outcome == TmOutcome::Accept,
        "reduction disagrees with simulation"
    );
}

#[test]
fn accepting_machine_reduction_holds() {
    let tm = machine(
        &[("q0", false), ("q1", false), ("qacc", true)],
        &["_", "0", "1"],
        &[
            ("q0", "_", "q1", "_", Dir::Right),
            ("q0", "0", "q1", "0", Dir::Right),
            ("q0", "1", "q1", "1", Dir::Right),
            ("q1", "1", "qacc", "1", Dir::Left),
            ("q1", "0", "q1", "0", Dir::Right),
            ("q1", "_", "q1", "_", Dir::Right),
        ],
        1,
    );
    assert_eq!(simulate_tm(&tm, &["1"], 100).unwrap(), TmOutcome::Accept);
    check_reduction(&tm, &["1"]);
}

#[test]
fn rejecting_machine_reduction_is_violated() {
    let tm = machine(
        &[("q0", false)],
        &["_", "0"],
        &[
            ("q0", "_", "q0", "_", Dir::Right),
            ("q0", "0", "q0", "0", Dir::Right),
        ],
        1,
    );
    assert_eq!(simulate_tm(&tm, &["0"], 100).unwrap(), TmOutcome::Reject);
    check_reduction(&tm, &["0"]);
}

#[test]
fn oscillating_machine_reduction_is_violated() {
    let tm = machine(
        &[("q0", false), ("q1", false)],
        &["_", "0"],
        &[
            ("q0", "_", "q1", "_", Dir::Right),
            ("q0", "0", "q1", "0", Dir::Right),
            ("q1", "_", "q0", "_", Dir::Left),
            ("q1", "0", "q0", "0", Dir::Left),
        ],
        1,
    );
    assert_eq!(simulate_tm(&tm, &["0"], 100).unwrap(), TmOutcome::Reject);
    check_reduction(&tm, &["0"]);
}

#[test]
fn parsed_machine_runs_like_the_built_one() {
    let text = "\
states q0 q1 qacc
start q0
accept qacc
alphabet _ 0 1
c 1
rule q0 _ q1 _ R
rule q0 0 q1 0 R
rule q0 1 q1 1 R
rule q1 1 qacc 1 L
rule q1 0 q1 0 R
rule q1 _ q1 _ R
";
    let tm = parse_tm(text).unwrap();
    assert_eq!(simulate_tm(&tm, &["1"], 10).unwrap(), TmOutcome::Accept);
    assert_eq!(simulate_tm(&tm, &["0"], 10).unwrap(), TmOutcome::Reject);
}

#[test]
fn generated_instance_formula_stays_within_declared_atoms() {
    let tm = machine(
        &[("q0", false), ("qacc", true)],
        &["_", "0"],
        &[
            ("q0", "_", "qacc", "_", Dir::Right),
            ("q0", "0", "qacc", "0", Dir::Right),
        ],
        1,
    );
    let inst = gen_tm_instance(&tm, &["0"], 1).unwrap();
    let declared: std::collections::BTreeSet<&str> =
        inst.props.iter().map(|s| s.as_str()).collect();
    for atom in inst.formula.atoms() {
        assert!(declared.contains(atom.as_str()), "undeclared atom {atom}");
    }
    let _ = Formula::size(&inst.formula);
}
