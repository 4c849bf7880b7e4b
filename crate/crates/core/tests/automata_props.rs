//! Structural and language properties of the automaton layer, checked
//! over randomly generated formulas and lassos.

mod common;

use common::{prop_names, random_lasso};
use ltlfmc_core::{
    dba_accepts_lasso, determinize, ltlf_to_dfa_over, ltlf_to_nfa_over, make_accepting_sinks,
    nfa_accepts, prefix_dba_over, random_formula, safety_equiv, swap_acceptance, Formula, Lasso,
    Restrict, SafetyDba, SafetyEquiv,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample(seed: u64, max_size: usize) -> Formula {
    random_formula(seed, max_size, &prop_names(2), Restrict::Full).expect("valid parameters")
}

/// Runs the automaton as a plain DFA over prefixes of `w` up to the
/// repetition bound and reports whether any prefix lands in a
/// non-accepting state.
fn some_prefix_rejects(b: &SafetyDba, w: &Lasso) -> bool {
    let bound = w.stem().len() + w.cycle().len() * (b.state_count() + 1);
    let mut state = b.initial();
    for i in 0..bound {
        state = b.step(state, w.letter(i));
        if !b.accepting()[state] {
            return true;
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subset_construction_is_total_and_preserves_the_language(seed in any::<u64>()) {
        let f = sample(seed, 7);
        let nfa = ltlf_to_nfa_over(&f, &prop_names(2)).unwrap();
        let dfa = determinize(&nfa);
        for s in 0..dfa.state_count() {
            for letter in 0..dfa.letter_count() {
                prop_assert!(dfa.step(s, letter) < dfa.state_count());
            }
        }
        for t in ltlfmc_core::enumerate_traces(&prop_names(2), 3).unwrap() {
            prop_assert_eq!(nfa_accepts(&nfa, &t).unwrap(), dfa.accepts(&t).unwrap());
        }
    }

    #[test]
    fn prefix_automata_reject_exactly_on_bad_prefixes(seed in any::<u64>()) {
        let f = sample(seed, 6);
        let b = prefix_dba_over(&f, &prop_names(2)).unwrap();
        for s in 0..b.state_count() {
            if !b.accepting()[s] {
                prop_assert!(b.is_sink(s), "rejecting state {} must be a sink", s);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let w = random_lasso(&mut rng, &prop_names(2), 6);
            prop_assert_eq!(
                dba_accepts_lasso(&b, &w).unwrap(),
                !some_prefix_rejects(&b, &w)
            );
        }
    }

    #[test]
    fn swapping_acceptance_complements_the_language(seed in any::<u64>()) {
        let f = sample(seed, 6);
        let sinks = make_accepting_sinks(&ltlf_to_dfa_over(&f, &prop_names(2)).unwrap());
        let swapped = swap_acceptance(&sinks).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let w = random_lasso(&mut rng, &prop_names(2), 6);
            prop_assert_eq!(
                dba_accepts_lasso(&swapped, &w).unwrap(),
                !dba_accepts_lasso(&sinks, &w).unwrap()
            );
        }
    }

    #[test]
    fn equivalence_is_reflexive_symmetric_and_witnesses_certify(
        seed in any::<u64>(),
        other in any::<u64>(),
    ) {
        let x = prefix_dba_over(&sample(seed, 6), &prop_names(2)).unwrap();
        let y = prefix_dba_over(&sample(other, 6), &prop_names(2)).unwrap();
        prop_assert!(matches!(safety_equiv(&x, &x).unwrap(), SafetyEquiv::Equivalent));
        let forward = safety_equiv(&x, &y).unwrap();
        let backward = safety_equiv(&y, &x).unwrap();
        prop_assert_eq!(
            matches!(forward, SafetyEquiv::Equivalent),
            matches!(backward, SafetyEquiv::Equivalent)
        );
        if let SafetyEquiv::Witness(w) = forward {
            let in_x = dba_accepts_lasso(&x, &w).unwrap();
            let in_y = dba_accepts_lasso(&y, &w).unwrap();
            prop_assert_ne!(in_x, in_y, "witness must separate the two languages");
        }
    }
}
