//! End-to-end properties of the compilation pipeline: automata agree
//! with the evaluator, prefix automata agree with direct prefix
//! evaluation, the fragment translation preserves the prefix language,
//! and state counts stay inside their declared bounds.

mod common;

use common::{lasso_eval_fixpoint, prop_names, random_lasso};
use ltlfmc_core::{
    dba_accepts_lasso, enumerate_traces, evaluate, evaluate_ltl_on_lasso, image_dba_over,
    in_fragment, ltlf_to_nfa_over, nfa_accepts, prefix_dba_over, random_formula,
    safety_equiv, translate_fragment, Formula, LazyPrefixDba, Restrict, SafetyEquiv,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample(seed: u64, max_size: usize, restrict: Restrict) -> Formula {
    random_formula(seed, max_size, &prop_names(2), restrict).expect("valid parameters")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nfa_language_matches_the_evaluator(seed in any::<u64>()) {
        let f = sample(seed, 7, Restrict::Full);
        let nfa = ltlf_to_nfa_over(&f, &prop_names(2)).unwrap();
        for t in enumerate_traces(&prop_names(2), 4).unwrap() {
            prop_assert_eq!(nfa_accepts(&nfa, &t).unwrap(), evaluate(&f, &t).unwrap());
        }
    }

    #[test]
    fn prefix_automaton_accepts_iff_every_prefix_satisfies(seed in any::<u64>()) {
        let f = sample(seed, 6, Restrict::Full);
        let b = prefix_dba_over(&f, &prop_names(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..15 {
            let w = random_lasso(&mut rng, &prop_names(2), 6);
            let bound = w.stem().len() + w.cycle().len() * (b.state_count() + 1);
            let every_prefix_good =
                (1..=bound).all(|len| evaluate(&f, &w.prefix(len)).unwrap());
            prop_assert_eq!(dba_accepts_lasso(&b, &w).unwrap(), every_prefix_good);
        }
    }

    #[test]
    fn fragment_translation_preserves_the_prefix_language(seed in any::<u64>()) {
        let f = sample(seed, 7, Restrict::Fragment);
        prop_assert!(in_fragment(&f));
        let translated = translate_fragment(&f).unwrap();
        let via_prefix = prefix_dba_over(&f, &prop_names(2)).unwrap();
        let via_image = image_dba_over(&translated, &prop_names(2)).unwrap();
        prop_assert!(matches!(
            safety_equiv(&via_prefix, &via_image).unwrap(),
            SafetyEquiv::Equivalent
        ));
    }

    #[test]
    fn state_counts_respect_the_declared_bounds(seed in any::<u64>()) {
        let f = sample(seed, 6, Restrict::Full);
        let nfa = ltlf_to_nfa_over(&f, &prop_names(2)).unwrap();
        prop_assert!(nfa.state_count() <= 1usize << (f.size() + 2));
        let b = prefix_dba_over(&f, &prop_names(2)).unwrap();
        prop_assert!(b.state_count() <= 1usize << nfa.state_count());
    }

    #[test]
    fn lazy_and_eager_prefix_automata_agree(seed in any::<u64>()) {
        let f = sample(seed, 6, Restrict::Full);
        let props = prop_names(2);
        let eager = prefix_dba_over(&f, &props).unwrap();
        let mut lazy = LazyPrefixDba::new_over(&f, &props).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let mut token = lazy.initial();
            let mut state = eager.initial();
            for _ in 0..12 {
                let letter = rng.gen_range(0..4u64);
                token = lazy.step(token, letter);
                state = eager.step(state, letter);
                prop_assert_eq!(lazy.is_rejecting(token), !eager.accepting()[state]);
            }
        }
    }

    #[test]
    fn lasso_evaluator_matches_the_fixpoint_oracle(seed in any::<u64>()) {
        // Weak and strong next coincide on infinite words, and the
        // word evaluator only speaks the strong form.
        let f = strengthen_next(&sample(seed, 7, Restrict::Fragment));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..15 {
            let w = random_lasso(&mut rng, &prop_names(2), 6);
            prop_assert_eq!(
                evaluate_ltl_on_lasso(&f, &w).unwrap(),
                lasso_eval_fixpoint(&f, &w)
            );
        }
    }
}

fn strengthen_next(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        WeakNext(a) => Formula::next(strengthen_next(a)),
        True | False | Atom(_) => f.clone(),
        Not(a) => Formula::not(strengthen_next(a)),
        Next(a) => Formula::next(strengthen_next(a)),
        Eventually(a) => Formula::eventually(strengthen_next(a)),
        Globally(a) => Formula::globally(strengthen_next(a)),
        And(a, b) => Formula::and(strengthen_next(a), strengthen_next(b)),
        Or(a, b) => Formula::or(strengthen_next(a), strengthen_next(b)),
        Implies(a, b) => Formula::implies(strengthen_next(a), strengthen_next(b)),
        Iff(a, b) => Formula::iff(strengthen_next(a), strengthen_next(b)),
        Until(a, b) => Formula::until(strengthen_next(a), strengthen_next(b)),
        Release(a, b) => Formula::release(strengthen_next(a), strengthen_next(b)),
        WeakUntil(a, b) => Formula::weak_until(strengthen_next(a), strengthen_next(b)),
    }
}

#[test]
fn translation_examples_from_the_fragment_definition() {
    let cases = [
        ("G a", "G a"),
        ("a U b", "b"),
        ("F (a & X b)", "a & false"),
        ("N a", "X a"),
    ];
    for (input, expected) in cases {
        let f = ltlfmc_core::parse_formula(input, ltlfmc_core::Dialect::Ltlf).unwrap();
        let t = translate_fragment(&f).unwrap();
        assert_eq!(
            ltlfmc_core::render_formula(&t, ltlfmc_core::Dialect::Ltl),
            expected,
            "translating {input}"
        );
    }
}
