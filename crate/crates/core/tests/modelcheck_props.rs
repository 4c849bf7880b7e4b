//! Checker properties: soundness of counterexamples, agreement with
//! the brute-force bounded oracle, determinism of verdicts, and the
//! absorbing behavior of rejecting prefix tokens.

mod common;

use common::{prop_names, random_ts};
use ltlfmc_core::{
    bounded_oracle_check, certify_counterexample, check_nonterminating, check_terminating,
    random_formula, Counterexample, Formula, LazyPrefixDba, Outcome, Restrict, TransitionSystem,
    TsKind, Verdict,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PATH_BOUND: usize = 6;
const LASSO_BOUND: usize = 5;

fn sample(seed: u64, max_size: usize) -> Formula {
    random_formula(seed, max_size, &prop_names(2), Restrict::Full).expect("valid parameters")
}

fn cex_len(c: &Counterexample) -> usize {
    match c {
        Counterexample::Finite(p) => p.states.len(),
        Counterexample::Lasso(l) => l.stem.len() + l.cycle.len(),
    }
}

/// The oracle is complete only up to its bound, so a checker violation
/// it missed is consistent exactly when the certified counterexample is
/// longer than the bound.
fn assert_agreement(
    m: &TransitionSystem,
    f: &Formula,
    checker: &Verdict,
    oracle: &Verdict,
    bound: usize,
) {
    for v in [checker, oracle] {
        if let Some(c) = &v.counterexample {
            certify_counterexample(m, f, c).expect("counterexample certifies");
        }
    }
    match (checker.outcome, oracle.outcome) {
        (Outcome::Holds, Outcome::Violated) => {
            panic!("oracle found a violation the checker missed: {oracle:?}")
        }
        (Outcome::Violated, Outcome::Holds) => {
            let c = checker.counterexample.as_ref().expect("violated carries cex");
            assert!(
                cex_len(c) > bound,
                "checker violation within the oracle bound went unseen: {c:?}"
            );
        }
        _ => {}
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn terminating_checker_agrees_with_the_path_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_ts(&mut rng, TsKind::Terminating, 6, &prop_names(2));
        let f = sample(rng.gen(), 6);
        let checker = check_terminating(&m, &f).unwrap();
        let oracle = bounded_oracle_check(&m, &f, TsKind::Terminating, PATH_BOUND).unwrap();
        assert_agreement(&m, &f, &checker, &oracle, PATH_BOUND);
    }

    #[test]
    fn nonterminating_checker_agrees_with_the_lasso_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_ts(&mut rng, TsKind::NonTerminating, 6, &prop_names(2));
        let f = sample(rng.gen(), 6);
        let checker = check_nonterminating(&m, &f).unwrap();
        let oracle =
            bounded_oracle_check(&m, &f, TsKind::NonTerminating, LASSO_BOUND).unwrap();
        assert_agreement(&m, &f, &checker, &oracle, LASSO_BOUND);
    }

    #[test]
    fn verdicts_and_counterexamples_are_deterministic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for kind in [TsKind::Terminating, TsKind::NonTerminating] {
            let m = random_ts(&mut rng, kind, 6, &prop_names(2));
            let f = sample(rng.gen(), 6);
            let check = |m: &TransitionSystem, f: &Formula| match kind {
                TsKind::Terminating => check_terminating(m, f).unwrap(),
                TsKind::NonTerminating => check_nonterminating(m, f).unwrap(),
            };
            let first = check(&m, &f);
            let second = check(&m, &f);
            prop_assert_eq!(first.outcome, second.outcome);
            prop_assert_eq!(first.counterexample, second.counterexample);
            prop_assert_eq!(first.vacuous, second.vacuous);
        }
    }

    #[test]
    fn rejecting_prefix_tokens_absorb_every_letter(seed in any::<u64>()) {
        let f = sample(seed, 6);
        let mut lazy = LazyPrefixDba::new_over(&f, &prop_names(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut token = lazy.initial();
        for _ in 0..20 {
            token = lazy.step(token, rng.gen_range(0..4u64));
            if lazy.is_rejecting(token) {
                for letter in 0..4u64 {
                    prop_assert_eq!(lazy.step(token, letter), token);
                }
            }
        }
    }
}

#[test]
fn single_empty_loop_violates_eventually_within_one_step() {
    let m = TransitionSystem::new(
        TsKind::NonTerminating,
        vec!["a".into()],
        vec!["s0".into()],
        vec![0],
        vec![(0, 0)],
        vec![0],
        vec![],
    )
    .unwrap();
    let f = ltlfmc_core::parse_formula("F a", ltlfmc_core::Dialect::Ltlf).unwrap();
    let oracle = bounded_oracle_check(&m, &f, TsKind::NonTerminating, 1).unwrap();
    assert_eq!(oracle.outcome, Outcome::Violated);
    let checker = check_nonterminating(&m, &f).unwrap();
    assert_eq!(checker.outcome, Outcome::Violated);
}
