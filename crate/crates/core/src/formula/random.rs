//! Seeded random formula generation for the oracle-agreement suites.

use super::Formula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RandomError {
    #[error("proposition set must not be empty")]
    EmptyProps,
    #[error("max_size must be at least 1")]
    ZeroSize,
}

/// Shape restriction for generated formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restrict {
    /// Any constructor.
    Full,
    /// The safety-translatable fragment: no `R`, `W`, `->` or `<->`,
    /// `!`/`|` confined to propositional subformulas, and `N` kept out
    /// of `F` operands and `U` right sides.
    Fragment,
}

/// Generates a pseudo-random formula over `props` with at most
/// `max_size` nodes. The same seed and arguments always produce the
/// same syntax tree.
pub fn random_formula(
    seed: u64,
    max_size: usize,
    props: &[String],
    restrict: Restrict,
) -> Result<Formula, RandomError> {
    if props.is_empty() {
        return Err(RandomError::EmptyProps);
    }
    if max_size == 0 {
        return Err(RandomError::ZeroSize);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = match restrict {
        Restrict::Full => gen_full(&mut rng, max_size, props),
        Restrict::Fragment => gen_fragment(&mut rng, max_size, props, true),
    };
    Ok(f)
}

fn leaf(rng: &mut ChaCha8Rng, props: &[String]) -> Formula {
    match rng.gen_range(0..10) {
        0 => Formula::True,
        1 => Formula::False,
        _ => Formula::Atom(props[rng.gen_range(0..props.len())].clone()),
    }
}

fn gen_full(rng: &mut ChaCha8Rng, budget: usize, props: &[String]) -> Formula {
    if budget <= 1 {
        return leaf(rng, props);
    }
    // With budget 2 only unary constructors fit; otherwise keep a small
    // chance of stopping early so sizes vary.
    let class = if budget == 2 {
        1
    } else {
        match rng.gen_range(0..20) {
            0..=2 => 0,
            3..=10 => 1,
            _ => 2,
        }
    };
    match class {
        0 => leaf(rng, props),
        1 => {
            let child = gen_full(rng, budget - 1, props);
            match rng.gen_range(0..5) {
                0 => Formula::not(child),
                1 => Formula::next(child),
                2 => Formula::weak_next(child),
                3 => Formula::eventually(child),
                _ => Formula::globally(child),
            }
        }
        _ => {
            let left_budget = rng.gen_range(1..=budget - 2);
            let left = gen_full(rng, left_budget, props);
            let right = gen_full(rng, budget - 1 - left_budget, props);
            match rng.gen_range(0..7) {
                0 => Formula::and(left, right),
                1 => Formula::or(left, right),
                2 => Formula::implies(left, right),
                3 => Formula::iff(left, right),
                4 => Formula::until(left, right),
                5 => Formula::release(left, right),
                _ => Formula::weak_until(left, right),
            }
        }
    }
}

fn gen_prop(rng: &mut ChaCha8Rng, budget: usize, props: &[String]) -> Formula {
    if budget <= 1 {
        return leaf(rng, props);
    }
    let class = if budget == 2 {
        1
    } else {
        match rng.gen_range(0..10) {
            0..=1 => 0,
            2..=5 => 1,
            _ => 2,
        }
    };
    match class {
        0 => leaf(rng, props),
        1 => Formula::not(gen_prop(rng, budget - 1, props)),
        _ => {
            let left_budget = rng.gen_range(1..=budget - 2);
            let left = gen_prop(rng, left_budget, props);
            let right = gen_prop(rng, budget - 1 - left_budget, props);
            if rng.gen_range(0..2) == 0 {
                Formula::and(left, right)
            } else {
                Formula::or(left, right)
            }
        }
    }
}

fn gen_fragment(rng: &mut ChaCha8Rng, budget: usize, props: &[String], allow_n: bool) -> Formula {
    if budget <= 2 || rng.gen_range(0..5) == 0 {
        return gen_prop(rng, budget, props);
    }
    match rng.gen_range(0..8) {
        0 => {
            let left_budget = rng.gen_range(1..=budget - 2);
            let left = gen_fragment(rng, left_budget, props, allow_n);
            let right = gen_fragment(rng, budget - 1 - left_budget, props, allow_n);
            Formula::and(left, right)
        }
        1 => Formula::next(gen_fragment(rng, budget - 1, props, allow_n)),
        // A weak next inside an eventually or an until's right side is
        // outside the fragment; fall back to the strong form there.
        2 if allow_n => Formula::weak_next(gen_fragment(rng, budget - 1, props, allow_n)),
        2 => Formula::next(gen_fragment(rng, budget - 1, props, false)),
        3 | 4 => {
            let left_budget = rng.gen_range(1..=budget - 2);
            let left = gen_fragment(rng, left_budget, props, allow_n);
            let right = gen_fragment(rng, budget - 1 - left_budget, props, false);
            Formula::until(left, right)
        }
        5 => Formula::eventually(gen_fragment(rng, budget - 1, props, false)),
        _ => Formula::globally(gen_fragment(rng, budget - 1, props, allow_n)),
    }
}
