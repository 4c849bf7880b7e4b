//! The quadratic-size formula family whose prefix automata blow up
//! doubly exponentially, with definitional membership checkers for the
//! finite-word language it specifies and the prefix language of that.
//!
//! Words range over a four-symbol alphabet encoded one-hot by the
//! propositions `zero`, `one`, `hash`, `amp` (for `0`, `1`, `#`, `&`).
//! The finite-word language holds words with at most one `&` such
//! that, writing the word as `u & v`, if the last n+2 characters of v
//! are `#w#` for some bit word w of length n, then `#w#` also occurs
//! in u. The prefix-closed infinite version instead requires every
//! `#w#` occurring after the `&` to occur before it.

use super::HardnessError;
use crate::formula::{Formula, Lasso, Trace};

/// One-hot proposition names, in sorted order.
pub const PHI_ATOMS: [&str; 4] = ["amp", "hash", "one", "zero"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Amp,
    Hash,
    One,
    Zero,
}

fn decode_letters(props: &[String], letters: &[u64]) -> Result<Vec<Sym>, HardnessError> {
    if props.len() != PHI_ATOMS.len()
        || props.iter().zip(PHI_ATOMS.iter()).any(|(p, a)| p != a)
    {
        return Err(HardnessError::MalformedLetter(format!(
            "expected propositions {:?}, got {:?}",
            PHI_ATOMS, props
        )));
    }
    let table = [Sym::Amp, Sym::Hash, Sym::One, Sym::Zero];
    letters
        .iter()
        .map(|&mask| {
            if mask.count_ones() == 1 && mask < 16 {
                Ok(table[mask.trailing_zeros() as usize])
            } else {
                Err(HardnessError::MalformedLetter(format!(
                    "letter {mask:#b} is not one-hot over {PHI_ATOMS:?}"
                )))
            }
        })
        .collect()
}

fn is_block(window: &[Sym]) -> bool {
    window.first() == Some(&Sym::Hash)
        && window.last() == Some(&Sym::Hash)
        && window[1..window.len() - 1]
            .iter()
            .all(|&s| s == Sym::Zero || s == Sym::One)
}

fn occurs_in(needle: &[Sym], haystack: &[Sym]) -> bool {
    haystack.len() >= needle.len()
        && (0..=haystack.len() - needle.len()).any(|i| &haystack[i..i + needle.len()] == needle)
}

/// Membership in the prefix language: at most one `&` overall (so none
/// in the cycle), and every length-(n+2) block `#w#` occurring after
/// the `&` must occur before it.
pub fn ln_member(w: &Lasso, n: usize) -> Result<bool, HardnessError> {
    assert!(n >= 1, "n must be at least 1");
    let stem = decode_letters(w.props(), w.stem())?;
    let cycle = decode_letters(w.props(), w.cycle())?;
    if cycle.contains(&Sym::Amp) {
        return Ok(false);
    }
    let amps = stem.iter().filter(|&&s| s == Sym::Amp).count();
    if amps == 0 {
        return Ok(true);
    }
    if amps > 1 {
        return Ok(false);
    }
    let split = stem.iter().position(|&s| s == Sym::Amp).expect("one amp");
    let u = &stem[..split];
    // Unroll the cycle far enough that every distinct block position
    // after the split appears in full.
    let copies = 1 + n.div_ceil(cycle.len()) + 1;
    let mut v: Vec<Sym> = stem[split + 1..].to_vec();
    for _ in 0..copies {
        v.extend_from_slice(&cycle);
    }
    let len = n + 2;
    for start in 0..v.len().saturating_sub(len - 1) {
        let window = &v[start..start + len];
        if is_block(window) && !occurs_in(window, u) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in the finite-word language: at most one `&`, and if the
/// last n+2 characters after the `&` form a block `#w#`, that block
/// occurs before the `&`.
pub fn fn_member(t: &Trace, n: usize) -> Result<bool, HardnessError> {
    assert!(n >= 1, "n must be at least 1");
    let syms = decode_letters(t.props(), t.masks())?;
    let amps = syms.iter().filter(|&&s| s == Sym::Amp).count();
    if amps == 0 {
        return Ok(true);
    }
    if amps > 1 {
        return Ok(false);
    }
    let split = syms.iter().position(|&s| s == Sym::Amp).expect("one amp");
    let u = &syms[..split];
    let v = &syms[split + 1..];
    let len = n + 2;
    if v.len() < len {
        return Ok(true);
    }
    let window = &v[v.len() - len..];
    if is_block(window) {
        Ok(occurs_in(window, u))
    } else {
        Ok(true)
    }
}

/// The formula family over `zero`/`one`/`hash`/`amp` specifying the
/// finite-word language above; its size grows quadratically in n.
pub fn gen_phi_n(n: usize) -> Formula {
    assert!((1..=4).contains(&n), "n must be between 1 and 4");
    let zero = || Formula::atom("zero");
    let one = || Formula::atom("one");
    let hash = || Formula::atom("hash");
    let amp = || Formula::atom("amp");
    let excludes = |this: Formula, others: [Formula; 3]| {
        Formula::globally(Formula::implies(
            this,
            Formula::conj(others.into_iter().map(Formula::not)),
        ))
    };

    let only_one_prop = Formula::conj([
        excludes(zero(), [one(), amp(), hash()]),
        excludes(one(), [zero(), amp(), hash()]),
        excludes(amp(), [zero(), one(), hash()]),
        excludes(hash(), [zero(), one(), amp()]),
        Formula::globally(Formula::disj([zero(), one(), amp(), hash()])),
    ]);

    // The `&` is not seen until it is seen, after which the trace
    // either ends or never sees it again.
    let exact_one_amp = Formula::until(
        Formula::not(amp()),
        Formula::and(
            amp(),
            Formula::or(
                Formula::not(Formula::next(Formula::True)),
                Formula::next(Formula::globally(Formula::not(amp()))),
            ),
        ),
    );

    // True exactly at the (n+2)-th position from the end, when the
    // trace is that long.
    let ends = Formula::next_n(Formula::not(Formula::next(Formula::True)), n + 1);
    // The current and next n+1 positions spell a block #w#.
    let appear_block = Formula::conj(
        std::iter::once(hash())
            .chain(std::iter::once(Formula::next_n(hash(), n + 1)))
            .chain((1..=n).map(|i| Formula::next_n(Formula::or(zero(), one()), i))),
    );
    // The trace is long enough to end in a block, and does. A trace
    // shorter than n+2 letters has no block-shaped end, so the anchor
    // must actually occur.
    let end_with_block = Formula::and(
        Formula::eventually(ends.clone()),
        Formula::globally(Formula::implies(ends.clone(), appear_block.clone())),
    );
    // Some block before the `&` matches the trailing block bit for bit.
    let end_block_appears_before_amp = Formula::eventually(Formula::conj(
        [appear_block, Formula::eventually(amp())]
            .into_iter()
            .chain((1..=n).map(|i| {
                let bit_matches = |b: fn() -> Formula| {
                    Formula::and(
                        Formula::next_n(b(), i),
                        Formula::globally(Formula::implies(
                            ends.clone(),
                            Formula::next_n(b(), i),
                        )),
                    )
                };
                Formula::or(bit_matches(zero), bit_matches(one))
            })),
    ));

    Formula::and(
        only_one_prop,
        Formula::implies(
            Formula::eventually(amp()),
            Formula::and(
                exact_one_amp,
                Formula::implies(end_with_block, end_block_appears_before_amp),
            ),
        ),
    )
}
