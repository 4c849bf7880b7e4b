//! Finite traces and ultimately periodic words (lassos).
//!
//! A letter is a valuation over the declared proposition set, stored as a
//! bitmask: bit `i` set means proposition `i` (in the sorted proposition
//! order) holds. Up to 64 propositions are supported.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("traces must have at least one letter")]
    EmptyTrace,
    #[error("lasso cycles must have at least one letter")]
    EmptyCycle,
    #[error("atom `{0}` is not in the declared proposition set")]
    UndeclaredAtom(String),
    #[error("at most {limit} propositions are supported here, got {got}")]
    TooManyProps { got: usize, limit: usize },
    #[error("letter mask {0:#x} uses bits outside the proposition set")]
    LetterOutOfRange(u64),
    #[error("trace enumeration is capped at length {limit}, got {got}")]
    LengthBound { got: usize, limit: usize },
    #[error("duplicate proposition `{0}`")]
    DuplicateProp(String),
}

fn normalize_props(mut props: Vec<String>) -> Result<Vec<String>, TraceError> {
    props.sort();
    for pair in props.windows(2) {
        if pair[0] == pair[1] {
            return Err(TraceError::DuplicateProp(pair[0].clone()));
        }
    }
    if props.len() > 64 {
        return Err(TraceError::TooManyProps { got: props.len(), limit: 64 });
    }
    Ok(props)
}

fn mask_of(props: &[String], letter: &BTreeSet<String>) -> Result<u64, TraceError> {
    let mut mask = 0u64;
    for atom in letter {
        let idx = props
            .binary_search(atom)
            .map_err(|_| TraceError::UndeclaredAtom(atom.clone()))?;
        mask |= 1 << idx;
    }
    Ok(mask)
}

fn check_masks(props: &[String], letters: &[u64]) -> Result<(), TraceError> {
    let valid = if props.len() == 64 { u64::MAX } else { (1u64 << props.len()) - 1 };
    for &m in letters {
        if m & !valid != 0 {
            return Err(TraceError::LetterOutOfRange(m));
        }
    }
    Ok(())
}

/// A finite, non-empty sequence of letters over a declared proposition
/// set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trace {
    props: Vec<String>,
    letters: Vec<u64>,
}

impl Trace {
    /// Builds a trace from explicit valuations. Propositions are sorted
    /// and deduplicated; every atom in a letter must be declared.
    pub fn new(props: Vec<String>, letters: &[BTreeSet<String>]) -> Result<Trace, TraceError> {
        let props = normalize_props(props)?;
        if letters.is_empty() {
            return Err(TraceError::EmptyTrace);
        }
        let masks = letters.iter().map(|l| mask_of(&props, l)).collect::<Result<Vec<_>, _>>()?;
        Ok(Trace { props, letters: masks })
    }

    /// Builds a trace from letter bitmasks over the sorted proposition
    /// order.
    pub fn from_masks(props: Vec<String>, letters: Vec<u64>) -> Result<Trace, TraceError> {
        let props = normalize_props(props)?;
        if letters.is_empty() {
            return Err(TraceError::EmptyTrace);
        }
        check_masks(&props, &letters)?;
        Ok(Trace { props, letters })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Traces are never empty; provided for idiom completeness.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn masks(&self) -> &[u64] {
        &self.letters
    }

    pub fn mask(&self, i: usize) -> u64 {
        self.letters[i]
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    pub fn holds(&self, i: usize, prop_index: usize) -> bool {
        self.letters[i] & (1 << prop_index) != 0
    }

    /// The set of atom names of letter `i`.
    pub fn letter_atoms(&self, i: usize) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (idx, name) in self.props.iter().enumerate() {
            if self.holds(i, idx) {
                out.insert(name.clone());
            }
        }
        out
    }

    /// The trace consisting of the first `len` letters (`1 <= len <=
    /// self.len()`).
    pub fn prefix(&self, len: usize) -> Trace {
        assert!(len >= 1 && len <= self.len(), "prefix length out of range");
        Trace { props: self.props.clone(), letters: self.letters[..len].to_vec() }
    }
}

/// An ultimately periodic infinite word `stem . cycle^omega`. The stem
/// may be empty; the cycle may not.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    props: Vec<String>,
    stem: Vec<u64>,
    cycle: Vec<u64>,
}

impl Lasso {
    pub fn new(
        props: Vec<String>,
        stem: &[BTreeSet<String>],
        cycle: &[BTreeSet<String>],
    ) -> Result<Lasso, TraceError> {
        let props = normalize_props(props)?;
        if cycle.is_empty() {
            return Err(TraceError::EmptyCycle);
        }
        let stem = stem.iter().map(|l| mask_of(&props, l)).collect::<Result<Vec<_>, _>>()?;
        let cycle = cycle.iter().map(|l| mask_of(&props, l)).collect::<Result<Vec<_>, _>>()?;
        Ok(Lasso { props, stem, cycle })
    }

    pub fn from_masks(
        props: Vec<String>,
        stem: Vec<u64>,
        cycle: Vec<u64>,
    ) -> Result<Lasso, TraceError> {
        let props = normalize_props(props)?;
        if cycle.is_empty() {
            return Err(TraceError::EmptyCycle);
        }
        check_masks(&props, &stem)?;
        check_masks(&props, &cycle)?;
        Ok(Lasso { props, stem, cycle })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn stem(&self) -> &[u64] {
        &self.stem
    }

    pub fn cycle(&self) -> &[u64] {
        &self.cycle
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter(&self, i: usize) -> u64 {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// The finite prefix of length `len >= 1` as a trace.
    pub fn prefix(&self, len: usize) -> Trace {
        assert!(len >= 1, "prefix length must be positive");
        let letters = (0..len).map(|i| self.letter(i)).collect();
        Trace { props: self.props.clone(), letters }
    }
}

/// Enumerates every trace over `props` of length `1..=max_len`, each
/// exactly once, ordered by length and then lexicographically by letter
/// masks (first letter most significant). Bounded to eight propositions
/// and length eight.
pub fn enumerate_traces(props: &[String], max_len: usize) -> Result<Vec<Trace>, TraceError> {
    if props.len() > 8 {
        return Err(TraceError::TooManyProps { got: props.len(), limit: 8 });
    }
    if max_len > 8 {
        return Err(TraceError::LengthBound { got: max_len, limit: 8 });
    }
    let props = normalize_props(props.to_vec())?;
    let letter_count = 1u64 << props.len();
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut current = vec![0u64; len];
        loop {
            out.push(Trace { props: props.clone(), letters: current.clone() });
            // Increment the letter vector as a base-letter_count number,
            // least significant digit last.
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                current[pos] += 1;
                if current[pos] < letter_count {
                    break;
                }
                current[pos] = 0;
            }
            if current.iter().all(|&m| m == 0) {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn props(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_trace_is_rejected() {
        assert_eq!(Trace::new(props(&["a"]), &[]), Err(TraceError::EmptyTrace));
    }

    #[test]
    fn undeclared_atom_is_rejected() {
        let letter: BTreeSet<String> = ["b".to_string()].into();
        assert_eq!(
            Trace::new(props(&["a"]), &[letter]),
            Err(TraceError::UndeclaredAtom("b".into()))
        );
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_traces(&props(&["a"]), 1).unwrap().len(), 2);
        assert_eq!(enumerate_traces(&props(&["a"]), 2).unwrap().len(), 6);
        assert_eq!(enumerate_traces(&props(&["a", "b"]), 1).unwrap().len(), 4);
        assert_eq!(enumerate_traces(&props(&["a", "b"]), 4).unwrap().len(), 4 + 16 + 64 + 256);
    }

    #[test]
    fn enumerate_is_duplicate_free() {
        let traces = enumerate_traces(&props(&["a", "b"]), 3).unwrap();
        let unique: std::collections::HashSet<_> = traces.iter().cloned().collect();
        assert_eq!(unique.len(), traces.len());
    }

    #[test]
    fn lasso_indexing_wraps() {
        let w = Lasso::from_masks(props(&["a"]), vec![0], vec![1, 0]).unwrap();
        assert_eq!(w.letter(0), 0);
        assert_eq!(w.letter(1), 1);
        assert_eq!(w.letter(2), 0);
        assert_eq!(w.letter(3), 1);
        assert_eq!(w.prefix(3).masks(), &[0, 1, 0]);
    }

    #[test]
    fn lasso_requires_cycle() {
        assert_eq!(
            Lasso::from_masks(props(&["a"]), vec![1], vec![]),
            Err(TraceError::EmptyCycle)
        );
    }
}
