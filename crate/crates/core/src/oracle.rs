//! Slow reference semantics used to cross-check the matcher and the
//! synthesizers.
//!
//! - [`enumerate_language`]: exhaustive generation of `Σ^≤k` filtered by the
//!   matcher.
//! - [`language_by_sets`]: recursive set semantics on languages truncated at
//!   a length bound. Does not touch the automaton code.
//! - [`member_by_spans`]: recursive span-relation semantics over one string.
//!   Also automaton-free, and cheap enough to re-verify results over large
//!   alphabets where enumeration is hopeless.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::Alphabet;
use crate::nfa::{HoleFill, Nfa, Scratch};
use crate::regex::{Regex, RegexError};
use crate::Word;

/// Largest length bound accepted by [`enumerate_language`].
pub const MAX_ENUMERATION_LEN: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("length bound {0} exceeds the enumeration limit of {MAX_ENUMERATION_LEN}")]
    BoundExceeded(usize),
    #[error(transparent)]
    Regex(#[from] RegexError),
}

/// A finite language: all members of some regex up to `max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    pub strings: BTreeSet<Word>,
    pub max_len: usize,
}

impl Language {
    pub fn contains(&self, w: &[u8]) -> bool {
        self.strings.contains(w)
    }
}

/// Every string of `alphabet` of length at most `max_len`, in length-lex
/// order.
pub fn all_strings(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &b in alphabet.symbols() {
                let mut x: Word = w.clone();
                x.push(b);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `{ s ∈ Σ^≤max_len : matches(r, s) }` by brute force.
pub fn enumerate_language(r: &Regex, alphabet: &Alphabet, max_len: usize) -> Result<Language, OracleError> {
    if max_len > MAX_ENUMERATION_LEN {
        return Err(OracleError::BoundExceeded(max_len));
    }
    let nfa = Nfa::compile(r, HoleFill::Reject)?;
    let mut scratch = Scratch::default();
    let strings = all_strings(alphabet, max_len)
        .into_iter()
        .filter(|w| nfa.matches_with(w, &mut scratch))
        .collect();
    Ok(Language { strings, max_len })
}

/// `L(r) ∩ Σ^≤max_len` computed directly from the definitions of union,
/// concatenation and star.
pub fn language_by_sets(r: &Regex, alphabet: &Alphabet, max_len: usize) -> Result<BTreeSet<Word>, RegexError> {
    Ok(match r {
        Regex::Hole(_) => return Err(RegexError::Incomplete),
        Regex::Empty => BTreeSet::new(),
        Regex::Epsilon => BTreeSet::from([Vec::new()]),
        Regex::Literal(b) => {
            if max_len >= 1 {
                BTreeSet::from([vec![*b]])
            } else {
                BTreeSet::new()
            }
        }
        Regex::Wildcard => {
            if max_len >= 1 {
                alphabet.symbols().iter().map(|&b| vec![b]).collect()
            } else {
                BTreeSet::new()
            }
        }
        Regex::Union(a, b) => {
            let mut s = language_by_sets(a, alphabet, max_len)?;
            s.extend(language_by_sets(b, alphabet, max_len)?);
            s
        }
        Regex::Concat(a, b) => {
            let la = language_by_sets(a, alphabet, max_len)?;
            let lb = language_by_sets(b, alphabet, max_len)?;
            concat_sets(&la, &lb, max_len)
        }
        Regex::Question(a) => {
            let mut s = language_by_sets(a, alphabet, max_len)?;
            s.insert(Vec::new());
            s
        }
        Regex::Star(a) => {
            let base = language_by_sets(a, alphabet, max_len)?;
            let mut acc = BTreeSet::from([Vec::new()]);
            loop {
                let grown = concat_sets(&acc, &base, max_len);
                let before = acc.len();
                acc.extend(grown);
                if acc.len() == before {
                    break acc;
                }
            }
        }
    })
}

fn concat_sets(a: &BTreeSet<Word>, b: &BTreeSet<Word>, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            if x.len() + y.len() <= max_len {
                let mut w = x.clone();
                w.extend_from_slice(y);
                out.insert(w);
            }
        }
    }
    out
}

/// Membership of `s` in `L(r)`, computed as the relation
/// `{(i, j) : s[i..j] ∈ L(r)}` bottom-up over the tree.
pub fn member_by_spans(r: &Regex, s: &[u8]) -> Result<bool, RegexError> {
    let n = s.len() + 1;
    let rel = spans(r, s, n)?;
    Ok(rel[n - 1])
}

// Row-major n×n boolean matrix; entry (i, j) means s[i..j] matches.
fn spans(r: &Regex, s: &[u8], n: usize) -> Result<Vec<bool>, RegexError> {
    let mut m = vec![false; n * n];
    match r {
        Regex::Hole(_) => return Err(RegexError::Incomplete),
        Regex::Empty => {}
        Regex::Epsilon => (0..n).for_each(|i| m[i * n + i] = true),
        Regex::Literal(b) => {
            for (i, c) in s.iter().enumerate() {
                m[i * n + i + 1] = c == b;
            }
        }
        Regex::Wildcard => (0..n - 1).for_each(|i| m[i * n + i + 1] = true),
        Regex::Union(a, b) => {
            let (x, y) = (spans(a, s, n)?, spans(b, s, n)?);
            m.iter_mut().zip(x.iter().zip(&y)).for_each(|(o, (p, q))| *o = *p || *q);
        }
        Regex::Concat(a, b) => {
            let (x, y) = (spans(a, s, n)?, spans(b, s, n)?);
            m = compose(&x, &y, n);
        }
        Regex::Question(a) => {
            m = spans(a, s, n)?;
            (0..n).for_each(|i| m[i * n + i] = true);
        }
        Regex::Star(a) => {
            let x = spans(a, s, n)?;
            (0..n).for_each(|i| m[i * n + i] = true);
            loop {
                let next = compose(&m, &x, n);
                let mut changed = false;
                for (o, v) in m.iter_mut().zip(next) {
                    if v && !*o {
                        *o = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    Ok(m)
}

fn compose(x: &[bool], y: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in i..n {
            if x[i * n + k] {
                for j in k..n {
                    if y[k * n + j] {
                        out[i * n + j] = true;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> BTreeSet<Word> {
        ws.iter().map(|w| w.as_bytes().to_vec()).collect()
    }

    #[test]
    fn enumeration_examples() {
        let ab = Alphabet::new(b"ab").unwrap();
        let l = enumerate_language(&Regex::parse("a*", &ab).unwrap(), &ab, 2).unwrap();
        assert_eq!(l.strings, words(&["", "a", "aa"]));
        let l = enumerate_language(&Regex::parse("a+b", &ab).unwrap(), &ab, 1).unwrap();
        assert_eq!(l.strings, words(&["a", "b"]));
        let bin = Alphabet::new(b"01").unwrap();
        let l = enumerate_language(&Regex::parse("(0+1)*0", &bin).unwrap(), &bin, 2).unwrap();
        assert_eq!(l.strings, words(&["0", "00", "10"]));
    }

    #[test]
    fn enumeration_bound_and_holes() {
        let ab = Alphabet::new(b"ab").unwrap();
        assert_eq!(
            enumerate_language(&Regex::Epsilon, &ab, 13),
            Err(OracleError::BoundExceeded(13))
        );
        assert_eq!(
            enumerate_language(&Regex::Hole(0), &ab, 2),
            Err(OracleError::Regex(RegexError::Incomplete))
        );
    }

    #[test]
    fn all_strings_counts() {
        let ab = Alphabet::new(b"ab").unwrap();
        assert_eq!(all_strings(&ab, 2).len(), 7);
        assert_eq!(all_strings(&ab, 0), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn set_semantics_and_spans_agree_on_examples() {
        let ab = Alphabet::new(b"ab").unwrap();
        let r = Regex::parse("(ab+b)*a?", &ab).unwrap();
        let lang = language_by_sets(&r, &ab, 4).unwrap();
        for w in all_strings(&ab, 4) {
            assert_eq!(lang.contains(&w), member_by_spans(&r, &w).unwrap(), "{w:?}");
        }
        assert!(member_by_spans(&Regex::Epsilon, b"").unwrap());
        assert!(!member_by_spans(&Regex::Empty, b"").unwrap());
    }
}
