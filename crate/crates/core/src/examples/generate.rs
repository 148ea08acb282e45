//! Seeded example generators.
//!
//! Positive strings come from a random walk over the regex: a union picks a
//! branch uniformly, a question mark includes its operand with probability
//! 1/2, a star repeats its operand a geometric number of times (p = 1/2,
//! truncated by the remaining length budget) and a wildcard draws a uniform
//! alphabet symbol. Samples longer than the length bound are discarded.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::dfa::Dfa;
use crate::nfa::{HoleFill, Nfa, Scratch};
use crate::regex::{Regex, RegexError};
use crate::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("the language has only {available} strings of length at most {max_len}, {requested} requested")]
    InsufficientLanguage {
        available: u128,
        requested: usize,
        max_len: usize,
    },
    #[error("generation budget exhausted after finding {found} of {requested} strings")]
    BudgetExhausted { found: usize, requested: usize },
    #[error(transparent)]
    Regex(#[from] RegexError),
}

/// `count` distinct members of `L(r)` of length at most `max_len`.
pub fn gen_positives(
    r: &Regex,
    alphabet: &Alphabet,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<Word>, GenError> {
    let available = Dfa::from_regex(r, alphabet)?.count_accepted(max_len);
    if available < count as u128 {
        return Err(GenError::InsufficientLanguage {
            available,
            requested: count,
            max_len,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..attempt_budget(count) {
        if out.len() == count {
            break;
        }
        if let Some(w) = sample(r, alphabet, max_len, &mut rng) {
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    if out.len() < count {
        return Err(GenError::BudgetExhausted {
            found: out.len(),
            requested: count,
        });
    }
    Ok(out)
}

fn attempt_budget(count: usize) -> usize {
    200 * count + 2000
}

/// One random member of `L(r)` no longer than `max_len`, if the walk fits.
pub(crate) fn sample(r: &Regex, alphabet: &Alphabet, max_len: usize, rng: &mut impl Rng) -> Option<Word> {
    let mut out = Vec::new();
    walk(r, alphabet, max_len, rng, &mut out).then_some(out)
}

fn walk(r: &Regex, alphabet: &Alphabet, max_len: usize, rng: &mut impl Rng, out: &mut Word) -> bool {
    match r {
        Regex::Empty | Regex::Hole(_) => false,
        Regex::Epsilon => true,
        Regex::Literal(b) => {
            out.push(*b);
            out.len() <= max_len
        }
        Regex::Wildcard => {
            out.push(*alphabet.symbols().choose(rng).expect("alphabet is non-empty"));
            out.len() <= max_len
        }
        Regex::Union(a, b) => {
            let branch = if rng.gen_bool(0.5) { a } else { b };
            walk(branch, alphabet, max_len, rng, out)
        }
        Regex::Concat(a, b) => walk(a, alphabet, max_len, rng, out) && walk(b, alphabet, max_len, rng, out),
        Regex::Question(a) => !rng.gen_bool(0.5) || walk(a, alphabet, max_len, rng, out),
        Regex::Star(a) => {
            // bounded so that nullable bodies cannot spin forever
            for _ in 0..=max_len {
                if !rng.gen_bool(0.5) {
                    break;
                }
                let mark = out.len();
                if !walk(a, alphabet, max_len, rng, out) {
                    // the repetition overran the budget: drop it and stop
                    out.truncate(mark);
                    break;
                }
            }
            true
        }
    }
}

/// Negatives obtained by substituting symbols of randomly chosen positives.
///
/// Each candidate takes a positive `s`, picks `k` uniform in
/// `1..=ceil(|s|/2)` distinct positions and replaces each with a different
/// alphabet symbol; it is kept only if `r` rejects it.
pub fn gen_negatives_symbol_perturb(
    r: &Regex,
    alphabet: &Alphabet,
    positives: &[Word],
    count: usize,
    seed: u64,
) -> Result<Vec<Word>, GenError> {
    assert!(!positives.is_empty(), "symbol perturbation needs positives");
    let nfa = Nfa::compile(r, HoleFill::Reject)?;
    let mut scratch = Scratch::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let known: BTreeSet<&Word> = positives.iter().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    if alphabet.len() < 2 {
        return Err(GenError::BudgetExhausted {
            found: 0,
            requested: count,
        });
    }
    for _ in 0..attempt_budget(count) {
        if out.len() == count {
            break;
        }
        let source = positives.choose(&mut rng).expect("non-empty");
        if source.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=source.len().div_ceil(2));
        let mut positions: Vec<usize> = (0..source.len()).collect();
        positions.shuffle(&mut rng);
        let mut w = source.clone();
        for &i in &positions[..k] {
            let others: Vec<u8> = alphabet.symbols().iter().copied().filter(|&b| b != w[i]).collect();
            w[i] = *others.choose(&mut rng).expect("alphabet has two symbols");
        }
        if known.contains(&w) || nfa.matches_with(&w, &mut scratch) {
            continue;
        }
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    if out.len() < count {
        return Err(GenError::BudgetExhausted {
            found: out.len(),
            requested: count,
        });
    }
    Ok(out)
}

/// The three regex edits used for perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edit {
    SubstituteSymbol,
    InsertSubtree,
    DeleteSubtree,
}

/// Applies one uniformly chosen edit to `r`. `None` if the chosen edit is
/// impossible (e.g. no literal to substitute).
pub fn perturb_regex(r: &Regex, alphabet: &Alphabet, rng: &mut impl Rng) -> Option<(Edit, Regex)> {
    let edit = *[Edit::SubstituteSymbol, Edit::InsertSubtree, Edit::DeleteSubtree]
        .choose(rng)
        .expect("non-empty");
    let nodes = r.nodes();
    let out = match edit {
        Edit::SubstituteSymbol => {
            let literals: Vec<usize> = (0..nodes.len()).filter(|&i| matches!(nodes[i], Regex::Literal(_))).collect();
            let &target = literals.choose(rng)?;
            let Regex::Literal(old) = nodes[target] else { unreachable!() };
            let others: Vec<u8> = alphabet.symbols().iter().copied().filter(|b| b != old).collect();
            let &new = others.choose(rng)?;
            r.replace_node(target, &mut |_| Regex::Literal(new))
        }
        Edit::InsertSubtree => {
            let donor = (*nodes.choose(rng)?).clone();
            let target = rng.gen_range(0..nodes.len());
            let before = rng.gen_bool(0.5);
            r.replace_node(target, &mut |n| {
                if before {
                    Regex::concat(donor.clone(), n.clone())
                } else {
                    Regex::concat(n.clone(), donor.clone())
                }
            })
        }
        Edit::DeleteSubtree => {
            let target = rng.gen_range(0..nodes.len());
            r.replace_node(target, &mut |_| Regex::Epsilon)
        }
    };
    Some((edit, out.simplify()))
}

/// Negatives sampled from perturbed copies of `r` and kept when `r` rejects
/// them.
pub fn gen_negatives_regex_perturb(
    r: &Regex,
    alphabet: &Alphabet,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<Word>, GenError> {
    const SAMPLES_PER_EDIT: usize = 4;
    let nfa = Nfa::compile(r, HoleFill::Reject)?;
    let mut scratch = Scratch::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    for _ in 0..attempt_budget(count) {
        if out.len() == count {
            break;
        }
        let Some((_, perturbed)) = perturb_regex(r, alphabet, &mut rng) else {
            continue;
        };
        for _ in 0..SAMPLES_PER_EDIT {
            let Some(w) = sample(&perturbed, alphabet, max_len, &mut rng) else {
                continue;
            };
            if out.len() < count && !nfa.matches_with(&w, &mut scratch) && seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    if out.len() < count {
        return Err(GenError::BudgetExhausted {
            found: out.len(),
            requested: count,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_language;

    fn ab() -> Alphabet {
        Alphabet::new(b"ab").unwrap()
    }

    #[test]
    fn positives_match_and_respect_length() {
        let r = Regex::parse("a*", &ab()).unwrap();
        let ps = gen_positives(&r, &ab(), 3, 10, 7).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.iter().collect::<BTreeSet<_>>().len(), 3);
        for p in &ps {
            assert!(r.matches(p).unwrap());
            assert!(p.len() <= 10);
        }
    }

    #[test]
    fn finite_language_is_insufficient() {
        let r = Regex::parse("ab", &ab()).unwrap();
        assert_eq!(
            gen_positives(&r, &ab(), 20, 10, 0),
            Err(GenError::InsufficientLanguage {
                available: 1,
                requested: 20,
                max_len: 10
            })
        );
    }

    #[test]
    fn generators_are_deterministic() {
        let r = Regex::parse("(a+b)*a", &ab()).unwrap();
        assert_eq!(gen_positives(&r, &ab(), 10, 8, 42), gen_positives(&r, &ab(), 10, 8, 42));
        assert_ne!(gen_positives(&r, &ab(), 10, 8, 42), gen_positives(&r, &ab(), 10, 8, 43));
        let ps = gen_positives(&r, &ab(), 10, 8, 42).unwrap();
        assert_eq!(
            gen_negatives_symbol_perturb(&r, &ab(), &ps, 5, 1),
            gen_negatives_symbol_perturb(&r, &ab(), &ps, 5, 1)
        );
        assert_eq!(
            gen_negatives_regex_perturb(&r, &ab(), 5, 8, 1),
            gen_negatives_regex_perturb(&r, &ab(), 5, 8, 1)
        );
    }

    #[test]
    fn universal_language_has_no_negatives() {
        let r = Regex::any_string();
        let ps = gen_positives(&r, &ab(), 5, 5, 0).unwrap();
        assert!(matches!(
            gen_negatives_symbol_perturb(&r, &ab(), &ps, 1, 0),
            Err(GenError::BudgetExhausted { found: 0, .. })
        ));
        assert!(matches!(
            gen_negatives_regex_perturb(&r, &ab(), 1, 5, 0),
            Err(GenError::BudgetExhausted { found: 0, .. })
        ));
    }

    #[test]
    fn symbol_perturbations_are_verified_nonmembers() {
        let r = Regex::parse("a*", &ab()).unwrap();
        let lang = enumerate_language(&r, &ab(), 3).unwrap();
        let negs = gen_negatives_symbol_perturb(&r, &ab(), &[b"aaa".to_vec()], 5, 3).unwrap();
        for n in &negs {
            assert_eq!(n.len(), 3);
            assert!(!lang.contains(n));
            // between 1 and 2 substitutions of "aaa"
            let changed = n.iter().filter(|&&b| b != b'a').count();
            assert!((1..=2).contains(&changed), "{n:?}");
        }
    }

    #[test]
    fn deleting_a_subtree_can_shorten() {
        // "ab" with the `b` leaf deleted becomes "a", which "ab" rejects.
        let r = Regex::parse("ab", &ab()).unwrap();
        let deleted = r.replace_node(2, &mut |_| Regex::Epsilon).simplify();
        assert_eq!(deleted.to_text(), "a");
        assert!(!r.matches(b"a").unwrap());
        let negs = gen_negatives_regex_perturb(&r, &ab(), 3, 4, 9).unwrap();
        for n in negs {
            assert!(!r.matches(&n).unwrap());
        }
    }

    #[test]
    fn walk_handles_nullable_star_bodies() {
        let r = Regex::parse("(a?)*b", &ab()).unwrap();
        let ps = gen_positives(&r, &ab(), 4, 6, 5).unwrap();
        assert!(ps.iter().all(|p| r.matches(p).unwrap() && p.len() <= 6));
    }
}
