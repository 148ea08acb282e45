//! Random target regexes for synthetic benchmarks.
//!
//! Trees grow top-down. Each node kind is drawn with weights Literal 0.35,
//! Concat 0.25, Union 0.15, Star 0.12, Question 0.08, Wildcard 0.05; at depth
//! 8 only leaves are drawn. Trees with more than 25 nodes are rejected and
//! redrawn, and accepted trees are simplified.

use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, AlphabetError};
use crate::regex::Regex;

pub const MAX_DEPTH: usize = 8;
pub const MAX_SIZE: usize = 25;

#[derive(Debug, Clone, Copy)]
enum Kind {
    Literal,
    Concat,
    Union,
    Star,
    Question,
    Wildcard,
}

const KINDS: [(Kind, f64); 6] = [
    (Kind::Literal, 0.35),
    (Kind::Concat, 0.25),
    (Kind::Union, 0.15),
    (Kind::Star, 0.12),
    (Kind::Question, 0.08),
    (Kind::Wildcard, 0.05),
];

/// `count` random regexes over the first `alphabet_size` symbols of
/// `0-9a-z`. The same seed always yields the same list.
pub fn gen_random_regexes(count: usize, alphabet_size: usize, seed: u64) -> Result<Vec<Regex>, AlphabetError> {
    let alphabet = Alphabet::digits(alphabet_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let any = WeightedIndex::new(KINDS.iter().map(|k| k.1)).expect("positive weights");
    let leaf = WeightedIndex::new([KINDS[0].1, KINDS[5].1]).expect("positive weights");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = grow(0, &alphabet, &any, &leaf, &mut rng);
        if r.size() <= MAX_SIZE {
            out.push(r.simplify());
        }
    }
    Ok(out)
}

fn grow(depth: usize, sigma: &Alphabet, any: &WeightedIndex<f64>, leaf: &WeightedIndex<f64>, rng: &mut impl Rng) -> Regex {
    let kind = if depth >= MAX_DEPTH {
        [Kind::Literal, Kind::Wildcard][leaf.sample(rng)]
    } else {
        KINDS[any.sample(rng)].0
    };
    let child = |rng: &mut _| grow(depth + 1, sigma, any, leaf, rng);
    match kind {
        Kind::Literal => Regex::Literal(sigma.symbols()[rng.gen_range(0..sigma.len())]),
        Kind::Wildcard => Regex::Wildcard,
        Kind::Concat => {
            let a = child(rng);
            Regex::concat(a, child(rng))
        }
        Kind::Union => {
            let a = child(rng);
            Regex::union(a, child(rng))
        }
        Kind::Star => Regex::star(child(rng)),
        Kind::Question => Regex::question(child(rng)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_bounded() {
        let a = gen_random_regexes(200, 4, 3).unwrap();
        assert_eq!(a, gen_random_regexes(200, 4, 3).unwrap());
        assert_ne!(a, gen_random_regexes(200, 4, 4).unwrap());
        let sigma = Alphabet::digits(4).unwrap();
        for r in &a {
            assert!(r.size() <= MAX_SIZE);
            assert!(r.uses_only(&sigma));
            assert_eq!(&Regex::parse(&r.to_text(), &sigma).unwrap().to_text(), &r.to_text());
        }
    }

    #[test]
    fn rejects_bad_alphabet_sizes() {
        assert!(gen_random_regexes(1, 0, 0).is_err());
    }
}
