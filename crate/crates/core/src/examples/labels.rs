use alloc::vec;
use alloc::vec::Vec;

use super::{SplitLabeling, MAX_LABEL};
use crate::nfa::{HoleFill, Nfa, Scratch};
use crate::regex::{Regex, RegexError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelError {
    #[error("string is not a member of the regex, or no partition matches the concatenation spine")]
    NoPartition,
    #[error("regex has {0} labelled parts; at most {MAX_LABEL} are expressible")]
    TooManyParts(usize),
    #[error(transparent)]
    Regex(#[from] RegexError),
}

/// Labels each symbol of `s` with the index of the subexpression of `r`'s
/// top-level concatenation that produces it.
///
/// Non-wildcard spine elements are numbered 1, 2, ... left to right;
/// symbols produced by `.`, `.*` or `.?` elements get 0. Among several valid
/// partitions the one giving earlier elements the longest substrings wins.
pub fn ground_truth_labels(r: &Regex, s: &[u8]) -> Result<SplitLabeling, LabelError> {
    let spine = r.concat_spine();
    let mut next = 0usize;
    let labels_of: Vec<u8> = spine
        .iter()
        .map(|e| {
            if e.is_wildcard_rooted() {
                0
            } else {
                next += 1;
                next.min(u8::MAX as usize) as u8
            }
        })
        .collect();
    if next > MAX_LABEL as usize {
        return Err(LabelError::TooManyParts(next));
    }

    // ends[i][j]: end positions k (descending) with s[j..k] ∈ L(spine[i])
    let n = s.len();
    let mut scratch = Scratch::default();
    let mut ends = Vec::with_capacity(spine.len());
    for e in &spine {
        let nfa = Nfa::compile(e, HoleFill::Reject)?;
        let per_start: Vec<Vec<usize>> = (0..=n)
            .map(|j| (j..=n).rev().filter(|&k| nfa.matches_with(&s[j..k], &mut scratch)).collect())
            .collect();
        ends.push(per_start);
    }

    let mut cuts = vec![0usize; spine.len() + 1];
    let mut dead = vec![false; (spine.len() + 1) * (n + 1)];
    if !search(0, 0, &ends, n, &mut cuts, &mut dead) {
        return Err(LabelError::NoPartition);
    }
    let mut labels = vec![0u8; n];
    for (i, &l) in labels_of.iter().enumerate() {
        labels[cuts[i]..cuts[i + 1]].fill(l);
    }
    Ok(SplitLabeling {
        string: s.to_vec(),
        labels,
    })
}

fn search(part: usize, pos: usize, ends: &[Vec<Vec<usize>>], n: usize, cuts: &mut [usize], dead: &mut [bool]) -> bool {
    cuts[part] = pos;
    if part == ends.len() {
        return pos == n;
    }
    let key = part * (n + 1) + pos;
    if dead[key] {
        return false;
    }
    for &end in &ends[part][pos] {
        if search(part + 1, end, ends, n, cuts, dead) {
            return true;
        }
    }
    dead[key] = true;
    false
}
