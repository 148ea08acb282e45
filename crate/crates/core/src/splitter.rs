//! Splitters and split partitions.
//!
//! A splitter labels every symbol of every positive string with a part
//! index (0 for wildcard-produced symbols). [`partition_from_labelings`]
//! turns those labelings into parts `P_1..P_S` and wildcard slots
//! `W_0..W_S`, where slot `k` sits right after part `k`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::examples::{
    check_runs, ground_truth_labels, label_from_char, runs_of, LabelError, LabelingError, SplitLabeling, MAX_LABEL,
};
use crate::regex::Regex;
use crate::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("labeling {index}: {error}")]
pub struct PartitionError {
    pub index: usize,
    pub error: LabelingError,
}

/// Positive strings cut into parts and wildcard slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPartition {
    part_count: usize,
    /// Per string, `2S+1` consecutive ranges: slot 0, part 1, slot 1, ...,
    /// part S, slot S.
    pieces: Vec<Vec<Range<usize>>>,
    /// One flag per slot; true iff some string puts symbols there.
    pub wildcard_slots: Vec<bool>,
    pub source_labelings: Vec<SplitLabeling>,
}

impl SplitPartition {
    /// `S`, the largest label over all labelings.
    pub fn part_count(&self) -> usize {
        self.part_count
    }

    /// `P_i` for `i` in `1..=S`: one substring per string, `λ` included.
    pub fn part(&self, i: usize) -> Vec<Word> {
        assert!((1..=self.part_count).contains(&i), "part index {i} out of range");
        self.piece_strings(2 * i - 1)
    }

    /// Substrings placed in slot `k` for `k` in `0..=S`.
    pub fn slot(&self, k: usize) -> Vec<Word> {
        assert!(k <= self.part_count, "slot index {k} out of range");
        self.piece_strings(2 * k)
    }

    fn piece_strings(&self, piece: usize) -> Vec<Word> {
        self.source_labelings
            .iter()
            .zip(&self.pieces)
            .map(|(l, p)| l.string[p[piece].clone()].to_vec())
            .collect()
    }

    /// Concatenates string `index`'s slots and parts in order.
    pub fn reconstruct(&self, index: usize) -> Word {
        let s = &self.source_labelings[index].string;
        self.pieces[index].iter().flat_map(|r| s[r.clone()].iter().copied()).collect()
    }
}

/// Builds the partition described by `labelings`.
///
/// Part `i` of a string is its run labeled `i`, or `λ` if there is none. A
/// leading 0-run goes to slot 0, a trailing one to slot S, and an interior
/// one to the slot right after the nonzero run preceding it.
pub fn partition_from_labelings(labelings: &[SplitLabeling]) -> Result<SplitPartition, PartitionError> {
    for (index, l) in labelings.iter().enumerate() {
        l.validate().map_err(|error| PartitionError { index, error })?;
    }
    let s = labelings.iter().map(|l| l.max_label() as usize).max().unwrap_or(0);
    let mut wildcard_slots = vec![false; s + 1];
    let pieces = labelings
        .iter()
        .map(|l| {
            let runs = l.runs();
            let mut assigned: Vec<Option<Range<usize>>> = vec![None; 2 * s + 1];
            let mut prev = None;
            for (k, &(label, start, end)) in runs.iter().enumerate() {
                let piece = if label != 0 {
                    prev = Some(label as usize);
                    2 * label as usize - 1
                } else {
                    let trailing = runs[k + 1..].iter().all(|r| r.0 == 0);
                    match prev {
                        None => 0,
                        Some(_) if trailing => 2 * s,
                        Some(p) => 2 * p,
                    }
                };
                if piece % 2 == 0 {
                    wildcard_slots[piece / 2] = true;
                }
                assigned[piece] = Some(start..end);
            }
            let mut cursor = 0;
            assigned
                .into_iter()
                .map(|r| {
                    let r = r.unwrap_or(cursor..cursor);
                    debug_assert_eq!(r.start, cursor);
                    cursor = r.end;
                    r
                })
                .collect()
        })
        .collect();
    Ok(SplitPartition {
        part_count: s,
        pieces,
        wildcard_slots,
        source_labelings: labelings.to_vec(),
    })
}

/// Labels each positive with the spine of `target`.
pub fn ground_truth_split(target: &Regex, positives: &[Word]) -> Result<Vec<SplitLabeling>, LabelError> {
    positives.iter().map(|p| ground_truth_labels(target, p)).collect()
}

/// Labels strings by aligning their runs of identical symbols.
///
/// The string with the most runs (lexicographically smallest on ties) fixes
/// the run classes, in order. Each string's runs are matched greedily to
/// classes with the same symbol; runs that match no remaining class get 0.
/// A run longer than its class's base length (the shortest run seen for that
/// class among strings whose run sequence matches the classes exactly) keeps
/// the base length and hands the rest to the next class with the same
/// symbol, provided the string's later runs still fit after it.
pub fn heuristic_runs_split(positives: &[Word]) -> Vec<SplitLabeling> {
    let runs: Vec<Vec<(u8, usize)>> = positives.iter().map(|p| symbol_runs(p)).collect();
    let Some(reference) = (0..positives.len())
        .max_by(|&a, &b| runs[a].len().cmp(&runs[b].len()).then(positives[b].cmp(&positives[a])))
    else {
        return Vec::new();
    };
    let classes: Vec<u8> = runs[reference].iter().map(|r| r.0).take(MAX_LABEL as usize).collect();
    let mut base = vec![usize::MAX; classes.len()];
    for rs in runs.iter().filter(|rs| rs.iter().map(|r| r.0).eq(classes.iter().copied())) {
        for (b, r) in base.iter_mut().zip(rs) {
            *b = (*b).min(r.1);
        }
    }

    let fits = |rest: &[(u8, usize)], mut from: usize| {
        rest.iter().all(|&(sym, _)| match classes[from..].iter().position(|&c| c == sym) {
            Some(k) => {
                from += k + 1;
                true
            }
            None => false,
        })
    };

    positives
        .iter()
        .zip(&runs)
        .map(|(p, rs)| {
            let mut labels = Vec::with_capacity(p.len());
            let mut next = 0;
            for (k, &(sym, len)) in rs.iter().enumerate() {
                let Some(mut j) = classes[next..].iter().position(|&c| c == sym).map(|j| j + next) else {
                    labels.extend(core::iter::repeat_n(0, len));
                    continue;
                };
                let mut left = len;
                while left > base[j] {
                    let Some(j2) = classes[j + 1..].iter().position(|&c| c == sym).map(|x| x + j + 1) else {
                        break;
                    };
                    if !fits(&rs[k + 1..], j2 + 1) {
                        break;
                    }
                    labels.extend(core::iter::repeat_n(j as u8 + 1, base[j]));
                    left -= base[j];
                    j = j2;
                }
                labels.extend(core::iter::repeat_n(j as u8 + 1, left));
                next = j + 1;
            }
            SplitLabeling::new(p.clone(), labels).expect("run alignment is monotone")
        })
        .collect()
}

fn symbol_runs(w: &[u8]) -> Vec<(u8, usize)> {
    let mut out: Vec<(u8, usize)> = Vec::new();
    for &c in w {
        match out.last_mut() {
            Some(r) if r.0 == c => r.1 += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

/// Problems with one prediction record.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PredictionError {
    #[error("label string has length {labels}, but the string has length {string}")]
    LengthMismatch { string: usize, labels: usize },
    #[error("invalid label character {0:?}")]
    BadCharacter(char),
}

/// Parses a predicted label string for `string`, repairing it if it is not
/// a valid labeling (see [`repair_labels`]).
pub fn labeling_from_prediction(string: &[u8], labels: &str) -> Result<SplitLabeling, PredictionError> {
    let labels = labels
        .chars()
        .map(|c| label_from_char(c).ok_or(PredictionError::BadCharacter(c)))
        .collect::<Result<Vec<_>, _>>()?;
    if labels.len() != string.len() {
        return Err(PredictionError::LengthMismatch {
            string: string.len(),
            labels: labels.len(),
        });
    }
    Ok(SplitLabeling::new(string.to_vec(), repair_labels(&labels)).expect("repair yields a valid labeling"))
}

/// Turns an arbitrary label sequence into a valid one.
///
/// Valid sequences are returned unchanged. Otherwise each position inside a
/// violating run (a label already used by an earlier run, or smaller than an
/// earlier label) takes the majority label of its 3-window, with ties going
/// to the already repaired left neighbour. Runs still violating afterwards
/// become 0.
pub fn repair_labels(labels: &[u8]) -> Vec<u8> {
    if check_runs(labels).is_ok() {
        return labels.to_vec();
    }
    let bad = violating_positions(labels);
    let mut out = labels.to_vec();
    for i in 0..labels.len() {
        if !bad[i] {
            continue;
        }
        let left = i.checked_sub(1).map(|k| out[k]);
        let right = labels.get(i + 1).copied();
        let window = [left, Some(labels[i]), right];
        let count = |l: u8| window.iter().filter(|&&x| x == Some(l)).count();
        out[i] = match window.iter().flatten().copied().find(|&l| count(l) >= 2) {
            Some(l) => l,
            None => left.or(right).unwrap_or(labels[i]),
        };
    }
    let bad = violating_positions(&out);
    for (l, b) in out.iter_mut().zip(bad) {
        if b {
            *l = 0;
        }
    }
    debug_assert!(check_runs(&out).is_ok());
    out
}

fn violating_positions(labels: &[u8]) -> Vec<bool> {
    let mut bad = vec![false; labels.len()];
    let mut seen = [false; MAX_LABEL as usize + 1];
    let mut last = 0u8;
    for (l, start, end) in runs_of(labels) {
        if l == 0 {
            continue;
        }
        if seen[l as usize] || l < last {
            bad[start..end].fill(true);
        } else {
            seen[l as usize] = true;
            last = l;
        }
    }
    bad
}
