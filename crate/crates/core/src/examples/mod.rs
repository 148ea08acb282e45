//! Example sets, split labelings, and their generation from target regexes.

use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::Alphabet;
use crate::Word;

mod generate;
mod labels;
mod preprocess;

pub use generate::{gen_negatives_regex_perturb, gen_negatives_symbol_perturb, gen_positives, perturb_regex, GenError};
pub use labels::{ground_truth_labels, LabelError};
pub use preprocess::{preprocess_raw, Preprocessed, RawRegexRecord, RejectReason};

/// Positive and negative strings over an alphabet.
///
/// Both lists are kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExamplePair {
    pub alphabet: Alphabet,
    pub positives: Vec<Word>,
    pub negatives: Vec<Word>,
}

impl ExamplePair {
    pub fn new(alphabet: Alphabet, mut positives: Vec<Word>, mut negatives: Vec<Word>) -> Self {
        positives.sort();
        positives.dedup();
        negatives.sort();
        negatives.dedup();
        ExamplePair {
            alphabet,
            positives,
            negatives,
        }
    }

    /// Strings present in both lists.
    pub fn overlap(&self) -> Vec<&Word> {
        self.positives
            .iter()
            .filter(|p| self.negatives.binary_search(p).is_ok())
            .collect()
    }

    /// Longest example of either polarity.
    pub fn max_len(&self) -> usize {
        self.positives.iter().chain(&self.negatives).map(Vec::len).max().unwrap_or(0)
    }
}

/// Largest part index a labeling can express (`0-9a-z`).
pub const MAX_LABEL: u8 = 35;

/// Per-symbol part indices for one positive string; 0 marks symbols produced
/// by a wildcard subexpression.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitLabeling {
    pub string: Word,
    pub labels: Vec<u8>,
}

/// Ways a labeling can be malformed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelingError {
    #[error("label string has length {labels}, but the string has length {string}")]
    LengthMismatch { string: usize, labels: usize },
    #[error("invalid label character {0:?}")]
    BadCharacter(char),
    #[error("label {0} occurs in more than one run")]
    NonContiguous(u8),
    #[error("label {later} appears after label {earlier}")]
    OutOfOrder { earlier: u8, later: u8 },
}

/// Maps `0-9a-z` to 0..=35.
pub fn label_from_char(c: char) -> Option<u8> {
    match c {
        '0'..='9' => Some(c as u8 - b'0'),
        'a'..='z' => Some(c as u8 - b'a' + 10),
        _ => None,
    }
}

pub fn label_to_char(l: u8) -> char {
    assert!(l <= MAX_LABEL, "label {l} out of range");
    if l < 10 {
        (b'0' + l) as char
    } else {
        (b'a' + l - 10) as char
    }
}

impl SplitLabeling {
    /// Builds and validates a labeling.
    pub fn new(string: Word, labels: Vec<u8>) -> Result<Self, LabelingError> {
        let l = SplitLabeling { string, labels };
        l.validate()?;
        Ok(l)
    }

    /// Parses the textual label form, e.g. `"1122330000"`.
    pub fn from_text(string: &[u8], labels: &str) -> Result<Self, LabelingError> {
        let labels = labels
            .chars()
            .map(|c| label_from_char(c).ok_or(LabelingError::BadCharacter(c)))
            .collect::<Result<Vec<_>, _>>()?;
        SplitLabeling::new(string.to_vec(), labels)
    }

    pub fn label_text(&self) -> String {
        self.labels.iter().map(|&l| label_to_char(l)).collect()
    }

    /// Checks length agreement, run contiguity and increasing run order.
    pub fn validate(&self) -> Result<(), LabelingError> {
        if self.labels.len() != self.string.len() {
            return Err(LabelingError::LengthMismatch {
                string: self.string.len(),
                labels: self.labels.len(),
            });
        }
        check_runs(&self.labels)
    }

    /// Largest label used.
    pub fn max_label(&self) -> u8 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Maximal runs as `(label, start, end)`.
    pub fn runs(&self) -> Vec<(u8, usize, usize)> {
        runs_of(&self.labels)
    }
}

pub(crate) fn runs_of(labels: &[u8]) -> Vec<(u8, usize, usize)> {
    let mut out: Vec<(u8, usize, usize)> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        match out.last_mut() {
            Some(run) if run.0 == l => run.2 = i + 1,
            _ => out.push((l, i, i + 1)),
        }
    }
    out
}

pub(crate) fn check_runs(labels: &[u8]) -> Result<(), LabelingError> {
    if let Some(&l) = labels.iter().find(|&&l| l > MAX_LABEL) {
        return Err(LabelingError::BadCharacter(char::from(l)));
    }
    let mut seen = [false; MAX_LABEL as usize + 1];
    let mut last = 0u8;
    for (l, _, _) in runs_of(labels).into_iter().filter(|r| r.0 != 0) {
        if seen[l as usize] {
            return Err(LabelingError::NonContiguous(l));
        }
        if l < last {
            return Err(LabelingError::OutOfOrder { earlier: last, later: l });
        }
        seen[l as usize] = true;
        last = l;
    }
    Ok(())
}
