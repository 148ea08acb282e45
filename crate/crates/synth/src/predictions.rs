//! Split prediction files: JSON Lines records `{"string": ..., "labels": ...}`.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use regsynth_core::examples::SplitLabeling;
use regsynth_core::splitter::{labeling_from_prediction, PredictionError};
use regsynth_core::{word_to_string, Word};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionRecord {
    pub string: String,
    pub labels: String,
}

#[derive(Debug, thiserror::Error)]
pub enum PredictionFileError {
    #[error("reading predictions: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("no prediction for positive string {0:?}")]
    Missing(String),
}

/// Label strings keyed by the string they label. Records are checked for
/// shape on load; label repair happens per lookup.
#[derive(Debug, Clone, Default)]
pub struct Predictions {
    by_string: HashMap<Word, String>,
}

impl Predictions {
    pub fn load(path: &Path) -> Result<Self, PredictionFileError> {
        Self::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn from_reader(reader: impl BufRead) -> Result<Self, PredictionFileError> {
        let mut by_string = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let schema = |message: String| PredictionFileError::Schema { line: i + 1, message };
            let rec: PredictionRecord = serde_json::from_str(&line).map_err(|e| schema(e.to_string()))?;
            let word = rec.string.as_bytes().to_vec();
            labeling_from_prediction(&word, &rec.labels).map_err(|e| schema(e.to_string()))?;
            by_string.insert(word, rec.labels);
        }
        Ok(Predictions { by_string })
    }

    pub fn len(&self) -> usize {
        self.by_string.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_string.is_empty()
    }

    /// One repaired labeling per positive, in order.
    pub fn labelings_for(&self, positives: &[Word]) -> Result<Vec<SplitLabeling>, PredictionFileError> {
        positives
            .iter()
            .map(|p| {
                let labels = self
                    .by_string
                    .get(p)
                    .ok_or_else(|| PredictionFileError::Missing(word_to_string(p)))?;
                labeling_from_prediction(p, labels).map_err(|e: PredictionError| PredictionFileError::Schema {
                    line: 0,
                    message: e.to_string(),
                })
            })
            .collect()
    }
}

/// Reads `path` and returns one labeling per positive.
pub fn load_predictions(path: &Path, positives: &[Word]) -> Result<Vec<SplitLabeling>, PredictionFileError> {
    Predictions::load(path)?.labelings_for(positives)
}
