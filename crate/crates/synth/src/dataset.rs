//! Benchmark datasets: generation from regex lists and the JSON Lines file
//! format.
//!
//! One record per target regex:
//!
//! ```json
//! {"regex": "0*1", "alphabet": ["0", "1"], "pos_train": [...], "neg_train": [...],
//!  "pos_eval": [...], "neg_eval": [...], "labels": ["001", ...]}
//! ```
//!
//! `labels` holds one ground-truth label string per `pos_train` entry, or is
//! empty when the target has more parts than labels can express.

use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::Context as _;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regsynth_core::examples::{
    gen_negatives_regex_perturb, gen_negatives_symbol_perturb, gen_positives, ground_truth_labels, preprocess_raw,
    ExamplePair, GenError, SplitLabeling,
};
use regsynth_core::{word_to_string, Alphabet, Regex, Word};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub regex: String,
    pub alphabet: Vec<String>,
    pub pos_train: Vec<String>,
    pub neg_train: Vec<String>,
    pub pos_eval: Vec<String>,
    pub neg_eval: Vec<String>,
    #[serde(default)]
    pub labels: Vec<String>,
}

/// A validated dataset record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkInstance {
    pub target: Regex,
    pub train: ExamplePair,
    pub eval: ExamplePair,
    /// Ground-truth labelings of the training positives.
    pub labelings: Option<Vec<SplitLabeling>>,
}

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("alphabet entry {0:?} is not a single printable character")]
    BadSymbol(String),
    #[error("bad alphabet: {0}")]
    Alphabet(#[from] regsynth_core::AlphabetError),
    #[error("bad regex: {0}")]
    Regex(#[from] regsynth_core::ParseError),
    #[error("example {0:?} uses symbols outside the alphabet")]
    OutsideAlphabet(String),
    #[error("{kind} example {example:?} is misclassified by the target")]
    Misclassified { kind: &'static str, example: String },
    #[error("{0} label strings for {1} training positives")]
    LabelCount(usize, usize),
    #[error("bad labels for {string:?}: {error}")]
    Labels {
        string: String,
        error: regsynth_core::examples::LabelingError,
    },
    #[error("no positive training examples")]
    NoPositives,
}

fn to_words(strings: &[String], alphabet: &Alphabet) -> Result<Vec<Word>, SchemaError> {
    strings
        .iter()
        .map(|s| {
            let w = s.as_bytes().to_vec();
            if alphabet.covers(&w) {
                Ok(w)
            } else {
                Err(SchemaError::OutsideAlphabet(s.clone()))
            }
        })
        .collect()
}

fn to_strings(words: &[Word]) -> Vec<String> {
    words.iter().map(|w| word_to_string(w)).collect()
}

impl DatasetRecord {
    pub fn to_instance(&self) -> Result<BenchmarkInstance, SchemaError> {
        let symbols = self
            .alphabet
            .iter()
            .map(|s| match s.as_bytes() {
                [b] => Ok(*b),
                _ => Err(SchemaError::BadSymbol(s.clone())),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        let alphabet = Alphabet::new(&symbols)?;
        let target = Regex::parse(&self.regex, &alphabet)?;
        let words = |s: &[String]| to_words(s, &alphabet);
        let (pt, nt, pe, ne) = (
            words(&self.pos_train)?,
            words(&self.neg_train)?,
            words(&self.pos_eval)?,
            words(&self.neg_eval)?,
        );
        if pt.is_empty() {
            return Err(SchemaError::NoPositives);
        }
        for (kind, ws, expected) in [("positive", &pt, true), ("negative", &nt, false), ("positive", &pe, true), ("negative", &ne, false)] {
            if let Some(w) = ws.iter().find(|w| target.matches(w).expect("complete") != expected) {
                return Err(SchemaError::Misclassified {
                    kind,
                    example: word_to_string(w),
                });
            }
        }
        let labelings = if self.labels.is_empty() {
            None
        } else {
            if self.labels.len() != pt.len() {
                return Err(SchemaError::LabelCount(self.labels.len(), pt.len()));
            }
            let ls = pt
                .iter()
                .zip(&self.labels)
                .map(|(w, l)| {
                    SplitLabeling::from_text(w, l).map_err(|error| SchemaError::Labels {
                        string: word_to_string(w),
                        error,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(ls)
        };
        Ok(BenchmarkInstance {
            target,
            train: ExamplePair::new(alphabet.clone(), pt, nt),
            eval: ExamplePair::new(alphabet, pe, ne),
            labelings,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NegMode {
    /// Substitute symbols of positives.
    Symbol,
    /// Sample from perturbed copies of the target.
    Regex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MakeConfig {
    pub count_pos: usize,
    pub count_neg: usize,
    pub train_pos: usize,
    pub train_neg: usize,
    pub max_len: usize,
    pub neg_mode: NegMode,
    pub seed: u64,
}

impl MakeConfig {
    pub fn new(max_len: usize, neg_mode: NegMode, seed: u64) -> Self {
        MakeConfig {
            count_pos: 20,
            count_neg: 20,
            train_pos: 10,
            train_neg: 10,
            max_len,
            neg_mode,
            seed,
        }
    }
}

/// A regex line that produced no instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub line: usize,
    pub text: String,
    pub reason: String,
}

/// Parses one regex-list line: `regex` or `regex<TAB>symbols`. Without an
/// explicit alphabet the line is treated as a practical regex and reduced
/// to the toolkit syntax first.
pub fn parse_regex_line(line: &str) -> Result<(Regex, Alphabet), String> {
    match line.split_once('\t') {
        Some((text, symbols)) => {
            let alphabet = Alphabet::new(symbols.as_bytes()).map_err(|e| e.to_string())?;
            let r = Regex::parse(text, &alphabet).map_err(|e| e.to_string())?;
            Ok((r, alphabet))
        }
        None => {
            let rec = preprocess_raw(line);
            match rec.simplified {
                Ok(p) => {
                    if rec.widened {
                        log::info!("counted quantifier widened to star in {line:?}");
                    }
                    Ok((p.regex, p.alphabet))
                }
                Err(reason) => Err(format!("excluded: {reason}")),
            }
        }
    }
}

/// Per-instance seed: stream `index` of a generator keyed by the global
/// seed, so results do not depend on processing order.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

/// Generates one record per usable regex line.
pub fn make_instances(lines: &[String], config: &MakeConfig) -> (Vec<DatasetRecord>, Vec<Skip>) {
    let mut records = Vec::new();
    let mut skips = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match make_one(line, config, instance_seed(config.seed, i)) {
            Ok(rec) => records.push(rec),
            Err(reason) => {
                log::debug!("skipping line {}: {reason}", i + 1);
                skips.push(Skip {
                    line: i + 1,
                    text: line.clone(),
                    reason,
                });
            }
        }
    }
    (records, skips)
}

fn make_one(line: &str, config: &MakeConfig, seed: u64) -> Result<DatasetRecord, String> {
    let (r, alphabet) = parse_regex_line(line)?;
    let gen_err = |e: GenError| e.to_string();
    let pos = gen_positives(&r, &alphabet, config.count_pos, config.max_len, seed).map_err(gen_err)?;
    let neg_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
    let neg = match config.neg_mode {
        NegMode::Symbol => gen_negatives_symbol_perturb(&r, &alphabet, &pos, config.count_neg, neg_seed),
        NegMode::Regex => gen_negatives_regex_perturb(&r, &alphabet, config.count_neg, config.max_len, neg_seed),
    }
    .map_err(gen_err)?;
    let (pos_train, pos_eval) = pos.split_at(config.train_pos.min(pos.len()));
    let (neg_train, neg_eval) = neg.split_at(config.train_neg.min(neg.len()));
    let labels = match pos_train
        .iter()
        .map(|p| ground_truth_labels(&r, p).map(|l| l.label_text()))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(ls) => ls,
        Err(e) => {
            log::debug!("no ground-truth labels for {line:?}: {e}");
            Vec::new()
        }
    };
    Ok(DatasetRecord {
        regex: r.to_text(),
        alphabet: alphabet.symbols().iter().map(|&b| (b as char).to_string()).collect(),
        pos_train: to_strings(pos_train),
        neg_train: to_strings(neg_train),
        pos_eval: to_strings(pos_eval),
        neg_eval: to_strings(neg_eval),
        labels,
    })
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> anyhow::Result<()> {
    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = std::io::BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<T>> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?);
    }
    Ok(out)
}

/// Reads and validates a dataset file.
pub fn load_dataset(path: &Path) -> anyhow::Result<Vec<BenchmarkInstance>> {
    let records: Vec<DatasetRecord> = read_jsonl(path)?;
    records
        .iter()
        .enumerate()
        .map(|(i, r)| r.to_instance().with_context(|| format!("{}: record {}", path.display(), i + 1)))
        .collect()
}
