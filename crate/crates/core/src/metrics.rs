//! Evaluation metrics.
//!
//! Conventions for aggregates over a run:
//!
//! - a failed instance (timeout or split failure) scores 0 accuracy and is
//!   never fully accurate;
//! - a failed instance's runtime counts as the timeout value;
//! - the win ratio compares two runs instance by instance over the
//!   instances where at least one of them succeeded, the faster one winning
//!   (ties split evenly).

use alloc::vec::Vec;
use core::time::Duration;

use crate::nfa::{HoleFill, Nfa, Scratch};
use crate::regex::Regex;
use crate::Word;

/// Classification counts of a regex on held-out examples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub true_pos: usize,
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
}

impl Confusion {
    /// `false_pos` counts negatives wrongly accepted, `false_neg` positives
    /// wrongly rejected.
    pub fn of(r: &Regex, positives: &[Word], negatives: &[Word]) -> Confusion {
        let nfa = Nfa::compile(r, HoleFill::Reject).expect("complete regex");
        let mut scratch = Scratch::default();
        let true_pos = positives.iter().filter(|p| nfa.matches_with(p, &mut scratch)).count();
        let false_pos = negatives.iter().filter(|n| nfa.matches_with(n, &mut scratch)).count();
        Confusion {
            true_pos,
            true_neg: negatives.len() - false_pos,
            false_pos,
            false_neg: positives.len() - true_pos,
        }
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    /// `(TP + TN - FP - FN) / total × 100`.
    pub fn sem_acc(&self) -> f64 {
        assert!(self.total() > 0, "accuracy needs at least one example");
        let good = (self.true_pos + self.true_neg) as f64;
        let bad = (self.false_pos + self.false_neg) as f64;
        (good - bad) / self.total() as f64 * 100.0
    }
}

/// Semantic accuracy in `[-100, 100]` on held-out examples.
pub fn sem_acc(r: &Regex, positives: &[Word], negatives: &[Word]) -> f64 {
    Confusion::of(r, positives, negatives).sem_acc()
}

/// Every held-out example is classified correctly.
pub fn fully_accurate(r: &Regex, positives: &[Word], negatives: &[Word]) -> bool {
    let c = Confusion::of(r, positives, negatives);
    c.false_pos == 0 && c.false_neg == 0
}

/// One instance's result as seen by the aggregates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub success: bool,
    pub elapsed: Duration,
    /// Accuracy on held-out examples; ignored unless `success`.
    pub sem_acc: f64,
    pub fully_accurate: bool,
}

impl Outcome {
    pub fn failure(elapsed: Duration) -> Outcome {
        Outcome {
            success: false,
            elapsed,
            sem_acc: 0.0,
            fully_accurate: false,
        }
    }

    /// Runtime used for comparisons: the timeout for failures.
    pub fn charged_time(&self, timeout: Duration) -> Duration {
        if self.success {
            self.elapsed.min(timeout)
        } else {
            timeout
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Aggregate {
    pub instances: usize,
    /// Percentages.
    pub success_rate: f64,
    pub mean_accuracy: f64,
    pub full_ratio: f64,
    /// Mean runtime in seconds, failures charged the timeout.
    pub mean_runtime: f64,
}

pub fn aggregate(outcomes: &[Outcome], timeout: Duration) -> Aggregate {
    let n = outcomes.len();
    if n == 0 {
        return Aggregate::default();
    }
    let pct = |count: usize| count as f64 * 100.0 / n as f64;
    let successes = outcomes.iter().filter(|o| o.success).count();
    let full = outcomes.iter().filter(|o| o.success && o.fully_accurate).count();
    let acc: f64 = outcomes.iter().filter(|o| o.success).map(|o| o.sem_acc).sum();
    let runtime: f64 = outcomes.iter().map(|o| o.charged_time(timeout).as_secs_f64()).sum();
    Aggregate {
        instances: n,
        success_rate: pct(successes),
        mean_accuracy: acc / n as f64,
        full_ratio: pct(full),
        mean_runtime: runtime / n as f64,
    }
}

/// Head-to-head comparison of two runs over the same instances.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Comparison {
    /// Instances where at least one side succeeded.
    pub decided: usize,
    /// Percent of decided instances won by each side.
    pub win_ratio: (f64, f64),
    /// Mean runtimes (seconds) with failures charged the timeout.
    pub runtime: (f64, f64),
    /// Instances where both succeeded, and the mean runtimes over them.
    pub joint_successes: usize,
    pub joint_runtime: (f64, f64),
}

pub fn compare(a: &[Outcome], b: &[Outcome], timeout: Duration) -> Comparison {
    assert_eq!(a.len(), b.len(), "runs cover different instances");
    let mut c = Comparison::default();
    let (mut wins_a, mut wins_b) = (0.0, 0.0);
    let mut joint: Vec<(f64, f64)> = Vec::new();
    for (x, y) in a.iter().zip(b) {
        let (tx, ty) = (x.charged_time(timeout), y.charged_time(timeout));
        c.runtime.0 += tx.as_secs_f64();
        c.runtime.1 += ty.as_secs_f64();
        if x.success && y.success {
            joint.push((tx.as_secs_f64(), ty.as_secs_f64()));
        }
        if !(x.success || y.success) {
            continue;
        }
        c.decided += 1;
        match tx.cmp(&ty) {
            core::cmp::Ordering::Less => wins_a += 1.0,
            core::cmp::Ordering::Greater => wins_b += 1.0,
            core::cmp::Ordering::Equal => {
                wins_a += 0.5;
                wins_b += 0.5;
            }
        }
    }
    if !a.is_empty() {
        c.runtime.0 /= a.len() as f64;
        c.runtime.1 /= a.len() as f64;
    }
    if c.decided > 0 {
        c.win_ratio = (wins_a * 100.0 / c.decided as f64, wins_b * 100.0 / c.decided as f64);
    }
    c.joint_successes = joint.len();
    if !joint.is_empty() {
        let m = joint.len() as f64;
        c.joint_runtime = (
            joint.iter().map(|j| j.0).sum::<f64>() / m,
            joint.iter().map(|j| j.1).sum::<f64>() / m,
        );
    }
    c
}
